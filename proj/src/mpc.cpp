#include "resop/mpc.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "resop/parallel.hpp"

namespace resop {

std::string describe(const UncertainModel& model) {
    if (const auto* stoch = std::get_if<StochasticModelChoice>(&model)) {
        return std::string("stochastic-") + to_string(stoch->method.kind) + "-k" +
               std::to_string(stoch->method.years_per_scenario);
    }
    const auto& conf = std::get<RobustModelChoice>(model).conf;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "robust-%g%s", conf.level, conf.one_sided ? "-onesided" : "");
    return buf;
}

void MpcConfig::validate(const TimeGrid& grid) const {
    if (window_years < 1) throw std::invalid_argument("mpc: window_years must be >= 1");
    const long spy = grid.steps_per_year();
    const long needed = (spy - 1) + static_cast<long>(window_years) * spy;
    if (static_cast<long>(scenario_years) * spy < needed)
        throw std::invalid_argument("mpc: scenario_years=" + std::to_string(scenario_years) +
                                    " too short; every shifted " + std::to_string(window_years) +
                                    "-year window must fit (need " + std::to_string(needed) +
                                    " steps)");
    if (const auto* stoch = std::get_if<StochasticModelChoice>(&model)) {
        if (stoch->method.years_per_scenario != scenario_years)
            throw std::invalid_argument("mpc: scenario generation must produce scenario_years-long scenarios");
    }
}

void RuleCurve::validate() const {
    if (values.size() != grid.steps_per_year())
        throw std::invalid_argument("rule curve: expected one value per step of the year");
    const double slack = 1e-6 * std::max(1.0, max_storage);
    for (Index t = 0; t < values.size(); ++t) {
        if (!std::isfinite(values[t]))
            throw std::invalid_argument("rule curve: value at step " + std::to_string(t) + " not finite");
        if (values[t] < min_storage - slack || values[t] > max_storage + slack)
            throw std::invalid_argument("rule curve: value at step " + std::to_string(t) +
                                        " outside storage bounds");
    }
}

namespace {

// Rule value at the first step of one window of the configured model.
double solve_window(const ReservoirSpec& spec, const ScenarioSet* scenarios,
                    const Scenario* robust_scenario, const MpcConfig& config, int start,
                    Index window_steps, const SolverOptions& options, int jobs,
                    std::size_t* scenario_count) {
    if (scenarios) {
        const ScenarioSet window = scenarios->sliced(start, window_steps);
        *scenario_count = window.size();
        const EnvelopeResult result = solve_decoupled(spec, window, options, jobs);
        if (result.status != LpStatus::Optimal)
            throw InfeasibleModelError("window starting at step " + std::to_string(start) +
                                           " is infeasible for scenarios: " +
                                           [&] {
                                               std::string s;
                                               for (const auto& l : result.infeasible_labels) {
                                                   if (!s.empty()) s += ", ";
                                                   s += l;
                                               }
                                               return s;
                                           }(),
                                       start, result.infeasible_labels);
        return result.envelope.rule_storage[0];
    }
    const Scenario window = slice_scenario(*robust_scenario, start, window_steps);
    *scenario_count = 1;
    const DeterministicResult result = solve_deterministic(spec, window, options);
    if (result.status != LpStatus::Optimal) {
        const double level = std::get<RobustModelChoice>(config.model).conf.level;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "window starting at step %d is infeasible at confidence level %g",
                      start, level);
        throw InfeasibleModelError(buf, start, {});
    }
    return result.trajectory.storages[0];
}

}  // namespace

RuleCurve run_mpc(const ReservoirSpec& spec, const std::vector<HydroYear>& years,
                  const MpcConfig& config, const SolverOptions& options, int jobs,
                  const MpcProgressHook& progress) {
    config.validate(spec.grid);
    const int spy = spec.grid.steps_per_year();
    const Index window_steps = static_cast<Index>(config.window_years) * spy;

    RuleCurve curve;
    curve.grid = spec.grid;
    curve.values = Array::Zero(spy);
    curve.min_storage = spec.min_storage;
    curve.max_storage = spec.max_storage;
    curve.model = describe(config.model) + "-mpc";
    curve.guarantee_horizon_years = config.window_years;

    const auto* stoch = std::get_if<StochasticModelChoice>(&config.model);

    if (stoch) {
        // Scenarios are generated once and sliced per window.
        const ScenarioSet scenarios(years, stoch->method, spec.grid);
        for (int start = 0; start < spy; ++start) {
            const auto begin = std::chrono::steady_clock::now();
            std::size_t count = 0;
            curve.values[start] = solve_window(spec, &scenarios, nullptr, config, start, window_steps,
                                               options, jobs, &count);
            if (progress) {
                const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - begin;
                progress(WindowReport{start, count, elapsed.count()});
            }
        }
    } else {
        // The one-year bound profile is tiled to scenario_years and sliced
        // exactly like the stochastic scenarios; windows are independent
        // single solves, so parallelize across start steps.
        const auto& conf = std::get<RobustModelChoice>(config.model).conf;
        const WorstCaseScenario wc = worst_case_scenario(years, spec.grid, conf, config.scenario_years);
        std::vector<WindowReport> reports(static_cast<std::size_t>(spy));
        parallel_for(static_cast<std::size_t>(spy), jobs, [&](std::size_t i) {
            const int start = static_cast<int>(i);
            const auto begin = std::chrono::steady_clock::now();
            std::size_t count = 0;
            curve.values[start] = solve_window(spec, nullptr, &wc.underlying, config, start,
                                               window_steps, options, 1, &count);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - begin;
            reports[i] = WindowReport{start, count, elapsed.count()};
        });
        if (progress)
            for (const WindowReport& r : reports) progress(r);
    }

    curve.validate();
    return curve;
}

RuleCurve solve_direct(const ReservoirSpec& spec, const std::vector<HydroYear>& years,
                       const MpcConfig& config, const SolverOptions& options, int jobs) {
    const int spy = spec.grid.steps_per_year();

    RuleCurve curve;
    curve.grid = spec.grid;
    curve.min_storage = spec.min_storage;
    curve.max_storage = spec.max_storage;
    curve.model = describe(config.model);
    curve.guarantee_horizon_years = config.window_years;

    if (const auto* stoch = std::get_if<StochasticModelChoice>(&config.model)) {
        const ScenarioGenMethod& method = stoch->method;
        curve.guarantee_horizon_years = method.years_per_scenario;
        const ScenarioSet scenarios(years, method, spec.grid);
        const EnvelopeResult result = solve_decoupled(spec, scenarios, options, jobs);
        if (result.status != LpStatus::Optimal) {
            std::string s;
            for (const auto& l : result.infeasible_labels) {
                if (!s.empty()) s += ", ";
                s += l;
            }
            throw InfeasibleModelError("model infeasible for scenarios: " + s, -1,
                                       result.infeasible_labels);
        }
        curve.values = result.envelope.rule_storage.head(spy);
    } else {
        const auto& conf = std::get<RobustModelChoice>(config.model).conf;
        const RobustResult result = solve_robust(spec, years, conf, config.window_years, options);
        if (result.status != LpStatus::Optimal) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "infeasible at confidence level %g", conf.level);
            throw InfeasibleModelError(buf, -1, {});
        }
        curve.values = result.trajectory.storages.head(spy);
    }

    curve.validate();
    return curve;
}

ContinuityDiagnostics check_continuity(const RuleCurve& curve) {
    ContinuityDiagnostics diag;
    if (curve.values.size() != curve.grid.steps_per_year())
        throw std::invalid_argument("rule curve has missing steps: " +
                                    std::to_string(curve.values.size()) + " of " +
                                    std::to_string(curve.grid.steps_per_year()));
    for (Index t = 0; t < curve.values.size(); ++t)
        if (!std::isfinite(curve.values[t]))
            throw std::invalid_argument("rule curve has missing steps (non-finite value at " +
                                        std::to_string(t) + ")");
    diag.complete = true;
    diag.wrap_jump = std::abs(curve.values[0] - curve.values[curve.values.size() - 1]);
    return diag;
}

}  // namespace resop
