#include "resop/stochastic.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "resop/parallel.hpp"

namespace resop {

const char* to_string(GenKind kind) {
    return kind == GenKind::Merging ? "merge" : "mix";
}

ScenarioSet::ScenarioSet(std::vector<HydroYear> years, ScenarioGenMethod method, TimeGrid grid)
    : years_(std::make_shared<std::vector<HydroYear>>(std::move(years))), method_(method), grid_(grid) {
    const std::size_t n = years_->size();
    const int k = method.years_per_scenario;
    if (k < 1) throw std::invalid_argument("scenario generation: years_per_scenario must be >= 1");
    if (n == 0) throw std::invalid_argument("scenario generation: no historical years");

    const Index spy = grid.steps_per_year();
    const auto& rivers = years_->front().flows;
    for (const HydroYear& y : *years_) {
        if (y.flows.size() != rivers.size())
            throw std::invalid_argument("scenario generation: year " + y.label +
                                        " has a different river set");
        for (const auto& [river, flow] : y.flows) {
            if (!rivers.count(river))
                throw std::invalid_argument("scenario generation: year " + y.label +
                                            " has a different river set");
            if (flow.size() != spy)
                throw std::invalid_argument("scenario generation: year " + y.label +
                                            " does not match the grid (" + std::to_string(flow.size()) +
                                            " steps vs " + std::to_string(spy) + ")");
        }
    }

    if (method.kind == GenKind::Merging) {
        if (n < static_cast<std::size_t>(k))
            throw std::invalid_argument("merging needs at least " + std::to_string(k) +
                                        " years, got " + std::to_string(n));
        count_ = n - static_cast<std::size_t>(k) + 1;
    } else {
        count_ = 1;
        for (int i = 0; i < k; ++i) {
            if (count_ > std::numeric_limits<std::size_t>::max() / n)
                throw std::invalid_argument("mixing enumeration overflows");
            count_ *= n;
        }
    }
}

Index ScenarioSet::horizon() const {
    if (slice_length_ >= 0) return slice_length_;
    return static_cast<Index>(method_.years_per_scenario) * grid_.steps_per_year();
}

std::vector<const HydroYear*> ScenarioSet::pick(std::size_t i) const {
    if (i >= count_) throw std::out_of_range("scenario index out of range");
    const int k = method_.years_per_scenario;
    std::vector<const HydroYear*> chosen(static_cast<std::size_t>(k));
    if (method_.kind == GenKind::Merging) {
        for (int j = 0; j < k; ++j) chosen[static_cast<std::size_t>(j)] = &(*years_)[i + static_cast<std::size_t>(j)];
    } else {
        const std::size_t n = years_->size();
        std::size_t rest = i;
        for (int j = k - 1; j >= 0; --j) {
            chosen[static_cast<std::size_t>(j)] = &(*years_)[rest % n];
            rest /= n;
        }
    }
    return chosen;
}

Scenario ScenarioSet::at(std::size_t i) const {
    Scenario s = concat_years(pick(i), grid_);
    if (slice_length_ >= 0) return slice_scenario(s, slice_start_, slice_length_);
    return s;
}

std::string ScenarioSet::label(std::size_t i) const {
    const auto chosen = pick(i);
    std::string out;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
        if (j) out += '+';
        out += chosen[j]->label;
    }
    return out;
}

ScenarioSet ScenarioSet::sliced(int start, Index length) const {
    const Index full = static_cast<Index>(method_.years_per_scenario) * grid_.steps_per_year();
    if (slice_length_ >= 0)
        throw std::invalid_argument("scenario set is already sliced");
    if (start < 0 || length < 1 || static_cast<Index>(start) + length > full)
        throw std::invalid_argument("scenario slice [" + std::to_string(start) + ", " +
                                    std::to_string(start + length) + ") does not fit in " +
                                    std::to_string(full) + " steps");
    ScenarioSet out = *this;
    out.slice_start_ = start;
    out.slice_length_ = length;
    return out;
}

std::vector<Scenario> generate_scenarios(const std::vector<HydroYear>& years,
                                         const ScenarioGenMethod& method, const TimeGrid& grid) {
    ScenarioSet set(years, method, grid);
    std::vector<Scenario> out;
    out.reserve(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) out.push_back(set.at(i));
    return out;
}

std::vector<std::size_t> identify_support(const EnvelopeSolution& sol, double tolerance) {
    std::vector<std::size_t> support;
    const Index steps = sol.rule_storage.size();
    for (std::size_t s = 0; s < sol.per_scenario.size(); ++s) {
        const Array& storages = sol.per_scenario[s].storages;
        for (Index t = 0; t < steps; ++t) {
            if (storages[t] >= sol.rule_storage[t] * (1.0 - tolerance)) {
                support.push_back(s);
                break;
            }
        }
    }
    return support;
}

EnvelopeResult solve_decoupled(const ReservoirSpec& spec, const ScenarioSet& scenarios,
                               const SolverOptions& options, int jobs,
                               const ScenarioProgress& progress) {
    const std::size_t count = scenarios.size();
    if (count == 0) throw std::invalid_argument("solve_decoupled: empty scenario set");

    EnvelopeResult result;
    result.envelope.per_scenario.resize(count);
    result.envelope.labels.resize(count);
    std::vector<LpStatus> statuses(count, LpStatus::IterationLimit);

    std::mutex progress_mutex;
    std::size_t done = 0;
    parallel_for(count, jobs, [&](std::size_t i) {
        const Scenario scenario = scenarios.at(i);
        const DeterministicResult r = solve_deterministic(spec, scenario, options);
        statuses[i] = r.status;
        if (r.status == LpStatus::Optimal) result.envelope.per_scenario[i] = r.trajectory;
        result.envelope.labels[i] = scenario.provenance;
        if (progress) {
            std::lock_guard<std::mutex> lock(progress_mutex);
            progress(++done, count);
        }
    });

    for (std::size_t i = 0; i < count; ++i) {
        if (statuses[i] != LpStatus::Optimal) {
            result.infeasible_ids.push_back(i);
            result.infeasible_labels.push_back(result.envelope.labels[i]);
        }
    }
    if (!result.infeasible_ids.empty()) {
        result.status = LpStatus::Infeasible;
        return result;
    }

    const Index steps = scenarios.horizon();
    Array rule = Array::Constant(steps, -kInfinity);
    for (const StorageTrajectory& traj : result.envelope.per_scenario)
        rule = rule.max(traj.storages.head(steps));
    result.envelope.rule_storage = rule;
    result.envelope.objective = rule.sum();
    result.envelope.support_ids = identify_support(result.envelope);
    result.status = LpStatus::Optimal;
    return result;
}

StochasticLp build_stochastic_lp(const ReservoirSpec& spec, const std::vector<Scenario>& scenarios) {
    if (scenarios.empty()) throw std::invalid_argument("build_stochastic_lp: no scenarios");
    const Index steps = scenarios.front().horizon();
    for (const Scenario& s : scenarios)
        if (s.horizon() != steps || s.start_step != scenarios.front().start_step)
            throw std::invalid_argument("build_stochastic_lp: heterogeneous scenario horizons");

    const Index nd = static_cast<Index>(spec.diverted.size());
    const Index ns = static_cast<Index>(scenarios.size());

    StochasticLp model;
    model.horizon = steps;
    model.num_scenarios = ns;
    model.num_diverted = nd;
    model.block_cols = (steps + 1) + steps + nd * steps;

    LpBuilder builder;
    const int spy = spec.grid.steps_per_year();
    for (Index s = 0; s < ns; ++s) {
        const Scenario& scenario = scenarios[static_cast<std::size_t>(s)];
        const std::string prefix = "s" + std::to_string(s) + ".";
        for (Index t = 0; t <= steps; ++t)
            builder.add_variable(prefix + "storage[" + std::to_string(t) + "]", spec.min_storage,
                                 spec.max_storage, 0.0);
        for (Index t = 0; t < steps; ++t) {
            const int soy = (scenario.start_step + static_cast<int>(t)) % spy;
            builder.add_variable(prefix + "release[" + std::to_string(t) + "]", 0.0,
                                 spec.release_capacity(soy), 0.0);
        }
        for (Index r = 0; r < nd; ++r) {
            const DivertedRiverSpec& d = spec.diverted[static_cast<std::size_t>(r)];
            const Array& flow = scenario.flows.at(d.river);
            for (Index t = 0; t < steps; ++t) {
                const int soy = (scenario.start_step + static_cast<int>(t)) % spy;
                const double headroom = std::max(0.0, flow[t] - d.environmental_flow[soy]);
                builder.add_variable(prefix + "diverted[" + d.river + "][" + std::to_string(t) + "]",
                                     0.0, std::min(d.max_discharge[soy], headroom), 0.0);
            }
        }
    }
    for (Index t = 0; t < steps; ++t)
        builder.add_variable("rule[" + std::to_string(t) + "]", 0.0, kInfinity, 1.0);

    for (Index s = 0; s < ns; ++s) {
        const Scenario& scenario = scenarios[static_cast<std::size_t>(s)];
        Array tributary = Array::Zero(steps);
        for (const std::string& river : spec.tributaries) tributary += scenario.flows.at(river);
        for (Index t = 0; t < steps; ++t) {
            const int soy = (scenario.start_step + static_cast<int>(t)) % spy;
            const double fixed = spec.drinking_water[soy] + spec.environmental_flow_dam[soy];
            std::vector<LpBuilder::Term> terms;
            terms.reserve(static_cast<std::size_t>(3 + nd));
            terms.emplace_back(model.storage_col(s, t + 1), 1.0);
            terms.emplace_back(model.storage_col(s, t), -1.0);
            terms.emplace_back(s * model.block_cols + (steps + 1) + t, 1.0);  // release
            for (Index r = 0; r < nd; ++r)
                terms.emplace_back(s * model.block_cols + (steps + 1) + steps + r * steps + t, -1.0);
            builder.add_row(RowSense::Equal, tributary[t] - fixed, std::move(terms));
        }
        for (Index t = 0; t < steps; ++t)
            builder.add_row(RowSense::LessEqual, 0.0,
                            {{model.storage_col(s, t), 1.0}, {model.rule_col(t), -1.0}});
    }

    model.problem = std::move(builder).finalize();
    return model;
}

EnvelopeSolution extract_envelope(const ReservoirSpec& spec, const std::vector<Scenario>& scenarios,
                                  const StochasticLp& model, const LpSolution& solution) {
    if (solution.status != LpStatus::Optimal)
        throw std::invalid_argument(std::string("extract_envelope: solution status is ") +
                                    to_string(solution.status));
    const Index steps = model.horizon;
    const int spy = spec.grid.steps_per_year();

    EnvelopeSolution env;
    env.rule_storage = solution.primal.segment(model.rule_col(0), steps).array();
    env.objective = env.rule_storage.sum();
    for (Index s = 0; s < model.num_scenarios; ++s) {
        const Scenario& scenario = scenarios[static_cast<std::size_t>(s)];
        StorageTrajectory traj;
        traj.storages = solution.primal.segment(model.storage_col(s, 0), steps + 1).array();
        traj.releases = solution.primal.segment(s * model.block_cols + (steps + 1), steps).array();
        traj.inputs = Array::Zero(steps);
        for (const std::string& river : spec.tributaries) traj.inputs += scenario.flows.at(river);
        for (Index r = 0; r < model.num_diverted; ++r) {
            const std::string& river = spec.diverted[static_cast<std::size_t>(r)].river;
            Array intake = solution.primal
                               .segment(s * model.block_cols + (steps + 1) + steps + r * steps, steps)
                               .array();
            traj.inputs += intake;
            traj.diverted_intakes.emplace(river, std::move(intake));
        }
        traj.outputs = Array::Zero(steps);
        for (Index t = 0; t < steps; ++t) {
            const int soy = (scenario.start_step + static_cast<int>(t)) % spy;
            traj.outputs[t] = spec.drinking_water[soy] + spec.environmental_flow_dam[soy];
        }
        traj.outputs += traj.releases;
        env.per_scenario.push_back(std::move(traj));
        env.labels.push_back(scenario.provenance);
    }
    env.support_ids = identify_support(env);
    return env;
}

}  // namespace resop
