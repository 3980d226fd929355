#include "resop/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "resop/config.hpp"

namespace resop {

namespace {
constexpr double kSecondsPerDay = 86400.0;
}

std::vector<std::string> ReservoirSpec::all_rivers() const {
    std::vector<std::string> rivers = tributaries;
    for (const auto& d : diverted) rivers.push_back(d.river);
    return rivers;
}

void ReservoirSpec::validate() const {
    if (!(min_storage >= 0.0) || !(min_storage < max_storage))
        throw std::invalid_argument("reservoir '" + name + "': need 0 <= min_storage < max_storage");
    const Index spy = grid.steps_per_year();
    auto check = [&](const Array& a, const char* what) {
        if (a.size() != spy)
            throw std::invalid_argument("reservoir '" + name + "': " + what + " has wrong length");
        if ((a < 0.0).any())
            throw std::invalid_argument("reservoir '" + name + "': " + what + " has negative entries");
    };
    check(drinking_water, "drinking_water");
    check(environmental_flow_dam, "environmental_flow_dam");
    check(penstock_capacity, "penstock_capacity");
    check(bottom_outlet_capacity, "bottom_outlet_capacity");
    std::set<std::string> seen;
    for (const auto& t : tributaries)
        if (!seen.insert(t).second)
            throw std::invalid_argument("reservoir '" + name + "': duplicate river '" + t + "'");
    for (const auto& d : diverted) {
        if (!seen.insert(d.river).second)
            throw std::invalid_argument("reservoir '" + name + "': river '" + d.river +
                                        "' is both tributary and diverted (or duplicated)");
        check(d.max_discharge, "diverted max_discharge");
        check(d.environmental_flow, "diverted environmental_flow");
    }
}

ReservoirSpec convert_spec_units(const RawReservoirSpec& raw, const TimeGrid& grid) {
    auto require_nonneg = [&](double v, const char* what) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("reservoir '" + raw.name + "': negative " + std::string(what));
    };
    require_nonneg(raw.min_storage_m3, "min_storage_m3");
    require_nonneg(raw.max_storage_m3, "max_storage_m3");
    require_nonneg(raw.drinking_water_m3_per_day, "drinking_water_m3_per_day");
    require_nonneg(raw.environmental_flow_dam_m3s, "environmental_flow_dam_m3s");
    require_nonneg(raw.penstock_m3s, "penstock_m3s");
    require_nonneg(raw.bottom_outlet_m3s, "bottom_outlet_m3s");

    const int spy = grid.steps_per_year();
    Array step_days(spy);
    for (int s = 0; s < spy; ++s) step_days[s] = grid.days_in_step(s);

    ReservoirSpec spec;
    spec.name = raw.name;
    spec.grid = grid;
    spec.min_storage = raw.min_storage_m3;
    spec.max_storage = raw.max_storage_m3;
    spec.drinking_water = raw.drinking_water_m3_per_day * step_days;
    spec.environmental_flow_dam = raw.environmental_flow_dam_m3s * kSecondsPerDay * step_days;
    spec.penstock_capacity = raw.penstock_m3s * kSecondsPerDay * step_days;
    spec.bottom_outlet_capacity = raw.bottom_outlet_m3s * kSecondsPerDay * step_days;
    spec.tributaries = raw.tributaries;
    for (const auto& d : raw.diverted) {
        require_nonneg(d.max_discharge_m3s, "max_discharge_m3s");
        require_nonneg(d.environmental_flow_m3s, "environmental_flow_m3s");
        DivertedRiverSpec out;
        out.river = d.river;
        out.max_discharge = d.max_discharge_m3s * kSecondsPerDay * step_days;
        out.environmental_flow = d.environmental_flow_m3s * kSecondsPerDay * step_days;
        spec.diverted.push_back(std::move(out));
    }
    spec.validate();
    return spec;
}

RawReservoirSpec read_reservoir_file(const std::string& path) {
    const KeyValueFile kv = read_key_value_file(path);
    RawReservoirSpec raw;
    raw.name = kv.get_string("name", "reservoir");
    raw.min_storage_m3 = kv.require_double("min_storage_m3");
    raw.max_storage_m3 = kv.require_double("max_storage_m3");
    raw.drinking_water_m3_per_day = kv.require_double("drinking_water_m3_per_day");
    raw.environmental_flow_dam_m3s = kv.require_double("environmental_flow_dam_m3s");
    raw.penstock_m3s = kv.require_double("penstock_m3s");
    raw.bottom_outlet_m3s = kv.require_double("bottom_outlet_m3s");
    raw.tributaries = kv.get_list("tributaries");
    for (const std::string& river : kv.get_list("diverted")) {
        RawReservoirSpec::RawDiverted d;
        d.river = river;
        d.max_discharge_m3s = kv.require_double(river + ".max_discharge_m3s");
        d.environmental_flow_m3s = kv.require_double(river + ".environmental_flow_m3s");
        raw.diverted.push_back(std::move(d));
    }
    return raw;
}

Scenario concat_years(const std::vector<const HydroYear*>& years, const TimeGrid& grid) {
    if (years.empty()) throw std::invalid_argument("concat_years: no years");
    Scenario s;
    s.grid = grid;
    const Index spy = grid.steps_per_year();
    const Index total = spy * static_cast<Index>(years.size());
    for (const auto& [river, flow] : years.front()->flows) {
        Array series(total);
        for (std::size_t k = 0; k < years.size(); ++k) {
            auto it = years[k]->flows.find(river);
            if (it == years[k]->flows.end())
                throw std::invalid_argument("concat_years: river '" + river + "' missing from year " +
                                            years[k]->label);
            if (it->second.size() != spy)
                throw std::invalid_argument("concat_years: grid mismatch for year " + years[k]->label);
            series.segment(static_cast<Index>(k) * spy, spy) = it->second;
        }
        s.flows.emplace(river, std::move(series));
    }
    for (std::size_t k = 0; k < years.size(); ++k) {
        if (k) s.provenance += '+';
        s.provenance += years[k]->label;
    }
    return s;
}

Scenario slice_scenario(const Scenario& s, int start, Index length) {
    if (start < 0 || length < 1 || start + length > s.horizon())
        throw std::invalid_argument("slice_scenario: window [" + std::to_string(start) + ", " +
                                    std::to_string(start + length) + ") out of range");
    Scenario out;
    out.grid = s.grid;
    out.start_step = (s.start_step + start) % s.grid.steps_per_year();
    out.provenance = s.provenance;
    for (const auto& [river, flow] : s.flows) out.flows.emplace(river, flow.segment(start, length));
    return out;
}

double StorageTrajectory::mass_balance_residual() const {
    const Index steps = inputs.size();
    double worst = 0.0;
    for (Index t = 0; t < steps; ++t) {
        const double lhs = storages[t + 1];
        const double rhs = storages[t] - outputs[t] + inputs[t];
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

DeterministicLp build_deterministic_lp(const ReservoirSpec& spec, const Scenario& scenario) {
    const Index steps = scenario.horizon();
    if (steps < 1) throw std::invalid_argument("build_deterministic_lp: empty scenario");
    if (!(scenario.grid == spec.grid))
        throw std::invalid_argument("build_deterministic_lp: scenario grid differs from reservoir grid");
    for (const std::string& river : spec.all_rivers()) {
        const auto it = scenario.flows.find(river);
        if (it == scenario.flows.end())
            throw std::invalid_argument("build_deterministic_lp: scenario is missing river '" + river + "'");
        if (it->second.size() != steps)
            throw std::invalid_argument("build_deterministic_lp: river '" + river +
                                        "' series length differs from the scenario horizon");
        if ((it->second < 0.0).any())
            throw std::invalid_argument("build_deterministic_lp: river '" + river +
                                        "' carries negative volumes");
    }

    const int spy = spec.grid.steps_per_year();
    const Index nd = static_cast<Index>(spec.diverted.size());

    DeterministicLp model;
    model.horizon = steps;
    model.num_diverted = nd;
    model.tributary_inflow = Array::Zero(steps);
    for (const std::string& river : spec.tributaries) model.tributary_inflow += scenario.flows.at(river);
    model.fixed_output = Array::Zero(steps);

    const Index n = (steps + 1) + steps + nd * steps;
    LpProblem& p = model.problem;
    p.constraints = Matrix::Zero(steps, n);
    p.rhs.resize(steps);
    p.objective.setZero(n);
    p.lower.setZero(n);
    p.upper.setConstant(n, kInfinity);
    p.names.resize(static_cast<std::size_t>(n));

    for (Index t = 0; t <= steps; ++t) {
        const Index j = model.storage_col(t);
        p.objective[j] = 1.0;
        p.lower[j] = spec.min_storage;
        p.upper[j] = spec.max_storage;
        p.names[static_cast<std::size_t>(j)] = "storage[" + std::to_string(t) + "]";
    }
    for (Index t = 0; t < steps; ++t) {
        const int soy = (scenario.start_step + static_cast<int>(t)) % spy;
        const Index j = model.release_col(t);
        p.upper[j] = spec.release_capacity(soy);
        p.names[static_cast<std::size_t>(j)] = "release[" + std::to_string(t) + "]";
    }
    for (Index r = 0; r < nd; ++r) {
        const DivertedRiverSpec& d = spec.diverted[static_cast<std::size_t>(r)];
        model.diverted_rivers.push_back(d.river);
        const Array& flow = scenario.flows.at(d.river);
        for (Index t = 0; t < steps; ++t) {
            const int soy = (scenario.start_step + static_cast<int>(t)) % spy;
            const Index j = model.diverted_col(r, t);
            // Tunnel intake is limited by its capacity and by what the river
            // carries beyond the environmental flow; when the river runs
            // below that flow the tunnel simply takes nothing.
            const double headroom = std::max(0.0, flow[t] - d.environmental_flow[soy]);
            p.upper[j] = std::min(d.max_discharge[soy], headroom);
            p.names[static_cast<std::size_t>(j)] = "diverted[" + d.river + "][" + std::to_string(t) + "]";
        }
    }

    // Mass balance: storage[t+1] - storage[t] + release[t] - sum_r diverted[t,r]
    //             = tributary inflow - drinking water - environmental flow.
    for (Index t = 0; t < steps; ++t) {
        const int soy = (scenario.start_step + static_cast<int>(t)) % spy;
        const double fixed = spec.drinking_water[soy] + spec.environmental_flow_dam[soy];
        model.fixed_output[t] = fixed;
        p.constraints(t, model.storage_col(t + 1)) = 1.0;
        p.constraints(t, model.storage_col(t)) = -1.0;
        p.constraints(t, model.release_col(t)) = 1.0;
        for (Index r = 0; r < nd; ++r) p.constraints(t, model.diverted_col(r, t)) = -1.0;
        p.rhs[t] = model.tributary_inflow[t] - fixed;
    }

    return model;
}

StorageTrajectory extract_trajectory(const DeterministicLp& model, const LpSolution& solution) {
    if (solution.status != LpStatus::Optimal)
        throw std::invalid_argument(std::string("extract_trajectory: solution status is ") +
                                    to_string(solution.status));
    const Index steps = model.horizon;
    StorageTrajectory traj;
    traj.storages = solution.primal.segment(model.storage_col(0), steps + 1).array();
    traj.releases = solution.primal.segment(model.release_col(0), steps).array();
    for (Index r = 0; r < model.num_diverted; ++r)
        traj.diverted_intakes.emplace(model.diverted_rivers[static_cast<std::size_t>(r)],
                                      solution.primal.segment(model.diverted_col(r, 0), steps).array());
    traj.inputs = model.tributary_inflow;
    for (const auto& [river, intake] : traj.diverted_intakes) traj.inputs += intake;
    traj.outputs = model.fixed_output + traj.releases;
    return traj;
}

DeterministicResult solve_deterministic(const ReservoirSpec& spec, const Scenario& scenario,
                                        const SolverOptions& options) {
    const DeterministicLp model = build_deterministic_lp(spec, scenario);
    const LpSolution solution = solve(model.problem, options);
    DeterministicResult result;
    result.status = solution.status;
    result.objective = solution.objective_value;
    if (solution.status == LpStatus::Optimal) result.trajectory = extract_trajectory(model, solution);
    return result;
}

}  // namespace resop
