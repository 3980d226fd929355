#include "fixtures.hpp"

#include <algorithm>

namespace resop::fixtures {

ReservoirSpec toy_spec(const TimeGrid& grid, double min_storage, double max_storage,
                       double demand_per_step, double env_flow_dam_per_step,
                       double release_cap_per_step, const std::vector<std::string>& tributaries) {
    ReservoirSpec spec;
    spec.name = "toy";
    spec.grid = grid;
    spec.min_storage = min_storage;
    spec.max_storage = max_storage;
    const Index spy = grid.steps_per_year();
    spec.drinking_water = Array::Constant(spy, demand_per_step);
    spec.environmental_flow_dam = Array::Constant(spy, env_flow_dam_per_step);
    spec.penstock_capacity = Array::Constant(spy, release_cap_per_step);
    spec.bottom_outlet_capacity = Array::Zero(spy);
    spec.tributaries = tributaries;
    spec.validate();
    return spec;
}

void add_diverted(ReservoirSpec& spec, const std::string& river, double max_discharge_per_step,
                  double environmental_flow_per_step) {
    const Index spy = spec.grid.steps_per_year();
    DivertedRiverSpec d;
    d.river = river;
    d.max_discharge = Array::Constant(spy, max_discharge_per_step);
    d.environmental_flow = Array::Constant(spy, environmental_flow_per_step);
    spec.diverted.push_back(std::move(d));
    spec.validate();
}

HydroYear constant_year(const std::string& label, const TimeGrid& grid,
                        const std::map<std::string, double>& per_step_volume) {
    HydroYear y;
    y.label = label;
    for (const auto& [river, volume] : per_step_volume)
        y.flows.emplace(river, Array::Constant(grid.steps_per_year(), volume));
    return y;
}

std::vector<HydroYear> constant_years(int count, const TimeGrid& grid,
                                      const std::map<std::string, double>& per_step_volume) {
    std::vector<HydroYear> years;
    years.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        years.push_back(constant_year(std::to_string(1992 + i), grid, per_step_volume));
    return years;
}

SupportFixture engineered_support_fixture() {
    const TimeGrid grid = TimeGrid::weekly();
    const double demand = 500000.0;   // m3 per week
    const double base = 1.02 * demand;

    SupportFixture f;
    f.demand_per_step = demand;
    f.spec = toy_spec(grid, 1e6, 50e6, demand);

    const std::vector<int> drought_years = {0, 3, 6, 9, 12};
    for (int y = 0; y < 23; ++y) {
        HydroYear year = constant_year(std::to_string(1992 + y), grid, {{"river", base}});
        if (std::find(drought_years.begin(), drought_years.end(), y) != drought_years.end()) {
            // December (weeks 48..51) carries no water at all.
            for (int w = 48; w < 52; ++w) year.flows.at("river")[w] = 0.0;
        }
        f.years.push_back(std::move(year));
    }

    // Merging pairs (i, i+1): a drought year contributes the scenario where
    // it is the second year (prebuild spans the whole window) and the one
    // where it is the first.
    f.expected_support = {0, 2, 3, 5, 6, 8, 9, 11, 12};
    return f;
}

LpProblem random_lp(std::mt19937_64& rng) {
    auto uniform_int = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    const int n = uniform_int(1, 8);
    const int m = uniform_int(0, std::min(6, n));

    LpBuilder builder;
    std::vector<double> lower(static_cast<std::size_t>(n)), upper(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        lower[static_cast<std::size_t>(j)] = uniform_int(0, 1) ? 0.0 : uniform_int(0, 3);
        const bool bounded = uniform_int(0, 9) < 7;
        upper[static_cast<std::size_t>(j)] =
            bounded ? lower[static_cast<std::size_t>(j)] + uniform_int(0, 10) : kInfinity;
        const double cost = uniform_int(-5, 5);
        builder.add_variable("x" + std::to_string(j), lower[static_cast<std::size_t>(j)],
                             upper[static_cast<std::size_t>(j)], cost);
    }

    // Feasible-by-construction right-hand sides for most instances.
    std::vector<double> x0(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double hi = upper[static_cast<std::size_t>(j)] == kInfinity
                              ? lower[static_cast<std::size_t>(j)] + 6.0
                              : upper[static_cast<std::size_t>(j)];
        x0[static_cast<std::size_t>(j)] =
            lower[static_cast<std::size_t>(j)] +
            (hi - lower[static_cast<std::size_t>(j)]) * (uniform_int(0, 4) / 4.0);
    }
    const bool force_feasible = uniform_int(0, 9) < 6;

    for (int i = 0; i < m; ++i) {
        std::vector<LpBuilder::Term> terms;
        double activity = 0.0;
        for (int j = 0; j < n; ++j) {
            if (uniform_int(0, 9) < 6) {
                const double coeff = uniform_int(-4, 4);
                if (coeff == 0.0) continue;
                terms.emplace_back(j, coeff);
                activity += coeff * x0[static_cast<std::size_t>(j)];
            }
        }
        const int sense_draw = uniform_int(0, 2);
        const RowSense sense = sense_draw == 0   ? RowSense::Equal
                               : sense_draw == 1 ? RowSense::LessEqual
                                                 : RowSense::GreaterEqual;
        double rhs;
        if (force_feasible) {
            rhs = activity;
            if (sense == RowSense::LessEqual) rhs += uniform_int(0, 3);
            if (sense == RowSense::GreaterEqual) rhs -= uniform_int(0, 3);
        } else {
            rhs = uniform_int(-10, 10);
        }
        builder.add_row(sense, rhs, std::move(terms));
    }
    return std::move(builder).finalize();
}

}  // namespace resop::fixtures
