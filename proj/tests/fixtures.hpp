#pragma once

// Shared synthetic fixtures for the unit and acceptance suites.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "resop/reservoir.hpp"

namespace resop::fixtures {

/// Reservoir with constant per-step quantities on the given grid.
ReservoirSpec toy_spec(const TimeGrid& grid, double min_storage, double max_storage,
                       double demand_per_step, double env_flow_dam_per_step = 0.0,
                       double release_cap_per_step = 1e9,
                       const std::vector<std::string>& tributaries = {"river"});

/// Adds a diverted river with constant per-step tunnel capacity and
/// environmental flow.
void add_diverted(ReservoirSpec& spec, const std::string& river, double max_discharge_per_step,
                  double environmental_flow_per_step);

/// One year with a constant per-step volume for each river.
HydroYear constant_year(const std::string& label, const TimeGrid& grid,
                        const std::map<std::string, double>& per_step_volume);

std::vector<HydroYear> constant_years(int count, const TimeGrid& grid,
                                      const std::map<std::string, double>& per_step_volume);

/// The engineered support fixture: 23 constant years on a weekly grid,
/// demand-sized inflow with a 2% surplus, and identical zero-inflow
/// December droughts in years 0, 3, 6, 9 and 12. With 2-year merging
/// exactly the nine scenarios containing a drought year define the
/// envelope.
struct SupportFixture {
    ReservoirSpec spec;
    std::vector<HydroYear> years;
    std::vector<std::size_t> expected_support;  // scenario indices, merging k=2
    double demand_per_step = 0.0;
};

SupportFixture engineered_support_fixture();

/// Random LP in kernel form for oracle comparisons: <= 8 structural
/// variables, <= 6 rows, integer data, mixed senses/bounds, a controlled
/// mix of feasible, infeasible and unbounded instances.
LpProblem random_lp(std::mt19937_64& rng);

}  // namespace resop::fixtures
