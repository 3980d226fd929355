#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "resop/reservoir.hpp"

namespace resop {

/// Per-step confidence interval on historical inflow, Student-t based.
struct ConfidenceSpec {
    double level = 0.95;    // in (0, 1)
    bool one_sided = false; // default: two-sided interval, lower endpoint
};

/// p-quantile of Student's t distribution with dof degrees of freedom.
/// Newton iteration on the incomplete-beta CDF, seeded by the normal
/// quantile; accurate to well below 1e-6 absolute.
double t_quantile(double p, int dof);

/// Quantile of the standard normal distribution.
double normal_quantile(double p);

/// Lower confidence bound of the per-step inflow of one river across years:
/// lb[t] = max(0, mean[t] - t_q * sd[t] / sqrt(n)) with q = level for
/// one-sided intervals and 1 - (1-level)/2 otherwise. Needs n >= 2 years.
Array ci_lower_bounds(const std::vector<HydroYear>& years, const std::string& river,
                      const ConfidenceSpec& conf);

/// The explicit worst case: every river at its lower confidence bound,
/// tiled to the requested number of years.
struct WorstCaseScenario {
    Scenario underlying;
    double level = 0.0;
    int sample_size = 0;
};

WorstCaseScenario worst_case_scenario(const std::vector<HydroYear>& years, const TimeGrid& grid,
                                      const ConfidenceSpec& conf, int horizon_years);

struct RobustResult {
    LpStatus status = LpStatus::IterationLimit;
    double level = 0.0;
    double objective = 0.0;
    StorageTrajectory trajectory;  // valid when Optimal
};

/// Deterministic solve against the worst-case scenario. Infeasibility is a
/// legitimate outcome (the confidence level asks for more water than the
/// catchment can guarantee) and is reported through the status.
RobustResult solve_robust(const ReservoirSpec& spec, const std::vector<HydroYear>& years,
                          const ConfidenceSpec& conf, int horizon_years,
                          const SolverOptions& options = {});

/// Writes a scenario as ingestion-format CSV (river,date,discharge_m3s, one
/// row per calendar day) so the bound can be inspected or replayed. Any
/// leap day in the chosen span is emitted with zero discharge, which the
/// loader folds away; per-step volumes round-trip exactly.
void write_scenario_csv(const Scenario& scenario, std::ostream& out, int first_year = 1901);

}  // namespace resop
