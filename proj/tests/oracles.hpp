#pragma once

// Independent reference implementations the tests check the library
// against. Everything here is deliberately brute-force and shares no code
// with the production paths it validates.

#include <map>
#include <vector>

#include "resop/lp.hpp"
#include "resop/time_grid.hpp"

namespace resop::oracle {

struct LpReference {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
};

/// Exhaustive basic-solution enumeration. Infinite upper bounds are boxed
/// at a huge cap solved twice (cap and 2x cap); a strictly improving
/// objective between the two exposes unboundedness.
LpReference enumerate_lp(const LpProblem& problem);

/// CDF of Student's t via adaptive Simpson quadrature of the density.
double t_cdf_quadrature(double x, int dof);

/// Quantile from the quadrature CDF by bisection.
double t_quantile_quadrature(double p, int dof);

/// Standard normal quantile by Newton on the erf relationship.
double normal_quantile_erf(double p);

/// Per-step volume sums of a daily series by direct bucket accumulation:
/// values[i] summed into bucket step_of_day(nominal day i), leap-day
/// duplicates handled by the caller.
std::vector<double> bucket_sums(const std::vector<double>& daily_volumes, const TimeGrid& grid);

/// Minimum average over all contiguous k-element windows of (volume, days)
/// pairs, in 1e6 m3/day.
double min_window_average(const std::vector<std::pair<double, double>>& month_volume_days, int k);

}  // namespace resop::oracle
