#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "resop/robust.hpp"
#include "resop/stochastic.hpp"

namespace resop {

struct StochasticModelChoice {
    ScenarioGenMethod method;
};

struct RobustModelChoice {
    ConfidenceSpec conf;
};

using UncertainModel = std::variant<StochasticModelChoice, RobustModelChoice>;

std::string describe(const UncertainModel& model);

/// Receding-horizon configuration. Scenarios span `scenario_years`; each of
/// the steps_per_year window solves optimizes `window_years` consecutive
/// years starting one step later than the previous, and only the rule value
/// at the window's first step is kept.
struct MpcConfig {
    int window_years = 2;    // guarantee horizon
    int scenario_years = 3;  // must fit every shifted window
    UncertainModel model = StochasticModelChoice{};

    void validate(const TimeGrid& grid) const;
};

/// Year-long minimum storage bound: the artifact's final product.
struct RuleCurve {
    TimeGrid grid = TimeGrid::weekly();
    Array values;  // length steps_per_year, m3
    double min_storage = 0.0;
    double max_storage = 0.0;
    std::string model;
    int guarantee_horizon_years = 0;
    std::string generated_at;       // ISO timestamp, informational only
    std::string input_fingerprint;  // hash of the driving data

    void validate() const;
};

/// Thrown when a window solve has no solution; a rule curve with holes is
/// operationally meaningless, so the whole run fails.
struct InfeasibleModelError : std::runtime_error {
    InfeasibleModelError(std::string message, int start_step_, std::vector<std::string> offenders_)
        : std::runtime_error(std::move(message)), start_step(start_step_), offenders(std::move(offenders_)) {}
    int start_step = -1;  // -1: not window-specific
    std::vector<std::string> offenders;
};

struct WindowReport {
    int start_step = 0;
    std::size_t scenario_count = 0;
    double elapsed_seconds = 0.0;
};

using MpcProgressHook = std::function<void(const WindowReport&)>;

RuleCurve run_mpc(const ReservoirSpec& spec, const std::vector<HydroYear>& years,
                  const MpcConfig& config, const SolverOptions& options = {}, int jobs = 1,
                  const MpcProgressHook& progress = {});

/// Direct (non receding-horizon) solve of the configured uncertain model
/// over `window_years` years; the rule curve is the first year of the
/// result. Scenarios span window_years here, not scenario_years.
RuleCurve solve_direct(const ReservoirSpec& spec, const std::vector<HydroYear>& years,
                       const MpcConfig& config, const SolverOptions& options = {}, int jobs = 1);

struct ContinuityDiagnostics {
    bool complete = false;
    double wrap_jump = 0.0;  // |values[0] - values[last]|
};

/// The receding-horizon construction makes the curve year-to-year
/// continuous; this measures the wrap-around jump rather than asserting a
/// threshold.
ContinuityDiagnostics check_continuity(const RuleCurve& curve);

}  // namespace resop
