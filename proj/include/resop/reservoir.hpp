#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "resop/hydrology.hpp"
#include "resop/lp.hpp"
#include "resop/time_grid.hpp"

namespace resop {

/// River whose flow can be routed into the reservoir through a tunnel.
/// Arrays are per step-of-year volumes in m3 (length steps_per_year).
struct DivertedRiverSpec {
    std::string river;
    Array max_discharge;
    Array environmental_flow;
};

/// Physical and operational constants of the dam, already converted to m3
/// per grid step. Time-varying quantities are per step-of-year arrays; on
/// daily and weekly grids they are constant-filled, on monthly grids they
/// track month lengths.
struct ReservoirSpec {
    std::string name;
    TimeGrid grid = TimeGrid::weekly();
    double min_storage = 0.0;  // m3
    double max_storage = 0.0;  // m3
    Array drinking_water;            // m3 per step
    Array environmental_flow_dam;    // m3 per step
    Array penstock_capacity;         // m3 per step
    Array bottom_outlet_capacity;    // m3 per step
    std::vector<std::string> tributaries;
    std::vector<DivertedRiverSpec> diverted;

    double release_capacity(int step_of_year) const {
        return penstock_capacity[step_of_year] + bottom_outlet_capacity[step_of_year];
    }
    std::vector<std::string> all_rivers() const;
    void validate() const;
};

/// Reservoir constants in the units they are usually published in.
struct RawReservoirSpec {
    std::string name;
    double min_storage_m3 = 0.0;
    double max_storage_m3 = 0.0;
    double drinking_water_m3_per_day = 0.0;
    double environmental_flow_dam_m3s = 0.0;
    double penstock_m3s = 0.0;
    double bottom_outlet_m3s = 0.0;
    std::vector<std::string> tributaries;
    struct RawDiverted {
        std::string river;
        double max_discharge_m3s = 0.0;
        double environmental_flow_m3s = 0.0;
    };
    std::vector<RawDiverted> diverted;
};

/// Expands raw per-day / per-second rates to m3 per grid step
/// (per-day x days-in-step, per-second x 86400 x days-in-step).
/// Throws std::invalid_argument on negative raw values.
ReservoirSpec convert_spec_units(const RawReservoirSpec& raw, const TimeGrid& grid);

/// Reads a flat `key = value` reservoir file (see data/eupen.toml).
RawReservoirSpec read_reservoir_file(const std::string& path);

/// Multi-year inflow trajectory fed to one LP instance. `start_step` is the
/// step-of-year of the first entry, so sliced scenarios index time-varying
/// reservoir constants correctly.
struct Scenario {
    TimeGrid grid = TimeGrid::weekly();
    int start_step = 0;
    std::map<std::string, Array> flows;  // river -> m3 per step, all length T
    std::string provenance;

    Index horizon() const { return flows.empty() ? 0 : flows.begin()->second.size(); }
};

/// Builds a k-year scenario by concatenating years; provenance joins the
/// labels with '+'.
Scenario concat_years(const std::vector<const HydroYear*>& years, const TimeGrid& grid);

/// Contiguous sub-scenario [start, start + length), carrying the phase.
Scenario slice_scenario(const Scenario& s, int start, Index length);

struct StorageTrajectory {
    Array storages;  // T+1
    Array releases;  // T
    std::map<std::string, Array> diverted_intakes;  // T each
    Array inputs;    // T
    Array outputs;   // T

    /// Largest relative mass-balance residual over all steps.
    double mass_balance_residual() const;
};

/// Deterministic minimum-storage LP for one scenario: T mass-balance
/// equality rows over variables storage[0..T], release[0..T-1] and
/// diverted[t,r]; diversion and release limits are variable bounds;
/// objective is the total stored volume.
struct DeterministicLp {
    LpProblem problem;
    Index horizon = 0;
    Index num_diverted = 0;
    std::vector<std::string> diverted_rivers;
    Array tributary_inflow;  // per step, m3
    Array fixed_output;      // drinking water + environmental flow, per step

    Index storage_col(Index t) const { return t; }
    Index release_col(Index t) const { return horizon + 1 + t; }
    Index diverted_col(Index r, Index t) const { return horizon + 1 + horizon + r * horizon + t; }
};

DeterministicLp build_deterministic_lp(const ReservoirSpec& spec, const Scenario& scenario);

/// Reconstructs the full trajectory (including the substituted input/output
/// series) from an Optimal solution. Throws std::invalid_argument otherwise.
StorageTrajectory extract_trajectory(const DeterministicLp& model, const LpSolution& solution);

struct DeterministicResult {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    StorageTrajectory trajectory;  // valid when Optimal
};

DeterministicResult solve_deterministic(const ReservoirSpec& spec, const Scenario& scenario,
                                        const SolverOptions& options = {});

}  // namespace resop
