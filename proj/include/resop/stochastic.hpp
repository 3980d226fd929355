#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "resop/reservoir.hpp"

namespace resop {

enum class GenKind { Merging, Mixing };

/// Scenario generation recipe: Merging concatenates runs of consecutive
/// historical years (N - k + 1 scenarios); Mixing takes every k-tuple in
/// lexicographic year order (N^k scenarios).
struct ScenarioGenMethod {
    GenKind kind = GenKind::Merging;
    int years_per_scenario = 2;
};

const char* to_string(GenKind kind);

/// Lazy view over the generated scenarios: indexing materializes one
/// scenario at a time, so N^k mixing enumerations never exist in memory at
/// once. An optional slice window is applied on materialization.
class ScenarioSet {
public:
    ScenarioSet(std::vector<HydroYear> years, ScenarioGenMethod method, TimeGrid grid);

    std::size_t size() const { return count_; }
    Index horizon() const;
    Scenario at(std::size_t i) const;
    std::string label(std::size_t i) const;
    const ScenarioGenMethod& method() const { return method_; }
    const TimeGrid& grid() const { return grid_; }

    /// View of the same set with every scenario cut to [start, start+length).
    ScenarioSet sliced(int start, Index length) const;

private:
    std::shared_ptr<const std::vector<HydroYear>> years_;
    ScenarioGenMethod method_;
    TimeGrid grid_;
    std::size_t count_ = 0;
    int slice_start_ = 0;
    Index slice_length_ = -1;  // -1: whole scenario

    std::vector<const HydroYear*> pick(std::size_t i) const;
};

/// Materializes the whole set. Fine for merging; for large mixing
/// enumerations prefer iterating a ScenarioSet.
std::vector<Scenario> generate_scenarios(const std::vector<HydroYear>& years,
                                         const ScenarioGenMethod& method, const TimeGrid& grid);

/// Stochastic envelope solution: the rule curve is the pointwise maximum of
/// the per-scenario optimal storage trajectories and every step is attained
/// by at least one scenario.
struct EnvelopeSolution {
    Array rule_storage;  // length T
    std::vector<StorageTrajectory> per_scenario;
    std::vector<std::string> labels;
    std::vector<std::size_t> support_ids;  // sorted
    double objective = 0.0;                // sum of rule_storage
};

struct EnvelopeResult {
    LpStatus status = LpStatus::IterationLimit;
    EnvelopeSolution envelope;                    // valid when Optimal
    std::vector<std::size_t> infeasible_ids;      // offenders when Infeasible
    std::vector<std::string> infeasible_labels;
};

using ScenarioProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Default execution path: solves each scenario's deterministic LP
/// independently (optionally in parallel) and reduces by pointwise maximum.
/// The result matches the monolithic LP optimum.
EnvelopeResult solve_decoupled(const ReservoirSpec& spec, const ScenarioSet& scenarios,
                               const SolverOptions& options = {}, int jobs = 1,
                               const ScenarioProgress& progress = {});

/// Monolithic formulation, kept to validate the decoupled path: one
/// deterministic block per scenario plus coupling rows
/// storage[t,s] <= rule[t] and objective sum_t rule[t].
struct StochasticLp {
    LpProblem problem;
    Index horizon = 0;
    Index num_scenarios = 0;
    Index num_diverted = 0;
    Index block_cols = 0;  // columns per scenario block

    Index rule_col(Index t) const { return num_scenarios * block_cols + t; }
    Index storage_col(Index s, Index t) const { return s * block_cols + t; }
};

StochasticLp build_stochastic_lp(const ReservoirSpec& spec, const std::vector<Scenario>& scenarios);

/// Envelope (rule values and per-scenario trajectories) from an Optimal
/// solution of the monolithic LP.
EnvelopeSolution extract_envelope(const ReservoirSpec& spec, const std::vector<Scenario>& scenarios,
                                  const StochasticLp& model, const LpSolution& solution);

/// Scenario ids whose trajectory reaches the envelope somewhere:
/// exists t with storage[t] >= rule[t] * (1 - tolerance).
std::vector<std::size_t> identify_support(const EnvelopeSolution& sol, double tolerance = 1e-6);

}  // namespace resop
