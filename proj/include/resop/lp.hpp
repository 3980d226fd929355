#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace resop {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

/// Linear program in computational standard form:
///   minimize    objective . x
///   subject to  constraints * x = rhs,  lower <= x <= upper.
/// Inequality rows added through LpBuilder have already been augmented with
/// slack columns by the time an LpProblem exists.
struct LpProblem {
    Matrix constraints;  // m x n, dense
    Vector rhs;          // m
    Vector objective;    // n
    Vector lower;        // n, finite
    Vector upper;        // n, entries may be +inf
    std::vector<std::string> names;  // n, for diagnostics

    Index num_rows() const { return constraints.rows(); }
    Index num_cols() const { return constraints.cols(); }

    /// Throws std::invalid_argument if dimensions or bounds are inconsistent.
    void validate() const;
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    Vector primal;          // n; best feasible point when phase 1 finished
    Vector row_duals;       // m; simplex multipliers, valid when Optimal
    double objective_value = 0.0;
    Index iterations = 0;
};

struct SolverOptions {
    Index max_iterations = 0;          // 0: 2000 + 40 * (rows + cols)
    double bound_tol = 1e-9;           // absolute, on variable bounds
    double row_tol = 1e-8;             // relative, on constraint rows
    double optimality_tol = 1e-9;      // on reduced costs
    Index refactor_interval = 64;
    Index bland_threshold = 50;        // degenerate pivots before Bland's rule
};

/// Two-phase bounded-variable primal simplex (Dantzig pricing, Bland's rule
/// after a degeneracy streak). Deterministic: identical problems produce
/// identical solutions.
LpSolution solve(const LpProblem& problem, const SolverOptions& options = {});

enum class RowSense { Equal, LessEqual, GreaterEqual };

/// Incremental builder. Structural variables are declared first; rows may
/// reference them by index or by name. finalize() augments inequality rows
/// with slack columns and validates the assembled problem.
class LpBuilder {
public:
    using VarId = Index;
    using Term = std::pair<VarId, double>;

    VarId add_variable(std::string name, double lower, double upper, double cost);
    void add_row(RowSense sense, double rhs, std::vector<Term> terms);
    void add_row_named(RowSense sense, double rhs,
                       const std::vector<std::pair<std::string, double>>& named_terms);

    Index num_variables() const { return static_cast<Index>(cost_.size()); }
    Index num_rows() const { return static_cast<Index>(rows_.size()); }

    LpProblem finalize() &&;

private:
    struct Row {
        RowSense sense;
        double rhs;
        std::vector<Term> terms;
    };

    VarId find(const std::string& name) const;

    std::vector<std::string> names_;
    std::vector<double> lower_, upper_, cost_;
    std::vector<Row> rows_;
};

/// Fixed-format text listing of the problem for debugging against external
/// solvers.
void write_lp_text(const LpProblem& problem, std::ostream& out);

}  // namespace resop
