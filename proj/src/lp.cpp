#include "resop/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace resop {

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "?";
}

void LpProblem::validate() const {
    const Index m = num_rows();
    const Index n = num_cols();
    if (rhs.size() != m) throw std::invalid_argument("lp: rhs size does not match row count");
    if (objective.size() != n || lower.size() != n || upper.size() != n)
        throw std::invalid_argument("lp: column vectors do not match column count");
    if (!names.empty() && static_cast<Index>(names.size()) != n)
        throw std::invalid_argument("lp: name list does not match column count");
    for (Index j = 0; j < n; ++j) {
        if (!std::isfinite(lower[j])) throw std::invalid_argument("lp: lower bound must be finite");
        if (std::isnan(upper[j]) || upper[j] < lower[j])
            throw std::invalid_argument("lp: bounds crossed for column " + std::to_string(j));
        if (!std::isfinite(objective[j])) throw std::invalid_argument("lp: objective coefficient not finite");
    }
    for (Index i = 0; i < m; ++i)
        if (!std::isfinite(rhs[i])) throw std::invalid_argument("lp: rhs not finite");
    if (!constraints.allFinite()) throw std::invalid_argument("lp: constraint coefficient not finite");
}

// ---------------------------------------------------------------------------
// Builder

LpBuilder::VarId LpBuilder::add_variable(std::string name, double lower, double upper, double cost) {
    if (!std::isfinite(lower)) throw std::invalid_argument("variable '" + name + "': lower bound must be finite");
    if (std::isnan(upper) || upper < lower)
        throw std::invalid_argument("variable '" + name + "': bounds crossed");
    if (!std::isfinite(cost)) throw std::invalid_argument("variable '" + name + "': cost not finite");
    names_.push_back(std::move(name));
    lower_.push_back(lower);
    upper_.push_back(upper);
    cost_.push_back(cost);
    return static_cast<VarId>(names_.size()) - 1;
}

void LpBuilder::add_row(RowSense sense, double rhs, std::vector<Term> terms) {
    if (!std::isfinite(rhs)) throw std::invalid_argument("row rhs not finite");
    for (const auto& [var, coeff] : terms) {
        if (var < 0 || var >= num_variables())
            throw std::invalid_argument("row references undeclared variable id " + std::to_string(var));
        if (!std::isfinite(coeff))
            throw std::invalid_argument("row coefficient for '" + names_[static_cast<std::size_t>(var)] +
                                        "' not finite");
    }
    rows_.push_back(Row{sense, rhs, std::move(terms)});
}

LpBuilder::VarId LpBuilder::find(const std::string& name) const {
    for (std::size_t j = 0; j < names_.size(); ++j)
        if (names_[j] == name) return static_cast<VarId>(j);
    throw std::invalid_argument("row references unknown variable name '" + name + "'");
}

void LpBuilder::add_row_named(RowSense sense, double rhs,
                              const std::vector<std::pair<std::string, double>>& named_terms) {
    std::vector<Term> terms;
    terms.reserve(named_terms.size());
    for (const auto& [name, coeff] : named_terms) terms.emplace_back(find(name), coeff);
    add_row(sense, rhs, std::move(terms));
}

LpProblem LpBuilder::finalize() && {
    const Index m = num_rows();
    Index slacks = 0;
    for (const Row& row : rows_)
        if (row.sense != RowSense::Equal) ++slacks;

    const Index n = num_variables() + slacks;
    LpProblem p;
    p.constraints = Matrix::Zero(m, n);
    p.rhs.resize(m);
    p.objective.setZero(n);
    p.lower.setZero(n);
    p.upper.setConstant(n, kInfinity);
    p.names = std::move(names_);
    p.names.resize(static_cast<std::size_t>(n));

    for (Index j = 0; j < num_variables(); ++j) {
        p.objective[j] = cost_[static_cast<std::size_t>(j)];
        p.lower[j] = lower_[static_cast<std::size_t>(j)];
        p.upper[j] = upper_[static_cast<std::size_t>(j)];
    }

    Index next_slack = num_variables();
    for (Index i = 0; i < m; ++i) {
        const Row& row = rows_[static_cast<std::size_t>(i)];
        for (const auto& [var, coeff] : row.terms) p.constraints(i, var) += coeff;
        p.rhs[i] = row.rhs;
        if (row.sense != RowSense::Equal) {
            p.constraints(i, next_slack) = row.sense == RowSense::LessEqual ? 1.0 : -1.0;
            p.names[static_cast<std::size_t>(next_slack)] = "slack[" + std::to_string(i) + "]";
            ++next_slack;
        }
    }
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// Bounded-variable two-phase primal simplex.

namespace {

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

class Simplex {
public:
    Simplex(const LpProblem& p, const SolverOptions& opt) : p_(p), opt_(opt), m_(p.num_rows()), n_(p.num_cols()) {
        total_ = n_ + m_;  // structural + artificial
        rhs_norm_ = m_ > 0 ? p.rhs.lpNorm<Eigen::Infinity>() : 0.0;
        build_columns();
        lower_ = Vector(total_);
        upper_ = Vector(total_);
        cost_ = Vector::Zero(total_);
        lower_.head(n_) = p.lower;
        upper_.head(n_) = p.upper;
        lower_.tail(m_).setZero();
        upper_.tail(m_).setConstant(kInfinity);
        x_ = Vector::Zero(total_);
        status_.assign(static_cast<std::size_t>(total_), VarStatus::AtLower);
        max_iterations_ = opt.max_iterations > 0 ? opt.max_iterations : 2000 + 40 * (m_ + n_);
    }

    LpSolution run() {
        LpSolution sol;
        if (m_ == 0 && n_ == 0) {
            sol.status = LpStatus::Optimal;
            return sol;
        }

        start_phase1();
        const bool phase1_done = iterate(/*phase1=*/true);
        const double infeasibility = phase1_objective();
        const double accept = opt_.row_tol * (1.0 + rhs_norm_) * std::max<Index>(m_, 1);
        if (!phase1_done) {
            sol.status = LpStatus::IterationLimit;
            fill_primal(sol);
            return sol;
        }
        if (infeasibility > accept) {
            sol.status = LpStatus::Infeasible;
            fill_primal(sol);
            return sol;
        }

        start_phase2();
        const bool phase2_done = iterate(/*phase1=*/false);
        refactorize();
        if (!phase2_done) {
            sol.status = unbounded_ ? LpStatus::Unbounded : LpStatus::IterationLimit;
            fill_primal(sol);
            return sol;
        }
        sol.status = LpStatus::Optimal;
        fill_primal(sol);
        sol.row_duals = duals();
        return sol;
    }

    Index iterations() const { return iterations_; }

private:
    // Column-wise sparse view of [A | I_art] built once; artificial columns
    // get their sign fixed in start_phase1.
    void build_columns() {
        col_ptr_.assign(static_cast<std::size_t>(total_) + 1, 0);
        std::size_t nnz = 0;
        for (Index j = 0; j < n_; ++j) {
            for (Index i = 0; i < m_; ++i)
                if (p_.constraints(i, j) != 0.0) ++nnz;
        }
        nnz += static_cast<std::size_t>(m_);
        col_rows_.resize(nnz);
        col_vals_.resize(nnz);
        std::size_t k = 0;
        for (Index j = 0; j < n_; ++j) {
            col_ptr_[static_cast<std::size_t>(j)] = k;
            for (Index i = 0; i < m_; ++i) {
                const double v = p_.constraints(i, j);
                if (v != 0.0) {
                    col_rows_[k] = i;
                    col_vals_[k] = v;
                    ++k;
                }
            }
        }
        for (Index i = 0; i < m_; ++i) {
            col_ptr_[static_cast<std::size_t>(n_ + i)] = k;
            col_rows_[k] = i;
            col_vals_[k] = 1.0;  // sign adjusted in start_phase1
            ++k;
        }
        col_ptr_[static_cast<std::size_t>(total_)] = k;
    }

    double col_dot(Index j, const Vector& y) const {
        double acc = 0.0;
        for (std::size_t k = col_ptr_[static_cast<std::size_t>(j)]; k < col_ptr_[static_cast<std::size_t>(j) + 1]; ++k)
            acc += col_vals_[k] * y[col_rows_[k]];
        return acc;
    }

    void col_axpy(Index j, double scale, Vector& out) const {
        for (std::size_t k = col_ptr_[static_cast<std::size_t>(j)]; k < col_ptr_[static_cast<std::size_t>(j) + 1]; ++k)
            out[col_rows_[k]] += scale * col_vals_[k];
    }

    void start_phase1() {
        // Nonbasic structural variables rest at their lower bound; the
        // artificial on each row absorbs the residual with a matching sign.
        for (Index j = 0; j < n_; ++j) {
            status_[static_cast<std::size_t>(j)] = VarStatus::AtLower;
            x_[j] = lower_[j];
        }
        Vector residual = p_.rhs;
        for (Index j = 0; j < n_; ++j)
            if (x_[j] != 0.0) col_axpy(j, -x_[j], residual);

        basis_.resize(static_cast<std::size_t>(m_));
        binv_ = Matrix::Identity(m_, m_);
        for (Index i = 0; i < m_; ++i) {
            const Index art = n_ + i;
            const double sign = residual[i] < 0.0 ? -1.0 : 1.0;
            col_vals_[col_ptr_[static_cast<std::size_t>(art)]] = sign;
            binv_(i, i) = sign;
            basis_[static_cast<std::size_t>(i)] = art;
            status_[static_cast<std::size_t>(art)] = VarStatus::Basic;
            x_[art] = std::abs(residual[i]);
            cost_[art] = 1.0;
        }
        phase1_ = true;
        degenerate_streak_ = 0;
        bland_ = false;
    }

    void start_phase2() {
        // Artificials are pinned at zero; any still basic sit there
        // degenerately (redundant rows).
        for (Index i = 0; i < m_; ++i) {
            upper_[n_ + i] = 0.0;
            cost_[n_ + i] = 0.0;
        }
        cost_.head(n_) = p_.objective;
        phase1_ = false;
        degenerate_streak_ = 0;
        bland_ = false;
        unbounded_ = false;
        refactorize();
    }

    double phase1_objective() const {
        double s = 0.0;
        for (Index i = 0; i < m_; ++i) {
            const Index v = basis_[static_cast<std::size_t>(i)];
            if (v >= n_) s += x_[v];
        }
        return s;
    }

    void refactorize() {
        Matrix basis_matrix = Matrix::Zero(m_, m_);
        for (Index i = 0; i < m_; ++i) {
            const Index j = basis_[static_cast<std::size_t>(i)];
            for (std::size_t k = col_ptr_[static_cast<std::size_t>(j)]; k < col_ptr_[static_cast<std::size_t>(j) + 1]; ++k)
                basis_matrix(col_rows_[k], i) = col_vals_[k];
        }
        binv_ = basis_matrix.partialPivLu().inverse();
        recompute_basics();
    }

    void recompute_basics() {
        Vector rhs = p_.rhs;
        for (Index j = 0; j < total_; ++j) {
            if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
            if (x_[j] != 0.0) col_axpy(j, -x_[j], rhs);
        }
        Vector xb = binv_ * rhs;
        for (Index i = 0; i < m_; ++i) x_[basis_[static_cast<std::size_t>(i)]] = xb[i];
    }

    bool iterate(bool phase1) {
        Vector y(m_), w(m_), cb(m_);
        const double dual_tol = opt_.optimality_tol * (1.0 + cost_.lpNorm<Eigen::Infinity>());
        Index since_refactor = 0;

        while (true) {
            if (phase1 && phase1_objective() <= opt_.bound_tol * (1.0 + rhs_norm_))
                return true;
            if (iterations_ >= max_iterations_) return false;

            for (Index i = 0; i < m_; ++i) cb[i] = cost_[basis_[static_cast<std::size_t>(i)]];
            y.noalias() = binv_.transpose() * cb;

            // Pricing: Dantzig by default, Bland after a degeneracy streak.
            Index entering = -1;
            double best = dual_tol;
            int direction = 0;  // +1 increase from lower, -1 decrease from upper
            for (Index j = 0; j < total_; ++j) {
                const VarStatus st = status_[static_cast<std::size_t>(j)];
                if (st == VarStatus::Basic) continue;
                if (upper_[j] - lower_[j] <= 0.0) continue;  // fixed
                const double d = cost_[j] - col_dot(j, y);
                if (st == VarStatus::AtLower && d < -dual_tol) {
                    if (bland_) { entering = j; direction = 1; break; }
                    if (-d > best) { best = -d; entering = j; direction = 1; }
                } else if (st == VarStatus::AtUpper && d > dual_tol) {
                    if (bland_) { entering = j; direction = -1; break; }
                    if (d > best) { best = d; entering = j; direction = -1; }
                }
            }
            if (entering < 0) return true;  // optimal for this phase

            w.setZero();
            for (std::size_t k = col_ptr_[static_cast<std::size_t>(entering)];
                 k < col_ptr_[static_cast<std::size_t>(entering) + 1]; ++k)
                w += col_vals_[k] * binv_.col(col_rows_[k]);

            // Ratio test. The entering variable moves by t >= 0 toward its
            // opposite bound; basic values move by -direction * t * w.
            const double step_cap = upper_[entering] - lower_[entering];
            double t_best = step_cap;
            Index leaving_pos = -1;
            bool leaving_at_upper = false;
            const double pivot_tol = 1e-10;
            for (Index i = 0; i < m_; ++i) {
                const double wi = direction * w[i];
                const Index bi = basis_[static_cast<std::size_t>(i)];
                double ratio;
                bool to_upper;
                if (wi > pivot_tol) {
                    ratio = (x_[bi] - lower_[bi]) / wi;
                    to_upper = false;
                } else if (wi < -pivot_tol) {
                    if (upper_[bi] == kInfinity) continue;
                    ratio = (x_[bi] - upper_[bi]) / wi;
                    to_upper = true;
                } else {
                    continue;
                }
                if (ratio < 0.0) ratio = 0.0;
                bool take = false;
                if (ratio < t_best - 1e-12) {
                    take = true;
                } else if (ratio <= t_best + 1e-12 && leaving_pos >= 0) {
                    // Tie-break: Bland wants the smallest variable index;
                    // otherwise prefer the numerically strongest pivot.
                    if (bland_) {
                        take = bi < basis_[static_cast<std::size_t>(leaving_pos)];
                    } else {
                        take = std::abs(w[i]) > std::abs(w[leaving_pos]);
                    }
                }
                if (take) {
                    t_best = ratio;
                    leaving_pos = i;
                    leaving_at_upper = to_upper;
                }
            }

            if (t_best == kInfinity) {
                // No blocking basic variable and the entering variable is
                // unbounded in its improving direction.
                unbounded_ = true;
                return false;
            }

            ++iterations_;
            if (t_best <= 1e-11) {
                if (++degenerate_streak_ >= opt_.bland_threshold) bland_ = true;
            } else {
                degenerate_streak_ = 0;
                bland_ = false;
            }

            if (leaving_pos < 0) {
                // Bound flip: the entering variable runs to its other bound.
                for (Index i = 0; i < m_; ++i)
                    x_[basis_[static_cast<std::size_t>(i)]] -= direction * t_best * w[i];
                if (direction > 0) {
                    x_[entering] = upper_[entering];
                    status_[static_cast<std::size_t>(entering)] = VarStatus::AtUpper;
                } else {
                    x_[entering] = lower_[entering];
                    status_[static_cast<std::size_t>(entering)] = VarStatus::AtLower;
                }
                continue;
            }

            const Index leaving = basis_[static_cast<std::size_t>(leaving_pos)];
            for (Index i = 0; i < m_; ++i)
                x_[basis_[static_cast<std::size_t>(i)]] -= direction * t_best * w[i];
            x_[entering] = direction > 0 ? lower_[entering] + t_best : upper_[entering] - t_best;
            x_[leaving] = leaving_at_upper ? upper_[leaving] : lower_[leaving];
            status_[static_cast<std::size_t>(leaving)] = leaving_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
            status_[static_cast<std::size_t>(entering)] = VarStatus::Basic;
            basis_[static_cast<std::size_t>(leaving_pos)] = entering;

            // Product-form update of the explicit basis inverse.
            const double pivot = w[leaving_pos];
            binv_.row(leaving_pos) /= pivot;
            for (Index i = 0; i < m_; ++i) {
                if (i == leaving_pos) continue;
                const double f = w[i];
                if (f != 0.0) binv_.row(i) -= f * binv_.row(leaving_pos);
            }

            if (++since_refactor >= opt_.refactor_interval) {
                refactorize();
                since_refactor = 0;
            }
        }
    }

    void fill_primal(LpSolution& sol) const {
        sol.primal = x_.head(n_);
        sol.objective_value = p_.objective.dot(sol.primal);
        sol.iterations = iterations_;
    }

    Vector duals() const {
        Vector cb(m_);
        for (Index i = 0; i < m_; ++i) cb[i] = cost_[basis_[static_cast<std::size_t>(i)]];
        return binv_.transpose() * cb;
    }

    const LpProblem& p_;
    const SolverOptions& opt_;
    Index m_, n_, total_;
    double rhs_norm_ = 0.0;
    Index max_iterations_ = 0;
    Index iterations_ = 0;

    std::vector<std::size_t> col_ptr_;
    std::vector<Index> col_rows_;
    std::vector<double> col_vals_;

    Vector lower_, upper_, cost_, x_;
    std::vector<VarStatus> status_;
    std::vector<Index> basis_;
    Matrix binv_;

    bool phase1_ = true;
    bool bland_ = false;
    bool unbounded_ = false;
    Index degenerate_streak_ = 0;
};

}  // namespace

LpSolution solve(const LpProblem& problem, const SolverOptions& options) {
    problem.validate();
    Simplex simplex(problem, options);
    return simplex.run();
}

void write_lp_text(const LpProblem& p, std::ostream& out) {
    auto name = [&](Index j) {
        if (j < static_cast<Index>(p.names.size()) && !p.names[static_cast<std::size_t>(j)].empty())
            return p.names[static_cast<std::size_t>(j)];
        return "x" + std::to_string(j);
    };
    out << "minimize\n ";
    bool first = true;
    for (Index j = 0; j < p.num_cols(); ++j) {
        if (p.objective[j] == 0.0) continue;
        if (!first) out << " + ";
        out << p.objective[j] << " " << name(j);
        first = false;
    }
    if (first) out << "0";
    out << "\nsubject to\n";
    for (Index i = 0; i < p.num_rows(); ++i) {
        out << " r" << i << ":";
        for (Index j = 0; j < p.num_cols(); ++j) {
            const double v = p.constraints(i, j);
            if (v != 0.0) out << " " << (v >= 0 ? "+" : "-") << std::abs(v) << " " << name(j);
        }
        out << " = " << p.rhs[i] << "\n";
    }
    out << "bounds\n";
    for (Index j = 0; j < p.num_cols(); ++j) {
        out << " " << p.lower[j] << " <= " << name(j) << " <= ";
        if (p.upper[j] == kInfinity)
            out << "inf";
        else
            out << p.upper[j];
        out << "\n";
    }
    out << "end\n";
}

}  // namespace resop
