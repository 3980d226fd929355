#include "oracles.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace resop::oracle {

namespace {

struct BoxedResult {
    bool feasible = false;
    double objective = std::numeric_limits<double>::infinity();
};

// Gaussian elimination over [A | b]: returns the indices of an independent
// row subset, or inconsistency (a dependent row with a conflicting rhs).
struct RowReduction {
    bool consistent = true;
    std::vector<Index> kept;
};

RowReduction reduce_rows(const Matrix& a, const Vector& b) {
    RowReduction out;
    const Index m = a.rows();
    const Index n = a.cols();
    Matrix reduced(m, n + 1);
    Index stored = 0;
    for (Index i = 0; i < m; ++i) {
        Vector row(n + 1);
        row.head(n) = a.row(i);
        row[n] = b[i];
        for (Index k = 0; k < stored; ++k) {
            // Eliminate against the stored pivot of row k.
            Index pivot_col = 0;
            reduced.row(k).head(n).cwiseAbs().maxCoeff(&pivot_col);
            const double factor = row[pivot_col] / reduced(k, pivot_col);
            if (factor != 0.0) row -= factor * reduced.row(k).transpose();
        }
        const double scale = a.row(i).cwiseAbs().maxCoeff() + std::abs(b[i]) + 1.0;
        if (row.head(n).cwiseAbs().maxCoeff() > 1e-9 * scale) {
            reduced.row(stored++) = row;
            out.kept.push_back(i);
        } else if (std::abs(row[n]) > 1e-9 * scale) {
            out.consistent = false;
            return out;
        }
    }
    return out;
}

// Best objective over every basic solution of the boxed problem.
BoxedResult enumerate_boxed(const LpProblem& p, double cap) {
    const Index m = p.num_rows();
    const Index n = p.num_cols();
    Vector upper = p.upper;
    for (Index j = 0; j < n; ++j)
        if (upper[j] == kInfinity) upper[j] = cap;

    BoxedResult best;
    const double tol = 1e-7;

    std::vector<Index> combo(static_cast<std::size_t>(m));
    // Iterate all m-subsets of columns as candidate bases (m == 0: a single
    // empty basis).
    std::vector<Index> stack;
    auto evaluate_basis = [&](const std::vector<Index>& basis) {
        std::vector<bool> basic(static_cast<std::size_t>(n), false);
        for (Index j : basis) basic[static_cast<std::size_t>(j)] = true;
        std::vector<Index> nonbasic;
        for (Index j = 0; j < n; ++j)
            if (!basic[static_cast<std::size_t>(j)]) nonbasic.push_back(j);

        Matrix B(m, m);
        for (Index k = 0; k < m; ++k) B.col(k) = p.constraints.col(basis[static_cast<std::size_t>(k)]);
        Eigen::FullPivLU<Matrix> lu(B);
        if (m > 0 && !lu.isInvertible()) return;

        // All lower/upper assignments of the nonbasic variables.
        const std::size_t assignments = std::size_t{1} << nonbasic.size();
        for (std::size_t mask = 0; mask < assignments; ++mask) {
            Vector x = Vector::Zero(n);
            Vector rhs = p.rhs;
            bool skip = false;
            for (std::size_t i = 0; i < nonbasic.size(); ++i) {
                const Index j = nonbasic[i];
                const double v = (mask >> i) & 1 ? upper[j] : p.lower[j];
                if ((mask >> i) & 1 && upper[j] == p.lower[j]) { skip = true; break; }
                x[j] = v;
                rhs -= p.constraints.col(j) * v;
            }
            if (skip) continue;
            if (m > 0) {
                const Vector xb = lu.solve(rhs);
                if (((B * xb) - rhs).lpNorm<Eigen::Infinity>() >
                    1e-7 * (1.0 + rhs.lpNorm<Eigen::Infinity>()))
                    continue;  // numerically unreliable basis
                for (Index k = 0; k < m; ++k) x[basis[static_cast<std::size_t>(k)]] = xb[k];
            }
            bool ok = true;
            for (Index j = 0; j < n && ok; ++j)
                ok = x[j] >= p.lower[j] - tol && x[j] <= upper[j] + tol;
            if (!ok) continue;
            best.feasible = true;
            best.objective = std::min(best.objective, p.objective.dot(x));
        }
    };

    // Recursive subset generation without recursion: odometer.
    if (m == 0) {
        evaluate_basis({});
        return best;
    }
    if (n < m) return best;
    for (Index k = 0; k < m; ++k) combo[static_cast<std::size_t>(k)] = k;
    while (true) {
        evaluate_basis(combo);
        Index i = m - 1;
        while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        ++combo[static_cast<std::size_t>(i)];
        for (Index k = i + 1; k < m; ++k)
            combo[static_cast<std::size_t>(k)] = combo[static_cast<std::size_t>(k - 1)] + 1;
    }
    return best;
}

}  // namespace

LpReference enumerate_lp(const LpProblem& p) {
    constexpr double cap = 1e9;
    // Drop redundant rows first; an inconsistent dependency is infeasible
    // outright, and rank-deficient systems have no full-size basis.
    if (p.num_rows() > 0) {
        const RowReduction reduction = reduce_rows(p.constraints, p.rhs);
        if (!reduction.consistent) return LpReference{LpStatus::Infeasible, 0.0};
        if (static_cast<Index>(reduction.kept.size()) < p.num_rows()) {
            LpProblem reduced = p;
            reduced.constraints.resize(static_cast<Index>(reduction.kept.size()), p.num_cols());
            reduced.rhs.resize(static_cast<Index>(reduction.kept.size()));
            for (std::size_t k = 0; k < reduction.kept.size(); ++k) {
                reduced.constraints.row(static_cast<Index>(k)) = p.constraints.row(reduction.kept[k]);
                reduced.rhs[static_cast<Index>(k)] = p.rhs[reduction.kept[k]];
            }
            return enumerate_lp(reduced);
        }
    }
    const BoxedResult at_cap = enumerate_boxed(p, cap);
    LpReference ref;
    if (!at_cap.feasible) {
        ref.status = LpStatus::Infeasible;
        return ref;
    }
    const BoxedResult at_double = enumerate_boxed(p, 2.0 * cap);
    if (at_double.objective < at_cap.objective - 1e-6 * (1.0 + std::abs(at_cap.objective))) {
        ref.status = LpStatus::Unbounded;
        return ref;
    }
    ref.status = LpStatus::Optimal;
    ref.objective = at_cap.objective;
    return ref;
}

namespace {

double t_pdf_ref(double x, int dof) {
    const double nu = dof;
    const double ln = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * M_PI) - 0.5 * (nu + 1.0) * std::log1p(x * x / nu);
    return std::exp(ln);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole, int dof,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = t_pdf_ref(lm, dof);
    const double frm = t_pdf_ref(rm, dof);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, dof, 0.5 * tol, depth - 1) +
           adaptive_simpson(m, b, fm, frm, fb, right, dof, 0.5 * tol, depth - 1);
}

double integrate_pdf(double a, double b, int dof) {
    if (b <= a) return 0.0;
    const double fa = t_pdf_ref(a, dof);
    const double fb = t_pdf_ref(b, dof);
    const double fm = t_pdf_ref(0.5 * (a + b), dof);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(a, b, fa, fm, fb, whole, dof, 1e-14, 60);
}

}  // namespace

double t_cdf_quadrature(double x, int dof) {
    if (x < 0.0) return 1.0 - t_cdf_quadrature(-x, dof);
    // Integrate in chunks so the adaptive rule does not waste depth on the
    // long flat tail.
    double acc = 0.5;
    double a = 0.0;
    while (a < x) {
        const double b = std::min(x, a == 0.0 ? 8.0 : a * 2.0);
        acc += integrate_pdf(a, b, dof);
        a = b;
    }
    return acc;
}

double t_quantile_quadrature(double p, int dof) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p out of range");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -t_quantile_quadrature(1.0 - p, dof);
    double lo = 0.0, hi = 1.0;
    while (t_cdf_quadrature(hi, dof) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) throw std::runtime_error("quantile bracket failed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-11 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (t_cdf_quadrature(mid, dof) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double normal_quantile_erf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p out of range");
    // Newton on 0.5 * (1 + erf(x / sqrt(2))) = p from a crude bracket.
    double lo = -40.0, hi = 40.0, x = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double cdf = 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
        if (cdf < p)
            lo = x;
        else
            hi = x;
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        double next = pdf > 0.0 ? x - (cdf - p) / pdf : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(x))) return next;
        x = next;
    }
    return x;
}

std::vector<double> bucket_sums(const std::vector<double>& daily_volumes, const TimeGrid& grid) {
    std::vector<double> sums(static_cast<std::size_t>(grid.steps_per_year()), 0.0);
    for (std::size_t d = 0; d < daily_volumes.size(); ++d)
        sums[static_cast<std::size_t>(grid.step_of_day(static_cast<int>(d)))] += daily_volumes[d];
    return sums;
}

double min_window_average(const std::vector<std::pair<double, double>>& months, int k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= months.size(); ++i) {
        double volume = 0.0, days = 0.0;
        for (int j = 0; j < k; ++j) {
            volume += months[i + static_cast<std::size_t>(j)].first;
            days += months[i + static_cast<std::size_t>(j)].second;
        }
        best = std::min(best, volume / days / 1e6);
    }
    return best;
}

}  // namespace resop::oracle
