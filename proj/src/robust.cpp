#include "resop/robust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace resop {

namespace {

// Continued fraction for the regularized incomplete beta function
// (modified Lentz method).
double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_cdf(double x, int dof) {
    const double nu = dof;
    const double z = nu / (nu + x * x);
    const double half_tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, z);
    return x >= 0.0 ? 1.0 - half_tail : half_tail;
}

double t_pdf(double x, int dof) {
    const double nu = dof;
    const double ln =
        std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI) -
        0.5 * (nu + 1.0) * std::log1p(x * x / nu);
    return std::exp(ln);
}

}  // namespace

// Acklam's rational approximation, polished with one Halley step on erfc.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double t_quantile(double p, int dof) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("t_quantile: p must be in (0,1)");
    if (dof < 1) throw std::invalid_argument("t_quantile: dof must be >= 1");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -t_quantile(1.0 - p, dof);

    // Seed from the normal quantile with a one-term tail correction, then
    // safeguarded Newton on the CDF.
    const double z = normal_quantile(p);
    double x = z + (z * z * z + z) / (4.0 * dof);
    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * std::abs(x));
    while (t_cdf(hi, dof) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    x = std::clamp(x, lo, hi);
    for (int it = 0; it < 100; ++it) {
        const double f = t_cdf(x, dof) - p;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        const double df = t_pdf(x, dof);
        double next = df > 0.0 ? x - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-12 * (1.0 + std::abs(x))) return next;
        x = next;
    }
    return x;
}

Array ci_lower_bounds(const std::vector<HydroYear>& years, const std::string& river,
                      const ConfidenceSpec& conf) {
    if (!(conf.level > 0.0 && conf.level < 1.0))
        throw std::invalid_argument("confidence level must be in (0,1)");
    const int n = static_cast<int>(years.size());
    if (n < 2) throw std::invalid_argument("confidence bounds need at least 2 years, got " +
                                           std::to_string(n));
    for (const HydroYear& y : years)
        if (!y.flows.count(river))
            throw std::invalid_argument("river '" + river + "' missing from year " + y.label);

    const Index steps = years.front().flows.at(river).size();
    const double q = conf.one_sided ? conf.level : 1.0 - (1.0 - conf.level) / 2.0;
    const double t = t_quantile(q, n - 1);

    Array lb(steps);
    for (Index s = 0; s < steps; ++s) {
        double mean = 0.0;
        for (const HydroYear& y : years) mean += y.flows.at(river)[s];
        mean /= n;
        double var = 0.0;
        for (const HydroYear& y : years) {
            const double d = y.flows.at(river)[s] - mean;
            var += d * d;
        }
        var /= (n - 1);
        lb[s] = std::max(0.0, mean - t * std::sqrt(var / n));
    }
    return lb;
}

WorstCaseScenario worst_case_scenario(const std::vector<HydroYear>& years, const TimeGrid& grid,
                                      const ConfidenceSpec& conf, int horizon_years) {
    if (horizon_years < 1) throw std::invalid_argument("horizon_years must be >= 1");
    const Index spy = grid.steps_per_year();
    WorstCaseScenario wc;
    wc.level = conf.level;
    wc.sample_size = static_cast<int>(years.size());
    wc.underlying.grid = grid;
    char label[64];
    std::snprintf(label, sizeof(label), "ci[level=%g,n=%d]", conf.level, wc.sample_size);
    wc.underlying.provenance = label;
    for (const auto& [river, flow] : years.front().flows) {
        const Array lb = ci_lower_bounds(years, river, conf);
        Array tiled(spy * horizon_years);
        for (int k = 0; k < horizon_years; ++k) tiled.segment(k * spy, spy) = lb;
        wc.underlying.flows.emplace(river, std::move(tiled));
    }
    return wc;
}

RobustResult solve_robust(const ReservoirSpec& spec, const std::vector<HydroYear>& years,
                          const ConfidenceSpec& conf, int horizon_years,
                          const SolverOptions& options) {
    const WorstCaseScenario wc = worst_case_scenario(years, spec.grid, conf, horizon_years);
    const DeterministicResult det = solve_deterministic(spec, wc.underlying, options);
    RobustResult result;
    result.status = det.status;
    result.level = conf.level;
    result.objective = det.objective;
    if (det.status == LpStatus::Optimal) result.trajectory = det.trajectory;
    return result;
}

void write_scenario_csv(const Scenario& scenario, std::ostream& out, int first_year) {
    const TimeGrid& grid = scenario.grid;
    const int spy = grid.steps_per_year();
    if (scenario.start_step != 0)
        throw std::invalid_argument("write_scenario_csv: scenario must start at a year boundary");
    if (scenario.horizon() % spy != 0)
        throw std::invalid_argument("write_scenario_csv: scenario must cover whole years");
    const int years = static_cast<int>(scenario.horizon() / spy);

    out << "river,date,discharge_m3s\n";
    char buf[64];
    for (const auto& [river, flow] : scenario.flows) {
        for (int y = 0; y < years; ++y) {
            long day = to_day_number(Date{first_year + y, grid.year_start_month(), 1});
            const long end = to_day_number(Date{first_year + y + 1, grid.year_start_month(), 1});
            int nominal = 0;
            for (; day < end; ++day) {
                const Date date = from_day_number(day);
                double discharge = 0.0;
                if (!(date.month == 2 && date.day == 29)) {
                    const int step = grid.step_of_day(nominal);
                    discharge = flow[y * spy + step] / (86400.0 * grid.days_in_step(step));
                    ++nominal;
                }
                std::snprintf(buf, sizeof(buf), "%.17g", discharge);
                out << river << ',' << to_iso_string(date) << ',' << buf << '\n';
            }
        }
    }
}

}  // namespace resop
