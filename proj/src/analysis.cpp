#include "resop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace resop {

namespace {

bool is_wet_month(int month) { return month >= 10 || month <= 4; }

struct MonthInstance {
    int month = 0;     // 1..12
    double volume = 0; // m3, all rivers
    double days = 0;
};

std::vector<MonthInstance> month_instances(const Scenario& scenario) {
    const TimeGrid& grid = scenario.grid;
    const int spy = grid.steps_per_year();
    const Index steps = scenario.horizon();

    Array total = Array::Zero(steps);
    for (const auto& [river, flow] : scenario.flows) total += flow;

    std::vector<MonthInstance> instances;
    for (Index j = 0; j < steps; ++j) {
        const int soy = (scenario.start_step + static_cast<int>(j)) % spy;
        const int month = grid.month_of_step(soy);
        if (instances.empty() || instances.back().month != month)
            instances.push_back(MonthInstance{month, 0.0, 0.0});
        instances.back().volume += total[j];
        instances.back().days += grid.days_in_step(soy);
    }
    return instances;
}

double average_over(double volume, double days) {
    if (days <= 0.0) throw std::invalid_argument("period covers no days of the scenario");
    return volume / days / 1e6;
}

}  // namespace

std::string PeriodDefinition::label() const {
    switch (kind) {
        case Kind::FullYear: return "year";
        case Kind::WetSeason: return "wet_season";
        case Kind::DrySeason: return "dry_season";
        case Kind::DriestMonths:
            return months == 1 ? "driest_month" : "driest_" + std::to_string(months) + "_months";
    }
    return "?";
}

std::vector<PeriodDefinition> default_periods() {
    return {PeriodDefinition::full_year(),        PeriodDefinition::wet_season(),
            PeriodDefinition::dry_season(),       PeriodDefinition::driest_months(6),
            PeriodDefinition::driest_months(3),   PeriodDefinition::driest_months(1)};
}

double period_average(const Scenario& scenario, const PeriodDefinition& period) {
    if (scenario.horizon() < 1) throw std::invalid_argument("period_average: empty scenario");
    const std::vector<MonthInstance> months = month_instances(scenario);

    switch (period.kind) {
        case PeriodDefinition::Kind::FullYear: {
            double volume = 0.0, days = 0.0;
            for (const MonthInstance& m : months) volume += m.volume, days += m.days;
            return average_over(volume, days);
        }
        case PeriodDefinition::Kind::WetSeason:
        case PeriodDefinition::Kind::DrySeason: {
            const bool wet = period.kind == PeriodDefinition::Kind::WetSeason;
            double volume = 0.0, days = 0.0;
            for (const MonthInstance& m : months) {
                if (is_wet_month(m.month) == wet) {
                    volume += m.volume;
                    days += m.days;
                }
            }
            return average_over(volume, days);
        }
        case PeriodDefinition::Kind::DriestMonths: {
            const int k = period.months;
            if (k < 1) throw std::invalid_argument("driest-months period needs k >= 1");
            if (static_cast<int>(months.size()) < k)
                throw std::invalid_argument("scenario too short for a " + std::to_string(k) +
                                            "-month window");
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= months.size(); ++i) {
                double volume = 0.0, days = 0.0;
                for (int j = 0; j < k; ++j) {
                    volume += months[i + static_cast<std::size_t>(j)].volume;
                    days += months[i + static_cast<std::size_t>(j)].days;
                }
                best = std::min(best, average_over(volume, days));
            }
            return best;
        }
    }
    throw std::logic_error("unreachable");
}

SupportReport support_statistics(const EnvelopeSolution& sol, const ScenarioSet& scenarios,
                                 const std::vector<PeriodDefinition>& periods) {
    const std::size_t n = sol.per_scenario.size();
    if (n != scenarios.size())
        throw std::invalid_argument("support_statistics: envelope and scenario set sizes differ");

    SupportReport report;
    report.periods = periods;
    report.rows.resize(n);
    const std::set<std::size_t> support(sol.support_ids.begin(), sol.support_ids.end());

    for (std::size_t i = 0; i < n; ++i) {
        const Scenario scenario = scenarios.at(i);
        SupportRow& row = report.rows[i];
        row.id = i;
        row.label = sol.labels[i];
        row.is_support = support.count(i) > 0;
        row.average.reserve(periods.size());
        for (const PeriodDefinition& period : periods)
            row.average.push_back(period_average(scenario, period));
        row.rank.resize(periods.size());
    }
    report.support_count = support.size();

    const std::size_t np = periods.size();
    report.groups.support_rank.assign(np, 0.0);
    report.groups.nonsupport_rank.assign(np, 0.0);
    report.groups.support_average.assign(np, 0.0);
    report.groups.nonsupport_average.assign(np, 0.0);

    for (std::size_t p = 0; p < np; ++p) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (report.rows[a].average[p] != report.rows[b].average[p])
                return report.rows[a].average[p] > report.rows[b].average[p];  // wettest first
            return report.rows[a].label < report.rows[b].label;
        });
        for (std::size_t r = 0; r < n; ++r) report.rows[order[r]].rank[p] = static_cast<int>(r) + 1;

        double sr = 0, nr = 0, sa = 0, na = 0;
        std::size_t sc = 0, nc = 0;
        for (const SupportRow& row : report.rows) {
            if (row.is_support) {
                sr += row.rank[p];
                sa += row.average[p];
                ++sc;
            } else {
                nr += row.rank[p];
                na += row.average[p];
                ++nc;
            }
        }
        report.groups.support_rank[p] = sc ? sr / static_cast<double>(sc) : 0.0;
        report.groups.nonsupport_rank[p] = nc ? nr / static_cast<double>(nc) : 0.0;
        report.groups.support_average[p] = sc ? sa / static_cast<double>(sc) : 0.0;
        report.groups.nonsupport_average[p] = nc ? na / static_cast<double>(nc) : 0.0;
    }
    return report;
}

void write_support_csv(const SupportReport& report, std::ostream& out) {
    out << "scenario,label,is_support";
    for (const PeriodDefinition& p : report.periods)
        out << ',' << p.label() << "_avg_1e6m3_day," << p.label() << "_rank";
    out << '\n';
    char buf[32];
    for (const SupportRow& row : report.rows) {
        out << row.id << ',' << row.label << ',' << (row.is_support ? 1 : 0);
        for (std::size_t p = 0; p < report.periods.size(); ++p) {
            std::snprintf(buf, sizeof(buf), "%.9g", row.average[p]);
            out << ',' << buf << ',' << row.rank[p];
        }
        out << '\n';
    }
}

void write_support_table(const SupportReport& report, std::ostream& out) {
    out << report.rows.size() << " scenarios, " << report.support_count << " support\n\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-18s %14s %14s %18s %18s\n", "period", "rank(support)",
                  "rank(other)", "avg(support)", "avg(other)");
    out << line;
    for (std::size_t p = 0; p < report.periods.size(); ++p) {
        std::snprintf(line, sizeof(line), "%-18s %14.3f %14.3f %18.3f %18.3f\n",
                      report.periods[p].label().c_str(), report.groups.support_rank[p],
                      report.groups.nonsupport_rank[p], report.groups.support_average[p],
                      report.groups.nonsupport_average[p]);
        out << line;
    }
}

double curve_distance(const RuleCurve& a, const RuleCurve& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("curve_distance: grid mismatch");
    return (a.values - b.values).abs().sum();
}

double match_confidence_level(const RuleCurve& stochastic_curve,
                              const std::map<double, RuleCurve>& robust_curves) {
    if (robust_curves.empty())
        throw std::invalid_argument("match_confidence_level: no robust curves given");
    double best_level = 0.0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const auto& [level, curve] : robust_curves) {
        const double d = curve_distance(stochastic_curve, curve);
        if (d < best_distance) {  // ties keep the lower level seen first
            best_distance = d;
            best_level = level;
        }
    }
    return best_level;
}

CurveComparison compare_curves(const std::map<std::string, RuleCurve>& curves) {
    if (curves.empty()) throw std::invalid_argument("compare_curves: no curves");
    const TimeGrid& grid = curves.begin()->second.grid;
    const Index steps = grid.steps_per_year();

    CurveComparison cmp;
    cmp.values.resize(steps, static_cast<Index>(curves.size()));
    Index col = 0;
    for (const auto& [label, curve] : curves) {
        if (!(curve.grid == grid)) throw std::invalid_argument("compare_curves: grid mismatch");
        cmp.labels.push_back(label);
        cmp.values.col(col++) = curve.values.matrix();
    }

    for (std::size_t i = 0; i < cmp.labels.size(); ++i) {
        for (std::size_t j = i + 1; j < cmp.labels.size(); ++j) {
            CurvePairSummary pair;
            pair.a = cmp.labels[i];
            pair.b = cmp.labels[j];
            for (Index t = 0; t < steps; ++t) {
                const double gap = cmp.values(t, static_cast<Index>(i)) -
                                   cmp.values(t, static_cast<Index>(j));
                if (gap > 0.0) {
                    ++pair.steps_a_above;
                    pair.max_gap_a_above = std::max(pair.max_gap_a_above, gap);
                } else if (gap < 0.0) {
                    ++pair.steps_b_above;
                    pair.max_gap_b_above = std::max(pair.max_gap_b_above, -gap);
                }
            }
            cmp.pairs.push_back(pair);
        }
    }
    return cmp;
}

void write_comparison_csv(const CurveComparison& cmp, std::ostream& out) {
    out << "step";
    for (const std::string& label : cmp.labels) out << ',' << label;
    out << '\n';
    char buf[32];
    for (Index t = 0; t < cmp.values.rows(); ++t) {
        out << t;
        for (Index c = 0; c < cmp.values.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", cmp.values(t, c));
            out << ',' << buf;
        }
        out << '\n';
    }
}

void write_comparison_summary(const CurveComparison& cmp, std::ostream& out) {
    for (const CurvePairSummary& pair : cmp.pairs) {
        out << pair.a << " vs " << pair.b << ": ";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s above at %ld steps (max gap %.0f m3), %s above at %ld steps (max gap %.0f m3)",
                      pair.a.c_str(), static_cast<long>(pair.steps_a_above), pair.max_gap_a_above,
                      pair.b.c_str(), static_cast<long>(pair.steps_b_above), pair.max_gap_b_above);
        out << buf << '\n';
        if (pair.steps_a_above > 0 && pair.steps_b_above > 0)
            out << "  note: neither curve dominates; each is higher for part of the year\n";
    }
}

}  // namespace resop
