#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "resop/mpc.hpp"
#include "resop/stochastic.hpp"

namespace resop {

/// Averaging window for scenario statistics. Wet season is October-April,
/// dry season May-September; DriestMonths(k) is the contiguous k-month
/// window of the scenario with the lowest average discharge.
struct PeriodDefinition {
    enum class Kind { FullYear, WetSeason, DrySeason, DriestMonths };
    Kind kind = Kind::FullYear;
    int months = 0;  // for DriestMonths: 1, 3 or 6

    static PeriodDefinition full_year() { return {Kind::FullYear, 0}; }
    static PeriodDefinition wet_season() { return {Kind::WetSeason, 0}; }
    static PeriodDefinition dry_season() { return {Kind::DrySeason, 0}; }
    static PeriodDefinition driest_months(int k) { return {Kind::DriestMonths, k}; }

    std::string label() const;
};

/// The customary report layout: year, wet season, dry season, driest six /
/// three months, driest month.
std::vector<PeriodDefinition> default_periods();

/// Average discharge of all rivers over the period, in 1e6 m3/day.
double period_average(const Scenario& scenario, const PeriodDefinition& period);

struct SupportRow {
    std::size_t id = 0;
    std::string label;
    bool is_support = false;
    std::vector<double> average;  // per period, 1e6 m3/day
    std::vector<int> rank;        // per period, 1 = wettest
};

struct SupportGroupStats {
    std::vector<double> support_rank;     // per period
    std::vector<double> nonsupport_rank;
    std::vector<double> support_average;
    std::vector<double> nonsupport_average;
};

struct SupportReport {
    std::vector<PeriodDefinition> periods;
    std::vector<SupportRow> rows;
    SupportGroupStats groups;
    std::size_t support_count = 0;
};

/// Ranks the scenarios per period (rank 1 = wettest; ties broken by
/// provenance label) and aggregates the support / nonsupport group means.
SupportReport support_statistics(const EnvelopeSolution& sol, const ScenarioSet& scenarios,
                                 const std::vector<PeriodDefinition>& periods = default_periods());

void write_support_csv(const SupportReport& report, std::ostream& out);
void write_support_table(const SupportReport& report, std::ostream& out);

/// L1 distance between two curves on the same grid.
double curve_distance(const RuleCurve& a, const RuleCurve& b);

/// The candidate level whose robust curve is L1-closest to the stochastic
/// curve; ties go to the lower level.
double match_confidence_level(const RuleCurve& stochastic_curve,
                              const std::map<double, RuleCurve>& robust_curves);

struct CurvePairSummary {
    std::string a, b;
    double max_gap_a_above = 0.0;  // max over steps of (a - b), clamped at 0
    double max_gap_b_above = 0.0;
    Index steps_a_above = 0;       // steps where a > b
    Index steps_b_above = 0;
};

struct CurveComparison {
    std::vector<std::string> labels;
    Matrix values;  // steps x curves
    std::vector<CurvePairSummary> pairs;
};

/// Side-by-side per-step values plus pairwise gap summaries. All curves
/// must share a grid.
CurveComparison compare_curves(const std::map<std::string, RuleCurve>& curves);

void write_comparison_csv(const CurveComparison& cmp, std::ostream& out);
void write_comparison_summary(const CurveComparison& cmp, std::ostream& out);

}  // namespace resop
