#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace resop {

/// Calendar date (proleptic Gregorian).
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    friend auto operator<=>(const Date&, const Date&) = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

/// Days since 1970-01-01 (negative before).
long to_day_number(const Date& d);
Date from_day_number(long n);

Date parse_iso_date(const std::string& text);
std::string to_iso_string(const Date& d);

enum class GridKind { Daily, Weekly, Monthly, Custom };

/// Uniform intra-year time discretization. Every year is mapped onto a fixed
/// 365-day nominal calendar so that scenarios from different years stay
/// index-aligned (leap days are folded into the preceding step).
///
/// Daily: 365 steps of one day. Weekly: 52 steps, the last week absorbing
/// days 358-365. Monthly: 12 calendar months. Custom grids (coarse test
/// grids) split the nominal year into equal steps with the remainder going
/// to the last step; they are not accepted by CSV ingestion.
class TimeGrid {
public:
    static TimeGrid daily(int year_start_month = 1) { return TimeGrid(GridKind::Daily, 365, year_start_month); }
    static TimeGrid weekly(int year_start_month = 1) { return TimeGrid(GridKind::Weekly, 52, year_start_month); }
    static TimeGrid monthly(int year_start_month = 1) { return TimeGrid(GridKind::Monthly, 12, year_start_month); }
    static TimeGrid custom(int steps_per_year, int year_start_month = 1);

    static TimeGrid from_name(const std::string& name, int year_start_month = 1);

    GridKind kind() const { return kind_; }
    int steps_per_year() const { return steps_per_year_; }
    int year_start_month() const { return year_start_month_; }
    std::string name() const;

    /// Length of step `s` (0-based step-of-year) in nominal days.
    int days_in_step(int s) const;
    /// First nominal day (0-based day-of-year) covered by step `s`.
    int step_start_day(int s) const;
    /// Step covering nominal day `d` (0-based, 0 <= d < 365).
    int step_of_day(int d) const;
    /// Calendar month (1..12) of nominal day `d`, honouring the year start.
    int month_of_day(int d) const;
    /// Calendar month assigned to step `s`: the month containing the step's
    /// midpoint day. Exact for daily/monthly grids.
    int month_of_step(int s) const;

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
        return a.kind_ == b.kind_ && a.steps_per_year_ == b.steps_per_year_ &&
               a.year_start_month_ == b.year_start_month_;
    }

private:
    TimeGrid(GridKind kind, int steps_per_year, int year_start_month);

    GridKind kind_;
    int steps_per_year_;
    int year_start_month_;
    // Month lengths in year-start order, nominal (February fixed at 28).
    std::array<int, 12> month_days_{};
    std::array<int, 13> month_start_day_{};
};

}  // namespace resop
