#include "resop/time_grid.hpp"

#include <cstdio>

namespace resop {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) throw std::invalid_argument("month out of range: " + std::to_string(month));
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[static_cast<std::size_t>(month - 1)];
}

// Howard Hinnant's civil calendar algorithms.
long to_day_number(const Date& d) {
    int y = d.year;
    const int m = d.month;
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date from_day_number(long n) {
    n += 719468;
    const long era = (n >= 0 ? n : n - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(n - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (month <= 2)), static_cast<int>(month), static_cast<int>(day)};
}

Date parse_iso_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &extra) != 3)
        throw std::invalid_argument("not an ISO-8601 date: '" + text + "'");
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
        throw std::invalid_argument("invalid calendar date: '" + text + "'");
    return Date{y, m, d};
}

std::string to_iso_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

TimeGrid::TimeGrid(GridKind kind, int steps_per_year, int year_start_month)
    : kind_(kind), steps_per_year_(steps_per_year), year_start_month_(year_start_month) {
    if (year_start_month < 1 || year_start_month > 12)
        throw std::invalid_argument("year start month out of range");
    if (steps_per_year < 1 || steps_per_year > 365)
        throw std::invalid_argument("steps per year out of range");
    static constexpr std::array<int, 12> nominal = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    for (int i = 0; i < 12; ++i)
        month_days_[static_cast<std::size_t>(i)] =
            nominal[static_cast<std::size_t>((year_start_month - 1 + i) % 12)];
    month_start_day_[0] = 0;
    for (int i = 0; i < 12; ++i)
        month_start_day_[static_cast<std::size_t>(i + 1)] =
            month_start_day_[static_cast<std::size_t>(i)] + month_days_[static_cast<std::size_t>(i)];
}

TimeGrid TimeGrid::custom(int steps_per_year, int year_start_month) {
    return TimeGrid(GridKind::Custom, steps_per_year, year_start_month);
}

TimeGrid TimeGrid::from_name(const std::string& name, int year_start_month) {
    if (name == "daily") return daily(year_start_month);
    if (name == "weekly") return weekly(year_start_month);
    if (name == "monthly") return monthly(year_start_month);
    throw std::invalid_argument("unknown grid '" + name + "' (expected daily, weekly or monthly)");
}

std::string TimeGrid::name() const {
    switch (kind_) {
        case GridKind::Daily: return "daily";
        case GridKind::Weekly: return "weekly";
        case GridKind::Monthly: return "monthly";
        case GridKind::Custom: return "custom" + std::to_string(steps_per_year_);
    }
    return "?";
}

int TimeGrid::days_in_step(int s) const {
    if (s < 0 || s >= steps_per_year_) throw std::out_of_range("step out of range: " + std::to_string(s));
    if (kind_ == GridKind::Monthly) return month_days_[static_cast<std::size_t>(s)];
    const int base = 365 / steps_per_year_;
    return base + (s == steps_per_year_ - 1 ? 365 % steps_per_year_ : 0);
}

int TimeGrid::step_start_day(int s) const {
    if (s < 0 || s >= steps_per_year_) throw std::out_of_range("step out of range: " + std::to_string(s));
    if (kind_ == GridKind::Monthly) return month_start_day_[static_cast<std::size_t>(s)];
    return s * (365 / steps_per_year_);
}

int TimeGrid::step_of_day(int d) const {
    if (d < 0 || d >= 365) throw std::out_of_range("day out of range: " + std::to_string(d));
    if (kind_ == GridKind::Monthly) {
        for (int m = 0; m < 12; ++m)
            if (d < month_start_day_[static_cast<std::size_t>(m + 1)]) return m;
        return 11;
    }
    const int base = 365 / steps_per_year_;
    const int s = d / base;
    return s >= steps_per_year_ ? steps_per_year_ - 1 : s;
}

int TimeGrid::month_of_day(int d) const {
    if (d < 0 || d >= 365) throw std::out_of_range("day out of range: " + std::to_string(d));
    int m = 0;
    while (d >= month_start_day_[static_cast<std::size_t>(m + 1)]) ++m;
    return (year_start_month_ - 1 + m) % 12 + 1;
}

int TimeGrid::month_of_step(int s) const {
    const int midpoint = step_start_day(s) + days_in_step(s) / 2;
    return month_of_day(midpoint);
}

}  // namespace resop
