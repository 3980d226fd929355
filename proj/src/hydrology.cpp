#include "resop/hydrology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace resop {

namespace {

constexpr double kSecondsPerDay = 86400.0;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Grid year that a date belongs to, identified by its starting calendar year.
int year_of(const Date& d, int start_month) {
    return d.month >= start_month ? d.year : d.year - 1;
}

long year_first_day(int year, int start_month) {
    return to_day_number(Date{year, start_month, 1});
}

}  // namespace

Array aggregate_to_grid(const std::vector<std::pair<Date, double>>& daily, const TimeGrid& grid) {
    if (daily.empty()) throw CsvError("aggregate_to_grid: empty daily series");
    const Date first = daily.front().first;
    if (first.month != grid.year_start_month() || first.day != 1)
        throw CsvError("aggregate_to_grid: series must start at the grid year start, got " +
                       to_iso_string(first));
    const long first_day = to_day_number(first);
    const long next_year = year_first_day(first.year + 1, grid.year_start_month());
    if (static_cast<long>(daily.size()) != next_year - first_day)
        throw CsvError("aggregate_to_grid: gap in daily coverage (got " +
                       std::to_string(daily.size()) + " days, need " +
                       std::to_string(next_year - first_day) + ")");

    Array volumes = Array::Zero(grid.steps_per_year());
    int nominal_day = 0;
    long expected = first_day;
    for (const auto& [date, discharge] : daily) {
        if (to_day_number(date) != expected)
            throw CsvError("aggregate_to_grid: gap in daily coverage at " + to_iso_string(date));
        ++expected;
        if (discharge < 0.0)
            throw CsvError("aggregate_to_grid: negative discharge at " + to_iso_string(date));
        int bucket_day;
        if (date.month == 2 && date.day == 29) {
            bucket_day = nominal_day - 1;  // leap day joins February 28
        } else {
            bucket_day = nominal_day;
            ++nominal_day;
        }
        volumes[grid.step_of_day(bucket_day)] += discharge * kSecondsPerDay;
    }
    return volumes;
}

std::vector<HydroYear> load_discharge_csv(const std::string& path, const TimeGrid& grid,
                                          const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open discharge file '" + path + "'");
    return load_discharge_csv(in, grid, options, path);
}

std::vector<HydroYear> load_discharge_csv(std::istream& in, const TimeGrid& grid,
                                          const LoadOptions& options, const std::string& path) {
    if (grid.kind() == GridKind::Custom)
        throw CsvError("custom grids are not supported by CSV ingestion");

    auto fail = [&](long line, const std::string& what) {
        throw CsvError(path + ":" + std::to_string(line) + ": " + what);
    };

    std::string line;
    long line_no = 0;

    // river -> day number -> (discharge, source line)
    std::map<std::string, std::map<long, std::pair<double, long>>> series;

    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty()) continue;
        if (!saw_header) {
            if (text != "river,date,discharge_m3s")
                fail(line_no, "expected header 'river,date,discharge_m3s', got '" + text + "'");
            saw_header = true;
            continue;
        }

        std::string fields[3];
        std::size_t start = 0;
        int nfields = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == ',') {
                if (nfields >= 3) fail(line_no, "malformed row: too many fields");
                fields[nfields++] = trim(text.substr(start, i - start));
                start = i + 1;
            }
        }
        if (nfields != 3) fail(line_no, "malformed row: expected 3 fields, got " + std::to_string(nfields));
        if (fields[0].empty()) fail(line_no, "malformed row: empty river id");

        Date date;
        try {
            date = parse_iso_date(fields[1]);
        } catch (const std::exception& e) {
            fail(line_no, std::string("malformed row: ") + e.what());
        }

        char* endp = nullptr;
        const double discharge = std::strtod(fields[2].c_str(), &endp);
        if (endp == fields[2].c_str() || *endp != '\0' || !std::isfinite(discharge))
            fail(line_no, "malformed row: discharge '" + fields[2] + "' is not a number");
        if (discharge < 0.0)
            fail(line_no, "negative discharge " + fields[2] + " for river '" + fields[0] + "'");

        auto [it, inserted] = series[fields[0]].emplace(to_day_number(date),
                                                        std::make_pair(discharge, line_no));
        if (!inserted)
            fail(line_no, "duplicate record for river '" + fields[0] + "' on " + fields[1] +
                              " (first at line " + std::to_string(it->second.second) + ")");
    }

    // Candidate years: any year touched by any river.
    std::set<int> candidate_years;
    for (const auto& [river, days] : series)
        for (const auto& [day, value] : days)
            candidate_years.insert(year_of(from_day_number(day), grid.year_start_month()));

    std::vector<HydroYear> years;
    for (int y : candidate_years) {
        const long begin = year_first_day(y, grid.year_start_month());
        const long end = year_first_day(y + 1, grid.year_start_month());
        bool complete = true;
        for (const auto& [river, days] : series) {
            long missing = 0;
            long first_line = -1;
            for (long d = begin; d < end; ++d) {
                auto it = days.find(d);
                if (it == days.end())
                    ++missing;
                else if (first_line < 0)
                    first_line = it->second.second;
            }
            if (missing > 0) {
                complete = false;
                if (options.diagnostics) {
                    *options.diagnostics << "dropped year " << y << ": river '" << river << "' has "
                                         << missing << " of " << (end - begin) << " days missing";
                    if (first_line > 0) *options.diagnostics << " (records near line " << first_line << ")";
                    *options.diagnostics << "\n";
                }
            }
        }
        if (!complete) continue;

        HydroYear hy;
        hy.label = std::to_string(y);
        for (const auto& [river, days] : series) {
            std::vector<std::pair<Date, double>> daily;
            daily.reserve(static_cast<std::size_t>(end - begin));
            for (long d = begin; d < end; ++d) daily.emplace_back(from_day_number(d), days.at(d).first);
            hy.flows.emplace(river, aggregate_to_grid(daily, grid));
        }
        years.push_back(std::move(hy));
    }

    if (years.empty()) throw CsvError(path + ": no complete year found");
    return years;
}

}  // namespace resop
