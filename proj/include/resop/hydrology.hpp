#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "resop/time_grid.hpp"

namespace resop {

using Array = Eigen::ArrayXd;

/// One observed mean daily discharge for one river.
struct InflowRecord {
    std::string river;
    Date date;
    double discharge_m3s = 0.0;
};

/// One complete hydrological (or calendar) year on the grid: per-river
/// volumes in m3 per time step, all arrays of length steps_per_year.
struct HydroYear {
    std::string label;  // starting calendar year, e.g. "1997"
    std::map<std::string, Array> flows;
};

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sums a year of daily discharges into per-step volumes. `daily` must cover
/// the year without gaps, in date order, starting at the grid's year start;
/// a leap day is folded into the previous day's step. Total volume is
/// conserved exactly up to floating-point rounding.
Array aggregate_to_grid(const std::vector<std::pair<Date, double>>& daily, const TimeGrid& grid);

struct LoadOptions {
    std::ostream* diagnostics = nullptr;  // dropped-year reports, with line numbers
};

/// Reads `river,date,discharge_m3s` CSV and returns one HydroYear per year
/// that is complete for every river in the file, in chronological order.
/// Incomplete years are reported to the diagnostics stream and dropped.
/// Throws CsvError on malformed rows, negative discharge, duplicate
/// (river, date) pairs, or when no complete year exists.
std::vector<HydroYear> load_discharge_csv(const std::string& path, const TimeGrid& grid,
                                          const LoadOptions& options = {});

/// Same, reading from an already-open stream (the path is used in messages).
std::vector<HydroYear> load_discharge_csv(std::istream& in, const TimeGrid& grid,
                                          const LoadOptions& options = {},
                                          const std::string& path = "<stream>");

}  // namespace resop
