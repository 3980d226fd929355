#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "resop/hydrology.hpp"

namespace resop {

/// Deterministic synthetic discharge generator, standing in for confidential
/// gauging records. Daily flows follow a seasonal sinusoid modulated by an
/// AR(1) lognormal weather signal, a per-year wetness factor and occasional
/// drought months.
struct SynthOptions {
    std::uint64_t seed = 1;
    int years = 23;
    int first_year = 1992;
    std::vector<std::string> rivers = {"vesdre", "getzbach", "helle"};
    std::vector<double> base_m3s = {1.2, 0.35, 0.65};  // mean flow per river

    double seasonal_amplitude = 0.6;  // winter peak vs summer trough
    int wet_peak_day = 15;            // day of year of the seasonal maximum
    double daily_sigma = 0.35;        // lognormal sigma of the AR(1) signal
    double ar_rho = 0.85;             // day-to-day persistence
    double year_sigma = 0.25;         // lognormal sigma of the annual factor
    double drought_probability = 0.08;  // per (year, month)
    double drought_scale = 0.35;        // multiplier during a drought month

    static SynthOptions preset(const std::string& name);  // default|generous|marginal
};

/// Writes the ingestion-format CSV. Identical options produce identical
/// bytes.
void write_synthetic_csv(std::ostream& out, const SynthOptions& options);

/// Generates and aggregates in one go (test and CLI convenience).
std::vector<HydroYear> synthetic_years(const SynthOptions& options, const TimeGrid& grid);

}  // namespace resop
