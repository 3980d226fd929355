#include "resop/synth.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace resop {

namespace {

// splitmix64; the generator must not depend on library distribution
// internals so that identical seeds give identical files everywhere.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double next_uniform() {  // (0, 1)
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
    double next_normal() {  // Box-Muller, one value per call
        const double u = next_uniform();
        const double v = next_uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    Rng rng(seed ^ (salt * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL));
    return rng.next_u64();
}

}  // namespace

SynthOptions SynthOptions::preset(const std::string& name) {
    SynthOptions o;
    if (name == "default") return o;
    if (name == "generous") {
        o.base_m3s = {1.45, 0.42, 0.8};
        o.seasonal_amplitude = 0.6;
        o.daily_sigma = 0.35;
        o.year_sigma = 0.22;
        o.drought_probability = 0.06;
        o.drought_scale = 0.4;
        return o;
    }
    if (name == "marginal") {
        o.base_m3s = {0.85, 0.22, 0.45};
        o.seasonal_amplitude = 0.8;
        o.daily_sigma = 0.45;
        o.year_sigma = 0.55;
        o.drought_probability = 0.22;
        o.drought_scale = 0.12;
        return o;
    }
    throw std::invalid_argument("unknown synth preset '" + name +
                                "' (expected default, generous or marginal)");
}

void write_synthetic_csv(std::ostream& out, const SynthOptions& o) {
    if (o.rivers.size() != o.base_m3s.size())
        throw std::invalid_argument("synth: rivers and base_m3s must have the same length");
    if (o.years < 1) throw std::invalid_argument("synth: years must be >= 1");

    out << "river,date,discharge_m3s\n";
    char buf[48];
    for (std::size_t r = 0; r < o.rivers.size(); ++r) {
        Rng daily_rng(mix_seed(o.seed, 1000 + r));
        double z = 0.0;
        for (int y = 0; y < o.years; ++y) {
            const int year = o.first_year + y;
            const double year_factor =
                std::exp(o.year_sigma * Rng(mix_seed(o.seed, 7u * static_cast<unsigned>(y) + 3u)).next_normal() -
                         0.5 * o.year_sigma * o.year_sigma);
            int doy = 0;
            for (int month = 1; month <= 12; ++month) {
                const bool drought =
                    Rng(mix_seed(o.seed, 100000ULL + static_cast<std::uint64_t>(y) * 12 + month))
                        .next_uniform() < o.drought_probability;
                const double month_factor = drought ? o.drought_scale : 1.0;
                const int mdays = days_in_month(year, month);
                for (int day = 1; day <= mdays; ++day, ++doy) {
                    z = o.ar_rho * z + std::sqrt(1.0 - o.ar_rho * o.ar_rho) * daily_rng.next_normal();
                    const double weather =
                        std::exp(o.daily_sigma * z - 0.5 * o.daily_sigma * o.daily_sigma);
                    const double season =
                        1.0 + o.seasonal_amplitude *
                                  std::cos(2.0 * M_PI * (doy - o.wet_peak_day) / 365.0);
                    const double discharge =
                        o.base_m3s[r] * season * weather * year_factor * month_factor;
                    std::snprintf(buf, sizeof(buf), "%.9g", discharge);
                    out << o.rivers[r] << ',' << year << '-';
                    if (month < 10) out << '0';
                    out << month << '-';
                    if (day < 10) out << '0';
                    out << day << ',' << buf << '\n';
                }
            }
        }
    }
}

std::vector<HydroYear> synthetic_years(const SynthOptions& options, const TimeGrid& grid) {
    std::stringstream buffer;
    write_synthetic_csv(buffer, options);
    return load_discharge_csv(buffer, grid, {}, "<synthetic>");
}

}  // namespace resop
