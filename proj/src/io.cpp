#include "resop/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace resop {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string fingerprint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "' for fingerprinting");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    char out[32];
    std::snprintf(out, sizeof(out), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return out;
}

void write_rule_curve_csv(const RuleCurve& curve, std::ostream& out) {
    out << "step,volume_m3\n";
    char buf[32];
    for (Index t = 0; t < curve.values.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%.17g", curve.values[t]);
        out << t << ',' << buf << '\n';
    }
}

RuleCurve read_rule_curve_csv(const std::string& path, const TimeGrid& grid) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open curve file '" + path + "'");
    RuleCurve curve;
    curve.grid = grid;
    curve.values = Array::Constant(grid.steps_per_year(), std::numeric_limits<double>::quiet_NaN());
    std::string line;
    long line_no = 0;
    Index filled = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.rfind("step,", 0) == 0) continue;
        long step = -1;
        double value = 0.0;
        if (std::sscanf(line.c_str(), "%ld,%lf", &step, &value) != 2)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": malformed curve row");
        if (step < 0 || step >= grid.steps_per_year())
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": grid mismatch: step " + std::to_string(step) +
                                        " outside 0.." + std::to_string(grid.steps_per_year() - 1));
        curve.values[step] = value;
        ++filled;
    }
    if (filled != grid.steps_per_year())
        throw std::invalid_argument(path + ": grid mismatch: " + std::to_string(filled) +
                                    " steps, grid has " + std::to_string(grid.steps_per_year()));
    curve.min_storage = curve.values.minCoeff();
    curve.max_storage = curve.values.maxCoeff();
    curve.model = path;
    return curve;
}

std::string rule_curve_to_json(const RuleCurve& curve) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = curve.model;
    j["grid"] = curve.grid.name();
    j["year_start_month"] = curve.grid.year_start_month();
    j["guarantee_horizon_years"] = curve.guarantee_horizon_years;
    j["generated_at"] = curve.generated_at;
    j["input_fingerprint"] = curve.input_fingerprint;
    j["min_storage_m3"] = curve.min_storage;
    j["max_storage_m3"] = curve.max_storage;
    j["values_m3"] = std::vector<double>(curve.values.data(), curve.values.data() + curve.values.size());
    return j.dump(2) + "\n";
}

void write_rule_curve_json(const RuleCurve& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << rule_curve_to_json(curve);
}

RuleCurve read_rule_curve_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open curve file '" + path + "'");
    nlohmann::json j;
    in >> j;
    if (j.value("schema_version", 0) != 1)
        throw std::invalid_argument(path + ": unsupported schema_version");
    RuleCurve curve;
    curve.grid = TimeGrid::from_name(j.at("grid").get<std::string>(),
                                     j.value("year_start_month", 1));
    curve.model = j.value("model", "");
    curve.guarantee_horizon_years = j.value("guarantee_horizon_years", 0);
    curve.generated_at = j.value("generated_at", "");
    curve.input_fingerprint = j.value("input_fingerprint", "");
    curve.min_storage = j.at("min_storage_m3").get<double>();
    curve.max_storage = j.at("max_storage_m3").get<double>();
    const auto values = j.at("values_m3").get<std::vector<double>>();
    curve.values = Eigen::Map<const Array>(values.data(), static_cast<Index>(values.size()));
    curve.validate();
    return curve;
}

}  // namespace resop
