#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "resop/mpc.hpp"

namespace resop {

std::uint64_t fnv1a64(const void* data, std::size_t size);
/// "fnv1a:<16 hex digits>" over the file bytes.
std::string fingerprint_file(const std::string& path);

/// `step,volume_m3` rows, shortest round-trip formatting.
void write_rule_curve_csv(const RuleCurve& curve, std::ostream& out);

/// Reads a bare `step,volume_m3` curve (e.g. the operator's current rule
/// curve) onto the given grid. Storage bounds are taken from the values.
RuleCurve read_rule_curve_csv(const std::string& path, const TimeGrid& grid);

/// JSON artifact, schema_version 1. Keys are emitted in sorted order, so
/// identical curves give identical bytes (the generated_at timestamp is the
/// only run-dependent field).
std::string rule_curve_to_json(const RuleCurve& curve);
void write_rule_curve_json(const RuleCurve& curve, const std::string& path);
RuleCurve read_rule_curve_json(const std::string& path);

}  // namespace resop
