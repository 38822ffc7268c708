// JSON/CSV record builders shared by the CLI and tests. Every emitted record
// carries a versioned schema id and the effective configuration.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hardpair/contact.hpp"
#include "hardpair/dynamics.hpp"
#include "hardpair/scatter.hpp"
#include "hardpair/shape.hpp"
#include "hardpair/vec.hpp"

namespace hardpair {

using json = nlohmann::json;

inline constexpr const char* kSchemaContact = "hardpair/contact/v1";
inline constexpr const char* kSchemaScatter = "hardpair/scatter/v1";
inline constexpr const char* kSchemaSimRecord = "hardpair/simulate-record/v1";
inline constexpr const char* kSchemaSimEvent = "hardpair/simulate-event/v1";
inline constexpr const char* kSchemaSimSummary = "hardpair/simulate-summary/v1";
inline constexpr const char* kSchemaOrbit = "hardpair/orbit/v1";
inline constexpr const char* kSchemaInvariants = "hardpair/invariants/v1";
inline constexpr const char* kSchemaWitness = "hardpair/witness/v1";

json json_of(const Vec2& v);
json json_of(const Vec4& v);
json json_of(const Vec6& v);
json json_of(const Mat4& m);  // row-major 16 entries
json json_of(const Mat6& m);  // row-major 36 entries
json json_of(const Particle& particle);
json json_of(const CollisionFrame& frame);
json json_of(const Event& event);
json json_of(const SystemState& state);
json sample_record(const TrajectorySample& sample);

// Shortest round-trip decimal text for a double ("%.17g" trimmed).
std::string format_full(double x);
std::string csv_row(const std::vector<double>& values);

}  // namespace hardpair
