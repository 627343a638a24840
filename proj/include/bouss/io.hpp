/**
 * @file io.hpp
 * @brief File emitters: profile CSV / gnuplot data, branch and diagnostics
 *        JSON. Payloads are deterministic — fixed key order, no timestamps,
 *        17-significant-digit floats in CSV.
 */

#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

#include "bouss/continuation.hpp"

namespace bouss {

using Json = nlohmann::ordered_json;

/// CSV with header `x,u,eta`, one row per grid point, %.17g floats.
void write_profile_csv(const std::filesystem::path& path, const WaveProfile& p);

/// gnuplot-ready whitespace-separated triples with a `#` header line.
void write_profile_dat(const std::filesystem::path& path, const WaveProfile& p);

void write_json(const std::filesystem::path& path, const Json& j);

Json nodal_to_json(const NodalFlags& f, NodalPattern pattern);
Json diagnostics_to_json(const DiagnosticsReport& d, FamilyKind kind);
Json branch_to_json(const Branch& b);
Json profile_summary_json(const WaveProfile& p);

}  // namespace bouss
