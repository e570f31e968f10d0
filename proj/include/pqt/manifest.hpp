#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "pqt/config.hpp"

namespace pqt {

inline constexpr const char* kCodeVersion = "pqt 1.0.0";

std::uint64_t fnv1a64(std::string_view data);

/// manifest.json: canonical config echo, config content hash, code
/// version, master seed, wall times, and the tolerances in effect.
/// Written before any data file so a crashed run is still diagnosable;
/// finish_manifest rewrites it with the end time.
void write_manifest(const std::filesystem::path& out_dir, const RunConfig& cfg,
                    const std::string& start_time_utc,
                    const std::string& end_time_utc = "");

std::string utc_timestamp();

}  // namespace pqt
