#include "pqt/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

namespace pqt {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::filesystem::path& out_dir, const RunConfig& cfg,
                    const std::string& start_time_utc, const std::string& end_time_utc) {
    std::string echo = canonical_config(cfg);
    nlohmann::ordered_json doc;
    doc["code_version"] = kCodeVersion;
    doc["config"] = nlohmann::ordered_json::parse(echo);
    char hash[19];
    std::snprintf(hash, sizeof(hash), "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(echo)));
    doc["config_hash_fnv1a64"] = hash;
    doc["master_seed"] = cfg.seed;
    // Wall times are the only run-dependent bytes of any output file.
    doc["start_time_utc"] = start_time_utc;
    doc["end_time_utc"] = end_time_utc;
    doc["tolerances"] = {{"collapse_epsilon", cfg.collapse.epsilon},
                         {"collapse_p_min", cfg.collapse.p_min},
                         {"collapse_p_active", cfg.collapse.p_active},
                         {"boundary_guard_tol", cfg.scattering.guard_tol},
                         {"bootstrap_resamples", 1000},
                         {"chi_square_alpha", 0.01}};
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("manifest: cannot write to " + out_dir.string());
    out << doc.dump(2) << '\n';
}

}  // namespace pqt
