#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pqt/decay.hpp"
#include "pqt/plate.hpp"
#include "pqt/scattering.hpp"
#include "pqt/sphere_toy.hpp"

namespace pqt {

enum class ExperimentKind { Scattering, Decay, Plate, SphereToy };
std::string experiment_name(ExperimentKind k);

struct OutputFlags {
    bool csv = true;
    bool svg = true;
    bool channel_log = false;
};

struct EpsilonScanSettings {
    std::vector<double> epsilons;
    std::size_t n_per_point = 1000;
    double detect_threshold = 0.1;
};

/// The plate packet is declared in the config and built at run time.
struct PlateSettings {
    Axis axis{1024, -16.0, 0.03125};
    double x0 = 0.0, p0 = 0.0, sigma = 1.0;
    std::vector<PlateConfig::Cell> cells;
    double eta = 1.0;

    PlateConfig realize(double hbar) const;
};

struct RunConfig {
    ExperimentKind experiment = ExperimentKind::Scattering;
    RunMode mode = RunMode::pqt;
    std::uint64_t seed = 1;
    std::size_t trajectories = 1;
    int threads = 1;
    double hbar = 1.0;
    CollapseConfig collapse;
    OutputFlags output;

    ScatteringConfig scattering;
    DecayConfig decay;
    PlateSettings plate;
    SphereToyConfig sphere;
    double sphere_horizon = 10.0;

    std::optional<EpsilonScanSettings> scan;

    void validate() const;
};

/// Strict parse: unknown keys are rejected (with a nearest-key
/// suggestion), constraints are checked naming the offending field, and
/// defaults (epsilon 1e-2, window 64, stride 1, ...) are filled.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

/// Canonical JSON echo of a config (used by the manifest; stable key
/// order, every effective default materialized).
std::string canonical_config(const RunConfig& cfg);

}  // namespace pqt
