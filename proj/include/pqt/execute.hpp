#pragma once

#include <filesystem>

#include "pqt/config.hpp"

namespace pqt {

/// Runs the configured experiment/ensemble and writes the output tree:
/// manifest.json first, then data files, then plots.
void execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Epsilon scan over the configured base experiment (scattering or
/// decay); requires the epsilon_scan section.
void execute_scan(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Regenerates the SVG plots from the data files of a completed run.
void emit_plots(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace pqt
