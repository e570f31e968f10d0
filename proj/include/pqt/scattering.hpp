#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pqt/collapse.hpp"
#include "pqt/ensemble.hpp"
#include "pqt/evolve.hpp"
#include "pqt/interference.hpp"
#include "pqt/mode.hpp"

namespace pqt {

/// Projectile a on a bound (b,c) pair in Jacobi coordinates: axis 0 is
/// the projectile-pair separation R (incoming Gaussian packet), axis 1
/// the pair coordinate r (ground state of V_bc).
struct ScatteringConfig {
    ParticleSet particles;
    PotentialSet potentials;
    Axis axis_big_r{256, -64.0, 0.5};
    Axis axis_r{256, -32.0, 0.25};
    double x0 = -20.0;
    double p0 = 2.0;
    double sigma = 3.0;
    RunMode mode = RunMode::pqt;
    CollapseConfig collapse;
    double dt = 5e-3;
    long n_steps = 10000;
    int log_stride = 1;
    double hbar = 1.0;
    double guard_tol = 1e-6;
    int guard_stride = 200;
    ReadoutSpec readout;

    Grid grid() const { return Grid::plane(axis_big_r, axis_r); }
    void validate() const;
};

struct ScatteringResult {
    std::optional<CollapseEvent> event;
    ChannelDecomposition final_decomp;
    std::vector<ChannelLogRow> log;  // one row per log_stride steps
    double bound_energy = 0.0;
    double norm_drift = 0.0;
    double energy_drift = 0.0;  // relative, over the unitary phase
};

/// One trajectory. The stream is consumed only at a collapse (one draw);
/// oqt mode and epsilon = 0 consume nothing, so stream may be null there.
ScatteringResult run_scattering(const ScatteringConfig& cfg, RandomStream* stream);

/// Full deterministic trace of the unitary run with per-step channel
/// diagnostics. The fidelity curves do not depend on epsilon, so one
/// trace answers the trigger question for every threshold; ensembles and
/// the epsilon scan share it instead of re-evolving per trajectory.
struct ScatteringTrace {
    std::vector<ChannelLogRow> rows;  // one per step, 0..n_steps
    long gate_step = -1;              // first step with both channels live
    double dt = 0.0;
    ChannelDecomposition final_unitary;
    double bound_energy = 0.0;
    double norm_drift = 0.0;
    double energy_drift = 0.0;
};

ScatteringTrace precompute_scattering(const ScatteringConfig& cfg);

/// First step at which the engine with this collapse config would fire
/// on the trace, with the step's log row; nullopt when it never fires.
std::optional<std::pair<long, ChannelLogRow>> trigger_on_trace(
    const ScatteringTrace& trace, const CollapseConfig& collapse);

/// Readout amplitudes of a final state, and of a collapsed outcome.
TwoModeState two_mode_state(const ChannelDecomposition& decomp);
TwoModeState two_mode_state(char outcome);

struct ScatteringEnsembleResult {
    ScatteringTrace trace;
    std::optional<std::pair<long, ChannelLogRow>> trigger;
    std::vector<TrajectoryRecord> records;
    /// Readout detection bin per trajectory (one detection each).
    std::vector<std::size_t> detections;
};

/// Ensemble over the shared trace. Trajectory i consumes stream
/// (seed, i): one uniform for the collapse outcome (pqt, when the
/// trigger fires), then one for its readout detection. Identical to
/// running run_scattering per trajectory, which tests assert.
ScatteringEnsembleResult run_scattering_ensemble(const ScatteringConfig& cfg,
                                                 const EnsembleSpec& spec);

}  // namespace pqt
