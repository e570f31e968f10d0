#pragma once

#include <deque>
#include <optional>

#include "pqt/decomposition.hpp"
#include "pqt/hamiltonian.hpp"

namespace pqt {

struct CollapseConfig {
    /// Universal threshold: collapse fires when a channel fidelity
    /// exceeds 1 - epsilon. epsilon = 0 never fires (Everett limit).
    double epsilon = 1e-2;
    int window_steps = 64;
    double p_min = 1e-12;
    double p_active = 1e-6;
    int check_stride = 1;

    void validate() const;
};

struct CollapseEvent {
    double t = 0.0;
    double f_a = 0.0, f_b = 0.0;
    double p_a = 0.0, p_b = 0.0;  // |c_A|^2, |c_B|^2 at trigger
    char outcome = '-';
    double u = 0.0;
    bool fired_a = false, fired_b = false;
};

struct ChannelLogRow {
    double t = 0.0;
    double ca2 = 0.0, cb2 = 0.0;
    // Fidelities are NaN while the look-back window is warming up or a
    // channel is below the mass floor.
    double f_a = 0.0, f_b = 0.0;
    double e_int_a = 0.0, e_int_b = 0.0;
    bool triggered = false;
    char outcome = '-';
};

/// Postulate-(II) trigger on precomputed fidelities: fires at the first
/// evaluated instant with interaction_started and F_X > 1 - epsilon for
/// a live channel. NaN fidelities never fire.
struct TriggerDecision {
    bool fired_a = false;
    bool fired_b = false;
    bool fired() const { return fired_a || fired_b; }
};
TriggerDecision collapse_check(double f_a, double f_b, const CollapseConfig& config,
                               bool interaction_started);

/// Born-rule jump: outcome A iff u < |c_A|^2; the surviving channel
/// component becomes the new state. Requires u in [0,1).
std::pair<WaveFunction, CollapseEvent> collapse_apply(const ChannelDecomposition& decomp,
                                                      double u);

/// Expectation of the interaction terms neglected by the channel
/// Hamiltonian: <Phi|(H_full - H_X)|Phi>. Both Hamiltonians must share
/// the grid (their kinetic parts cancel exactly).
double interaction_energy(const WaveFunction& big_phi, const GridHamiltonian& h_full,
                          const GridHamiltonian& h_x);

/// Evolves an asymptotic reference n steps under its channel
/// Hamiltonian with the main run's scheme and dt. H_X must be a channel
/// variant, not the full Hamiltonian.
WaveFunction advance_asymptotic(const WaveFunction& ref, const GridHamiltonian& h_x,
                                double dt, long n_steps);

/// Per-step collapse bookkeeping for the (R,r) scattering system.
///
/// Channel components are tracked through the bound projector; the
/// asymptotic references required by the fidelity are obtained by exact
/// channel-Hamiltonian propagation in momentum space (H_A is free, and
/// the bound channel factorizes into a free R motion times the
/// stationary pair state), which coincides with split-operator stepping
/// of the channel Hamiltonians.
class CollapseEngine {
  public:
    CollapseEngine(const BoundProjector& projector, const HamiltonianSpec& full_spec,
                   const Grid& grid, const CollapseConfig& config, double dt);

    /// Feed the state at one step; returns the decomposition and fills
    /// the log row. Trigger state is sticky: once fired, no re-arming.
    struct StepResult {
        ChannelDecomposition decomp;
        ChannelLogRow row;
        bool triggered = false;
        TriggerDecision decision;
    };
    StepResult observe(long step, double t, const WaveFunction& big_phi);

    bool interaction_started() const { return interaction_started_; }
    bool fired() const { return fired_; }
    /// Drop all history (used after a collapse resets the state).
    void reset_history();

    const CollapseConfig& config() const { return config_; }
    double window_time() const { return config_.window_steps * dt_; }

  private:
    void push_history(long step, const ChannelDecomposition& d);
    std::optional<double> fidelity_b() const;
    std::optional<double> fidelity_a() const;

    const BoundProjector* projector_;
    HamiltonianSpec full_spec_;
    CollapseConfig config_;
    double dt_;
    double hbar_;

    std::vector<double> v_full_;      // full potential field
    std::vector<double> v_bc_only_;   // bound-channel potential field
    std::vector<cplx> phase_r_;       // free R phase over the window (1D)
    std::vector<cplx> phase_full_;    // free (R,r) phase over the window (2D)

    std::deque<double> hist_ca2_, hist_cb2_;
    std::deque<std::vector<cplx>> hist_chi_b_;   // unit-norm k-space chi(R)
    std::deque<std::vector<cplx>> hist_phi_a_;   // unit-norm k-space phi_A
    bool interaction_started_ = false;
    bool fired_ = false;
};

}  // namespace pqt
