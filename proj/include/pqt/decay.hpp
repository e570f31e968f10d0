#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "pqt/collapse.hpp"
#include "pqt/ensemble.hpp"
#include "pqt/mode.hpp"

namespace pqt {

/// Discrete level |d> at E_d coupled to N_c continuum modes at
/// omega_j = j * delta_omega, j = 1..N_c (cutoff Omega = N_c*delta_omega).
/// Coupling g_j = strength * sqrt(delta_omega) * profile(omega_j), so the
/// continuum coupling density |g(omega)|^2 = strength^2 * profile^2 and
/// the golden-rule rate is 2*pi*strength^2*profile(E_d)^2.
struct DecayConfig {
    enum class CouplingFamily { Constant, Semicircle };

    double e_d = 1.0;
    int n_modes = 512;
    double omega_max = 4.0;
    CouplingFamily coupling = CouplingFamily::Constant;
    double strength = 0.05;
    RunMode mode = RunMode::pqt;
    CollapseConfig collapse;
    double dt = 0.05;
    double t_max = 200.0;
    int output_stride = 10;

    double delta_omega() const { return omega_max / n_modes; }
    void validate() const;  // N_c >= 256; recurrence horizon 2*pi/delta_omega > t_max
};

/// Eigendecomposition of the finite level-plus-continuum Hamiltonian.
class FriedrichsModel {
  public:
    explicit FriedrichsModel(const DecayConfig& cfg);

    /// Survival amplitude <d| exp(-iHt) |d>.
    std::complex<double> survival_amplitude(double t) const;
    /// Full state exp(-iHt)|d> in the site basis (index 0 = |d>).
    std::vector<std::complex<double>> state(double t) const;
    double golden_rule_rate() const;
    const DecayConfig& config() const { return cfg_; }

  private:
    DecayConfig cfg_;
    std::vector<double> energies_;        // eigenvalues
    std::vector<std::vector<double>> vecs_;  // eigenvectors (columns), real symmetric H
    std::vector<double> weights_;         // <d|E_k>^2
};

struct SurvivalCurve {
    std::vector<double> t;
    std::vector<double> p;
};

/// Unitary survival P(t) = |<d|Phi(t)>|^2 sampled every
/// output_stride * dt up to t_max.
SurvivalCurve run_decay_oqt(const FriedrichsModel& model);

/// The deterministic inter-jump segment of a pqt trajectory: evolution
/// from |d> until the windowed fidelity trigger fires. After an
/// "undecayed" outcome the state resets to |d>, so every segment is an
/// exact replay: one segment determines the whole ensemble law.
struct DecaySegment {
    double t_trigger = 0.0;     // trigger time measured from the reset
    double p_undecayed = 0.0;   // |<d|Phi>|^2 at the trigger
    SurvivalCurve curve;        // P(t) inside one segment
};

DecaySegment precompute_decay_segment(const FriedrichsModel& model);
/// Same, with a collapse config overriding the one in the model's
/// config (the eigendecomposition is epsilon-independent and shared).
DecaySegment precompute_decay_segment(const FriedrichsModel& model,
                                      const CollapseConfig& collapse);

/// One pqt trajectory: geometric sequence of undecayed resets; a decayed
/// outcome terminates the trajectory at that segment boundary. Returns
/// the decay time, or nullopt when the trajectory survives past t_max.
std::optional<double> run_decay_pqt_trajectory(const DecaySegment& segment,
                                               double t_max, RandomStream& stream);

struct DecayEnsembleResult {
    DecaySegment segment;
    std::vector<TrajectoryRecord> records;
    SurvivalCurve survival;  // ensemble survival at segment boundaries
};

DecayEnsembleResult run_decay_ensemble(const FriedrichsModel& model,
                                       const EnsembleSpec& spec);

struct ExponentialFit {
    double rate = 0.0;
    double log_intercept = 0.0;
    double t_lo = 0.0;  // fit window actually used
    double t_hi = 0.0;
    std::vector<double> relative_residuals;  // |P/P_fit - 1| per point
};

/// Least squares on log P over [t_lo, t_hi]; residuals reported for all
/// points of the curve.
ExponentialFit fit_exponential(const SurvivalCurve& curve, double t_lo, double t_hi);

/// First time strictly beyond the fit window (t > fit.t_hi) where the
/// relative deviation from the fitted exponential exceeds `threshold`;
/// nullopt if none.
std::optional<double> deviation_onset(const SurvivalCurve& curve,
                                      const ExponentialFit& fit, double threshold);

}  // namespace pqt
