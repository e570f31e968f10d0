#include "pqt/collapse.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pqt/fourier.hpp"
#include "pqt/propagators.hpp"

namespace pqt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

cplx phase_factor(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Euclidean-normalized copy; returns false on (numerically) null input.
bool unit_norm(std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    if (!(s > 0.0)) return false;
    double inv = 1.0 / std::sqrt(s);
    for (cplx& x : v) x *= inv;
    return true;
}

double overlap_fidelity(const std::vector<cplx>& old_hat,
                        const std::vector<cplx>& new_hat,
                        const std::vector<cplx>& window_phase) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < old_hat.size(); ++i)
        acc += std::conj(old_hat[i] * window_phase[i]) * new_hat[i];
    double f = std::norm(acc);
    return f > 1.0 ? 1.0 : f;
}

}  // namespace

void CollapseConfig::validate() const {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("collapse: epsilon must lie in [0,1)");
    if (window_steps <= 0)
        throw std::invalid_argument("collapse: window_steps must be positive");
    if (!(p_min > 0.0 && p_min < p_active && p_active < 1.0))
        throw std::invalid_argument("collapse: need 0 < p_min < p_active < 1");
    if (check_stride <= 0)
        throw std::invalid_argument("collapse: check_stride must be positive");
    if (window_steps % check_stride != 0)
        throw std::invalid_argument(
            "collapse: window_steps must be a multiple of check_stride");
}

TriggerDecision collapse_check(double f_a, double f_b, const CollapseConfig& config,
                               bool interaction_started) {
    TriggerDecision d;
    if (!interaction_started) return d;
    // NaN comparisons are false, so warming-up channels never fire.
    d.fired_a = f_a > 1.0 - config.epsilon;
    d.fired_b = f_b > 1.0 - config.epsilon;
    return d;
}

std::pair<WaveFunction, CollapseEvent> collapse_apply(const ChannelDecomposition& decomp,
                                                      double u) {
    if (!(u >= 0.0 && u < 1.0))
        throw std::invalid_argument("collapse_apply: u must lie in [0,1)");
    CollapseEvent ev;
    ev.t = decomp.t;
    ev.p_a = decomp.c_a * decomp.c_a;
    ev.p_b = decomp.c_b * decomp.c_b;
    ev.u = u;
    bool outcome_a = u < ev.p_a;
    ev.outcome = outcome_a ? 'A' : 'B';
    const auto& survivor = outcome_a ? decomp.phi_a : decomp.phi_b;
    if (!survivor)
        throw std::logic_error("collapse_apply: sampled channel is absent");
    return {normalize(*survivor), ev};
}

double interaction_energy(const WaveFunction& big_phi, const GridHamiltonian& h_full,
                          const GridHamiltonian& h_x) {
    if (h_full.grid() != big_phi.grid() || h_x.grid() != big_phi.grid())
        throw std::invalid_argument("interaction_energy: grid mismatch");
    double w = big_phi.grid().cell_volume();
    double acc = 0.0;
    for (std::size_t i = 0; i < big_phi.size(); ++i)
        acc += (h_full.potential()[i] - h_x.potential()[i]) * std::norm(big_phi[i]);
    return acc * w;
}

WaveFunction advance_asymptotic(const WaveFunction& ref, const GridHamiltonian& h_x,
                                double dt, long n_steps) {
    if (h_x.variant() == HamiltonianVariant::Full)
        throw std::invalid_argument(
            "advance_asymptotic: H_X must be a channel Hamiltonian, not the full one");
    if (n_steps == 0) return ref;
    SplitOperatorStepper stepper(h_x, dt);
    WaveFunction psi = ref;
    for (long s = 0; s < n_steps; ++s) stepper.step(psi);
    return psi;
}

CollapseEngine::CollapseEngine(const BoundProjector& projector,
                               const HamiltonianSpec& full_spec, const Grid& grid,
                               const CollapseConfig& config, double dt)
    : projector_(&projector), full_spec_(full_spec), config_(config), dt_(dt),
      hbar_(full_spec.hbar) {
    config_.validate();
    if (full_spec.variant != HamiltonianVariant::Full)
        throw std::invalid_argument("collapse_engine: needs the full Hamiltonian");
    if (grid.dims() != 2)
        throw std::invalid_argument("collapse_engine: expects a 2D (R,r) grid");

    HamiltonianSpec b_spec = full_spec;
    b_spec.variant = HamiltonianVariant::BoundChannelB;
    v_full_ = GridHamiltonian(full_spec, grid).potential();
    v_bc_only_ = GridHamiltonian(b_spec, grid).potential();

    const double t_w = window_time();
    const double mu_R = full_spec.particles.mu_R();
    const double mu_r = full_spec.particles.mu_r();
    const Axis& aR = grid.axis(0);
    const Axis& ar = grid.axis(1);
    phase_r_.resize(aR.n);
    for (int i = 0; i < aR.n; ++i) {
        double k = aR.k(i);
        phase_r_[i] = phase_factor(-hbar_ * k * k * t_w / (2.0 * mu_R));
    }
    phase_full_.resize(grid.size());
    for (int i = 0; i < aR.n; ++i) {
        double kR = aR.k(i);
        double tR = hbar_ * kR * kR / (2.0 * mu_R);
        for (int j = 0; j < ar.n; ++j) {
            double kr = ar.k(j);
            double e = tR + hbar_ * kr * kr / (2.0 * mu_r);
            phase_full_[static_cast<std::size_t>(i) * ar.n + j] = phase_factor(-e * t_w);
        }
    }
}

void CollapseEngine::reset_history() {
    hist_ca2_.clear();
    hist_cb2_.clear();
    hist_chi_b_.clear();
    hist_phi_a_.clear();
}

void CollapseEngine::push_history(long step, const ChannelDecomposition& d) {
    // Channel masses are tracked every step (the liveness test needs the
    // full window); the state snapshots feeding the fidelity overlap are
    // only needed at check instants, so they are kept at check_stride
    // spacing. window_steps is a multiple of check_stride, hence the
    // oldest retained snapshot is exactly window_steps behind a check.
    hist_ca2_.push_back(d.c_a * d.c_a);
    hist_cb2_.push_back(d.c_b * d.c_b);
    std::size_t keep = static_cast<std::size_t>(config_.window_steps) + 1;
    while (hist_ca2_.size() > keep) {
        hist_ca2_.pop_front();
        hist_cb2_.pop_front();
    }

    if (step % config_.check_stride != 0) return;
    std::vector<cplx> chi_hat;
    if (d.phi_b) {
        chi_hat = projector_->chi(*d.phi_b);
        Grid line = Grid::line(static_cast<int>(chi_hat.size()), 0.0, 1.0);
        fft_inplace(chi_hat, line, FourierDirection::Forward);
        unit_norm(chi_hat);
    }
    hist_chi_b_.push_back(std::move(chi_hat));

    std::vector<cplx> phi_a_hat;
    if (d.phi_a) {
        phi_a_hat = d.phi_a->amp();
        fft_inplace(phi_a_hat, d.phi_a->grid(), FourierDirection::Forward);
        unit_norm(phi_a_hat);
    }
    hist_phi_a_.push_back(std::move(phi_a_hat));

    std::size_t keep_snaps =
        static_cast<std::size_t>(config_.window_steps / config_.check_stride) + 1;
    while (hist_chi_b_.size() > keep_snaps) {
        hist_chi_b_.pop_front();
        hist_phi_a_.pop_front();
    }
}

std::optional<double> CollapseEngine::fidelity_b() const {
    std::size_t need = static_cast<std::size_t>(config_.window_steps) + 1;
    std::size_t need_snaps =
        static_cast<std::size_t>(config_.window_steps / config_.check_stride) + 1;
    if (hist_cb2_.size() < need || hist_chi_b_.size() < need_snaps) return std::nullopt;
    for (double m : hist_cb2_)
        if (m < config_.p_min) return std::nullopt;
    if (hist_chi_b_.front().empty() || hist_chi_b_.back().empty()) return std::nullopt;
    return overlap_fidelity(hist_chi_b_.front(), hist_chi_b_.back(), phase_r_);
}

std::optional<double> CollapseEngine::fidelity_a() const {
    std::size_t need = static_cast<std::size_t>(config_.window_steps) + 1;
    std::size_t need_snaps =
        static_cast<std::size_t>(config_.window_steps / config_.check_stride) + 1;
    if (hist_ca2_.size() < need || hist_phi_a_.size() < need_snaps) return std::nullopt;
    for (double m : hist_ca2_)
        if (m < config_.p_min) return std::nullopt;
    if (hist_phi_a_.front().empty() || hist_phi_a_.back().empty()) return std::nullopt;
    return overlap_fidelity(hist_phi_a_.front(), hist_phi_a_.back(), phase_full_);
}

CollapseEngine::StepResult CollapseEngine::observe(long step, double t,
                                                   const WaveFunction& big_phi) {
    StepResult res;
    res.decomp = decompose(big_phi, *projector_, config_.p_min, t);
    push_history(step, res.decomp);

    double ca2 = res.decomp.c_a * res.decomp.c_a;
    double cb2 = res.decomp.c_b * res.decomp.c_b;
    if (std::min(ca2, cb2) >= config_.p_active) interaction_started_ = true;

    const bool check_step = step % config_.check_stride == 0;
    std::optional<double> fa, fb;
    if (check_step) {
        fa = fidelity_a();
        fb = fidelity_b();
    }
    res.row.t = t;
    res.row.ca2 = ca2;
    res.row.cb2 = cb2;
    res.row.f_a = fa.value_or(kNaN);
    res.row.f_b = fb.value_or(kNaN);

    double e_full = 0.0, e_b = 0.0;
    double w = big_phi.grid().cell_volume();
    for (std::size_t i = 0; i < big_phi.size(); ++i) {
        double rho = std::norm(big_phi[i]);
        e_full += v_full_[i] * rho;
        e_b += (v_full_[i] - v_bc_only_[i]) * rho;
    }
    res.row.e_int_a = e_full * w;  // H_full - H_A neglects all potentials
    res.row.e_int_b = e_b * w;     // H_full - H_B neglects V_ab + V_ac

    if (!fired_ && check_step) {
        res.decision = collapse_check(res.row.f_a, res.row.f_b, config_,
                                      interaction_started_);
        if (res.decision.fired()) {
            fired_ = true;
            res.triggered = true;
            res.row.triggered = true;
        }
    }
    return res;
}

}  // namespace pqt
