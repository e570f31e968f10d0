#include "pqt/decay.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "pqt/stats.hpp"

namespace pqt {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;

double coupling_profile(const DecayConfig& cfg, double omega) {
    switch (cfg.coupling) {
        case DecayConfig::CouplingFamily::Constant:
            return 1.0;
        case DecayConfig::CouplingFamily::Semicircle: {
            double u = 2.0 * omega / cfg.omega_max - 1.0;
            double s = 1.0 - u * u;
            return s > 0.0 ? std::sqrt(s) : 0.0;
        }
    }
    throw std::logic_error("decay: unknown coupling family");
}
}  // namespace

void DecayConfig::validate() const {
    if (n_modes < 256) throw std::invalid_argument("decay: n_modes must be >= 256");
    if (!(omega_max > 0.0))
        throw std::invalid_argument("decay: omega_max must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("decay: dt must be positive");
    if (!(t_max > 0.0)) throw std::invalid_argument("decay: t_max must be positive");
    if (output_stride < 1)
        throw std::invalid_argument("decay: output_stride must be >= 1");
    if (!(strength >= 0.0))
        throw std::invalid_argument("decay: coupling strength must be >= 0");
    collapse.validate();
    // A discretized continuum echoes at the Poincare recurrence time
    // ~ 2*pi/delta_omega; the horizon must end well before the echo.
    double recurrence = kTwoPi / delta_omega();
    if (!(recurrence > t_max))
        throw std::invalid_argument(
            "decay: recurrence horizon violated (2*pi/delta_omega <= t_max); "
            "increase n_modes or shrink t_max");
}

FriedrichsModel::FriedrichsModel(const DecayConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    const int n = cfg.n_modes + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(0, 0) = cfg.e_d;
    const double dw = cfg.delta_omega();
    for (int j = 1; j <= cfg.n_modes; ++j) {
        double omega = j * dw;
        h(j, j) = omega;
        double g = cfg.strength * std::sqrt(dw) * coupling_profile(cfg, omega);
        h(0, j) = g;
        h(j, 0) = g;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("decay: eigensolver failed");
    energies_.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    vecs_.resize(n);
    weights_.resize(n);
    for (int k = 0; k < n; ++k) {
        vecs_[k].assign(solver.eigenvectors().col(k).data(),
                        solver.eigenvectors().col(k).data() + n);
        weights_[k] = vecs_[k][0] * vecs_[k][0];
    }
}

std::complex<double> FriedrichsModel::survival_amplitude(double t) const {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < energies_.size(); ++k) {
        double phase = -energies_[k] * t;
        acc += weights_[k] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
}

std::vector<std::complex<double>> FriedrichsModel::state(double t) const {
    const std::size_t n = energies_.size();
    std::vector<std::complex<double>> out(n, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        double phase = -energies_[k] * t;
        std::complex<double> a =
            vecs_[k][0] * std::complex<double>(std::cos(phase), std::sin(phase));
        for (std::size_t i = 0; i < n; ++i) out[i] += a * vecs_[k][i];
    }
    return out;
}

double FriedrichsModel::golden_rule_rate() const {
    double g2 = cfg_.strength * cfg_.strength;
    double prof = coupling_profile(cfg_, cfg_.e_d);
    return kTwoPi * g2 * prof * prof;
}

SurvivalCurve run_decay_oqt(const FriedrichsModel& model) {
    const DecayConfig& cfg = model.config();
    SurvivalCurve curve;
    double step = cfg.dt * cfg.output_stride;
    for (double t = 0.0; t <= cfg.t_max + 1e-12; t += step) {
        curve.t.push_back(t);
        curve.p.push_back(std::norm(model.survival_amplitude(t)));
    }
    return curve;
}

DecaySegment precompute_decay_segment(const FriedrichsModel& model) {
    return precompute_decay_segment(model, model.config().collapse);
}

DecaySegment precompute_decay_segment(const FriedrichsModel& model,
                                      const CollapseConfig& collapse) {
    const DecayConfig& cfg = model.config();
    if (!(collapse.epsilon > 0.0))
        throw std::invalid_argument("decay: pqt segment needs epsilon > 0");

    // Channel split of the level-plus-continuum state: undecayed =
    // span{|d>} (channel Hamiltonian: the isolated level), decayed =
    // continuum (channel Hamiltonian: the diagonal modes). Mirrors the
    // scattering engine: windowed overlap of the channel component with
    // its freely advanced past self. The undecayed component is
    // one-dimensional so its fidelity is exactly 1 once live; the
    // decayed fidelity compares phase profiles across the window.
    const CollapseConfig& col = collapse;
    const int window = col.window_steps;
    const double dw = cfg.delta_omega();

    std::deque<double> hist_pd, hist_pdec;
    std::deque<std::vector<std::complex<double>>> hist_dec;
    // Free continuum phase over the look-back window T_w = window*dt.
    const double t_w = window * cfg.dt;
    std::vector<std::complex<double>> window_phase(cfg.n_modes);
    for (int j = 1; j <= cfg.n_modes; ++j) {
        double phase = -(j * dw) * t_w;
        window_phase[j - 1] = {std::cos(phase), std::sin(phase)};
    }

    DecaySegment seg;
    bool gate = false;
    long max_steps = static_cast<long>(std::ceil(cfg.t_max / cfg.dt)) + 1;
    for (long s = 0; s <= max_steps; ++s) {
        double t = s * cfg.dt;
        auto phi = model.state(t);
        double p_d = std::norm(phi[0]);
        double p_dec = 0.0;
        std::vector<std::complex<double>> dec(cfg.n_modes);
        for (int j = 0; j < cfg.n_modes; ++j) {
            dec[j] = phi[j + 1];
            p_dec += std::norm(dec[j]);
        }
        if (p_dec > 0.0) {
            double inv = 1.0 / std::sqrt(p_dec);
            for (auto& a : dec) a *= inv;
        }
        hist_pd.push_back(p_d);
        hist_pdec.push_back(p_dec);
        hist_dec.push_back(std::move(dec));
        std::size_t keep = static_cast<std::size_t>(window) + 1;
        while (hist_pd.size() > keep) {
            hist_pd.pop_front();
            hist_pdec.pop_front();
            hist_dec.pop_front();
        }
        if (std::min(p_d, p_dec) >= col.p_active) gate = true;

        seg.curve.t.push_back(t);
        seg.curve.p.push_back(p_d);

        double f_b = std::numeric_limits<double>::quiet_NaN();
        double f_a = std::numeric_limits<double>::quiet_NaN();
        if (hist_pd.size() == keep) {
            bool b_live = true, a_live = true;
            for (double m : hist_pd) b_live = b_live && m >= col.p_min;
            for (double m : hist_pdec) a_live = a_live && m >= col.p_min;
            if (b_live) f_b = 1.0;  // 1D channel: phases cancel exactly
            if (a_live) {
                std::complex<double> acc{0.0, 0.0};
                const auto& old_v = hist_dec.front();
                const auto& new_v = hist_dec.back();
                for (int j = 0; j < cfg.n_modes; ++j)
                    acc += std::conj(old_v[j] * window_phase[j]) * new_v[j];
                f_a = std::min(std::norm(acc), 1.0);
            }
        }
        if (gate && s % col.check_stride == 0) {
            TriggerDecision d = collapse_check(f_a, f_b, col, true);
            if (d.fired()) {
                seg.t_trigger = t;
                seg.p_undecayed = p_d;
                return seg;
            }
        }
    }
    throw std::runtime_error(
        "decay: trigger never fired within the horizon; widen epsilon or the window");
}

std::optional<double> run_decay_pqt_trajectory(const DecaySegment& segment,
                                               double t_max, RandomStream& stream) {
    if (!(segment.t_trigger > 0.0))
        throw std::invalid_argument("decay: invalid segment (t_trigger <= 0)");
    double t = 0.0;
    for (;;) {
        t += segment.t_trigger;
        if (t > t_max) return std::nullopt;  // survived past the horizon
        if (stream.uniform() >= segment.p_undecayed) return t;  // decayed
        // undecayed outcome: state resets to |d>, segment replays
    }
}

DecayEnsembleResult run_decay_ensemble(const FriedrichsModel& model,
                                       const EnsembleSpec& spec) {
    DecayEnsembleResult out;
    out.segment = precompute_decay_segment(model);
    const double t_max = model.config().t_max;

    out.records = run_ensemble(spec, [&](std::size_t i, RandomStream& stream) {
        TrajectoryRecord rec;
        rec.index = i;
        rec.p_b = out.segment.p_undecayed;
        rec.p_a = 1.0 - out.segment.p_undecayed;
        auto t_decay = run_decay_pqt_trajectory(out.segment, t_max, stream);
        if (t_decay) {
            rec.outcome = "decayed";
            rec.event_time = *t_decay;
        } else {
            rec.outcome = "undecayed";
        }
        return rec;
    });

    long n_boundaries = static_cast<long>(std::floor(t_max / out.segment.t_trigger));
    out.survival.t.push_back(0.0);
    out.survival.p.push_back(1.0);
    for (long k = 1; k <= n_boundaries; ++k) {
        double tk = k * out.segment.t_trigger;
        std::size_t alive = 0;
        for (const auto& rec : out.records)
            if (!rec.event_time || *rec.event_time > tk) ++alive;
        out.survival.t.push_back(tk);
        out.survival.p.push_back(static_cast<double>(alive) / out.records.size());
    }
    return out;
}

ExponentialFit fit_exponential(const SurvivalCurve& curve, double t_lo, double t_hi) {
    if (curve.t.size() != curve.p.size() || curve.t.size() < 2)
        throw std::invalid_argument("fit_exponential: malformed curve");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < curve.t.size(); ++i) {
        if (curve.t[i] < t_lo || curve.t[i] > t_hi) continue;
        if (!(curve.p[i] > 0.0))
            throw std::invalid_argument(
                "fit_exponential: nonpositive survival inside the fit window");
        xs.push_back(curve.t[i]);
        ys.push_back(std::log(curve.p[i]));
    }
    if (xs.size() < 2)
        throw std::invalid_argument("fit_exponential: fewer than 2 points in window");
    LinearFit fit = least_squares(xs, ys);
    ExponentialFit out;
    out.rate = -fit.slope;
    out.log_intercept = fit.intercept;
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    out.relative_residuals.resize(curve.t.size());
    for (std::size_t i = 0; i < curve.t.size(); ++i) {
        double p_fit = std::exp(fit.intercept + fit.slope * curve.t[i]);
        out.relative_residuals[i] = std::fabs(curve.p[i] / p_fit - 1.0);
    }
    return out;
}

std::optional<double> deviation_onset(const SurvivalCurve& curve,
                                      const ExponentialFit& fit, double threshold) {
    for (std::size_t i = 0; i < curve.t.size(); ++i)
        if (curve.t[i] > fit.t_hi && fit.relative_residuals[i] > threshold)
            return curve.t[i];
    return std::nullopt;
}

}  // namespace pqt
