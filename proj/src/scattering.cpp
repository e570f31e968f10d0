#include "pqt/scattering.hpp"

#include <cmath>
#include <stdexcept>

#include "pqt/imaginary_time.hpp"
#include "pqt/observables.hpp"
#include "pqt/packet.hpp"
#include "pqt/propagators.hpp"

namespace pqt {

namespace {

struct Prepared {
    BoundState bound;
    WaveFunction initial;  // product packet(R) * phi_bc(r)
    HamiltonianSpec full_spec;
};

Prepared prepare(const ScatteringConfig& cfg) {
    cfg.validate();
    Grid grid_r = Grid::line(cfg.axis_r.n, cfg.axis_r.x_min, cfg.axis_r.dx);
    GridHamiltonian pair =
        GridHamiltonian::pair_hamiltonian(cfg.particles, cfg.potentials.v_bc, grid_r,
                                          cfg.hbar);
    BoundState bound = ground_state_imaginary_time(pair);

    double mean_kinetic = cfg.p0 * cfg.p0 / (2.0 * cfg.particles.mu_R());
    if (!(mean_kinetic > std::fabs(bound.energy)))
        throw std::invalid_argument(
            "scattering: breakup channel closed (incoming kinetic energy below |E0|)");

    Grid grid_R = Grid::line(cfg.axis_big_r.n, cfg.axis_big_r.x_min, cfg.axis_big_r.dx);
    WaveFunction packet =
        gaussian_packet(grid_R, cfg.x0, cfg.p0, cfg.sigma, cfg.hbar, "R");
    WaveFunction initial = product_state(packet, bound.phi);

    HamiltonianSpec full{cfg.particles, cfg.potentials, HamiltonianVariant::Full,
                         cfg.hbar};
    return {std::move(bound), std::move(initial), full};
}

/// Single pass of the reference evolution: steps the full Hamiltonian,
/// feeds every step to the engine, streams rows to `on_row`, and fires
/// `on_trigger` at the engine's trigger instant. `on_trigger` returning
/// a state replaces the current state (collapse); the engine history is
/// reset so the survivor re-accumulates its own window.
template <typename OnRow, typename OnTrigger>
void drive(const ScatteringConfig& cfg, const Prepared& prep,
           const BoundProjector& projector, CollapseEngine& engine, bool arm_trigger,
           OnRow&& on_row, OnTrigger&& on_trigger, ScatteringResult& out) {
    GridHamiltonian h_full(prep.full_spec, cfg.grid());
    SplitOperatorStepper stepper(h_full, cfg.dt);
    WaveFunction psi = prep.initial;

    const double e0 = h_full.energy_expectation(psi);
    double max_norm_drift = 0.0;
    double max_energy_drift = 0.0;
    bool unitary = true;

    for (long s = 0; s <= cfg.n_steps; ++s) {
        double t = s * cfg.dt;
        auto res = engine.observe(s, t, psi);
        on_row(s, res.row);
        if (arm_trigger && res.triggered) {
            WaveFunction survivor = on_trigger(s, res);
            psi = std::move(survivor);
            engine.reset_history();
            unitary = false;
        }
        if (cfg.guard_stride > 0 && s % cfg.guard_stride == 0) {
            check_boundary_guard(psi, cfg.guard_tol, 0.05, t);
            double nd = std::fabs(norm(psi) - 1.0);
            if (nd > max_norm_drift) max_norm_drift = nd;
            if (unitary) {
                double ed = std::fabs(h_full.energy_expectation(psi) - e0) /
                            std::max(std::fabs(e0), 1e-300);
                if (ed > max_energy_drift) max_energy_drift = ed;
            }
        }
        if (s < cfg.n_steps) stepper.step(psi);
    }
    out.final_decomp = decompose(psi, projector, cfg.collapse.p_min,
                                 cfg.n_steps * cfg.dt);
    out.norm_drift = max_norm_drift;
    out.energy_drift = max_energy_drift;
    out.bound_energy = prep.bound.energy;
}

}  // namespace

void ScatteringConfig::validate() const {
    particles.validate();
    potentials.v_bc.validate(axis_r.dx);
    potentials.v_ab.validate(std::min(axis_big_r.dx, axis_r.dx));
    potentials.v_ac.validate(std::min(axis_big_r.dx, axis_r.dx));
    collapse.validate();
    readout.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("scattering: dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("scattering: n_steps must be >= 1");
    if (log_stride < 1) throw std::invalid_argument("scattering: log_stride must be >= 1");
    if (!(hbar > 0.0)) throw std::invalid_argument("scattering: hbar must be positive");
}

ScatteringResult run_scattering(const ScatteringConfig& cfg, RandomStream* stream) {
    Prepared prep = prepare(cfg);
    BoundProjector projector(prep.bound.phi);

    CollapseConfig engine_cfg = cfg.collapse;
    const bool armed = cfg.mode == RunMode::pqt && engine_cfg.epsilon > 0.0;
    CollapseEngine engine(projector, prep.full_spec, cfg.grid(), engine_cfg, cfg.dt);

    ScatteringResult out;
    drive(
        cfg, prep, projector, engine, armed,
        [&](long s, const ChannelLogRow& row) {
            if (s % cfg.log_stride == 0) out.log.push_back(row);
        },
        [&](long, CollapseEngine::StepResult& res) {
            if (stream == nullptr)
                throw std::logic_error("scattering: collapse fired without a stream");
            auto [survivor, ev] = collapse_apply(res.decomp, stream->uniform());
            ev.f_a = res.row.f_a;
            ev.f_b = res.row.f_b;
            ev.fired_a = res.decision.fired_a;
            ev.fired_b = res.decision.fired_b;
            out.event = ev;
            if (!out.log.empty() && out.log.back().t == res.row.t) {
                out.log.back().triggered = true;
                out.log.back().outcome = ev.outcome;
            }
            return survivor;
        },
        out);
    return out;
}

ScatteringTrace precompute_scattering(const ScatteringConfig& cfg) {
    Prepared prep = prepare(cfg);
    BoundProjector projector(prep.bound.phi);

    // Engine with the trigger disarmed (epsilon 0 never fires) records
    // the fidelity curves; trigger_on_trace replays the check per
    // epsilon.
    CollapseConfig record_cfg = cfg.collapse;
    record_cfg.epsilon = 0.0;
    CollapseEngine engine(projector, prep.full_spec, cfg.grid(), record_cfg, cfg.dt);

    ScatteringTrace trace;
    trace.dt = cfg.dt;
    trace.rows.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
    ScatteringResult tmp;
    drive(
        cfg, prep, projector, engine, false,
        [&](long s, const ChannelLogRow& row) {
            trace.rows.push_back(row);
            if (trace.gate_step < 0 && engine.interaction_started()) trace.gate_step = s;
        },
        [&](long, CollapseEngine::StepResult&) { return prep.initial; }, tmp);
    trace.final_unitary = tmp.final_decomp;
    trace.bound_energy = tmp.bound_energy;
    trace.norm_drift = tmp.norm_drift;
    trace.energy_drift = tmp.energy_drift;
    return trace;
}

std::optional<std::pair<long, ChannelLogRow>> trigger_on_trace(
    const ScatteringTrace& trace, const CollapseConfig& collapse) {
    collapse.validate();
    if (trace.gate_step < 0) return std::nullopt;
    for (std::size_t s = static_cast<std::size_t>(trace.gate_step);
         s < trace.rows.size(); ++s) {
        if (s % static_cast<std::size_t>(collapse.check_stride) != 0) continue;
        const ChannelLogRow& row = trace.rows[s];
        TriggerDecision d = collapse_check(row.f_a, row.f_b, collapse, true);
        if (d.fired()) return std::make_pair(static_cast<long>(s), row);
    }
    return std::nullopt;
}

TwoModeState two_mode_state(const ChannelDecomposition& decomp) {
    return {cplx(decomp.c_a, 0.0), cplx(decomp.c_b, 0.0)};
}

TwoModeState two_mode_state(char outcome) {
    if (outcome == 'A') return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    if (outcome == 'B') return {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    throw std::invalid_argument("two_mode_state: outcome must be 'A' or 'B'");
}

ScatteringEnsembleResult run_scattering_ensemble(const ScatteringConfig& cfg,
                                                 const EnsembleSpec& spec) {
    ScatteringEnsembleResult out;
    out.trace = precompute_scattering(cfg);
    if (cfg.mode == RunMode::pqt)
        out.trigger = trigger_on_trace(out.trace, cfg.collapse);

    const TwoModeState unitary_state = two_mode_state(out.trace.final_unitary);
    std::vector<std::size_t> detections(spec.n_trajectories);
    out.records = run_ensemble(spec, [&](std::size_t i, RandomStream& stream) {
        TrajectoryRecord rec;
        rec.index = i;
        TwoModeState state = unitary_state;
        if (out.trigger) {
            const ChannelLogRow& row = out.trigger->second;
            double u = stream.uniform();
            rec.outcome = u < row.ca2 ? "A" : "B";
            rec.event_time = row.t;
            rec.p_a = row.ca2;
            rec.p_b = row.cb2;
            state = two_mode_state(rec.outcome[0]);
        } else {
            rec.outcome = "superposition";
            rec.p_a = out.trace.final_unitary.c_a * out.trace.final_unitary.c_a;
            rec.p_b = out.trace.final_unitary.c_b * out.trace.final_unitary.c_b;
        }
        std::size_t bin = sample_detection(state, cfg.readout, stream);
        rec.diagnostics["detection_bin"] = static_cast<double>(bin);
        detections[i] = bin;
        return rec;
    });
    out.detections = std::move(detections);
    return out;
}

}  // namespace pqt
