#include <cmath>
#include <complex>

#include "doctest.h"
#include "pqt/decay.hpp"
#include "pqt/epsilon_scan.hpp"
#include "pqt/interference.hpp"
#include "pqt/packet.hpp"
#include "pqt/plate.hpp"
#include "pqt/scattering.hpp"
#include "pqt/sphere_toy.hpp"

using namespace pqt;

namespace {

/// Reduced-size scattering setup that still breaks up the pair; cheap
/// enough for unit tests.
ScatteringConfig small_scattering() {
    ScatteringConfig cfg;
    cfg.particles = {1.0, 1.0, 1.0};
    cfg.potentials.v_bc = PotentialTerm::poschl_teller(-2.0, 1.0);
    cfg.potentials.v_ab = PotentialTerm::gaussian_barrier(8.0, 1.0);
    cfg.potentials.v_ac = PotentialTerm::gaussian_barrier(8.0, 1.0);
    cfg.axis_big_r = Axis{128, -32.0, 0.5};
    cfg.axis_r = Axis{128, -24.0, 0.375};
    cfg.x0 = -8.0;
    cfg.p0 = 2.5;
    cfg.sigma = 1.5;
    cfg.dt = 2e-3;
    cfg.n_steps = 3000;
    cfg.collapse.epsilon = 0.05;
    cfg.collapse.window_steps = 512;
    cfg.collapse.check_stride = 16;
    cfg.collapse.p_active = 5e-3;
    cfg.guard_tol = 5e-3;
    cfg.guard_stride = 500;
    return cfg;
}

}  // namespace

TEST_CASE("scattering: decoupled potentials never form a superposition") {
    ScatteringConfig cfg = small_scattering();
    cfg.potentials.v_ab = PotentialTerm::zero();
    cfg.potentials.v_ac = PotentialTerm::zero();
    cfg.n_steps = 1200;
    ScatteringResult res = run_scattering(cfg, nullptr);
    CHECK(!res.event.has_value());
    for (const auto& row : res.log) CHECK(row.cb2 > 1.0 - 1e-10);
}

TEST_CASE("scattering: trace reuse equals per-trajectory runs") {
    ScatteringConfig cfg = small_scattering();
    ScatteringTrace trace = precompute_scattering(cfg);
    auto trig = trigger_on_trace(trace, cfg.collapse);
    REQUIRE(trig.has_value());

    // An honest engine-driven trajectory fires at the same step with the
    // same decomposition.
    RandomStream stream(31, 0);
    RandomStream replica(31, 0);
    ScatteringResult res = run_scattering(cfg, &stream);
    REQUIRE(res.event.has_value());
    CHECK(res.event->t == doctest::Approx(trig->second.t).epsilon(1e-12));
    CHECK(res.event->p_a == doctest::Approx(trig->second.ca2).epsilon(1e-9));
    char expect = replica.uniform() < trig->second.ca2 ? 'A' : 'B';
    CHECK(res.event->outcome == expect);

    // Monotone trigger step in epsilon on the same trace.
    long last_step = trace.rows.size();
    for (double eps : {1e-3, 1e-2, 1e-1}) {
        CollapseConfig col = cfg.collapse;
        col.epsilon = eps;
        auto t = trigger_on_trace(trace, col);
        if (t) {
            CHECK(t->first <= last_step);
            last_step = t->first;
        }
    }

    // Everett limit: epsilon = 0 never fires.
    CollapseConfig everett = cfg.collapse;
    everett.epsilon = 0.0;
    CHECK(!trigger_on_trace(trace, everett).has_value());
}

TEST_CASE("scattering ensemble: Born statistics against the trace") {
    ScatteringConfig cfg = small_scattering();
    EnsembleSpec spec;
    spec.n_trajectories = 2000;
    spec.master_seed = 77;
    spec.threads = 2;
    ScatteringEnsembleResult ens = run_scattering_ensemble(cfg, spec);
    REQUIRE(ens.trigger.has_value());
    double p = ens.trigger->second.ca2;

    std::size_t a_count = 0;
    for (const auto& rec : ens.records)
        if (rec.outcome == "A") ++a_count;
    double freq = static_cast<double>(a_count) / ens.records.size();
    CHECK(std::fabs(freq - p) < 4.0 * std::sqrt(p * (1.0 - p) / ens.records.size()));

    // oqt mode consumes no collapse draws and never collapses.
    ScatteringConfig oqt_cfg = cfg;
    oqt_cfg.mode = RunMode::oqt;
    EnsembleSpec one;
    one.n_trajectories = 3;
    one.master_seed = 77;
    ScatteringEnsembleResult oqt = run_scattering_ensemble(oqt_cfg, one);
    for (const auto& rec : oqt.records) CHECK(rec.outcome == "superposition");
}

TEST_CASE("interference visibility") {
    ReadoutSpec spec;
    spec.n_bins = 256;
    spec.harmonic = 4;

    // Equal two-mode superposition: V = 1 within 2%.
    TwoModeState equal{std::sqrt(0.5), std::sqrt(0.5)};
    auto profile = fringe_profile(equal, spec);
    CHECK(visibility_from_profile(profile, spec.harmonic) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(visibility(equal) == doctest::Approx(1.0).epsilon(1e-12));

    // Analytic two-beam value for unequal amplitudes.
    TwoModeState lop{std::sqrt(0.2), std::sqrt(0.8)};
    double expected = 2.0 * std::sqrt(0.2 * 0.8);
    CHECK(visibility(lop) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(visibility_from_profile(fringe_profile(lop, spec), spec.harmonic) ==
          doctest::Approx(expected).epsilon(0.02));

    // Collapsed (single-channel) states carry no fringes.
    TwoModeState pure_a{1.0, 0.0};
    CHECK(visibility_from_profile(fringe_profile(pure_a, spec), spec.harmonic) < 1e-12);

    // Ensemble of collapsed states: visibility consistent with zero.
    std::vector<TwoModeState> members;
    RandomStream rng(5, 0);
    for (int i = 0; i < 400; ++i)
        members.push_back(rng.uniform() < 0.5 ? TwoModeState{1.0, 0.0}
                                              : TwoModeState{0.0, 1.0});
    CHECK(ensemble_mean_visibility(members, spec) < 1e-12);

    // Detection sampling on the equal superposition recovers V ~ 1.
    std::vector<std::size_t> detections;
    RandomStream det_rng(6, 0);
    for (int i = 0; i < 4000; ++i)
        detections.push_back(sample_detection(equal, spec, det_rng));
    RandomStream boot(6, 1);
    VisibilityEstimate est = visibility_from_detections(detections, spec, boot);
    CHECK(std::fabs(est.value - 1.0) < 4.0 * est.bootstrap_se + 0.05);

    CHECK_THROWS_WITH(visibility_from_profile({}, spec.harmonic),
                      doctest::Contains("profile too short"));
    ReadoutSpec bad;
    bad.n_bins = 8;
    bad.harmonic = 4;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("decay: decoupled level, golden rule, segment law") {
    DecayConfig cfg;
    cfg.e_d = 2.0;
    cfg.n_modes = 256;
    cfg.omega_max = 4.0;
    cfg.strength = 0.0;
    cfg.dt = 0.05;
    cfg.t_max = 50.0;
    cfg.collapse.epsilon = 1e-3;
    cfg.collapse.window_steps = 100;
    cfg.collapse.check_stride = 10;

    // Zero coupling: P = 1 for all t.
    FriedrichsModel idle(cfg);
    SurvivalCurve flat = run_decay_oqt(idle);
    for (double p : flat.p) CHECK(p == doctest::Approx(1.0).epsilon(1e-12));

    // Weak coupling: fitted rate within 10% of the golden-rule rate.
    cfg.strength = 0.05;
    FriedrichsModel model(cfg);
    SurvivalCurve curve = run_decay_oqt(model);
    ExponentialFit fit = fit_exponential(curve, 2.0, 40.0);
    CHECK(fit.rate == doctest::Approx(model.golden_rule_rate()).epsilon(0.10));

    // Curve is monotone non-increasing within stride tolerance.
    for (std::size_t i = 1; i < curve.p.size(); ++i)
        CHECK(curve.p[i] <= curve.p[i - 1] + 1e-9);

    // pqt segments replay exactly: ensemble survival is geometric.
    DecaySegment seg = precompute_decay_segment(model);
    CHECK(seg.t_trigger > 0.0);
    CHECK(seg.p_undecayed > 0.0);
    EnsembleSpec spec;
    spec.n_trajectories = 5000;
    spec.master_seed = 13;
    spec.threads = 2;
    DecayEnsembleResult ens = run_decay_ensemble(model, spec);
    for (std::size_t k = 0; k < ens.survival.t.size(); ++k) {
        double expected = std::pow(seg.p_undecayed, static_cast<double>(k));
        double se = std::sqrt(expected * (1.0 - expected) / spec.n_trajectories);
        CHECK(std::fabs(ens.survival.p[k] - expected) <= 4.0 * se + 1e-12);
    }

    // Recurrence guard: t_max beyond the Poincare horizon is rejected.
    DecayConfig bad = cfg;
    bad.t_max = 1000.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("fit_exponential and deviation onset") {
    SurvivalCurve exact;
    double tau = 10.0;
    for (int i = 0; i <= 200; ++i) {
        double t = 0.5 * i;
        exact.t.push_back(t);
        exact.p.push_back(std::exp(-t / tau));
    }
    ExponentialFit fit = fit_exponential(exact, 0.0, 100.0);
    CHECK(std::fabs(fit.rate - 1.0 / tau) < 1e-10);
    for (double r : fit.relative_residuals) CHECK(r < 1e-12);
    CHECK(!deviation_onset(exact, fit, 0.05).has_value());

    // A curve flattening to a plateau departs beyond the fit window.
    SurvivalCurve plateau = exact;
    for (std::size_t i = 0; i < plateau.t.size(); ++i)
        plateau.p[i] = std::max(plateau.p[i], 0.5);
    ExponentialFit early = fit_exponential(plateau, 0.0, 5.0);
    auto onset = deviation_onset(plateau, early, 0.05);
    REQUIRE(onset.has_value());
    CHECK(*onset > 5.0);

    SurvivalCurve with_zero = exact;
    with_zero.p[3] = 0.0;
    CHECK_THROWS(fit_exponential(with_zero, 0.0, 100.0));
}

TEST_CASE("plate: localization and categorical statistics") {
    Grid g = Grid::line(512, -8.0, 0.03125);

    // Packet entirely inside cell 1 with eta = 1: that site fires always.
    PlateConfig inside{gaussian_packet(g, 2.0, 0.0, 0.3),
                       {{-6.0, -2.0}, {0.0, 4.0}},
                       1.0};
    auto probs = plate_probabilities(inside);
    CHECK(probs[1] == doctest::Approx(1.0).epsilon(1e-8));
    RandomStream rng(3, 0);
    for (int i = 0; i < 50; ++i) {
        PlateOutcome out = run_plate(inside, rng);
        REQUIRE(out.site.has_value());
        CHECK(*out.site == 1);
    }

    // Symmetric two-cell split: each frequency 0.5 within 4 sigma.
    PlateConfig split{gaussian_packet(g, 0.0, 0.0, 1.0),
                      {{-7.9, 0.0}, {0.0, 7.9}},
                      1.0};
    auto ps = plate_probabilities(split);
    // The shared boundary point lands in one cell, so the split is equal
    // only up to one grid cell of density.
    CHECK(ps[0] == doctest::Approx(0.5).epsilon(0.02));
    CHECK(ps[0] + ps[1] == doctest::Approx(1.0).epsilon(1e-4));
    std::size_t left = 0, fired = 0, n = 10000;
    RandomStream rng2(4, 0);
    for (std::size_t i = 0; i < n; ++i) {
        PlateOutcome out = run_plate(split, rng2);
        if (!out.site.has_value()) continue;  // tail mass outside the cells
        ++fired;
        if (*out.site == 0) ++left;
    }
    CHECK(fired > n * 99 / 100);
    double freq = static_cast<double>(left) / fired;
    CHECK(std::fabs(freq - ps[0]) < 4.0 * std::sqrt(0.25 / n));

    // Partial eta leaves a p_none channel.
    PlateConfig lossy = split;
    lossy.eta = 0.5;
    auto pl = plate_probabilities(lossy);
    CHECK(pl[0] + pl[1] == doctest::Approx(0.5).epsilon(1e-4));

    PlateConfig bad = split;
    bad.eta = 1.5;
    CHECK_THROWS(bad.validate());
    PlateConfig overlap = split;
    overlap.cells = {{-1.0, 1.0}, {0.5, 2.0}};
    CHECK_THROWS(overlap.validate());
}

TEST_CASE("sphere toy: contact times, ordering, relocation symmetry") {
    // Two spheres, zero radii, separation d: first contact at d/(2v).
    SphereToyConfig two;
    two.spheres = {{{0.0, 0.0, 0.0}, 0.0}, {{6.0, 0.0, 0.0}, 0.0}};
    two.growth_rate = 1.5;
    two.r_min = 1e-3;
    RandomStream rng(8, 0);
    auto events = run_sphere_toy(two, 6.0 / (2.0 * 1.5) + 1e-6, rng);
    REQUIRE(!events.empty());
    CHECK(std::fabs(events[0].t - 6.0 / 3.0) < 1e-12);
    CHECK(events[0].radius_at_contact_i == doctest::Approx(3.0).epsilon(1e-12));

    // Three collinear spheres with unequal gaps: closest pair first.
    SphereToyConfig three;
    three.spheres = {{{0.0, 0.0, 0.0}, 0.0},
                     {{2.0, 0.0, 0.0}, 0.0},
                     {{7.0, 0.0, 0.0}, 0.0}};
    three.growth_rate = 1.0;
    three.r_min = 1e-4;
    RandomStream rng2(9, 0);
    auto ev3 = run_sphere_toy(three, 1.01, rng2);
    REQUIRE(!ev3.empty());
    CHECK(ev3[0].i == 0);
    CHECK(ev3[0].j == 1);

    // Uniform relocation: mean displacement from the ball centre is 0.
    RandomStream rng3(10, 0);
    std::array<double, 3> c{1.0, -2.0, 3.0};
    double radius = 2.0;
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    int n = 10000;
    for (int i = 0; i < n; ++i) {
        auto p = sample_in_ball(c, radius, SphereToyConfig::Relocation::Uniform, 0.0,
                                rng3);
        for (int d = 0; d < 3; ++d) mean[d] += p[d] - c[d];
    }
    // Per-axis sd of a uniform ball point is R/sqrt(5).
    double se = radius / std::sqrt(5.0) / std::sqrt(static_cast<double>(n));
    for (int d = 0; d < 3; ++d) CHECK(std::fabs(mean[d] / n) < 4.0 * se);

    // Samples stay inside the ball.
    RandomStream rng4(11, 0);
    for (int i = 0; i < 1000; ++i) {
        auto p = sample_in_ball(c, radius, SphereToyConfig::Relocation::RadialPower,
                                2.0, rng4);
        double d2 = 0.0;
        for (int d = 0; d < 3; ++d) d2 += (p[d] - c[d]) * (p[d] - c[d]);
        CHECK(d2 <= radius * radius * (1.0 + 1e-12));
    }

    SphereToyConfig bad = two;
    bad.growth_rate = -1.0;
    CHECK_THROWS(bad.validate());
    SphereToyConfig touching = two;
    touching.spheres[1].center = {0.5, 0.0, 0.0};
    touching.spheres[0].radius = 1.0;
    CHECK_THROWS(touching.validate());
}

TEST_CASE("epsilon scan: zero row and monotone collapse times") {
    ScatteringConfig cfg = small_scattering();
    EpsilonScanResult scan =
        scan_epsilon_scattering(cfg, {0.0, 1e-2, 1e-1}, 200, 2025, 0.1);
    REQUIRE(scan.rows.size() == 3);
    CHECK(scan.rows[0].epsilon == 0.0);
    CHECK(scan.rows[0].collapse_fraction == 0.0);
    CHECK(scan.rows[0].deviation == 0.0);
    CHECK(!scan.rows[0].mean_collapse_time.has_value());

    // Mean collapse time non-increasing over the firing rows.
    double last = std::numeric_limits<double>::infinity();
    for (const auto& row : scan.rows) {
        if (!row.mean_collapse_time.has_value()) continue;
        CHECK(*row.mean_collapse_time <= last + 1e-12);
        last = *row.mean_collapse_time;
    }
}
