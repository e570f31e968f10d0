#include "pqt/execute.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "pqt/csv.hpp"
#include "pqt/epsilon_scan.hpp"
#include "pqt/manifest.hpp"
#include "pqt/svg.hpp"

namespace pqt {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fd(double v) { return csv::format(v); }
std::string fi(long v) { return csv::format(static_cast<std::int64_t>(v)); }

void write_stats(const std::filesystem::path& out_dir, const ordered_json& doc) {
    std::ofstream out(out_dir / "stats.json", std::ios::binary);
    if (!out) throw std::runtime_error("execute: cannot write stats.json");
    out << doc.dump(2) << '\n';
}

ordered_json stats_outcomes(const EnsembleStats& stats) {
    ordered_json arr = ordered_json::array();
    for (const auto& o : stats.outcomes) {
        arr.push_back({{"label", o.label},
                       {"count", o.count},
                       {"frequency", o.frequency.center},
                       {"wilson_low", o.frequency.low},
                       {"wilson_high", o.frequency.high}});
    }
    return arr;
}

void write_channel_log(const std::filesystem::path& out_dir,
                       const std::vector<ChannelLogRow>& rows, int stride) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i % static_cast<std::size_t>(stride) != 0) continue;
        const ChannelLogRow& r = rows[i];
        out.push_back({fd(r.t), fd(r.ca2), fd(r.cb2), fd(r.f_a), fd(r.f_b), fd(r.e_int_a),
                       fd(r.e_int_b), r.triggered ? "1" : "0", std::string(1, r.outcome)});
    }
    csv::write(out_dir / "channel_log.csv",
               {"t", "cA2", "cB2", "F_A", "F_B", "E_int_A", "E_int_B", "triggered",
                "outcome"},
               out);
}

void run_scattering_outputs(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    EnsembleSpec spec{cfg.trajectories, cfg.seed, cfg.threads};
    ScatteringEnsembleResult res = run_scattering_ensemble(cfg.scattering, spec);

    if (cfg.output.csv) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& rec : res.records) {
            rows.push_back({fi(static_cast<long>(rec.index)), rec.outcome,
                            rec.event_time ? fd(*rec.event_time) : "",
                            fd(rec.p_a), fd(rec.p_b),
                            fd(rec.diagnostics.at("detection_bin"))});
        }
        csv::write(out_dir / "trajectories.csv",
                   {"traj", "outcome", "t_collapse", "cA2", "cB2", "detection_bin"},
                   rows);

        // Readout curve: exact ensemble-mean fringe for oqt, the
        // normalized detection histogram for pqt.
        std::vector<double> intensity(cfg.scattering.readout.n_bins, 0.0);
        if (cfg.mode == RunMode::oqt || !res.trigger) {
            intensity = fringe_profile(two_mode_state(res.trace.final_unitary),
                                       cfg.scattering.readout);
        } else {
            for (std::size_t b : res.detections) intensity[b] += 1.0;
            for (double& v : intensity) v /= static_cast<double>(res.detections.size());
        }
        std::vector<std::vector<std::string>> curve;
        for (std::size_t b = 0; b < intensity.size(); ++b)
            curve.push_back({fi(static_cast<long>(b)), fd(intensity[b])});
        csv::write(out_dir / "curves.csv", {"bin", "intensity"}, curve);

        if (cfg.output.channel_log)
            write_channel_log(out_dir, res.trace.rows, cfg.scattering.log_stride);
    }

    EnsembleStats stats = summarize(res.records);
    RandomStream boot = derive_stream(cfg.seed, cfg.trajectories + 1);
    VisibilityEstimate vis =
        visibility_from_detections(res.detections, cfg.scattering.readout, boot);
    double vis_exact = visibility(two_mode_state(res.trace.final_unitary));

    ordered_json doc;
    doc["experiment"] = "scattering";
    doc["mode"] = mode_name(cfg.mode);
    doc["n_trajectories"] = cfg.trajectories;
    doc["outcomes"] = stats_outcomes(stats);
    doc["bound_energy"] = res.trace.bound_energy;
    doc["norm_drift"] = res.trace.norm_drift;
    doc["energy_drift"] = res.trace.energy_drift;
    doc["final_unitary"] = {{"cA2", res.trace.final_unitary.c_a * res.trace.final_unitary.c_a},
                            {"cB2", res.trace.final_unitary.c_b * res.trace.final_unitary.c_b}};
    if (res.trigger) {
        doc["trigger"] = {{"step", res.trigger->first},
                          {"t", res.trigger->second.t},
                          {"cA2", res.trigger->second.ca2},
                          {"cB2", res.trigger->second.cb2}};
    } else {
        doc["trigger"] = nullptr;
    }
    doc["visibility_unitary_exact"] = vis_exact;
    doc["visibility_detection"] = {{"value", vis.value},
                                   {"bootstrap_se", vis.bootstrap_se},
                                   {"n", vis.n}};
    write_stats(out_dir, doc);
}

void run_decay_outputs(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    FriedrichsModel model(cfg.decay);
    const bool stochastic = cfg.mode == RunMode::pqt && cfg.collapse.epsilon > 0.0;

    SurvivalCurve curve;
    ordered_json doc;
    doc["experiment"] = "decay";
    doc["mode"] = mode_name(cfg.mode);
    doc["golden_rule_rate"] = model.golden_rule_rate();

    if (stochastic) {
        EnsembleSpec spec{cfg.trajectories, cfg.seed, cfg.threads};
        DecayEnsembleResult res = run_decay_ensemble(model, spec);
        curve = res.survival;
        if (cfg.output.csv) {
            std::vector<std::vector<std::string>> rows;
            for (const auto& rec : res.records)
                rows.push_back({fi(static_cast<long>(rec.index)), rec.outcome,
                                rec.event_time ? fd(*rec.event_time) : ""});
            csv::write(out_dir / "trajectories.csv", {"traj", "outcome", "t_decay"}, rows);
        }
        EnsembleStats stats = summarize(res.records);
        doc["n_trajectories"] = cfg.trajectories;
        doc["outcomes"] = stats_outcomes(stats);
        doc["segment"] = {{"t_trigger", res.segment.t_trigger},
                          {"p_undecayed", res.segment.p_undecayed}};
        if (curve.t.size() >= 2 && curve.p.back() > 0.0) {
            ExponentialFit fit = fit_exponential(curve, curve.t.front(), curve.t.back());
            double worst = 0.0;
            for (double r : fit.relative_residuals) worst = std::max(worst, r);
            doc["fit"] = {{"rate", fit.rate},
                          {"window", {curve.t.front(), curve.t.back()}},
                          {"max_relative_residual", worst}};
        }
    } else {
        // oqt, and the Everett limit (pqt, epsilon 0): purely unitary.
        curve = run_decay_oqt(model);
        ExponentialFit fit = fit_exponential(curve, 0.0, cfg.decay.t_max / 16.0);
        auto t_star = deviation_onset(curve, fit, 0.05);
        double worst = 0.0;
        for (double r : fit.relative_residuals) worst = std::max(worst, r);
        doc["fit"] = {{"rate", fit.rate},
                      {"window", {0.0, cfg.decay.t_max / 16.0}},
                      {"max_relative_residual", worst}};
        doc["t_star"] = t_star ? ordered_json(*t_star) : ordered_json(nullptr);
    }

    if (cfg.output.csv) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < curve.t.size(); ++i)
            rows.push_back({fd(curve.t[i]), fd(curve.p[i])});
        csv::write(out_dir / "curves.csv", {"t", "p_survival"}, rows);
    }
    write_stats(out_dir, doc);
}

void run_plate_outputs(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    PlateConfig plate = cfg.plate.realize(cfg.hbar);
    std::vector<double> p = plate_probabilities(plate);

    EnsembleSpec spec{cfg.trajectories, cfg.seed, cfg.threads};
    std::vector<std::size_t> counts(p.size() + 1, 0);  // last bucket: none
    auto records = run_ensemble(spec, [&](std::size_t i, RandomStream& stream) {
        // Categorical draw over the precomputed site probabilities;
        // identical to run_plate, which recomputes them per call.
        double u = stream.uniform();
        double acc = 0.0;
        TrajectoryRecord rec;
        rec.index = i;
        rec.outcome = "none";
        for (std::size_t c = 0; c < p.size(); ++c) {
            acc += p[c];
            if (u < acc) {
                rec.outcome = "site_" + std::to_string(c);
                rec.diagnostics["site"] = static_cast<double>(c);
                break;
            }
        }
        return rec;
    });
    for (const auto& rec : records) {
        auto it = rec.diagnostics.find("site");
        if (it == rec.diagnostics.end()) ++counts.back();
        else ++counts[static_cast<std::size_t>(it->second)];
    }

    if (cfg.output.csv) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& rec : records) {
            auto it = rec.diagnostics.find("site");
            rows.push_back({fi(static_cast<long>(rec.index)),
                            it == rec.diagnostics.end() ? "-1"
                                                        : fi(static_cast<long>(it->second))});
        }
        csv::write(out_dir / "trajectories.csv", {"traj", "site"}, rows);

        std::vector<std::vector<std::string>> curve;
        double p_none = 1.0;
        for (double v : p) p_none -= v;
        for (std::size_t c = 0; c < p.size(); ++c)
            curve.push_back({fi(static_cast<long>(c)), fd(p[c]),
                             fd(static_cast<double>(counts[c]) / cfg.trajectories)});
        curve.push_back({"-1", fd(p_none),
                         fd(static_cast<double>(counts.back()) / cfg.trajectories)});
        csv::write(out_dir / "curves.csv", {"site", "expected_p", "observed_freq"}, curve);
    }

    std::vector<double> expected = p;
    double p_none = 1.0;
    for (double v : p) p_none -= v;
    expected.push_back(std::max(p_none, 0.0));
    ChiSquareResult chi = chi_square_test(counts, expected);

    ordered_json doc;
    doc["experiment"] = "plate";
    doc["mode"] = mode_name(cfg.mode);
    doc["n_trajectories"] = cfg.trajectories;
    doc["expected_p"] = expected;
    ordered_json jcounts = ordered_json::array();
    for (std::size_t c : counts) jcounts.push_back(c);
    doc["counts"] = jcounts;
    doc["chi_square"] = {{"statistic", chi.statistic},
                         {"dof", chi.dof},
                         {"p_value", chi.p_value},
                         {"degenerate_fail", chi.degenerate_fail}};
    write_stats(out_dir, doc);
}

void run_sphere_outputs(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    RandomStream stream = derive_stream(cfg.seed, 0);
    auto events = run_sphere_toy(cfg.sphere, cfg.sphere_horizon, stream);

    if (cfg.output.csv) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const SphereEvent& ev = events[e];
            rows.push_back({fi(static_cast<long>(e)), fd(ev.t),
                            fi(static_cast<long>(ev.i)), fi(static_cast<long>(ev.j)),
                            fd(ev.new_center_i[0]), fd(ev.new_center_i[1]),
                            fd(ev.new_center_i[2]), fd(ev.new_center_j[0]),
                            fd(ev.new_center_j[1]), fd(ev.new_center_j[2])});
        }
        csv::write(out_dir / "trajectories.csv",
                   {"event", "t", "i", "j", "xi", "yi", "zi", "xj", "yj", "zj"}, rows);
    }

    ordered_json doc;
    doc["experiment"] = "sphere_toy";
    doc["n_events"] = events.size();
    doc["first_event_time"] =
        events.empty() ? ordered_json(nullptr) : ordered_json(events.front().t);
    write_stats(out_dir, doc);
}

}  // namespace

void execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    std::string start = utc_timestamp();
    write_manifest(out_dir, cfg, start);  // crash-diagnosable

    switch (cfg.experiment) {
        case ExperimentKind::Scattering: run_scattering_outputs(cfg, out_dir); break;
        case ExperimentKind::Decay: run_decay_outputs(cfg, out_dir); break;
        case ExperimentKind::Plate: run_plate_outputs(cfg, out_dir); break;
        case ExperimentKind::SphereToy: run_sphere_outputs(cfg, out_dir); break;
    }
    if (cfg.output.svg) emit_plots(cfg, out_dir);
    write_manifest(out_dir, cfg, start, utc_timestamp());
}

void execute_scan(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    if (!cfg.scan)
        throw std::invalid_argument("scan: config lacks the epsilon_scan section");
    if (cfg.experiment != ExperimentKind::Scattering &&
        cfg.experiment != ExperimentKind::Decay)
        throw std::invalid_argument("scan: base experiment must be scattering or decay");
    std::filesystem::create_directories(out_dir);
    std::string start = utc_timestamp();
    write_manifest(out_dir, cfg, start);

    EpsilonScanResult res =
        cfg.experiment == ExperimentKind::Scattering
            ? scan_epsilon_scattering(cfg.scattering, cfg.scan->epsilons,
                                      cfg.scan->n_per_point, cfg.seed,
                                      cfg.scan->detect_threshold)
            : scan_epsilon_decay(cfg.decay, cfg.scan->epsilons, cfg.scan->n_per_point,
                                 cfg.seed, cfg.scan->detect_threshold);

    if (cfg.output.csv) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : res.rows)
            rows.push_back({fd(row.epsilon), fi(static_cast<long>(row.n)),
                            fd(row.collapse_fraction),
                            row.mean_collapse_time ? fd(*row.mean_collapse_time) : "",
                            fd(row.observable), fd(row.deviation)});
        csv::write(out_dir / "curves.csv",
                   {"epsilon", "n", "collapse_fraction", "mean_collapse_time",
                    "observable", "deviation"},
                   rows);
    }

    ordered_json doc;
    doc["experiment"] = experiment_name(cfg.experiment);
    doc["scan"] = true;
    doc["oqt_observable"] = res.oqt_observable;
    doc["smallest_detectable_epsilon"] =
        res.smallest_detectable_epsilon ? ordered_json(*res.smallest_detectable_epsilon)
                                        : ordered_json(nullptr);
    write_stats(out_dir, doc);

    if (cfg.output.svg) {
        svg::Series dev{"deviation from oqt", {}, {}, "#1f6feb"};
        for (const auto& row : res.rows) {
            dev.x.push_back(row.epsilon);
            dev.y.push_back(row.deviation);
        }
        svg::PlotSpec spec{"epsilon scan", "epsilon", "deviation", false, {}};
        svg::write(out_dir / "scan.svg", svg::render_line_plot(spec, {dev}));
    }
    write_manifest(out_dir, cfg, start, utc_timestamp());
}

void emit_plots(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    switch (cfg.experiment) {
        case ExperimentKind::Scattering: {
            csv::Table t = csv::read(out_dir / "curves.csv");
            if (t.rows.empty()) throw std::runtime_error("plot: curves.csv has no rows");
            svg::Series s{"readout intensity", t.numeric_column("bin"),
                          t.numeric_column("intensity"), "#1f6feb"};
            svg::PlotSpec spec{"readout fringes (" + mode_name(cfg.mode) + ")",
                               "readout bin", "intensity", false, {}};
            svg::write(out_dir / "fringes.svg", svg::render_line_plot(spec, {s}));
            break;
        }
        case ExperimentKind::Decay: {
            csv::Table t = csv::read(out_dir / "curves.csv");
            if (t.rows.empty()) throw std::runtime_error("plot: curves.csv has no rows");
            std::vector<double> ts = t.numeric_column("t");
            std::vector<double> ps = t.numeric_column("p_survival");
            // Log axis: drop exact zeros from the tail.
            svg::Series s{"P(t) (" + mode_name(cfg.mode) + ")", {}, {}, "#1f6feb"};
            for (std::size_t i = 0; i < ts.size(); ++i)
                if (ps[i] > 0.0) {
                    s.x.push_back(ts[i]);
                    s.y.push_back(ps[i]);
                }
            if (s.x.empty()) throw std::runtime_error("plot: survival curve is all zero");
            std::vector<svg::Series> series{s};

            std::ifstream in(out_dir / "stats.json");
            svg::PlotSpec spec{"survival probability", "t", "P(t)", true, {}};
            if (in) {
                auto doc = nlohmann::json::parse(in, nullptr, false);
                if (!doc.is_discarded() && doc.contains("fit") &&
                    doc["fit"].contains("rate")) {
                    double rate = doc["fit"]["rate"].get<double>();
                    svg::Series fit{"exponential fit", {}, {}, "#b02a2a"};
                    double p0 = s.y.front() > 0.0 ? s.y.front() : 1.0;
                    for (std::size_t i = 0; i < s.x.size(); ++i) {
                        fit.x.push_back(s.x[i]);
                        fit.y.push_back(p0 * std::exp(-rate * (s.x[i] - s.x.front())));
                    }
                    series.push_back(fit);
                }
                if (!doc.is_discarded() && doc.contains("t_star") &&
                    doc["t_star"].is_number())
                    spec.x_markers.push_back(doc["t_star"].get<double>());
            }
            svg::write(out_dir / "survival.svg", svg::render_line_plot(spec, series));
            break;
        }
        case ExperimentKind::Plate: {
            csv::Table t = csv::read(out_dir / "curves.csv");
            if (t.rows.empty()) throw std::runtime_error("plot: curves.csv has no rows");
            std::vector<std::string> labels;
            std::size_t site_col = t.column("site");
            for (const auto& row : t.rows) labels.push_back(row[site_col]);
            svg::PlotSpec spec{"plate site frequencies", "site", "frequency", false, {}};
            svg::write(out_dir / "sites.svg",
                       svg::render_bar_chart(spec, labels,
                                             t.numeric_column("observed_freq")));
            break;
        }
        case ExperimentKind::SphereToy: {
            csv::Table t = csv::read(out_dir / "trajectories.csv");
            if (t.rows.empty()) throw std::runtime_error("plot: no events to plot");
            std::vector<double> ts = t.numeric_column("t");
            svg::Series s{"cumulative contacts", {}, {}, "#1f6feb"};
            for (std::size_t i = 0; i < ts.size(); ++i) {
                s.x.push_back(ts[i]);
                s.y.push_back(static_cast<double>(i + 1));
            }
            svg::PlotSpec spec{"sphere contact events", "t", "events", false, {}};
            svg::write(out_dir / "events.svg", svg::render_line_plot(spec, {s}));
            break;
        }
    }
}

}  // namespace pqt
