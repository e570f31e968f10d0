#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "pqt/config.hpp"
#include "pqt/csv.hpp"
#include "pqt/execute.hpp"
#include "pqt/manifest.hpp"
#include "pqt/svg.hpp"

using namespace pqt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("pqt_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* kSphereConfig = R"({
  "experiment": "sphere_toy",
  "seed": 7,
  "sphere_toy": {
    "spheres": [
      {"center": [0, 0, 0], "radius": 1.0},
      {"center": [6, 0, 0], "radius": 1.0}
    ],
    "growth_rate": 1.0,
    "horizon": 3.0
  }
})";

const char* kDecayOqtConfig = R"({
  "experiment": "decay",
  "mode": "oqt",
  "decay": {
    "e_d": 2.0,
    "n_modes": 256,
    "omega_max": 4.0,
    "coupling": {"family": "constant", "strength": 0.05},
    "dt": 0.05,
    "t_max": 40.0,
    "output_stride": 10
  }
})";

}  // namespace

TEST_CASE("config: defaults are filled for a minimal document") {
    RunConfig cfg = parse_config_text(kSphereConfig);
    CHECK(cfg.experiment == ExperimentKind::SphereToy);
    CHECK(cfg.mode == RunMode::pqt);
    CHECK(cfg.seed == 7);
    CHECK(cfg.trajectories == 1);
    CHECK(cfg.threads == 1);
    CHECK(cfg.hbar == 1.0);
    // Collapse defaults materialize even without a collapse section.
    CHECK(cfg.collapse.epsilon == doctest::Approx(1e-2));
    CHECK(cfg.collapse.window_steps == 64);
    CHECK(cfg.collapse.check_stride == 1);
    CHECK(cfg.output.csv);
    CHECK(cfg.output.svg);
    CHECK_FALSE(cfg.output.channel_log);
    CHECK(cfg.sphere_horizon == doctest::Approx(3.0));
    CHECK(cfg.sphere.spheres.size() == 2);
}

TEST_CASE("config: constraint violations name the offending field") {
    nlohmann::json doc = nlohmann::json::parse(kSphereConfig);
    doc["collapse"] = {{"epsilon", 1.5}};
    CHECK_THROWS_WITH_AS(parse_config_text(doc.dump()),
                         doctest::Contains("collapse.epsilon"), std::invalid_argument);

    doc["collapse"] = {{"epsilon", 0.01}, {"window_steps", 64}, {"check_stride", 3}};
    CHECK_THROWS_WITH_AS(parse_config_text(doc.dump()),
                         doctest::Contains("multiple of check_stride"),
                         std::invalid_argument);
}

TEST_CASE("config: unknown keys are rejected with a suggestion") {
    nlohmann::json doc = nlohmann::json::parse(kSphereConfig);
    doc["colapse"] = {{"epsilon", 0.01}};
    CHECK_THROWS_WITH_AS(parse_config_text(doc.dump()),
                         doctest::Contains("did you mean 'collapse'"),
                         std::invalid_argument);
}

TEST_CASE("config: exactly one experiment section, matching the selector") {
    nlohmann::json doc = nlohmann::json::parse(kSphereConfig);
    doc["decay"] = nlohmann::json::parse(kDecayOqtConfig)["decay"];
    CHECK_THROWS_WITH_AS(parse_config_text(doc.dump()),
                         doctest::Contains("exactly one experiment section"),
                         std::invalid_argument);

    nlohmann::json mismatch = nlohmann::json::parse(kDecayOqtConfig);
    mismatch["experiment"] = "plate";
    CHECK_THROWS_AS(parse_config_text(mismatch.dump()), std::invalid_argument);
}

TEST_CASE("config: epsilon scan list must be sorted and in range") {
    nlohmann::json doc = nlohmann::json::parse(kDecayOqtConfig);
    doc["epsilon_scan"] = {{"epsilons", {0.1, 0.01}}};
    CHECK_THROWS_WITH_AS(parse_config_text(doc.dump()),
                         doctest::Contains("sorted"), std::invalid_argument);
    doc["epsilon_scan"] = {{"epsilons", {0.01, 1.2}}};
    CHECK_THROWS_AS(parse_config_text(doc.dump()), std::invalid_argument);
    doc["epsilon_scan"] = {{"epsilons", {0.0, 0.01, 0.1}}};
    RunConfig cfg = parse_config_text(doc.dump());
    REQUIRE(cfg.scan.has_value());
    CHECK(cfg.scan->epsilons == std::vector<double>{0.0, 0.01, 0.1});
    CHECK(cfg.scan->n_per_point == 1000);
}

TEST_CASE("config: canonical echo re-parses to the same canonical form") {
    RunConfig cfg = parse_config_text(kDecayOqtConfig);
    std::string echo = canonical_config(cfg);
    RunConfig again = parse_config_text(echo);
    CHECK(canonical_config(again) == echo);
}

TEST_CASE("csv: format round-trips doubles exactly") {
    for (double v : {0.0, 1.0, -1.0 / 3.0, 3.141592653589793, 1e-300, 6.02e23,
                     0.1 + 0.2}) {
        CHECK(std::stod(csv::format(v)) == v);
    }
    CHECK(csv::format(static_cast<std::int64_t>(-42)) == "-42");
    CHECK(csv::format(static_cast<std::uint64_t>(18446744073709551615ull)) ==
          "18446744073709551615");
}

TEST_CASE("csv: write/read round trip preserves cells") {
    fs::path dir = fresh_dir("csv");
    fs::path file = dir / "t.csv";
    std::vector<std::string> header{"a", "b"};
    std::vector<std::vector<std::string>> rows{{"1", "0.5"}, {"2", "-3e-4"}};
    csv::write(file, header, rows);
    csv::Table t = csv::read(file);
    CHECK(t.header == header);
    CHECK(t.rows == rows);
    CHECK(t.column("b") == 1);
    CHECK_THROWS(t.column("missing"));
    std::vector<double> b = t.numeric_column("b");
    REQUIRE(b.size() == 2);
    CHECK(b[0] == 0.5);
    CHECK(b[1] == -3e-4);
    // '\n' line ends with a header row.
    std::string raw = slurp(file);
    CHECK(raw == "a,b\n1,0.5\n2,-3e-4\n");
}

TEST_CASE("svg: line plot renders deterministically, validates input") {
    svg::PlotSpec spec;
    spec.title = "survival";
    spec.x_label = "t";
    spec.y_label = "P";
    spec.x_markers = {2.5};
    svg::Series s{"pqt", {0.0, 1.0, 2.0, 3.0}, {1.0, 0.8, 0.6, 0.5}};
    std::string out = svg::render_line_plot(spec, {s});
    CHECK(out.find("<svg") != std::string::npos);
    CHECK(out.find("survival") != std::string::npos);
    CHECK(out == svg::render_line_plot(spec, {s}));

    CHECK_THROWS(svg::render_line_plot(spec, {}));
    svg::PlotSpec logspec = spec;
    logspec.log_y = true;
    svg::Series zero{"z", {0.0, 1.0}, {1.0, 0.0}};
    CHECK_THROWS(svg::render_line_plot(logspec, {zero}));

    std::string bars = svg::render_bar_chart(spec, {"A", "B"}, {0.25, 0.75});
    CHECK(bars.find("<svg") != std::string::npos);
}

TEST_CASE("manifest: hash, version, and config echo") {
    // FNV-1a 64-bit reference vectors.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);

    RunConfig cfg = parse_config_text(kSphereConfig);
    fs::path dir = fresh_dir("manifest");
    write_manifest(dir, cfg, "2026-01-01T00:00:00Z", "2026-01-01T00:00:01Z");
    nlohmann::json doc = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(doc["code_version"] == kCodeVersion);
    CHECK(doc["master_seed"] == 7);
    CHECK(doc["start_time_utc"] == "2026-01-01T00:00:00Z");
    std::string echo = canonical_config(cfg);
    char expect[19];
    std::snprintf(expect, sizeof(expect), "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(echo)));
    CHECK(doc["config_hash_fnv1a64"] == expect);
    CHECK(nlohmann::json::parse(echo) == doc["config"]);
    CHECK(doc["tolerances"]["collapse_epsilon"] == 0.01);
}

TEST_CASE("execute: sphere toy run writes the full output tree") {
    RunConfig cfg = parse_config_text(kSphereConfig);
    fs::path dir = fresh_dir("sphere_run");
    execute_run(cfg, dir);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "stats.json"));
    CHECK(fs::exists(dir / "trajectories.csv"));
    CHECK(fs::exists(dir / "events.svg"));

    // Two unit spheres 6 apart, both growing at rate 1: contact at t = 2.
    nlohmann::json stats = nlohmann::json::parse(slurp(dir / "stats.json"));
    CHECK(stats["experiment"] == "sphere_toy");
    CHECK(stats["first_event_time"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    csv::Table t = csv::read(dir / "trajectories.csv");
    CHECK(t.numeric_column("t").front() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("execute: decay run produces a monotone survival curve") {
    RunConfig cfg = parse_config_text(kDecayOqtConfig);
    fs::path dir = fresh_dir("decay_run");
    execute_run(cfg, dir);
    csv::Table t = csv::read(dir / "curves.csv");
    std::vector<double> ts = t.numeric_column("t");
    std::vector<double> p = t.numeric_column("p_survival");
    REQUIRE(p.size() > 10);
    CHECK(p.front() == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] <= p[i - 1] + 1e-12);
    CHECK(ts.back() == doctest::Approx(40.0).epsilon(1e-9));
    CHECK(fs::exists(dir / "survival.svg"));

    nlohmann::json stats = nlohmann::json::parse(slurp(dir / "stats.json"));
    CHECK(stats["experiment"] == "decay");
    CHECK(stats["mode"] == "oqt");
}

TEST_CASE("execute: reruns are byte-identical outside the manifest wall times") {
    RunConfig cfg = parse_config_text(kDecayOqtConfig);
    fs::path a = fresh_dir("rerun_a");
    fs::path b = fresh_dir("rerun_b");
    execute_run(cfg, a);
    execute_run(cfg, b);
    for (const char* name : {"curves.csv", "stats.json", "survival.svg"}) {
        CHECK(slurp(a / name) == slurp(b / name));
    }
    // Manifests agree after normalizing the timestamps.
    nlohmann::json ma = nlohmann::json::parse(slurp(a / "manifest.json"));
    nlohmann::json mb = nlohmann::json::parse(slurp(b / "manifest.json"));
    ma["start_time_utc"] = mb["start_time_utc"] = "";
    ma["end_time_utc"] = mb["end_time_utc"] = "";
    CHECK(ma == mb);
}

TEST_CASE("execute: scan requires the epsilon_scan section") {
    RunConfig cfg = parse_config_text(kDecayOqtConfig);
    fs::path dir = fresh_dir("scan_missing");
    CHECK_THROWS_WITH_AS(execute_scan(cfg, dir), doctest::Contains("epsilon_scan"),
                         std::invalid_argument);
}

TEST_CASE("config: parse_config reads from a file and reports bad paths") {
    fs::path dir = fresh_dir("cfgfile");
    fs::path file = dir / "run.json";
    std::ofstream(file) << kSphereConfig;
    RunConfig cfg = parse_config(file);
    CHECK(cfg.experiment == ExperimentKind::SphereToy);
    CHECK_THROWS(parse_config(dir / "absent.json"));
}
