#include "pqt/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pqt/packet.hpp"

namespace pqt {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string& key = it.key();
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
        std::string best;
        std::size_t best_d = std::string::npos;
        for (const auto& cand : allowed) {
            std::size_t d = levenshtein(key, cand);
            if (d < best_d) {
                best_d = d;
                best = cand;
            }
        }
        std::string msg = "unknown key '" + key + "' in " + context;
        if (best_d <= std::max<std::size_t>(2, key.size() / 2))
            msg += "; did you mean '" + best + "'?";
        fail(msg);
    }
}

const json& require(const json& obj, const std::string& key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing required key '" + context + "." + key + "'");
    return *it;
}

double num_at(const json& obj, const std::string& key, const std::string& context,
              std::optional<double> def = std::nullopt) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (def) return *def;
        fail("missing required key '" + context + "." + key + "'");
    }
    if (!it->is_number()) fail("'" + context + "." + key + "' must be a number");
    return it->get<double>();
}

long int_at(const json& obj, const std::string& key, const std::string& context,
            std::optional<long> def = std::nullopt) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (def) return *def;
        fail("missing required key '" + context + "." + key + "'");
    }
    if (!it->is_number_integer()) fail("'" + context + "." + key + "' must be an integer");
    return it->get<long>();
}

bool bool_at(const json& obj, const std::string& key, const std::string& context,
             bool def) {
    auto it = obj.find(key);
    if (it == obj.end()) return def;
    if (!it->is_boolean()) fail("'" + context + "." + key + "' must be a boolean");
    return it->get<bool>();
}

std::string str_at(const json& obj, const std::string& key, const std::string& context,
                   std::optional<std::string> def = std::nullopt) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (def) return *def;
        fail("missing required key '" + context + "." + key + "'");
    }
    if (!it->is_string()) fail("'" + context + "." + key + "' must be a string");
    return it->get<std::string>();
}

CollapseConfig parse_collapse(const json& obj) {
    check_keys(obj, {"epsilon", "window_steps", "p_min", "p_active", "check_stride"},
               "collapse");
    CollapseConfig c;
    c.epsilon = num_at(obj, "epsilon", "collapse", 1e-2);
    c.window_steps = static_cast<int>(int_at(obj, "window_steps", "collapse", 64));
    c.p_min = num_at(obj, "p_min", "collapse", 1e-12);
    c.p_active = num_at(obj, "p_active", "collapse", 1e-6);
    c.check_stride = static_cast<int>(int_at(obj, "check_stride", "collapse", 1));
    if (!(c.epsilon >= 0.0 && c.epsilon < 1.0))
        fail("'collapse.epsilon' must lie in [0,1)");
    try {
        c.validate();
    } catch (const std::exception& e) {
        fail(std::string("collapse section invalid: ") + e.what());
    }
    return c;
}

PotentialTerm parse_potential(const json& obj, const std::string& context) {
    check_keys(obj, {"family", "v0", "width", "alpha"}, context);
    std::string family = str_at(obj, "family", context, std::string("zero"));
    double v0 = num_at(obj, "v0", context, 0.0);
    double width = num_at(obj, "width", context, 1.0);
    double alpha = num_at(obj, "alpha", context, 1.0);
    try {
        return PotentialTerm::parse(family, v0, width, alpha);
    } catch (const std::exception& e) {
        fail(context + ": " + e.what());
    }
}

Axis parse_axis(const json& obj, const std::string& context, const std::string& suffix) {
    Axis a;
    a.n = static_cast<int>(int_at(obj, "n" + suffix, context));
    a.x_min = num_at(obj, "x_min" + suffix, context);
    a.dx = num_at(obj, "dx" + suffix, context);
    return a;
}

ReadoutSpec parse_readout(const json& obj) {
    check_keys(obj, {"bins", "harmonic"}, "readout");
    ReadoutSpec r;
    r.n_bins = static_cast<std::size_t>(int_at(obj, "bins", "readout", 256));
    r.harmonic = static_cast<int>(int_at(obj, "harmonic", "readout", 4));
    return r;
}

ScatteringConfig parse_scattering(const json& obj) {
    check_keys(obj,
               {"masses", "potentials", "grid", "packet", "dt", "n_steps", "log_stride",
                "guard", "readout"},
               "scattering");
    ScatteringConfig cfg;
    const json& masses = require(obj, "masses", "scattering");
    check_keys(masses, {"m_a", "m_b", "m_c"}, "scattering.masses");
    cfg.particles.m_a = num_at(masses, "m_a", "scattering.masses");
    cfg.particles.m_b = num_at(masses, "m_b", "scattering.masses");
    cfg.particles.m_c = num_at(masses, "m_c", "scattering.masses");

    const json& pots = require(obj, "potentials", "scattering");
    check_keys(pots, {"bc", "ab", "ac"}, "scattering.potentials");
    cfg.potentials.v_bc = parse_potential(require(pots, "bc", "scattering.potentials"),
                                          "scattering.potentials.bc");
    if (pots.contains("ab"))
        cfg.potentials.v_ab = parse_potential(pots["ab"], "scattering.potentials.ab");
    if (pots.contains("ac"))
        cfg.potentials.v_ac = parse_potential(pots["ac"], "scattering.potentials.ac");

    const json& grid = require(obj, "grid", "scattering");
    check_keys(grid, {"n_R", "x_min_R", "dx_R", "n_r", "x_min_r", "dx_r"},
               "scattering.grid");
    cfg.axis_big_r = parse_axis(grid, "scattering.grid", "_R");
    cfg.axis_r = parse_axis(grid, "scattering.grid", "_r");

    const json& packet = require(obj, "packet", "scattering");
    check_keys(packet, {"x0", "p0", "sigma"}, "scattering.packet");
    cfg.x0 = num_at(packet, "x0", "scattering.packet");
    cfg.p0 = num_at(packet, "p0", "scattering.packet");
    cfg.sigma = num_at(packet, "sigma", "scattering.packet");

    cfg.dt = num_at(obj, "dt", "scattering");
    cfg.n_steps = int_at(obj, "n_steps", "scattering");
    cfg.log_stride = static_cast<int>(int_at(obj, "log_stride", "scattering", 1));
    if (obj.contains("guard")) {
        check_keys(obj["guard"], {"tol", "stride"}, "scattering.guard");
        cfg.guard_tol = num_at(obj["guard"], "tol", "scattering.guard", 1e-6);
        cfg.guard_stride =
            static_cast<int>(int_at(obj["guard"], "stride", "scattering.guard", 200));
    }
    if (obj.contains("readout")) cfg.readout = parse_readout(obj["readout"]);
    return cfg;
}

DecayConfig parse_decay(const json& obj) {
    check_keys(obj, {"e_d", "n_modes", "omega_max", "coupling", "dt", "t_max",
                     "output_stride"},
               "decay");
    DecayConfig cfg;
    cfg.e_d = num_at(obj, "e_d", "decay");
    cfg.n_modes = static_cast<int>(int_at(obj, "n_modes", "decay", 512));
    cfg.omega_max = num_at(obj, "omega_max", "decay");
    const json& coup = require(obj, "coupling", "decay");
    check_keys(coup, {"family", "strength"}, "decay.coupling");
    std::string family = str_at(coup, "family", "decay.coupling", std::string("constant"));
    if (family == "constant")
        cfg.coupling = DecayConfig::CouplingFamily::Constant;
    else if (family == "semicircle")
        cfg.coupling = DecayConfig::CouplingFamily::Semicircle;
    else
        fail("'decay.coupling.family' must be 'constant' or 'semicircle'");
    cfg.strength = num_at(coup, "strength", "decay.coupling");
    cfg.dt = num_at(obj, "dt", "decay");
    cfg.t_max = num_at(obj, "t_max", "decay");
    cfg.output_stride = static_cast<int>(int_at(obj, "output_stride", "decay", 10));
    return cfg;
}

PlateSettings parse_plate(const json& obj) {
    check_keys(obj, {"grid", "packet", "cells", "eta"}, "plate");
    PlateSettings p;
    const json& grid = require(obj, "grid", "plate");
    check_keys(grid, {"n", "x_min", "dx"}, "plate.grid");
    p.axis = parse_axis(grid, "plate.grid", "");
    const json& packet = require(obj, "packet", "plate");
    check_keys(packet, {"x0", "p0", "sigma"}, "plate.packet");
    p.x0 = num_at(packet, "x0", "plate.packet");
    p.p0 = num_at(packet, "p0", "plate.packet");
    p.sigma = num_at(packet, "sigma", "plate.packet");
    const json& cells = require(obj, "cells", "plate");
    if (!cells.is_array() || cells.empty()) fail("'plate.cells' must be a nonempty array");
    for (const auto& c : cells) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
            fail("'plate.cells' entries must be [lo, hi] number pairs");
        p.cells.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    p.eta = num_at(obj, "eta", "plate", 1.0);
    return p;
}

std::pair<SphereToyConfig, double> parse_sphere(const json& obj) {
    check_keys(obj, {"spheres", "growth_rate", "r_min", "relocation", "horizon"},
               "sphere_toy");
    SphereToyConfig cfg;
    const json& spheres = require(obj, "spheres", "sphere_toy");
    if (!spheres.is_array() || spheres.size() < 2)
        fail("'sphere_toy.spheres' must list at least two spheres");
    for (const auto& s : spheres) {
        check_keys(s, {"center", "radius"}, "sphere_toy.spheres[]");
        const json& c = require(s, "center", "sphere_toy.spheres[]");
        if (!c.is_array() || c.size() != 3)
            fail("'sphere_toy.spheres[].center' must be [x, y, z]");
        SphereToyConfig::Sphere sp;
        sp.center = {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()};
        sp.radius = num_at(s, "radius", "sphere_toy.spheres[]", 0.0);
        cfg.spheres.push_back(sp);
    }
    cfg.growth_rate = num_at(obj, "growth_rate", "sphere_toy", 1.0);
    cfg.r_min = num_at(obj, "r_min", "sphere_toy", 1e-3);
    if (obj.contains("relocation")) {
        check_keys(obj["relocation"], {"kind", "exponent"}, "sphere_toy.relocation");
        std::string kind =
            str_at(obj["relocation"], "kind", "sphere_toy.relocation", std::string("uniform"));
        if (kind == "uniform")
            cfg.relocation = SphereToyConfig::Relocation::Uniform;
        else if (kind == "radial_power")
            cfg.relocation = SphereToyConfig::Relocation::RadialPower;
        else
            fail("'sphere_toy.relocation.kind' must be 'uniform' or 'radial_power'");
        cfg.exponent = num_at(obj["relocation"], "exponent", "sphere_toy.relocation", 0.0);
    }
    double horizon = num_at(obj, "horizon", "sphere_toy", 10.0);
    return {cfg, horizon};
}

EpsilonScanSettings parse_scan(const json& obj) {
    check_keys(obj, {"epsilons", "n_per_point", "detect_threshold"}, "epsilon_scan");
    EpsilonScanSettings s;
    const json& eps = require(obj, "epsilons", "epsilon_scan");
    if (!eps.is_array() || eps.empty())
        fail("'epsilon_scan.epsilons' must be a nonempty array");
    for (const auto& e : eps) {
        if (!e.is_number()) fail("'epsilon_scan.epsilons' must contain numbers");
        s.epsilons.push_back(e.get<double>());
    }
    if (!std::is_sorted(s.epsilons.begin(), s.epsilons.end()))
        fail("'epsilon_scan.epsilons' must be sorted ascending");
    for (double e : s.epsilons)
        if (!(e >= 0.0 && e < 1.0)) fail("'epsilon_scan.epsilons' entries must lie in [0,1)");
    s.n_per_point = static_cast<std::size_t>(int_at(obj, "n_per_point", "epsilon_scan", 1000));
    s.detect_threshold = num_at(obj, "detect_threshold", "epsilon_scan", 0.1);
    return s;
}

}  // namespace

std::string experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Scattering: return "scattering";
        case ExperimentKind::Decay: return "decay";
        case ExperimentKind::Plate: return "plate";
        case ExperimentKind::SphereToy: return "sphere_toy";
    }
    throw std::logic_error("unknown experiment kind");
}

PlateConfig PlateSettings::realize(double hbar) const {
    Grid grid = Grid::line(axis.n, axis.x_min, axis.dx);
    PlateConfig cfg{gaussian_packet(grid, x0, p0, sigma, hbar), {}, eta};
    cfg.cells = cells;
    return cfg;
}

void RunConfig::validate() const {
    if (mode == RunMode::pqt) collapse.validate();
    if (trajectories < 1) fail("'trajectories' must be >= 1");
    if (threads < 1) fail("'threads' must be >= 1");
    if (!(hbar > 0.0)) fail("'units.hbar' must be positive");
    switch (experiment) {
        case ExperimentKind::Scattering: scattering.validate(); break;
        case ExperimentKind::Decay: decay.validate(); break;
        case ExperimentKind::Plate: plate.realize(hbar).validate(); break;
        case ExperimentKind::SphereToy:
            sphere.validate();
            if (!(sphere_horizon > 0.0)) fail("'sphere_toy.horizon' must be positive");
            break;
    }
}

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) fail("top level must be a JSON object");
    check_keys(doc,
               {"experiment", "mode", "seed", "trajectories", "threads", "units",
                "collapse", "output", "scattering", "decay", "plate", "sphere_toy",
                "epsilon_scan"},
               "top level");

    RunConfig cfg;
    std::string exp = str_at(doc, "experiment", "top level");
    if (exp == "scattering") cfg.experiment = ExperimentKind::Scattering;
    else if (exp == "decay") cfg.experiment = ExperimentKind::Decay;
    else if (exp == "plate") cfg.experiment = ExperimentKind::Plate;
    else if (exp == "sphere_toy") cfg.experiment = ExperimentKind::SphereToy;
    else fail("'experiment' must be scattering|decay|plate|sphere_toy");

    int sections = static_cast<int>(doc.contains("scattering")) +
                   static_cast<int>(doc.contains("decay")) +
                   static_cast<int>(doc.contains("plate")) +
                   static_cast<int>(doc.contains("sphere_toy"));
    if (sections != 1) fail("exactly one experiment section must be present");
    if (!doc.contains(exp))
        fail("experiment is '" + exp + "' but its section is missing");

    try {
        cfg.mode = parse_mode(str_at(doc, "mode", "top level", std::string("pqt")));
    } catch (const std::exception& e) {
        fail(std::string("'mode': ") + e.what());
    }
    long seed = int_at(doc, "seed", "top level", 1);
    if (seed < 0) fail("'seed' must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    long traj = int_at(doc, "trajectories", "top level", 1);
    if (traj < 1) fail("'trajectories' must be >= 1");
    cfg.trajectories = static_cast<std::size_t>(traj);
    cfg.threads = static_cast<int>(int_at(doc, "threads", "top level", 1));
    if (doc.contains("units")) {
        check_keys(doc["units"], {"hbar"}, "units");
        cfg.hbar = num_at(doc["units"], "hbar", "units", 1.0);
    }
    if (doc.contains("collapse")) cfg.collapse = parse_collapse(doc["collapse"]);
    else if (cfg.mode == RunMode::pqt) cfg.collapse = CollapseConfig{};
    if (doc.contains("output")) {
        check_keys(doc["output"], {"csv", "svg", "channel_log"}, "output");
        cfg.output.csv = bool_at(doc["output"], "csv", "output", true);
        cfg.output.svg = bool_at(doc["output"], "svg", "output", true);
        cfg.output.channel_log = bool_at(doc["output"], "channel_log", "output", false);
    }

    switch (cfg.experiment) {
        case ExperimentKind::Scattering:
            cfg.scattering = parse_scattering(doc["scattering"]);
            cfg.scattering.mode = cfg.mode;
            cfg.scattering.collapse = cfg.collapse;
            cfg.scattering.hbar = cfg.hbar;
            break;
        case ExperimentKind::Decay:
            cfg.decay = parse_decay(doc["decay"]);
            cfg.decay.mode = cfg.mode;
            cfg.decay.collapse = cfg.collapse;
            break;
        case ExperimentKind::Plate:
            cfg.plate = parse_plate(doc["plate"]);
            break;
        case ExperimentKind::SphereToy: {
            auto [sphere, horizon] = parse_sphere(doc["sphere_toy"]);
            cfg.sphere = sphere;
            cfg.sphere_horizon = horizon;
            break;
        }
    }
    if (doc.contains("epsilon_scan")) cfg.scan = parse_scan(doc["epsilon_scan"]);

    try {
        cfg.validate();
    } catch (const std::invalid_argument&) {
        throw;
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_config(const RunConfig& cfg) {
    ordered_json doc;
    doc["experiment"] = experiment_name(cfg.experiment);
    doc["mode"] = mode_name(cfg.mode);
    doc["seed"] = cfg.seed;
    doc["trajectories"] = cfg.trajectories;
    doc["threads"] = cfg.threads;
    doc["units"] = {{"hbar", cfg.hbar}};
    doc["collapse"] = {{"epsilon", cfg.collapse.epsilon},
                       {"window_steps", cfg.collapse.window_steps},
                       {"p_min", cfg.collapse.p_min},
                       {"p_active", cfg.collapse.p_active},
                       {"check_stride", cfg.collapse.check_stride}};
    doc["output"] = {{"csv", cfg.output.csv},
                     {"svg", cfg.output.svg},
                     {"channel_log", cfg.output.channel_log}};
    switch (cfg.experiment) {
        case ExperimentKind::Scattering: {
            const ScatteringConfig& s = cfg.scattering;
            auto pot = [](const PotentialTerm& p) {
                return ordered_json{{"family", p.family_name()},
                                    {"v0", p.v0},
                                    {"width", p.width},
                                    {"alpha", p.alpha}};
            };
            doc["scattering"] = {
                {"masses",
                 {{"m_a", s.particles.m_a}, {"m_b", s.particles.m_b}, {"m_c", s.particles.m_c}}},
                {"potentials",
                 {{"bc", pot(s.potentials.v_bc)},
                  {"ab", pot(s.potentials.v_ab)},
                  {"ac", pot(s.potentials.v_ac)}}},
                {"grid",
                 {{"n_R", s.axis_big_r.n},
                  {"x_min_R", s.axis_big_r.x_min},
                  {"dx_R", s.axis_big_r.dx},
                  {"n_r", s.axis_r.n},
                  {"x_min_r", s.axis_r.x_min},
                  {"dx_r", s.axis_r.dx}}},
                {"packet", {{"x0", s.x0}, {"p0", s.p0}, {"sigma", s.sigma}}},
                {"dt", s.dt},
                {"n_steps", s.n_steps},
                {"log_stride", s.log_stride},
                {"guard", {{"tol", s.guard_tol}, {"stride", s.guard_stride}}},
                {"readout", {{"bins", s.readout.n_bins}, {"harmonic", s.readout.harmonic}}}};
            break;
        }
        case ExperimentKind::Decay: {
            const DecayConfig& d = cfg.decay;
            doc["decay"] = {
                {"e_d", d.e_d},
                {"n_modes", d.n_modes},
                {"omega_max", d.omega_max},
                {"coupling",
                 {{"family", d.coupling == DecayConfig::CouplingFamily::Constant
                                 ? "constant"
                                 : "semicircle"},
                  {"strength", d.strength}}},
                {"dt", d.dt},
                {"t_max", d.t_max},
                {"output_stride", d.output_stride}};
            break;
        }
        case ExperimentKind::Plate: {
            const PlateSettings& p = cfg.plate;
            ordered_json cells = ordered_json::array();
            for (const auto& c : p.cells) cells.push_back({c.lo, c.hi});
            doc["plate"] = {
                {"grid", {{"n", p.axis.n}, {"x_min", p.axis.x_min}, {"dx", p.axis.dx}}},
                {"packet", {{"x0", p.x0}, {"p0", p.p0}, {"sigma", p.sigma}}},
                {"cells", cells},
                {"eta", p.eta}};
            break;
        }
        case ExperimentKind::SphereToy: {
            const SphereToyConfig& s = cfg.sphere;
            ordered_json spheres = ordered_json::array();
            for (const auto& sp : s.spheres)
                spheres.push_back({{"center", sp.center}, {"radius", sp.radius}});
            doc["sphere_toy"] = {
                {"spheres", spheres},
                {"growth_rate", s.growth_rate},
                {"r_min", s.r_min},
                {"relocation",
                 {{"kind", s.relocation == SphereToyConfig::Relocation::Uniform
                               ? "uniform"
                               : "radial_power"},
                  {"exponent", s.exponent}}},
                {"horizon", cfg.sphere_horizon}};
            break;
        }
    }
    if (cfg.scan) {
        doc["epsilon_scan"] = {{"epsilons", cfg.scan->epsilons},
                               {"n_per_point", cfg.scan->n_per_point},
                               {"detect_threshold", cfg.scan->detect_threshold}};
    }
    return doc.dump(2);
}

}  // namespace pqt
