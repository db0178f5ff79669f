#include "petsim/scenario_io.hpp"

#include "petsim/errors.hpp"
#include "petsim/text_format.hpp"
#include "petsim/trace_io.hpp"

#include <yaml-cpp/yaml.h>

#include <set>
#include <sstream>

namespace petsim {

namespace {

// Reads typed values out of one mapping and rejects keys nobody asked for.
class Section {
public:
    Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_ + " must be a mapping");
    }

    [[nodiscard]] bool present() const { return node_ && node_.IsMap(); }

    bool has(const std::string& key) {
        seen_.insert(key);
        return present() && node_[key] && !node_[key].IsNull();
    }

    YAML::Node child(const std::string& key) {
        seen_.insert(key);
        return present() ? node_[key] : YAML::Node();
    }

    void number(const std::string& key, double& out) {
        if (!has(key)) return;
        out = parse_double(scalar(key), path_ + "." + key);
    }

    void integer(const std::string& key, long& out) {
        if (!has(key)) return;
        out = parse_long(scalar(key), path_ + "." + key);
    }

    void text(const std::string& key, std::string& out) {
        if (!has(key)) return;
        out = scalar(key);
    }

    void flag(const std::string& key, bool& out) {
        if (!has(key)) return;
        const std::string v = scalar(key);
        if (v == "true") out = true;
        else if (v == "false") out = false;
        else throw ConfigError(path_ + "." + key + " must be true or false");
    }

    void finish() const {
        if (!present()) return;
        for (const auto& kv : node_) {
            const std::string key = kv.first.as<std::string>();
            if (!seen_.count(key)) throw ConfigError("unknown key " + path_ + "." + key);
        }
    }

private:
    std::string scalar(const std::string& key) const {
        const YAML::Node v = node_[key];
        if (!v.IsScalar()) throw ConfigError(path_ + "." + key + " must be a scalar");
        return v.Scalar();
    }

    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

double ms_to_s(double ms) { return ms * 1e-3; }

std::string num(double v) { return format_compact(v, 9); }

std::string governor_text(const GovernorSpec& g) { return g.label(); }

}  // namespace

ScenarioDocument parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("scenario is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("scenario must be a mapping at the top level");

    ScenarioDocument doc;
    ScenarioConfig& cfg = doc.config;
    Section top(root, "scenario");
    top.text("name", cfg.name);

    // thermal stack
    {
        Section th(top.child("thermal"), "thermal");
        StackGeometry& g = cfg.geometry;
        th.flag("calibrate", cfg.calibrate);
        double tau_ms = cfg.target_time_constant_s * 1e3;
        th.number("target_time_constant_ms", tau_ms);
        cfg.target_time_constant_s = ms_to_s(tau_ms);
        th.number("target_coupling_k", cfg.target_coupling_k);
        th.number("ambient_k", g.ambient_k);
        long rows = g.rows, cols = g.cols;
        th.integer("rows", rows);
        th.integer("cols", cols);
        g.rows = static_cast<int>(rows);
        g.cols = static_cast<int>(cols);
        th.number("cell_width_um", g.cell_width_um);
        th.number("cell_height_um", g.cell_height_um);
        th.number("heat_sink_coefficient", g.heat_sink_coefficient);
        if (th.has("layers")) {
            const YAML::Node layers = th.child("layers");
            if (!layers.IsSequence()) throw ConfigError("thermal.layers must be a list");
            g.layers.clear();
            for (std::size_t i = 0; i < layers.size(); ++i) {
                Section ls(layers[i], "thermal.layers[" + std::to_string(i) + "]");
                Layer l;
                ls.text("name", l.name);
                ls.number("thickness_um", l.thickness_um);
                ls.text("material", l.material);
                ls.finish();
                g.layers.push_back(l);
            }
        }
        if (th.has("materials")) {
            const YAML::Node mats = th.child("materials");
            if (!mats.IsSequence()) throw ConfigError("thermal.materials must be a list");
            cfg.materials.clear();
            for (std::size_t i = 0; i < mats.size(); ++i) {
                Section ms(mats[i], "thermal.materials[" + std::to_string(i) + "]");
                Material m;
                ms.text("id", m.id);
                ms.number("conductivity_w_mk", m.conductivity_w_mk);
                ms.number("heat_capacity_j_m3k", m.heat_capacity_j_m3k);
                ms.finish();
                cfg.materials[m.id] = m;
            }
        }
        th.finish();
    }

    // workload
    {
        Section wl(top.child("workload"), "workload");
        wl.text("preset", doc.source.preset);
        wl.text("trace", doc.source.trace);
        long loops = 1;
        wl.integer("loops", loops);
        wl.finish();
        if (doc.source.preset.empty() == doc.source.trace.empty())
            throw ConfigError("workload needs exactly one of preset or trace");
        if (!doc.source.preset.empty()) {
            cfg.workload = preset_by_name(doc.source.preset);
        } else {
            std::filesystem::path p(doc.source.trace);
            if (p.is_relative()) p = base_dir / p;
            cfg.workload = load_trace(p, cfg.geometry.cells_per_layer());
        }
        cfg.workload.loops = static_cast<int>(loops);
    }

    // governors and their parameters
    GovernorSpec proto;
    {
        Section tr(top.child("trinity"), "trinity");
        TrinityConfig& t = proto.trinity;
        tr.number("q", t.q);
        tr.number("r_init", t.r_init);
        tr.number("t_max_k", t.t_max_k);
        double recal_ms = t.recalib_period_s * 1e3;
        tr.number("recalib_period_ms", recal_ms);
        t.recalib_period_s = ms_to_s(recal_ms);
        tr.number("r_floor", t.r_floor);
        tr.number("r_ceiling", t.r_ceiling);
        tr.number("alpha_init", t.alpha.alpha_hat);
        tr.number("alpha_smoothing", t.alpha.smoothing);
        tr.number("alpha_floor", t.alpha.floor);
        tr.number("alpha_ceiling", t.alpha.ceiling);
        tr.number("a1", t.scalar.a1);
        tr.number("b1", t.scalar.b1);
        tr.number("c1", t.scalar.c1);
        double dt_ms = t.scalar.dt_s * 1e3;
        tr.number("predictor_dt_ms", dt_ms);
        t.scalar.dt_s = ms_to_s(dt_ms);
        tr.finish();
    }
    {
        Section od(top.child("ondemand"), "ondemand");
        od.number("up_threshold", proto.ondemand.up_threshold);
        std::string util = "busy";
        od.text("utilization", util);
        if (util == "busy") proto.ondemand.source = UtilizationSource::busy_fraction;
        else if (util == "ipc") proto.ondemand.source = UtilizationSource::ipc;
        else throw ConfigError("ondemand.utilization must be busy or ipc");
        od.finish();
    }
    {
        Section rg(top.child("regulator"), "regulator");
        rg.number("target_k", proto.regulator.target_k);
        rg.number("kp", proto.regulator.kp);
        rg.number("ki", proto.regulator.ki);
        rg.finish();
    }
    const auto with_kind = [&](const std::string& name) {
        GovernorSpec s = proto;
        const GovernorSpec parsed = parse_governor(name);
        s.kind = parsed.kind;
        s.fixed_ghz = parsed.fixed_ghz;
        return s;
    };
    const bool one = top.has("governor");
    const bool many = top.has("governors");
    if (one == many) throw ConfigError("give exactly one of governor or governors");
    if (one) {
        const YAML::Node g = top.child("governor");
        if (!g.IsScalar()) throw ConfigError("governor must be a name");
        cfg.governors = {with_kind(g.Scalar())};
    } else {
        const YAML::Node gs = top.child("governors");
        if (!gs.IsSequence()) throw ConfigError("governors must be a list");
        cfg.governors.clear();
        for (const auto& g : gs) {
            if (!g.IsScalar()) throw ConfigError("governors entries must be names");
            cfg.governors.push_back(with_kind(g.Scalar()));
        }
    }

    if (top.has("ladder_ghz")) {
        const YAML::Node l = top.child("ladder_ghz");
        if (!l.IsSequence()) throw ConfigError("ladder_ghz must be a list");
        cfg.ladder_ghz.clear();
        for (const auto& v : l) cfg.ladder_ghz.push_back(parse_double(v.Scalar(), "ladder_ghz"));
    }

    {
        Section pw(top.child("power"), "power");
        pw.number("beta", cfg.power.beta);
        pw.number("gamma", cfg.power.gamma);
        pw.number("delta", cfg.power.delta);
        pw.number("epsilon", cfg.power.epsilon);
        pw.finish();
    }
    {
        Section mem(top.child("memory"), "memory");
        mem.number("l2_idle_w", cfg.memory.l2_idle_w);
        mem.number("l2_per_traffic_w", cfg.memory.l2_per_traffic_w);
        mem.number("dram_idle_w", cfg.memory.dram_idle_w);
        mem.number("dram_per_traffic_w", cfg.memory.dram_per_traffic_w);
        mem.finish();
    }
    {
        Section sim(top.child("simulation"), "simulation");
        double period_ms = cfg.control_period_s * 1e3;
        sim.number("control_period_ms", period_ms);
        cfg.control_period_s = ms_to_s(period_ms);
        long substeps = cfg.thermal_substeps;
        sim.integer("thermal_substeps", substeps);
        cfg.thermal_substeps = static_cast<int>(substeps);
        sim.number("max_time_s", cfg.max_time_s);
        sim.number("initial_temperature_k", cfg.initial_temperature_k);
        sim.number("throttle_k", cfg.throttle_k);
        sim.number("sensor_noise_k", cfg.sensor_noise_k);
        long seed = static_cast<long>(cfg.seed);
        sim.integer("seed", seed);
        if (seed < 0) throw ConfigError("simulation.seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(seed);
        sim.finish();
    }
    top.finish();

    try {
        cfg.validate();
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    }
    return doc;
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("scenario file not found: " + path.string());
    return parse_scenario(read_text_file(path), path.parent_path());
}

std::string dump_scenario(const ScenarioDocument& doc) {
    const ScenarioConfig& cfg = doc.config;
    const GovernorSpec& g0 = cfg.governors.empty() ? GovernorSpec{} : cfg.governors.front();
    std::ostringstream out;
    out << "name: " << cfg.name << "\n";
    out << "workload:\n";
    if (!doc.source.preset.empty()) out << "  preset: " << doc.source.preset << "\n";
    else out << "  trace: " << doc.source.trace << "\n";
    out << "  loops: " << cfg.workload.loops << "\n";

    if (cfg.governors.size() == 1) {
        out << "governor: " << governor_text(g0) << "\n";
    } else {
        out << "governors: [";
        for (std::size_t i = 0; i < cfg.governors.size(); ++i)
            out << (i ? ", " : "") << governor_text(cfg.governors[i]);
        out << "]\n";
    }

    const TrinityConfig& t = g0.trinity;
    out << "trinity:\n"
        << "  q: " << num(t.q) << "\n"
        << "  r_init: " << num(t.r_init) << "\n"
        << "  t_max_k: " << num(t.t_max_k) << "\n"
        << "  recalib_period_ms: " << num(t.recalib_period_s * 1e3) << "\n"
        << "  r_floor: " << format_roundtrip(t.r_floor) << "\n"
        << "  r_ceiling: " << format_roundtrip(t.r_ceiling) << "\n"
        << "  alpha_init: " << num(t.alpha.alpha_hat) << "\n"
        << "  alpha_smoothing: " << num(t.alpha.smoothing) << "\n"
        << "  alpha_floor: " << num(t.alpha.floor) << "\n"
        << "  alpha_ceiling: " << num(t.alpha.ceiling) << "\n"
        << "  a1: " << num(t.scalar.a1) << "\n"
        << "  b1: " << num(t.scalar.b1) << "\n"
        << "  c1: " << num(t.scalar.c1) << "\n"
        << "  predictor_dt_ms: " << num(t.scalar.dt_s * 1e3) << "\n";
    out << "ondemand:\n"
        << "  up_threshold: " << num(g0.ondemand.up_threshold) << "\n"
        << "  utilization: " << (g0.ondemand.source == UtilizationSource::busy_fraction ? "busy" : "ipc") << "\n";
    out << "regulator:\n"
        << "  target_k: " << num(g0.regulator.target_k) << "\n"
        << "  kp: " << num(g0.regulator.kp) << "\n"
        << "  ki: " << num(g0.regulator.ki) << "\n";

    out << "ladder_ghz: [";
    for (std::size_t i = 0; i < cfg.ladder_ghz.size(); ++i) out << (i ? ", " : "") << num(cfg.ladder_ghz[i]);
    out << "]\n";

    out << "power:\n"
        << "  beta: " << num(cfg.power.beta) << "\n"
        << "  gamma: " << num(cfg.power.gamma) << "\n"
        << "  delta: " << num(cfg.power.delta) << "\n"
        << "  epsilon: " << num(cfg.power.epsilon) << "\n";
    out << "memory:\n"
        << "  l2_idle_w: " << num(cfg.memory.l2_idle_w) << "\n"
        << "  l2_per_traffic_w: " << num(cfg.memory.l2_per_traffic_w) << "\n"
        << "  dram_idle_w: " << num(cfg.memory.dram_idle_w) << "\n"
        << "  dram_per_traffic_w: " << num(cfg.memory.dram_per_traffic_w) << "\n";
    out << "simulation:\n"
        << "  control_period_ms: " << num(cfg.control_period_s * 1e3) << "\n"
        << "  thermal_substeps: " << cfg.thermal_substeps << "\n"
        << "  max_time_s: " << num(cfg.max_time_s) << "\n"
        << "  initial_temperature_k: " << num(cfg.initial_temperature_k) << "\n"
        << "  throttle_k: " << num(cfg.throttle_k) << "\n"
        << "  sensor_noise_k: " << num(cfg.sensor_noise_k) << "\n"
        << "  seed: " << cfg.seed << "\n";

    const StackGeometry& geo = cfg.geometry;
    out << "thermal:\n"
        << "  calibrate: " << (cfg.calibrate ? "true" : "false") << "\n"
        << "  target_time_constant_ms: " << num(cfg.target_time_constant_s * 1e3) << "\n"
        << "  target_coupling_k: " << num(cfg.target_coupling_k) << "\n"
        << "  ambient_k: " << num(geo.ambient_k) << "\n"
        << "  rows: " << geo.rows << "\n"
        << "  cols: " << geo.cols << "\n"
        << "  cell_width_um: " << num(geo.cell_width_um) << "\n"
        << "  cell_height_um: " << num(geo.cell_height_um) << "\n"
        << "  heat_sink_coefficient: " << format_roundtrip(geo.heat_sink_coefficient) << "\n"
        << "  layers:\n";
    for (const Layer& l : geo.layers)
        out << "    - {name: " << l.name << ", thickness_um: " << num(l.thickness_um) << ", material: " << l.material
            << "}\n";
    out << "  materials:\n";
    for (const auto& [id, m] : cfg.materials)
        out << "    - {id: " << id << ", conductivity_w_mk: " << num(m.conductivity_w_mk)
            << ", heat_capacity_j_m3k: " << num(m.heat_capacity_j_m3k) << "}\n";
    return out.str();
}

ScenarioDocument preset_scenario(const std::string& preset, const GovernorSpec& governor) {
    ScenarioDocument doc;
    doc.source.preset = preset;
    doc.config.name = preset + "-" + governor.label();
    doc.config.workload = preset_by_name(preset);
    doc.config.governors = {governor};
    return doc;
}

void apply_variant(ScenarioConfig& config, const std::string& variant) {
    double period_ms = 0.0;
    double recalib_ms = 0.0;
    if (variant == "OPT1") {
        period_ms = 1.0;
        recalib_ms = 5.0;
    } else if (variant == "OPT2") {
        period_ms = 1.0;
        recalib_ms = 10.0;
    } else if (variant == "OPT3") {
        period_ms = 0.5;
        recalib_ms = 5.0;
    } else {
        throw ConfigError("unknown variant '" + variant + "' (expected OPT1, OPT2 or OPT3)");
    }
    config.control_period_s = period_ms * 1e-3;
    for (auto& g : config.governors) {
        g.trinity.control_period_s = config.control_period_s;
        g.trinity.recalib_period_s = recalib_ms * 1e-3;
    }
}

}  // namespace petsim
