#include "petsim/cli.hpp"

#include "petsim/errors.hpp"
#include "petsim/metrics.hpp"
#include "petsim/report.hpp"
#include "petsim/scenario_io.hpp"
#include "petsim/text_format.hpp"
#include "petsim/trace_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace petsim::cli {

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumeric = 3;
constexpr int kTimeout = 4;

struct SourceOptions {
    std::string scenario;
    std::string preset;
    std::string governor;
    std::optional<long> seed;
    std::vector<std::string> variants;
    std::string out = "petsim-out";
};

ScenarioDocument load_source(const SourceOptions& o) {
    if (o.scenario.empty() == o.preset.empty()) throw ConfigError("give exactly one of --scenario or --preset");
    ScenarioDocument doc = o.scenario.empty() ? preset_scenario(o.preset, parse_governor("trinity"))
                                              : load_scenario(o.scenario);
    if (!o.governor.empty()) {
        const GovernorSpec parsed = parse_governor(o.governor);
        GovernorSpec g = doc.config.governors.front();
        g.kind = parsed.kind;
        g.fixed_ghz = parsed.fixed_ghz;
        doc.config.governors = {g};
        if (!o.preset.empty()) doc.config.name = o.preset + "-" + g.label();
    }
    if (o.seed) {
        if (*o.seed < 0) throw ConfigError("--seed must be non-negative");
        doc.config.seed = static_cast<std::uint64_t>(*o.seed);
    }
    return doc;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

void write_records(const fs::path& path, const SimResult& result) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    write_records_csv(out, result);
    if (!out) throw ConfigError("failed writing " + path.string());
}

int cmd_run(const SourceOptions& o) {
    ScenarioDocument doc = load_source(o);
    if (o.variants.size() > 1) throw ConfigError("run takes at most one --variant");
    if (!o.variants.empty()) apply_variant(doc.config, o.variants.front());
    doc.config.validate();
    const ThermalNetwork network = prepare_network(doc.config);

    const fs::path dir(o.out);
    ensure_dir(dir);
    write_text_file(dir / "scenario.yaml", dump_scenario(doc));
    int code = kOk;
    SimResult result;
    try {
        result = run_scenario(doc.config, network);
    } catch (const TimeoutError& e) {
        std::cerr << "petsim: " << e.what() << " (partial results written)\n";
        result = e.partial();
        code = kTimeout;
    }
    write_records(dir / "records.csv", result);
    const ComparisonReport report = make_report({summarize(result)});
    write_text_file(dir / "summary.json", summary_json(report.rows.front()));
    std::cout << comparison_table(report);
    return code;
}

int cmd_sweep(const SourceOptions& o, std::string governors, unsigned jobs) {
    ScenarioDocument base = load_source(o);
    std::vector<std::string> names;
    {
        std::stringstream ss(governors);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) names.push_back(item);
    }
    if (names.empty()) throw ConfigError("--governors is empty");

    std::vector<ScenarioConfig> configs;
    for (const auto& name : names) {
        const GovernorSpec parsed = parse_governor(name);
        const bool trinity = parsed.kind == GovernorKind::trinity;
        const std::vector<std::string> variants =
            trinity && !o.variants.empty() ? o.variants : std::vector<std::string>{""};
        for (const auto& v : variants) {
            ScenarioConfig cfg = base.config;
            GovernorSpec g = cfg.governors.front();
            g.kind = parsed.kind;
            g.fixed_ghz = parsed.fixed_ghz;
            cfg.governors = {g};
            cfg.name = g.label();
            if (!v.empty()) {
                apply_variant(cfg, v);
                cfg.name += "-" + v;
            }
            cfg.validate();
            configs.push_back(std::move(cfg));
        }
    }

    const ThermalNetwork network = prepare_network(base.config);
    const ComparisonReport report = compare_governors(configs, network, jobs);
    const fs::path dir(o.out);
    ensure_dir(dir);
    write_text_file(dir / "comparison.csv", comparison_csv(report));
    write_text_file(dir / "comparison.json", comparison_json(report));
    std::cout << comparison_table(report);
    for (const auto& r : report.rows)
        if (r.timed_out) return kTimeout;
    return kOk;
}

int cmd_dump(const std::string& out) {
    const fs::path dir(out);
    ensure_dir(dir);
    for (const auto& name : preset_names()) {
        const WorkloadTrace trace = preset_by_name(name);
        std::ostringstream csv;
        write_trace_csv(csv, trace);
        write_text_file(dir / (name + ".csv"), csv.str());

        ScenarioDocument doc = preset_scenario(name, parse_governor("trinity"));
        doc.source.preset.clear();
        doc.source.trace = name + ".csv";
        doc.config.name = name;
        write_text_file(dir / ("scenario-" + name + ".yaml"), dump_scenario(doc));
    }
    std::cout << "wrote " << preset_names().size() << " presets to " << dir.string() << "\n";
    return kOk;
}

int cmd_validate(const std::string& scenario) {
    const ScenarioDocument doc = load_scenario(scenario);
    const ThermalNetwork net = prepare_network(doc.config);
    const CouplingProfile cp = coupling_profile(net);
    std::cout << "ok: " << doc.config.name << ", " << doc.config.core_count() << " cores, " << net.node_count()
              << " thermal nodes, tau " << format_fixed(net.dominant_time_constant() * 1e3, 2)
              << " ms, 1-hop coupling " << format_fixed(cp.one_hop_max_k, 2) << " K\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"petsim: per-core DVFS simulation of a 3D-stacked 16-core die"};
    app.require_subcommand(1);

    SourceOptions run_opts;
    auto* run = app.add_subcommand("run", "simulate one scenario and write records.csv and summary.json");
    const auto add_source = [](CLI::App* cmd, SourceOptions& o) {
        cmd->add_option("--scenario", o.scenario, "scenario YAML file");
        cmd->add_option("--preset", o.preset, "embedded preset: compute-bound, memory-bound, mixed, regulation");
        cmd->add_option("--seed", o.seed, "random seed (sensor noise)");
        cmd->add_option("--out", o.out, "output directory");
        cmd->add_option("--variant", o.variants, "TRINITY timing variant: OPT1, OPT2, OPT3")->delimiter(',');
    };
    add_source(run, run_opts);
    run->add_option("--governor", run_opts.governor, "override: trinity, ondemand, regulator, fixed-<GHz>");

    SourceOptions sweep_opts;
    std::string sweep_governors = "fixed-0.5,fixed-1.0,fixed-1.5,ondemand,trinity";
    unsigned jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "run several governors on one workload and compare them");
    add_source(sweep, sweep_opts);
    sweep->add_option("--governors", sweep_governors, "comma-separated governor list");
    sweep->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

    std::string dump_out = "presets";
    auto* dump = app.add_subcommand("dump-presets", "write embedded traces and default scenarios");
    dump->add_option("--out", dump_out, "output directory");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse a scenario and build its thermal network");
    validate->add_option("--scenario", validate_path, "scenario YAML file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_governors, jobs);
        if (dump->parsed()) return cmd_dump(dump_out);
        if (validate->parsed()) return cmd_validate(validate_path);
    } catch (const TimeoutError& e) {
        std::cerr << "petsim: timeout: " << e.what() << "\n";
        return kTimeout;
    } catch (const NumericError& e) {
        std::cerr << "petsim: numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const CalibrationError& e) {
        std::cerr << "petsim: calibration failed: " << e.what() << " (time-constant residual "
                  << format_fixed(e.time_constant_residual_s() * 1e3, 3) << " ms, coupling residual "
                  << format_fixed(e.coupling_residual_k(), 3) << " K)\n";
        return kConfig;
    } catch (const ConfigError& e) {
        std::cerr << "petsim: config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ModelError& e) {
        std::cerr << "petsim: model error: " << e.what() << "\n";
        return kConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "petsim: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}

}  // namespace petsim::cli
