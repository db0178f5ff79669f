#include "petsim/engine.hpp"

#include "petsim/errors.hpp"
#include "petsim/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace petsim {

void MemoryPowerModel::validate() const {
    if (!(l2_idle_w >= 0.0) || !(l2_per_traffic_w >= 0.0) || !(dram_idle_w >= 0.0) || !(dram_per_traffic_w >= 0.0))
        throw ConfigError("memory power coefficients must be non-negative");
}

const GovernorSpec& ScenarioConfig::governor_for(std::size_t core) const {
    return governors.size() == 1 ? governors.front() : governors.at(core);
}

void ScenarioConfig::validate() const {
    geometry.validate();
    if (geometry.layers.size() < 2) throw ConfigError("the stack needs at least a core layer and an L2 layer");
    const std::size_t n = core_count();
    workload.validate(n);
    if (governors.size() != 1 && governors.size() != n)
        throw ConfigError("give one governor for all cores or exactly one per core");
    for (const auto& g : governors) g.validate();
    (void)FrequencyLadder(ladder_ghz);
    power.validate(ladder_ghz.empty() ? 1.5 : ladder_ghz.back());
    memory.validate();
    if (!(initial_temperature_k >= geometry.ambient_k) || !(initial_temperature_k <= 1000.0))
        throw ConfigError("initial temperature must lie between ambient and 1000 K");
    if (!(control_period_s > 0.0)) throw ConfigError("control period must be positive");
    if (thermal_substeps < 1) throw ConfigError("thermal_substeps must be at least 1");
    if (!(max_time_s > 0.0)) throw ConfigError("max_time_s must be positive");
    if (!(sensor_noise_k >= 0.0)) throw ConfigError("sensor noise must be non-negative");
    if (calibrate && (!(target_time_constant_s > 0.0) || !(target_coupling_k > 0.0)))
        throw ConfigError("calibration targets must be positive");
}

ThermalNetwork prepare_network(const ScenarioConfig& config) {
    ThermalNetwork net = build_network(config.geometry, config.materials);
    if (!config.calibrate) return net;
    return calibrate_network(net, config.target_time_constant_s, config.target_coupling_k);
}

SimResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    return run_scenario(config, prepare_network(config));
}

SimResult run_scenario(const ScenarioConfig& config, const ThermalNetwork& network, const CycleObserver& observer) {
    config.validate();
    const std::size_t n = config.core_count();
    const std::size_t layers = config.geometry.layers.size();
    const std::size_t dram_layers = layers - 2;
    if (network.node_count() != config.geometry.node_count())
        throw ConfigError("network does not match the scenario geometry");

    const FrequencyLadder ladder(config.ladder_ghz);
    const double dt = config.control_period_s;
    const double sub_dt = dt / config.thermal_substeps;

    std::vector<std::unique_ptr<Governor>> governors;
    governors.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
        GovernorSpec spec = config.governor_for(c);
        // Controllers run at the scenario's control period.
        spec.trinity.control_period_s = dt;
        spec.trinity.recalib_period_s = std::max(spec.trinity.recalib_period_s, dt);
        spec.trinity.power = config.power;
        spec.regulator.period_s = dt;
        governors.push_back(make_governor(spec, ladder));
    }

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, config.sensor_noise_k);
    const auto sense = [&](double t) { return config.sensor_noise_k > 0.0 ? t + noise(rng) : t; };

    SimResult result;
    result.label = config.name;
    result.cores = n;
    result.control_period_s = dt;
    result.completion_s.assign(n, -1.0);
    result.retired.assign(n, 0.0);
    result.budget.resize(n);
    for (std::size_t c = 0; c < n; ++c) result.budget[c] = config.workload.instruction_budget(c);

    StackState state{Eigen::VectorXd::Constant(static_cast<Eigen::Index>(network.node_count()),
                                               config.initial_temperature_k),
                     0.0};
    std::vector<CoreCursor> cursors(n);
    std::vector<Measurement> meas(n);
    for (std::size_t c = 0; c < n; ++c) {
        meas[c].temperature_k = sense(config.initial_temperature_k);
        meas[c].f_ghz = ladder.lower();
    }
    // Empty per-core traces count as complete from the start.
    for (std::size_t c = 0; c < n; ++c)
        if (config.workload.cores[c].empty()) result.completion_s[c] = 0.0;

    const auto node = [n](std::size_t layer, std::size_t core) {
        return static_cast<Eigen::Index>(layer * n + core);
    };
    const long max_cycles = std::lround(std::ceil(config.max_time_s / dt - 1e-9));
    Eigen::VectorXd power(static_cast<Eigen::Index>(network.node_count()));
    std::vector<double> freq(n);

    for (long k = 0;; ++k) {
        const bool all_done = std::all_of(cursors.begin(), cursors.end(), [&](const CoreCursor& cur) {
            return cur.finished;
        });
        if (k > 0 && all_done) break;
        if (k >= max_cycles) {
            result.timed_out = true;
            throw TimeoutError("scenario '" + config.name + "' did not finish within " +
                                   format_compact(config.max_time_s) + " s",
                               std::move(result));
        }
        const double t0 = k * dt;

        for (std::size_t c = 0; c < n; ++c) {
            const double chosen = governors[c]->select(meas[c]);
            const double applied = meas[c].temperature_k >= config.throttle_k ? ladder.lower() : chosen;
            freq[c] = applied;
            if (observer) observer(CycleView{k, c, meas[c], *governors[c], chosen, applied});
        }

        power.setZero();
        std::vector<Measurement> next(n);
        std::size_t first_record = result.records.size();
        for (std::size_t c = 0; c < n; ++c) {
            const double f = freq[c];
            const double core_t = state.temperature(node(0, c));
            const AdvanceResult adv = advance(config.workload, c, cursors[c], dt, f);
            if (adv.finished_at_s >= 0.0) result.completion_s[c] = t0 + adv.finished_at_s;

            const PowerBreakdown leak = total_power(f, core_t, 0.0, config.power);
            const double p_dyn = adv.dynamic_energy_j / dt;
            const double p_l2 = config.memory.l2_idle_w + config.memory.l2_per_traffic_w * adv.traffic;
            const double p_dram = dram_layers == 0
                                      ? 0.0
                                      : config.memory.dram_idle_w +
                                            config.memory.dram_per_traffic_w * adv.traffic / dram_layers;
            power(node(0, c)) = p_dyn + leak.leakage_w;
            power(node(1, c)) = p_l2;
            for (std::size_t l = 2; l < layers; ++l) power(node(l, c)) = p_dram;

            result.energy.core_dynamic_j += p_dyn * dt;
            result.energy.core_leakage_j += leak.leakage_w * dt;
            result.energy.l2_j += p_l2 * dt;
            result.energy.dram_j += p_dram * dram_layers * dt;
            result.retired[c] += adv.retired;
            result.busy_core_time_s += adv.busy_fraction * dt;
            result.core_time_s += dt;
            result.frequency_time_ghz_s += f * dt;

            Measurement& m = next[c];
            m.power_w = p_dyn + leak.leakage_w;
            m.ipc = adv.retired / (f * 1e9 * dt);
            m.f_ghz = f;
            m.busy_fraction = adv.busy_fraction;

            CycleRecord rec;
            rec.core = static_cast<std::uint32_t>(c);
            rec.f_ghz = f;
            rec.p_dyn_w = p_dyn;
            rec.p_leak_w = leak.leakage_w;
            rec.ipc = m.ipc;
            rec.retired = adv.retired;
            result.records.push_back(rec);
        }
        result.total_energy_j += power.sum() * dt;

        for (int s = 0; s < config.thermal_substeps; ++s) state = network.step(state, power, sub_dt);
        if (!state.temperature.allFinite()) throw NumericError("temperature became non-finite");
        const double t1 = (k + 1) * dt;

        double core_sum = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double t = state.temperature(node(0, c));
            core_sum += t;
            result.max_core_temperature_k = std::max(result.max_core_temperature_k, t);
            CycleRecord& rec = result.records[first_record + c];
            rec.time_s = t1;
            rec.temperature_k = t;
            next[c].temperature_k = sense(t);
            next[c].time_s = t1;
        }
        result.core_temperature_time_k_s += core_sum / n * dt;
        result.duration_s = t1;
        meas = std::move(next);
    }
    return result;
}

}  // namespace petsim
