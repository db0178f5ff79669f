#pragma once

// Closed-loop simulation of the 16-core stack: one control cycle per period,
// governors act on one-cycle-stale measurements, then the thermal network is
// integrated with the resulting per-node power held constant.

#include "petsim/governors.hpp"
#include "petsim/power_model.hpp"
#include "petsim/thermal_network.hpp"
#include "petsim/workload.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace petsim {

/// Background power of the L2 die and each DRAM die, per cell. Traffic is the
/// core's m * IPC * f over the cycle.
struct MemoryPowerModel {
    double l2_idle_w = 0.15;
    double l2_per_traffic_w = 0.12;
    double dram_idle_w = 0.2;
    double dram_per_traffic_w = 0.02;  ///< split evenly over the DRAM dies

    void validate() const;
};

struct ScenarioConfig {
    std::string name = "scenario";
    StackGeometry geometry = default_geometry();
    MaterialTable materials = default_materials();
    bool calibrate = true;
    double target_time_constant_s = 0.040;
    double target_coupling_k = 7.0;

    WorkloadTrace workload;
    std::vector<GovernorSpec> governors;  ///< one entry (uniform) or one per core
    std::vector<double> ladder_ghz = FrequencyLadder::standard().values();
    PowerCoefficients power;
    MemoryPowerModel memory;

    double initial_temperature_k = 300.0;
    double control_period_s = 1e-3;
    int thermal_substeps = 1;
    double max_time_s = 20.0;
    double throttle_k = 355.0;  ///< hard clamp to the lowest frequency at or above this

    double sensor_noise_k = 0.0;  ///< std-dev of Gaussian noise on measured T
    std::uint64_t seed = 1;

    [[nodiscard]] std::size_t core_count() const { return geometry.cells_per_layer(); }
    [[nodiscard]] const GovernorSpec& governor_for(std::size_t core) const;
    /// Throws ConfigError (or ModelError for the geometry).
    void validate() const;
};

struct CycleRecord {
    double time_s = 0.0;        ///< end of the cycle
    std::uint32_t core = 0;
    double f_ghz = 0.0;
    double temperature_k = 0.0; ///< core temperature at the end of the cycle
    double p_dyn_w = 0.0;
    double p_leak_w = 0.0;
    double ipc = 0.0;
    double retired = 0.0;
};

struct LayerEnergy {
    double core_dynamic_j = 0.0;
    double core_leakage_j = 0.0;
    double l2_j = 0.0;
    double dram_j = 0.0;
    [[nodiscard]] double total() const { return core_dynamic_j + core_leakage_j + l2_j + dram_j; }
};

struct SimResult {
    std::string label;
    std::size_t cores = 0;
    double control_period_s = 0.0;
    std::vector<CycleRecord> records;  ///< cycle-major, then core
    std::vector<double> completion_s;  ///< per core; -1 if unfinished
    std::vector<double> retired;       ///< per core
    std::vector<double> budget;        ///< per core instruction budget
    double duration_s = 0.0;
    LayerEnergy energy;
    double total_energy_j = 0.0;       ///< summed from full node power vectors
    double busy_core_time_s = 0.0;
    double core_time_s = 0.0;
    double core_temperature_time_k_s = 0.0;  ///< integral of mean core T
    double max_core_temperature_k = 0.0;
    double frequency_time_ghz_s = 0.0;       ///< summed over cores
    bool timed_out = false;
};

class TimeoutError : public std::runtime_error {
public:
    TimeoutError(const std::string& what, SimResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    [[nodiscard]] const SimResult& partial() const { return partial_; }

private:
    SimResult partial_;
};

/// Passed to an observer after every governor decision.
struct CycleView {
    long cycle = 0;
    std::size_t core = 0;
    const Measurement& measurement;
    const Governor& governor;
    double selected_ghz = 0.0;   ///< before the hard throttle
    double applied_ghz = 0.0;
};

using CycleObserver = std::function<void(const CycleView&)>;

/// Builds (and, if requested, calibrates) the scenario's network.
ThermalNetwork prepare_network(const ScenarioConfig& config);

/// Runs to completion of every core's trace. Throws TimeoutError carrying the
/// partial result when max_time_s is reached first.
SimResult run_scenario(const ScenarioConfig& config, const ThermalNetwork& network,
                       const CycleObserver& observer = {});
SimResult run_scenario(const ScenarioConfig& config);

}  // namespace petsim
