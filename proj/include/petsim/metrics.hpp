#pragma once

// Whole-run figures of merit and relative lifetime models.

#include "petsim/engine.hpp"

#include <string>
#include <vector>

namespace petsim {

struct VoltageMap {
    double v_min = 0.6;
    double v_max = 1.0;
    double f_lower_ghz = 0.5;
    double f_upper_ghz = 1.5;

    /// Linear between the ladder ends, clamped outside them.
    [[nodiscard]] double voltage(double f_ghz) const;
    void validate() const;
};

struct Metrics {
    double energy_j = 0.0;
    double delay_s = 0.0;         ///< completion of the last core
    double instructions = 0.0;
    double mips = 0.0;
    double edp = 0.0;
    double ed2p = 0.0;
    double ops_per_joule = 0.0;
    double avg_core_temperature_k = 0.0;
    double max_core_temperature_k = 0.0;
    double t_act = 0.0;           ///< busy core-time / total core-time
    double avg_frequency_ghz = 0.0;
    double avg_voltage_v = 0.0;
    LayerEnergy energy_by_layer;
};

Metrics compute_metrics(const SimResult& result, const VoltageMap& vmap = {});

struct ReliabilityParams {
    double a_em = 1.0;
    double n = 2.0;
    double e_a = 0.8;          ///< eV
    double a_tddb = 1.0;
    double a = 78.0;
    double b = -0.081;         ///< 1/K
    double c = 1.0;
    double x = 0.759;          ///< eV
    double y = -66.8;          ///< eV K
    double z = -8.37e-4;       ///< eV/K
    double k = 8.617333262e-5; ///< eV/K
    double t_act = 1.0;

    void validate() const;
};

/// A_EM / t_act * V^-n * exp(E_a / kT). Only meaningful as a ratio.
double mttf_em(double voltage_v, double temperature_k, const ReliabilityParams& p);
/// A_TDDB / t_act * V^-(c (a + bT)) * exp((x + y/T + zT) / kT). Only meaningful as a ratio.
double mttf_tddb(double voltage_v, double temperature_k, const ReliabilityParams& p);

struct ComparisonRow {
    std::string label;
    Metrics metrics;
    double mttf_em = 0.0;
    double mttf_tddb = 0.0;
    double em_ratio = 1.0;     ///< relative to the baseline row
    double tddb_ratio = 1.0;
    bool timed_out = false;
};

struct ComparisonReport {
    std::string baseline;
    std::vector<ComparisonRow> rows;
};

/// Reliability inputs per run: average voltage, average core temperature and
/// the run's own t_act.
ComparisonRow summarize(const SimResult& result, const ReliabilityParams& base = {}, const VoltageMap& vmap = {});

/// Normalises MTTFs against row `baseline` (index into rows).
ComparisonReport make_report(std::vector<ComparisonRow> rows, std::size_t baseline = 0);

/// Runs every config on one shared network, up to `jobs` at a time, and
/// normalises against the first. Timed-out runs are reported from their
/// partial results.
ComparisonReport compare_governors(const std::vector<ScenarioConfig>& configs, const ThermalNetwork& network,
                                   unsigned jobs = 1, const ReliabilityParams& params = {},
                                   const VoltageMap& vmap = {});

}  // namespace petsim
