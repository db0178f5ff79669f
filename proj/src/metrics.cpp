#include "petsim/metrics.hpp"

#include "petsim/errors.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <numeric>
#include <thread>

namespace petsim {

double VoltageMap::voltage(double f_ghz) const {
    const double s = std::clamp((f_ghz - f_lower_ghz) / (f_upper_ghz - f_lower_ghz), 0.0, 1.0);
    return v_min + s * (v_max - v_min);
}

void VoltageMap::validate() const {
    if (!(v_min > 0.0) || !(v_max >= v_min)) throw ConfigError("voltage map needs 0 < v_min <= v_max");
    if (!(f_upper_ghz > f_lower_ghz)) throw ConfigError("voltage map frequency range is empty");
}

Metrics compute_metrics(const SimResult& result, const VoltageMap& vmap) {
    Metrics m;
    m.energy_j = result.total_energy_j;
    m.energy_by_layer = result.energy;
    double last = 0.0;
    for (double c : result.completion_s) last = std::max(last, c < 0.0 ? result.duration_s : c);
    m.delay_s = last;
    m.instructions = std::accumulate(result.retired.begin(), result.retired.end(), 0.0);
    if (m.delay_s > 0.0) m.mips = m.instructions / m.delay_s / 1e6;
    m.edp = m.energy_j * m.delay_s;
    m.ed2p = m.energy_j * m.delay_s * m.delay_s;
    if (m.energy_j > 0.0) m.ops_per_joule = m.instructions / m.energy_j;
    if (result.duration_s > 0.0) m.avg_core_temperature_k = result.core_temperature_time_k_s / result.duration_s;
    m.max_core_temperature_k = result.max_core_temperature_k;
    if (result.core_time_s > 0.0) {
        m.t_act = result.busy_core_time_s / result.core_time_s;
        m.avg_frequency_ghz = result.frequency_time_ghz_s / result.core_time_s;
    }
    // The map is affine on the ladder, so the mean voltage is the voltage of the mean frequency.
    m.avg_voltage_v = vmap.voltage(m.avg_frequency_ghz);
    return m;
}

void ReliabilityParams::validate() const {
    if (!(a_em > 0.0) || !(a_tddb > 0.0) || !(k > 0.0)) throw ConfigError("reliability scale constants must be positive");
    if (!(t_act > 0.0 && t_act <= 1.0)) throw ConfigError("t_act must lie in (0, 1]");
}

double mttf_em(double voltage_v, double temperature_k, const ReliabilityParams& p) {
    if (!(voltage_v > 0.0) || !(temperature_k > 0.0)) throw NumericError("MTTF needs positive V and T");
    return p.a_em / p.t_act * std::pow(voltage_v, -p.n) * std::exp(p.e_a / (p.k * temperature_k));
}

double mttf_tddb(double voltage_v, double temperature_k, const ReliabilityParams& p) {
    if (!(voltage_v > 0.0) || !(temperature_k > 0.0)) throw NumericError("MTTF needs positive V and T");
    const double t = temperature_k;
    return p.a_tddb / p.t_act * std::pow(voltage_v, -p.c * (p.a + p.b * t)) *
           std::exp((p.x + p.y / t + p.z * t) / (p.k * t));
}

ComparisonRow summarize(const SimResult& result, const ReliabilityParams& base, const VoltageMap& vmap) {
    ComparisonRow row;
    row.label = result.label;
    row.metrics = compute_metrics(result, vmap);
    row.timed_out = result.timed_out;
    ReliabilityParams p = base;
    if (row.metrics.t_act > 0.0) p.t_act = row.metrics.t_act;
    row.mttf_em = mttf_em(row.metrics.avg_voltage_v, row.metrics.avg_core_temperature_k, p);
    row.mttf_tddb = mttf_tddb(row.metrics.avg_voltage_v, row.metrics.avg_core_temperature_k, p);
    return row;
}

ComparisonReport make_report(std::vector<ComparisonRow> rows, std::size_t baseline) {
    ComparisonReport report;
    if (rows.empty()) return report;
    if (baseline >= rows.size()) throw ConfigError("comparison baseline index out of range");
    const double em0 = rows[baseline].mttf_em;
    const double tddb0 = rows[baseline].mttf_tddb;
    for (auto& r : rows) {
        r.em_ratio = r.mttf_em / em0;
        r.tddb_ratio = r.mttf_tddb / tddb0;
    }
    report.baseline = rows[baseline].label;
    report.rows = std::move(rows);
    return report;
}

ComparisonReport compare_governors(const std::vector<ScenarioConfig>& configs, const ThermalNetwork& network,
                                   unsigned jobs, const ReliabilityParams& params, const VoltageMap& vmap) {
    params.validate();
    vmap.validate();
    std::vector<ComparisonRow> rows(configs.size());
    const auto run_one = [&](std::size_t i) {
        try {
            rows[i] = summarize(run_scenario(configs[i], network), params, vmap);
        } catch (const TimeoutError& e) {
            rows[i] = summarize(e.partial(), params, vmap);
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
    } else {
        // Each worker pulls the next index; results land in their own slot.
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
            }));
        }
        for (auto& f : workers) f.get();
    }
    return make_report(std::move(rows), 0);
}

}  // namespace petsim
