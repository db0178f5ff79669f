// Acceptance checks 1-10. One PASS/FAIL line per criterion; exit status is
// the number of failures.

#include "petsim/engine.hpp"
#include "petsim/governors.hpp"
#include "petsim/metrics.hpp"
#include "petsim/power_model.hpp"
#include "petsim/thermal_network.hpp"
#include "petsim/trace_io.hpp"
#include "petsim/workload.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace petsim;

namespace {

// Tolerances and limits, pinned.
constexpr double kPredictorTolK = 1.0;
constexpr double kTauTarget = 0.040;
constexpr double kTauRelTol = 0.20;
constexpr double kCouplingLoK = 4.0;
constexpr double kCouplingHiK = 10.0;
constexpr int kOracleStates = 10000;
constexpr double kFitRelTol = 0.03;
constexpr double kMemoryEd2pRelTol = 0.10;
constexpr double kTempGapTargetK = 3.0;
constexpr double kOpsPerJouleRelTol = 0.10;
constexpr double kBookkeepingRelTol = 1e-9;
constexpr double kTmaxSlackK = 1.0;

const double kRuntimeLimit[11] = {0, 1, 5, 1, 10, 1, 30, 60, 10, 5, 60};

int failures = 0;

const ThermalNetwork& network() {
    static const ThermalNetwork net =
        calibrate_network(build_network(default_geometry(), default_materials()), kTauTarget, 7.0);
    return net;
}

ScenarioConfig scenario(const WorkloadTrace& trace, const std::string& governor) {
    ScenarioConfig cfg;
    cfg.name = trace.name + "-" + governor;
    cfg.workload = trace;
    cfg.governors = {parse_governor(governor)};
    return cfg;
}

void report(int id, const std::string& title, const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < kRuntimeLimit[id];
    ok = ok && in_time;
    if (!ok) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s, limit %.0f s]\n", ok ? "PASS" : "FAIL", id, title.c_str(),
                detail.str().c_str(), secs, kRuntimeLimit[id]);
    std::fflush(stdout);
}

// Exhaustive scan written independently of the governor code.
double enumerate(const std::vector<double>& ladder, double t, double ipc, double alpha, double r) {
    double best = ladder.front();
    double best_j = -1.0;
    bool any = false;
    for (double f : ladder) {
        double leak = -0.4267 * f + 0.674e-3 * t + 1.618e-3 * f * t - 0.09038;
        if (leak < 0.0) leak = 0.0;
        const double p = alpha * f * f * f + leak;
        const double z = 355.0 - (0.9998 * t + 1e-3 * (8.46 * p + 37.0));
        if (!(z > 0.0)) continue;
        const double j = z * z + r * ipc * f;
        if (!any || j > best_j) {
            best = f;
            best_j = j;
            any = true;
        }
    }
    return best;
}

double idle_leakage_j(const SimResult& r, double& busy_retired_on_idle) {
    double energy = 0.0;
    busy_retired_on_idle = 0.0;
    for (const auto& rec : r.records) {
        const double start = rec.time_s - r.control_period_s;
        const bool idle = rec.core != 5 && !(rec.core == 11 && start < 0.4 - 1e-12);
        if (!idle) continue;
        energy += rec.p_leak_w * r.control_period_s;
        busy_retired_on_idle += rec.retired;
    }
    return energy;
}

}  // namespace

int main() {
    (void)network();

    report(1, "predictor fidelity", [](std::ostringstream& out) {
        const ThermalNetwork& net = network();
        const ScalarThermalParams scalar;
        const auto n = static_cast<Eigen::Index>(net.node_count());
        const Eigen::Index probe = static_cast<Eigen::Index>(net.node(0, 1, 1));
        // Probe rise per watt of uniform core-layer power.
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
        for (int c = 0; c < 16; ++c) unit(static_cast<Eigen::Index>(c)) = 1.0;
        const double rise_per_w = net.steady_state(unit)(probe) - net.ambient();
        double worst = 0.0;
        double worst_t = 0.0;
        double worst_p = 0.0;
        int within = 0;
        int total = 0;
        for (double t = 300.0; t <= 355.0 + 1e-9; t += 5.0) {
            const double uniform_w = (t - net.ambient()) / rise_per_w;
            const Eigen::VectorXd p_eq = unit * uniform_w;
            const StackState start{net.steady_state(p_eq), 0.0};
            for (double p = 0.0; p <= 5.0 + 1e-9; p += 0.5) {
                Eigen::VectorXd p_step = p_eq;
                p_step(probe) = p;
                const double actual = net.step(start, p_step, 1e-3).temperature(probe);
                const double err = std::abs(predict_scalar(start.temperature(probe), p, scalar) - actual);
                ++total;
                if (err <= kPredictorTolK) ++within;
                if (err > worst) {
                    worst = err;
                    worst_t = t;
                    worst_p = p;
                }
            }
        }
        out << "max |error| " << worst << " K at T=" << worst_t << " K, P=" << worst_p << " W; " << within << "/"
            << total << " points within " << kPredictorTolK << " K";
        return worst <= kPredictorTolK;
    });

    report(2, "thermal calibration", [](std::ostringstream& out) {
        const ThermalNetwork net =
            calibrate_network(build_network(default_geometry(), default_materials()), kTauTarget, 7.0);
        const double tau = net.dominant_time_constant();
        const CouplingProfile prof = coupling_profile(net);
        out << "tau " << tau * 1e3 << " ms, 1-hop elevation " << prof.one_hop_max_k << " K (min "
            << prof.one_hop_min_k << ", 2-hop " << prof.two_hop_max_k << ")";
        return std::abs(tau - kTauTarget) <= kTauRelTol * kTauTarget && prof.one_hop_max_k >= kCouplingLoK &&
               prof.one_hop_max_k <= kCouplingHiK;
    });

    report(3, "controller-oracle equivalence", [](std::ostringstream& out) {
        const FrequencyLadder ladder = FrequencyLadder::standard();
        std::mt19937_64 rng(20240613);
        std::uniform_real_distribution<double> t(300.0, 356.0), ipc(0.0, 4.0), alpha(0.0, 3.0), logr(-6.0, 6.0);
        int mismatches = 0;
        for (int i = 0; i < kOracleStates; ++i) {
            TrinityConfig cfg;
            cfg.alpha.ceiling = 100.0;
            TrinityState s = TrinityState::initial(cfg);
            s.estimator.alpha_hat = alpha(rng);
            s.r = std::pow(10.0, logr(rng));
            Measurement m;
            m.temperature_k = t(rng);
            m.ipc = ipc(rng);
            if (trinity_select(s, m, ladder) !=
                enumerate(ladder.values(), m.temperature_k, m.ipc, s.estimator.alpha_hat, s.r))
                ++mismatches;
        }
        out << mismatches << " mismatches in " << kOracleStates << " states";
        return mismatches == 0;
    });

    report(4, "R saturation", [](std::ostringstream& out) {
        const ScenarioConfig cfg = scenario(preset_mixed(), "trinity");
        const FrequencyLadder ladder(cfg.ladder_ghz);
        long cycles = 0, degenerate = 0, violations = 0, literal_low = 0, literal_high = 0;
        run_scenario(cfg, network(), [&](const CycleView& v) {
            const auto& gov = dynamic_cast<const TrinityGovernor&>(v.governor);
            ++cycles;
            const RBounds b = compute_r_bounds(gov.state(), v.measurement, ladder);
            const double lo = trinity_select(gov.state(), v.measurement, ladder, b.r_min * 0.99);
            const double hi = trinity_select(gov.state(), v.measurement, ladder, b.r_max * 1.01);
            if (lo == ladder.lower()) ++literal_low;
            if (hi == ladder.upper()) ++literal_high;
            if (b.degenerate) {
                ++degenerate;
                return;
            }
            if (lo != b.lowest_feasible_ghz || hi != b.highest_feasible_ghz) ++violations;
        });
        out << cycles << " core-cycles, " << degenerate << " without a usable R range (idle or <2 feasible), "
            << violations << " violations against the feasible ladder ends; literal f_lo " << literal_low << "/"
            << cycles << ", literal f_hi " << literal_high << "/" << cycles;
        return violations == 0 && cycles > 0;
    });

    report(5, "workload fit", [](std::ostringstream& out) {
        const std::vector<double> f = {0.5, 1.0, 1.5};
        const std::vector<double> mips = {4360.3, 5074.2, 5265.2};
        const IpcFit fit = fit_hyperbolic_ipc(f, mips);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double model = 1000.0 * f[i] * fit.ipc0 / (1.0 + fit.mem_slope * f[i]);
            worst = std::max(worst, std::abs(model - mips[i]) / mips[i]);
        }
        out << "ipc0 " << fit.ipc0 << ", m " << fit.mem_slope << ", worst point error " << worst * 100 << "%";
        return worst <= kFitRelTol;
    });

    report(6, "ED2P trends", [](std::ostringstream& out) {
        std::vector<ScenarioConfig> cfgs;
        for (const char* g : {"fixed-0.5", "fixed-1.0", "fixed-1.5"}) cfgs.push_back(scenario(preset_compute_bound(), g));
        for (const char* g : {"fixed-1.0", "fixed-1.5"}) cfgs.push_back(scenario(preset_memory_bound(), g));
        const ComparisonReport rep = compare_governors(cfgs, network(), 4);
        const auto e = [&](int i) { return rep.rows[static_cast<std::size_t>(i)].metrics.ed2p; };
        bool timed_out = false;
        for (const auto& r : rep.rows) timed_out = timed_out || r.timed_out;
        const double mem_gap = std::abs(e(3) - e(4)) / std::min(e(3), e(4));
        out << "compute ED2P " << e(0) << " > " << e(1) << " > " << e(2) << "; memory ED2P " << e(3) << " vs " << e(4)
            << " (" << mem_gap * 100 << "% apart)";
        return !timed_out && e(0) > e(1) && e(1) > e(2) && mem_gap <= kMemoryEd2pRelTol;
    });

    ComparisonReport mixed;
    report(7, "TRINITY vs ondemand", [&](std::ostringstream& out) {
        mixed = compare_governors({scenario(preset_mixed(), "ondemand"), scenario(preset_mixed(), "trinity")},
                                  network(), 2);
        const Metrics& od = mixed.rows[0].metrics;
        const Metrics& tr = mixed.rows[1].metrics;
        const double gap = od.avg_core_temperature_k - tr.avg_core_temperature_k;
        const double opj = std::abs(tr.ops_per_joule - od.ops_per_joule) / od.ops_per_joule;
        out << "avg core T " << tr.avg_core_temperature_k << " K vs " << od.avg_core_temperature_k << " K ("
            << gap << " K lower, target >= " << kTempGapTargetK << "); ops/J differ by " << opj * 100 << "%";
        return gap > 0.0 && gap >= kTempGapTargetK && opj <= kOpsPerJouleRelTol;
    });

    report(8, "regulation inefficiency", [](std::ostringstream& out) {
        double reg_retired = 0.0, tri_retired = 0.0;
        const SimResult reg = run_scenario(scenario(preset_regulation(), "regulator"), network());
        const SimResult tri = run_scenario(scenario(preset_regulation(), "trinity"), network());
        const double reg_leak = idle_leakage_j(reg, reg_retired);
        const double tri_leak = idle_leakage_j(tri, tri_retired);
        out << "idle-core leakage " << reg_leak << " J (regulator) vs " << tri_leak << " J (TRINITY); idle retired "
            << reg_retired << " / " << tri_retired;
        return reg_retired == 0.0 && tri_retired == 0.0 && reg_leak > tri_leak;
    });

    report(9, "reliability direction", [&](std::ostringstream& out) {
        if (mixed.rows.size() != 2)
            mixed = compare_governors({scenario(preset_mixed(), "ondemand"), scenario(preset_mixed(), "trinity")},
                                      network(), 2);
        const ComparisonRow& od = mixed.rows[0];
        const ComparisonRow& tr = mixed.rows[1];
        const double em = tr.mttf_em / od.mttf_em;
        const double tddb = tr.mttf_tddb / od.mttf_tddb;
        ReliabilityParams p;
        const double v = tr.metrics.avg_voltage_v;
        const double t = tr.metrics.avg_core_temperature_k;
        const double em1 = mttf_em(v, t, p), tddb1 = mttf_tddb(v, t, p);
        p.t_act = 0.5;
        const double em_half = mttf_em(v, t, p) / em1, tddb_half = mttf_tddb(v, t, p) / tddb1;
        out << "EM ratio " << em << ", TDDB ratio " << tddb << "; t_act halving x" << em_half << " / x" << tddb_half;
        return em > 1.0 && tddb > 1.0 && std::abs(em_half - 2.0) <= 1e-12 && std::abs(tddb_half - 2.0) <= 1e-12;
    });

    report(10, "engine invariants", [](std::ostringstream& out) {
        bool ok = true;
        // Determinism with noise on.
        ScenarioConfig noisy = scenario(preset_mixed(), "trinity");
        noisy.sensor_noise_k = 0.5;
        noisy.seed = 42;
        std::ostringstream a, b;
        write_records_csv(a, run_scenario(noisy, network()));
        write_records_csv(b, run_scenario(noisy, network()));
        const bool same = a.str() == b.str();
        ok = ok && same;

        double worst_book = 0.0;
        double worst_conservation = 0.0;
        double trinity_max = 0.0;
        for (const auto& preset : {preset_compute_bound(), preset_memory_bound(), preset_mixed()}) {
            for (const char* g : {"fixed-1.0", "ondemand", "regulator", "trinity"}) {
                const SimResult r = run_scenario(scenario(preset, g), network());
                double budget = 0.0, retired = 0.0;
                for (std::size_t c = 0; c < r.cores; ++c) {
                    budget += r.budget[c];
                    retired += r.retired[c];
                }
                worst_conservation = std::max(worst_conservation, std::abs(retired - budget) / budget);
                worst_book = std::max(worst_book, std::abs(r.total_energy_j - r.energy.total()) / r.total_energy_j);
                if (std::string(g) == "trinity") trinity_max = std::max(trinity_max, r.max_core_temperature_k);
            }
        }
        out << "repeat-seed CSV " << (same ? "identical" : "DIFFERENT") << "; instruction conservation error "
            << worst_conservation << "; energy bookkeeping error " << worst_book << "; TRINITY max core T "
            << trinity_max << " K";
        return ok && worst_conservation <= kBookkeepingRelTol && worst_book <= kBookkeepingRelTol &&
               trinity_max <= 355.0 + kTmaxSlackK;
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
