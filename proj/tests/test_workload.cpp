#include "petsim/errors.hpp"
#include "petsim/governors.hpp"
#include "petsim/workload.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace petsim {
namespace {

const std::vector<double> kFreqs = {0.5, 1.0, 1.5};
const std::vector<double> kKcoreMips = {4360.3, 5074.2, 5265.2};

Phase work(double instructions, double ipc0, double m) {
    return {PhaseMode::instructions, instructions, ipc0, m, 0.1};
}

// Variable projection: for fixed m the best ipc0 is a 1-D linear fit, so a
// golden-section search over m alone finds the least-squares optimum.
std::pair<double, double> brute_force_fit(const std::vector<double>& f, const std::vector<double>& y) {
    const auto best_ipc0 = [&](double m) {
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double x = 1000.0 * f[i] / (1.0 + m * f[i]);
            sxy += x * y[i];
            sxx += x * x;
        }
        return sxy / sxx;
    };
    const auto sse = [&](double m) {
        const double a = best_ipc0(m);
        double s = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double r = 1000.0 * f[i] * a / (1.0 + m * f[i]) - y[i];
            s += r * r;
        }
        return s;
    };
    double lo = 0.0, hi = 50.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < 200; ++i) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (sse(a) < sse(b)) hi = b;
        else lo = a;
    }
    const double m = 0.5 * (lo + hi);
    return {best_ipc0(m), m};
}

TEST(Ipc, ComputeBoundIsFlat) {
    const Phase p = work(1, 2.0, 0.0);
    EXPECT_EQ(ipc_at(p, 0.5), 2.0);
    EXPECT_EQ(ipc_at(p, 1.5), 2.0);
    EXPECT_DOUBLE_EQ(throughput(p, 1.5), 3000.0);
}

TEST(Ipc, HeavyMemorySlopeStarvesTheCore) {
    EXPECT_LT(ipc_at(work(1, 4.0, 1e9), 1.0), 1e-8);
}

TEST(Ipc, ThroughputIncreasingConcaveAndBounded) {
    const Phase p = work(1, 2.1, 5.67);
    double prev = 0.0, prev_inc = 1e300;
    for (double f = 0.5; f <= 1.5 + 1e-9; f += 0.05) {
        const double t = throughput(p, f);
        const double inc = t - prev;
        EXPECT_GT(t, prev);
        if (prev > 0.0) EXPECT_LT(inc, prev_inc);
        EXPECT_LT(t, 1000.0 * p.ipc0 / p.mem_slope);
        if (prev > 0.0) prev_inc = inc;
        prev = t;
    }
}

TEST(IpcFit, KcoreTripletWithinThreePercent) {
    const IpcFit fit = fit_hyperbolic_ipc(kFreqs, kKcoreMips);
    const auto [ipc0, m] = brute_force_fit(kFreqs, kKcoreMips);
    EXPECT_NEAR(fit.ipc0, ipc0, 1e-6 * ipc0);
    EXPECT_NEAR(fit.mem_slope, m, 1e-6 * m);
    // Frozen from the independent fit above.
    EXPECT_NEAR(fit.ipc0, 33.567935, 1e-5);
    EXPECT_NEAR(fit.mem_slope, 5.673047, 1e-5);
    for (std::size_t i = 0; i < kFreqs.size(); ++i) {
        const double model = 1000.0 * kFreqs[i] * fit.ipc0 / (1.0 + fit.mem_slope * kFreqs[i]);
        EXPECT_LE(std::abs(model - kKcoreMips[i]) / kKcoreMips[i], 0.03);
    }
    EXPECT_LE(fit.max_relative_error, 0.03);
    const Phase p = work(1, fit.ipc0, fit.mem_slope);
    EXPECT_NEAR(throughput(p, 1.5) / throughput(p, 0.5), 5265.2 / 4360.3, 0.01);
}

TEST(IpcFit, RecoversExactModel) {
    std::vector<double> y;
    for (double f : kFreqs) y.push_back(1000.0 * f * 3.0 / (1.0 + 0.8 * f));
    const IpcFit fit = fit_hyperbolic_ipc(kFreqs, y);
    EXPECT_NEAR(fit.ipc0, 3.0, 1e-9);
    EXPECT_NEAR(fit.mem_slope, 0.8, 1e-9);
    EXPECT_THROW((void)fit_hyperbolic_ipc({1.0}, {10.0}), ConfigError);
}

TEST(Advance, IdlePhaseRetiresNothing) {
    WorkloadTrace t;
    t.cores = {{{PhaseMode::duration, 5.0, 0.0, 0.0, 0.0}}};
    CoreCursor cur;
    const AdvanceResult r = advance(t, 0, cur, 1e-3, 1.0);
    EXPECT_EQ(r.retired, 0.0);
    EXPECT_EQ(r.busy_fraction, 0.0);
}

TEST(Advance, OneMillisecondAtThreeThousandMips) {
    WorkloadTrace t;
    t.cores = {{{PhaseMode::duration, 10.0, 2.0, 0.0, 0.1}}};
    CoreCursor cur;
    const AdvanceResult r = advance(t, 0, cur, 1e-3, 1.5);
    EXPECT_DOUBLE_EQ(r.retired, 3.0e6);
    EXPECT_DOUBLE_EQ(r.busy_fraction, 1.0);
}

TEST(Advance, BudgetCompletesInExactlyOneMillisecond) {
    WorkloadTrace t;
    t.cores = {{work(3.0e6, 2.0, 0.0)}};
    CoreCursor cur;
    AdvanceResult r = advance(t, 0, cur, 1e-3, 1.5);
    EXPECT_TRUE(cur.finished);
    EXPECT_NEAR(r.finished_at_s, 1e-3, 1e-15);
    EXPECT_DOUBLE_EQ(r.retired, 3.0e6);

    // Step-accumulation oracle: 0.1 ms slices finish on the tenth slice.
    CoreCursor fine;
    int steps = 0;
    double total = 0.0;
    while (!fine.finished && steps < 20) {
        total += advance(t, 0, fine, 1e-4, 1.5).retired;
        ++steps;
    }
    EXPECT_EQ(steps, 10);
    EXPECT_DOUBLE_EQ(total, 3.0e6);
}

TEST(Advance, PastEndOfTraceIsIdle) {
    WorkloadTrace t;
    t.cores = {{work(1.0e6, 2.0, 0.0)}};
    CoreCursor cur;
    const AdvanceResult first = advance(t, 0, cur, 1e-3, 1.0);
    EXPECT_NEAR(first.finished_at_s, 0.5e-3, 1e-15);
    EXPECT_NEAR(first.busy_fraction, 0.5, 1e-12);
    const AdvanceResult after = advance(t, 0, cur, 1e-3, 1.0);
    EXPECT_EQ(after.retired, 0.0);
    EXPECT_EQ(after.busy_fraction, 0.0);
    EXPECT_EQ(after.dynamic_energy_j, 0.0);
    EXPECT_LT(after.finished_at_s, 0.0);
}

TEST(Advance, InstructionCountIndependentOfSchedule) {
    WorkloadTrace t;
    t.cores = {{work(2.5e7, 1.7, 0.15), {PhaseMode::duration, 3.0, 0.0, 0.0, 0.0}, work(1.3e7, 2.1, 5.7)}};
    t.loops = 3;
    const double budget = t.instruction_budget(0);
    EXPECT_DOUBLE_EQ(budget, 3 * (2.5e7 + 1.3e7));
    const FrequencyLadder ladder = FrequencyLadder::standard();
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> pick(0, ladder.size() - 1);
    std::vector<double> completion;
    for (int schedule = 0; schedule < 5; ++schedule) {
        CoreCursor cur;
        double retired = 0.0;
        double time = 0.0;
        while (!cur.finished) {
            const double f = schedule == 0 ? 0.5 : (schedule == 1 ? 1.5 : ladder[pick(rng)]);
            const AdvanceResult r = advance(t, 0, cur, 1e-3, f);
            retired += r.retired;
            if (r.finished_at_s >= 0) time += r.finished_at_s;
            else time += 1e-3;
        }
        EXPECT_NEAR(retired, budget, 1e-9 * budget);
        completion.push_back(time);
    }
    EXPECT_GT(completion[0], completion[1]);  // slower clock, later finish
}

TEST(Presets, ShapeAndIpcBound) {
    const FrequencyLadder ladder = FrequencyLadder::standard();
    for (const auto& name : preset_names()) {
        const WorkloadTrace t = preset_by_name(name);
        EXPECT_EQ(t.cores.size(), 16u) << name;
        EXPECT_NO_THROW(t.validate(16));
        for (const auto& core : t.cores)
            for (const auto& p : core)
                for (double f : ladder.values()) EXPECT_LE(ipc_at(p, f), kIpcMax);
    }
    EXPECT_THROW((void)preset_by_name("nope"), ConfigError);
}

TEST(Presets, MemoryBoundCarriesKcoreFit) {
    const IpcFit fit = fit_hyperbolic_ipc(kFreqs, kKcoreMips);
    const Phase& p = preset_memory_bound().cores[0][0];
    EXPECT_NEAR(p.ipc0 * 16.0, fit.ipc0, 1e-4);
    EXPECT_NEAR(p.mem_slope, fit.mem_slope, 1e-6);
}

TEST(Presets, RegulationScenarioShape) {
    const WorkloadTrace t = preset_regulation();
    EXPECT_FALSE(t.cores[5][0].idle());
    EXPECT_FALSE(t.cores[11][0].idle());
    EXPECT_DOUBLE_EQ(t.cores[11][0].value, 400.0);
    EXPECT_TRUE(t.cores[11][1].idle());
    EXPECT_TRUE(t.cores[0][0].idle());
}

TEST(Phase, Validation) {
    Phase p = work(1e6, 4.5, 0.0);
    EXPECT_THROW(p.validate(), ConfigError);
    p = {PhaseMode::instructions, 1e6, 0.0, 0.0, 0.0};
    EXPECT_THROW(p.validate(), ConfigError);
    p = work(1e6, 2.0, -1.0);
    EXPECT_THROW(p.validate(), ConfigError);
    WorkloadTrace t = preset_mixed();
    EXPECT_THROW(t.validate(15), ConfigError);
}

}  // namespace
}  // namespace petsim
