#include "petsim/workload.hpp"

#include "petsim/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace petsim {

namespace {

// Relative slack when deciding that a phase boundary falls inside a step.
constexpr double kBoundarySlack = 1e-12;

double phase_rate(const Phase& phase, double f_ghz) {
    return phase.idle() ? 0.0 : throughput(phase, f_ghz) * 1e6;  // instructions per second
}

void enter_phase(const std::vector<Phase>& phases, int loops, CoreCursor& cursor) {
    // Skip zero-length phases so a step never stalls on them.
    while (!cursor.finished) {
        if (cursor.phase >= phases.size()) {
            cursor.phase = 0;
            if (++cursor.loop >= loops) {
                cursor.finished = true;
                break;
            }
        }
        cursor.remaining = phases[cursor.phase].value;
        if (cursor.remaining > 0.0) break;
        ++cursor.phase;
    }
}

}  // namespace

void Phase::validate() const {
    if (!std::isfinite(value) || !(value >= 0.0)) throw ConfigError("phase length must be non-negative");
    if (!(ipc0 >= 0.0) || ipc0 > kIpcMax) throw ConfigError("phase ipc0 must lie in [0, 4]");
    if (!(mem_slope >= 0.0) || !std::isfinite(mem_slope)) throw ConfigError("phase memory slope must be non-negative");
    if (!(alpha_true >= 0.0) || !std::isfinite(alpha_true)) throw ConfigError("phase alpha must be non-negative");
    if (idle() && mode == PhaseMode::instructions && value > 0.0)
        throw ConfigError("an idle phase cannot carry an instruction budget");
}

void WorkloadTrace::validate(std::size_t expected_cores) const {
    if (cores.size() != expected_cores)
        throw ConfigError("trace '" + name + "' has " + std::to_string(cores.size()) + " cores, expected " +
                          std::to_string(expected_cores));
    if (loops < 1) throw ConfigError("trace loop count must be at least 1");
    for (const auto& phases : cores)
        for (const auto& p : phases) p.validate();
}

double WorkloadTrace::instruction_budget(std::size_t core) const {
    double total = 0.0;
    for (const auto& p : cores.at(core))
        if (p.mode == PhaseMode::instructions) total += p.value;
    return total * loops;
}

AdvanceResult advance(const WorkloadTrace& trace, std::size_t core, CoreCursor& cursor,
                      double dt_s, double f_ghz) {
    if (!(dt_s > 0.0)) throw NumericError("advance needs a positive time step");
    const std::vector<Phase>& phases = trace.cores.at(core);
    if (!cursor.started) {
        cursor.started = true;
        if (phases.empty() || trace.loops < 1) cursor.finished = true;
        else enter_phase(phases, trace.loops, cursor);
    }

    AdvanceResult out;
    const double f3 = f_ghz * f_ghz * f_ghz;
    double left = dt_s;
    while (left > 0.0 && !cursor.finished) {
        const Phase& p = phases[cursor.phase];
        const double rate = phase_rate(p, f_ghz);
        double spent = left;
        bool done = false;
        if (p.mode == PhaseMode::duration) {
            const double avail = cursor.remaining * 1e-3;
            if (avail <= left * (1.0 + kBoundarySlack)) {
                spent = std::min(avail, left);
                done = true;
            } else {
                cursor.remaining -= spent * 1e3;
            }
            out.retired += rate * spent;
        } else {
            const double need = cursor.remaining / rate;
            if (need <= left * (1.0 + kBoundarySlack)) {
                spent = std::min(need, left);
                out.retired += cursor.remaining;  // exact budget, no rounding drift
                done = true;
            } else {
                const double r = rate * spent;
                out.retired += r;
                cursor.remaining -= r;
            }
        }
        if (!p.idle()) out.busy_fraction += spent;
        out.dynamic_energy_j += p.alpha_true * f3 * spent;
        out.traffic += p.mem_slope * ipc_at(p, f_ghz) * f_ghz * spent;
        left -= spent;
        out.active_phase = cursor.phase;
        if (done) {
            cursor.remaining = 0.0;
            ++cursor.phase;
            enter_phase(phases, trace.loops, cursor);
            if (cursor.finished) out.finished_at_s = dt_s - left;
        }
    }
    out.busy_fraction /= dt_s;
    out.traffic /= dt_s;
    return out;
}

IpcFit fit_hyperbolic_ipc(const std::vector<double>& f_ghz, const std::vector<double>& mips) {
    if (f_ghz.size() != mips.size() || f_ghz.size() < 2)
        throw ConfigError("IPC fit needs at least two (frequency, MIPS) points");
    const auto n = static_cast<Eigen::Index>(f_ghz.size());
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(f_ghz[i] > 0.0) || !(mips[i] > 0.0)) throw ConfigError("IPC fit points must be positive");

    // Starting point from the linearised form 1000 f / MIPS = 1/ipc0 + (m/ipc0) f.
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = f_ghz[i];
        rhs(i) = 1000.0 * f_ghz[i] / mips[i];
    }
    const Eigen::Vector2d lin = design.colPivHouseholderQr().solve(rhs);
    double ipc0 = 1.0 / lin(0);
    double m = std::max(0.0, lin(1) * ipc0);

    // Gauss-Newton on the MIPS residuals.
    for (int it = 0; it < 100; ++it) {
        Eigen::MatrixXd jac(n, 2);
        Eigen::VectorXd res(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double f = f_ghz[i];
            const double den = 1.0 + m * f;
            res(i) = 1000.0 * f * ipc0 / den - mips[i];
            jac(i, 0) = 1000.0 * f / den;
            jac(i, 1) = -1000.0 * f * f * ipc0 / (den * den);
        }
        const Eigen::Vector2d delta = jac.colPivHouseholderQr().solve(-res);
        ipc0 += delta(0);
        m = std::max(0.0, m + delta(1));
        if (delta.norm() < 1e-13 * (1.0 + std::abs(ipc0) + m)) break;
    }
    if (!std::isfinite(ipc0) || !std::isfinite(m)) throw NumericError("IPC fit diverged");

    IpcFit out{ipc0, m, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double model = 1000.0 * f_ghz[i] * ipc0 / (1.0 + m * f_ghz[i]);
        out.max_relative_error = std::max(out.max_relative_error, std::abs(model - mips[i]) / mips[i]);
    }
    return out;
}

}  // namespace petsim
