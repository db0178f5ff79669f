#pragma once

// Synthetic phase-based workloads. A phase runs either for a wall-clock
// duration or until an instruction budget is retired; its IPC follows the
// hyperbolic closure ipc0 / (1 + m f), so throughput saturates at ipc0 / m.

#include <cstddef>
#include <string>
#include <vector>

namespace petsim {

inline constexpr double kIpcMax = 4.0;  ///< issue width

enum class PhaseMode { duration, instructions };

struct Phase {
    PhaseMode mode = PhaseMode::instructions;
    double value = 0.0;       ///< ms for duration phases, instructions otherwise
    double ipc0 = 0.0;        ///< 0 marks an idle phase
    double mem_slope = 0.0;   ///< m, 1/GHz
    double alpha_true = 0.0;  ///< W/GHz^3

    [[nodiscard]] bool idle() const { return ipc0 == 0.0; }
    void validate() const;
};

[[nodiscard]] inline double ipc_at(const Phase& phase, double f_ghz) {
    return phase.ipc0 / (1.0 + phase.mem_slope * f_ghz);
}

/// Million instructions per second with f in GHz.
[[nodiscard]] inline double throughput(const Phase& phase, double f_ghz) {
    return 1000.0 * f_ghz * ipc_at(phase, f_ghz);
}

struct WorkloadTrace {
    std::string name;
    std::vector<std::vector<Phase>> cores;
    int loops = 1;  ///< each core's phase list is replayed this many times

    void validate(std::size_t expected_cores) const;
    /// Sum of instruction budgets on one core (duration phases contribute 0).
    [[nodiscard]] double instruction_budget(std::size_t core) const;
};

/// Per-core position inside a trace; owned by the engine.
struct CoreCursor {
    std::size_t phase = 0;
    int loop = 0;
    double remaining = 0.0;  ///< of the current phase, in its own unit
    bool started = false;
    bool finished = false;
};

struct AdvanceResult {
    std::size_t active_phase = 0;      ///< phase index at the end of the interval
    double retired = 0.0;              ///< instructions
    double busy_fraction = 0.0;        ///< share of dt spent in non-idle phases
    double dynamic_energy_j = 0.0;     ///< alpha_true f^3 integrated over dt
    double traffic = 0.0;              ///< time-average of m * IPC * f
    double finished_at_s = -1.0;       ///< offset into dt where the trace ended, if it did
};

/// Consumes dt seconds of the core's trace at frequency f. Past the end of
/// the trace the core idles.
AdvanceResult advance(const WorkloadTrace& trace, std::size_t core, CoreCursor& cursor,
                      double dt_s, double f_ghz);

struct IpcFit {
    double ipc0 = 0.0;
    double mem_slope = 0.0;
    double max_relative_error = 0.0;
};

/// Least-squares fit of MIPS(f) = 1000 f ipc0 / (1 + m f) to measured points.
IpcFit fit_hyperbolic_ipc(const std::vector<double>& f_ghz, const std::vector<double>& mips);

// Embedded presets for the default 16-core stack.
WorkloadTrace preset_compute_bound();
WorkloadTrace preset_memory_bound();
WorkloadTrace preset_mixed();
/// Cores 5 and 11 busy, the rest idle; core 11 goes idle after 400 ms.
WorkloadTrace preset_regulation();

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
WorkloadTrace preset_by_name(const std::string& name);

}  // namespace petsim
