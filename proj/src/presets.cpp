#include "petsim/errors.hpp"
#include "petsim/workload.hpp"

namespace petsim {

namespace {

constexpr std::size_t kCores = 16;

// Per-core (ipc0, m) from the least-squares fit of aggregate 16-thread MIPS at
// 0.5/1.0/1.5 GHz, divided across cores. Rounded to 6 decimals so dumped
// traces reload bit-for-bit.
constexpr double kComputeIpc0 = 1.684607;
constexpr double kComputeSlope = 0.146605;
constexpr double kMemoryIpc0 = 2.097996;
constexpr double kMemorySlope = 5.673047;
// Activity factors: about 0.75 W dynamic per compute core at 1.5 GHz, and
// memory phases a quarter of that so the L2/DRAM dies dominate.
constexpr double kComputeAlpha = 0.22;
constexpr double kMemoryAlpha = 0.05;

Phase compute_phase(double instructions) {
    return {PhaseMode::instructions, instructions, kComputeIpc0, kComputeSlope, kComputeAlpha};
}

Phase memory_phase(double instructions) {
    return {PhaseMode::instructions, instructions, kMemoryIpc0, kMemorySlope, kMemoryAlpha};
}

Phase idle_phase(double ms) { return {PhaseMode::duration, ms, 0.0, 0.0, 0.0}; }

}  // namespace

WorkloadTrace preset_compute_bound() {
    WorkloadTrace t;
    t.name = "compute-bound";
    t.cores.assign(kCores, {compute_phase(1.0e9)});
    return t;
}

WorkloadTrace preset_memory_bound() {
    WorkloadTrace t;
    t.name = "memory-bound";
    t.cores.assign(kCores, {memory_phase(1.5e8)});
    return t;
}

WorkloadTrace preset_mixed() {
    WorkloadTrace t;
    t.name = "mixed";
    t.cores.resize(kCores);
    for (std::size_t c = 0; c < kCores; ++c) {
        for (std::size_t i = 0; i < 6; ++i) {
            // Neighbouring cores run opposite phases at any given time.
            if ((c + i) % 2 == 0) {
                t.cores[c].push_back(compute_phase(1.2e8));
                t.cores[c].push_back(memory_phase(2.5e7));
            } else {
                t.cores[c].push_back(memory_phase(2.5e7));
                t.cores[c].push_back(compute_phase(1.2e8));
            }
        }
    }
    return t;
}

WorkloadTrace preset_regulation() {
    WorkloadTrace t;
    t.name = "regulation";
    t.cores.assign(kCores, {idle_phase(800.0)});
    Phase busy{PhaseMode::duration, 800.0, kComputeIpc0, kComputeSlope, kComputeAlpha};
    t.cores[5] = {busy};
    busy.value = 400.0;
    t.cores[11] = {busy, idle_phase(400.0)};
    return t;
}

std::vector<std::string> preset_names() { return {"compute-bound", "memory-bound", "mixed", "regulation"}; }

WorkloadTrace preset_by_name(const std::string& name) {
    if (name == "compute-bound" || name == "blackscholes-like") return preset_compute_bound();
    if (name == "memory-bound" || name == "kcore-like") return preset_memory_bound();
    if (name == "mixed") return preset_mixed();
    if (name == "regulation") return preset_regulation();
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace petsim
