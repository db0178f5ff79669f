#pragma once

// Per-core DVFS policies. Every policy sees only its own core's measurement;
// cores interact physically through the thermal network, never through
// controller state.

#include "petsim/power_model.hpp"
#include "petsim/thermal_network.hpp"
#include "petsim/workload.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace petsim {

class FrequencyLadder {
public:
    /// Throws ConfigError unless frequencies are positive and strictly increasing.
    explicit FrequencyLadder(std::vector<double> frequencies_ghz);

    /// 21 steps of 50 MHz from 0.5 to 1.5 GHz.
    static FrequencyLadder standard();

    [[nodiscard]] std::size_t size() const { return f_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return f_[i]; }
    [[nodiscard]] const std::vector<double>& values() const { return f_; }
    [[nodiscard]] double lower() const { return f_.front(); }
    [[nodiscard]] double upper() const { return f_.back(); }
    [[nodiscard]] bool contains(double f_ghz) const;
    /// Nearest entry; ties go to the lower one.
    [[nodiscard]] double nearest(double f_ghz) const;
    /// Smallest entry >= f_ghz (upper() if none).
    [[nodiscard]] double at_least(double f_ghz) const;

private:
    std::vector<double> f_;
};

/// One control-cycle snapshot of a core, as seen by its governor.
struct Measurement {
    double temperature_k = 300.0;
    double power_w = 0.0;         ///< core power over the previous cycle
    double ipc = 0.0;             ///< retired / (f * cycle length), previous cycle
    double f_ghz = 0.5;           ///< frequency applied over the previous cycle
    double busy_fraction = 0.0;   ///< share of the previous cycle spent in work phases
    double time_s = 0.0;
};

// ---- TRINITY ---------------------------------------------------------------

struct TrinityConfig {
    double q = 1.0;                  ///< K^-2
    double r_init = 1.0;
    double t_max_k = 355.0;
    double control_period_s = 1e-3;
    double recalib_period_s = 5e-3;
    double r_floor = 1e-6;
    double r_ceiling = 1e6;
    AlphaEstimator alpha;
    ScalarThermalParams scalar;
    PowerCoefficients power;

    void validate() const;
};

struct TrinityState {
    TrinityConfig config;
    double r = 1.0;
    double r_min = 1.0;
    double r_max = 1.0;
    double eta = 0.0;
    AlphaEstimator estimator;
    long cycle = 0;

    static TrinityState initial(const TrinityConfig& config);
};

/// Predicted temperature margin and objective terms for one candidate.
struct Candidate {
    double f_ghz = 0.0;
    double predicted_k = 0.0;
    double margin_k = 0.0;   ///< z = T_max - predicted
    double thermal = 0.0;    ///< Q z^2
    double perf = 0.0;       ///< IPC f
    [[nodiscard]] bool feasible() const { return margin_k > 0.0; }
};

[[nodiscard]] Candidate evaluate_candidate(const TrinityState& state, const Measurement& meas,
                                           double f_ghz);

/// argmax of Q z^2 + R IPC f over feasible ladder entries, ties to the lower
/// frequency; lower() if nothing is feasible. Uses state.r.
[[nodiscard]] double trinity_select(const TrinityState& state, const Measurement& meas,
                                    const FrequencyLadder& ladder);
/// Same, with an explicit R.
[[nodiscard]] double trinity_select(const TrinityState& state, const Measurement& meas,
                                    const FrequencyLadder& ladder, double r);

struct RBounds {
    double r_min = 0.0;
    double r_max = 0.0;
    bool degenerate = false;  ///< no performance axis or fewer than two feasible entries
    double lowest_feasible_ghz = 0.0;
    double highest_feasible_ghz = 0.0;
};

/// Crossover weights below/above which selection pins to the lowest/highest
/// feasible frequency. Degenerate cases collapse both to state.r.
[[nodiscard]] RBounds compute_r_bounds(const TrinityState& state, const Measurement& meas,
                                       const FrequencyLadder& ladder);

/// eta = sqrt(IPC / IPC_max), R = R_min + eta (R_max - R_min).
[[nodiscard]] TrinityState recalibrate_r(const TrinityState& state, const Measurement& meas,
                                         const FrequencyLadder& ladder);

// ---- baselines -------------------------------------------------------------

enum class UtilizationSource { busy_fraction, ipc };

struct OndemandConfig {
    double up_threshold = 0.8;
    UtilizationSource source = UtilizationSource::busy_fraction;
};

[[nodiscard]] double ondemand_utilization(const Measurement& meas, const OndemandConfig& cfg);
[[nodiscard]] double ondemand_select(const Measurement& meas, const FrequencyLadder& ladder,
                                     const OndemandConfig& cfg);

struct RegulatorConfig {
    double target_k = 340.0;
    double kp = 0.01;   ///< GHz/K
    double ki = 1.0;    ///< GHz/(K s)
    double period_s = 1e-3;
};

struct RegulatorState {
    double command_ghz = 0.0;   ///< continuous PI output before quantisation
    double prev_error_k = 0.0;
    bool primed = false;
};

/// Velocity-form PI. The command is clamped to the ladder range, which also
/// stops the integral from winding up at either end.
[[nodiscard]] double regulator_select(RegulatorState& state, const Measurement& meas,
                                      const FrequencyLadder& ladder, const RegulatorConfig& cfg);

[[nodiscard]] double fixed_select(double f_ghz, const FrequencyLadder& ladder);

// ---- polymorphic wrapper used by the engine --------------------------------

enum class GovernorKind { fixed, ondemand, trinity, regulator };

struct GovernorSpec {
    GovernorKind kind = GovernorKind::trinity;
    double fixed_ghz = 1.0;
    TrinityConfig trinity;
    OndemandConfig ondemand;
    RegulatorConfig regulator;

    [[nodiscard]] std::string label() const;
    void validate() const;
};

/// Parses "trinity", "ondemand", "regulator", "fixed-1.0" and the like.
GovernorSpec parse_governor(const std::string& text);

class Governor {
public:
    virtual ~Governor() = default;
    virtual double select(const Measurement& meas) = 0;
};

class TrinityGovernor final : public Governor {
public:
    TrinityGovernor(const TrinityConfig& config, const FrequencyLadder& ladder);
    double select(const Measurement& meas) override;
    [[nodiscard]] const TrinityState& state() const { return state_; }
    [[nodiscard]] const FrequencyLadder& ladder() const { return ladder_; }

private:
    TrinityState state_;
    FrequencyLadder ladder_;
    long recalib_every_;
};

class OndemandGovernor final : public Governor {
public:
    OndemandGovernor(const OndemandConfig& config, const FrequencyLadder& ladder)
        : config_(config), ladder_(ladder) {}
    double select(const Measurement& meas) override { return ondemand_select(meas, ladder_, config_); }

private:
    OndemandConfig config_;
    FrequencyLadder ladder_;
};

class RegulatorGovernor final : public Governor {
public:
    RegulatorGovernor(const RegulatorConfig& config, const FrequencyLadder& ladder)
        : config_(config), ladder_(ladder) {}
    double select(const Measurement& meas) override {
        return regulator_select(state_, meas, ladder_, config_);
    }

private:
    RegulatorConfig config_;
    FrequencyLadder ladder_;
    RegulatorState state_;
};

class FixedGovernor final : public Governor {
public:
    FixedGovernor(double f_ghz, const FrequencyLadder& ladder) : f_(fixed_select(f_ghz, ladder)) {}
    double select(const Measurement&) override { return f_; }

private:
    double f_;
};

std::unique_ptr<Governor> make_governor(const GovernorSpec& spec, const FrequencyLadder& ladder);

}  // namespace petsim
