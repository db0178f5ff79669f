#include "petsim/governors.hpp"

#include "petsim/errors.hpp"
#include "petsim/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace petsim {

// ---- ladder ----------------------------------------------------------------

FrequencyLadder::FrequencyLadder(std::vector<double> frequencies_ghz) : f_(std::move(frequencies_ghz)) {
    if (f_.empty()) throw ConfigError("frequency ladder is empty");
    for (std::size_t i = 0; i < f_.size(); ++i) {
        if (!(f_[i] > 0.0) || !std::isfinite(f_[i])) throw ConfigError("ladder frequencies must be positive");
        if (i > 0 && !(f_[i] > f_[i - 1])) throw ConfigError("ladder must be strictly increasing");
    }
}

FrequencyLadder FrequencyLadder::standard() {
    std::vector<double> f;
    // Built from integer MHz so every entry is the closest double to its label.
    for (int mhz = 500; mhz <= 1500; mhz += 50) f.push_back(mhz / 1000.0);
    return FrequencyLadder(std::move(f));
}

bool FrequencyLadder::contains(double f_ghz) const {
    return std::find(f_.begin(), f_.end(), f_ghz) != f_.end();
}

double FrequencyLadder::nearest(double f_ghz) const {
    double best = f_.front();
    for (double f : f_)
        if (std::abs(f - f_ghz) < std::abs(best - f_ghz)) best = f;
    return best;
}

double FrequencyLadder::at_least(double f_ghz) const {
    for (double f : f_)
        if (f >= f_ghz) return f;
    return f_.back();
}

// ---- TRINITY ---------------------------------------------------------------

void TrinityConfig::validate() const {
    if (!(q > 0.0) || !(r_init > 0.0)) throw ConfigError("TRINITY weights Q and R must be positive");
    if (!(control_period_s > 0.0)) throw ConfigError("control period must be positive");
    if (!(recalib_period_s >= control_period_s)) throw ConfigError("recalibration period must be >= control period");
    if (!(r_floor > 0.0) || !(r_ceiling >= r_floor)) throw ConfigError("R floor/ceiling are inconsistent");
    if (!(t_max_k > 0.0)) throw ConfigError("T_max must be positive");
    alpha.validate();
    try {
        scalar.validate();
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    }
}

TrinityState TrinityState::initial(const TrinityConfig& config) {
    config.validate();
    TrinityState s;
    s.config = config;
    s.r = std::clamp(config.r_init, config.r_floor, config.r_ceiling);
    s.r_min = s.r;
    s.r_max = s.r;
    s.estimator = config.alpha;
    return s;
}

Candidate evaluate_candidate(const TrinityState& state, const Measurement& meas, double f_ghz) {
    const TrinityConfig& cfg = state.config;
    const PowerBreakdown p = total_power(f_ghz, meas.temperature_k, state.estimator.alpha_hat, cfg.power);
    Candidate c;
    c.f_ghz = f_ghz;
    c.predicted_k = predict_scalar(meas.temperature_k, p.total(), cfg.scalar);
    c.margin_k = cfg.t_max_k - c.predicted_k;
    c.thermal = cfg.q * c.margin_k * c.margin_k;
    c.perf = meas.ipc * f_ghz;
    return c;
}

double trinity_select(const TrinityState& state, const Measurement& meas, const FrequencyLadder& ladder,
                      double r) {
    double best_f = ladder.lower();
    double best_j = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (double f : ladder.values()) {
        const Candidate c = evaluate_candidate(state, meas, f);
        if (!c.feasible()) continue;
        const double j = c.thermal + r * c.perf;
        if (!any || j > best_j) {  // strict: ties stay on the lower frequency
            best_j = j;
            best_f = f;
            any = true;
        }
    }
    return best_f;
}

double trinity_select(const TrinityState& state, const Measurement& meas, const FrequencyLadder& ladder) {
    return trinity_select(state, meas, ladder, state.r);
}

RBounds compute_r_bounds(const TrinityState& state, const Measurement& meas, const FrequencyLadder& ladder) {
    std::vector<Candidate> feasible;
    for (double f : ladder.values()) {
        Candidate c = evaluate_candidate(state, meas, f);
        if (c.feasible()) feasible.push_back(c);
    }
    RBounds b;
    if (!feasible.empty()) {
        b.lowest_feasible_ghz = feasible.front().f_ghz;
        b.highest_feasible_ghz = feasible.back().f_ghz;
    }
    if (feasible.size() < 2 || !(meas.ipc > 0.0)) {
        b.r_min = b.r_max = state.r;
        b.degenerate = true;
        return b;
    }

    const Candidate& lo = feasible.front();
    const Candidate& hi = feasible.back();
    double r_min = std::numeric_limits<double>::infinity();
    double r_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < feasible.size(); ++i) {
        const Candidate& c = feasible[i];
        r_min = std::min(r_min, (lo.thermal - c.thermal) / (c.perf - lo.perf));
    }
    for (std::size_t i = 0; i + 1 < feasible.size(); ++i) {
        const Candidate& c = feasible[i];
        r_max = std::max(r_max, (c.thermal - hi.thermal) / (hi.perf - c.perf));
    }
    if (r_min > r_max) r_min = r_max = 0.5 * (r_min + r_max);
    b.r_min = std::clamp(r_min, state.config.r_floor, state.config.r_ceiling);
    b.r_max = std::clamp(r_max, state.config.r_floor, state.config.r_ceiling);
    return b;
}

TrinityState recalibrate_r(const TrinityState& state, const Measurement& meas, const FrequencyLadder& ladder) {
    TrinityState out = state;
    const RBounds b = compute_r_bounds(state, meas, ladder);
    out.r_min = b.r_min;
    out.r_max = b.r_max;
    out.eta = std::clamp(std::sqrt(std::max(0.0, meas.ipc) / kIpcMax), 0.0, 1.0);
    out.r = b.r_min + out.eta * (b.r_max - b.r_min);
    return out;
}

// ---- baselines -------------------------------------------------------------

double ondemand_utilization(const Measurement& meas, const OndemandConfig& cfg) {
    const double u = cfg.source == UtilizationSource::busy_fraction ? meas.busy_fraction : meas.ipc / kIpcMax;
    return std::clamp(u, 0.0, 1.0);
}

double ondemand_select(const Measurement& meas, const FrequencyLadder& ladder, const OndemandConfig& cfg) {
    const double u = ondemand_utilization(meas, cfg);
    if (u > cfg.up_threshold) return ladder.upper();
    // Guard against u * f_upper landing a hair above a ladder entry.
    return ladder.at_least(u * ladder.upper() - 1e-9);
}

double regulator_select(RegulatorState& state, const Measurement& meas, const FrequencyLadder& ladder,
                        const RegulatorConfig& cfg) {
    const double e = cfg.target_k - meas.temperature_k;
    if (!state.primed) {
        state.command_ghz = meas.f_ghz;
        state.prev_error_k = e;
        state.primed = true;
    }
    const double next = state.command_ghz + cfg.kp * (e - state.prev_error_k) + cfg.ki * cfg.period_s * e;
    state.command_ghz = std::clamp(next, ladder.lower(), ladder.upper());
    state.prev_error_k = e;
    return ladder.nearest(state.command_ghz);
}

double fixed_select(double f_ghz, const FrequencyLadder& ladder) {
    const double f = ladder.nearest(f_ghz);
    if (f != f_ghz) {
        std::cerr << "petsim: warning: fixed frequency " << format_compact(f_ghz) << " GHz is not on the ladder; using "
                  << format_compact(f) << " GHz\n";
    }
    return f;
}

// ---- specs and wrappers ----------------------------------------------------

std::string GovernorSpec::label() const {
    switch (kind) {
        case GovernorKind::fixed: return "fixed-" + format_compact(fixed_ghz, 3);
        case GovernorKind::ondemand: return "ondemand";
        case GovernorKind::trinity: return "trinity";
        case GovernorKind::regulator: return "regulator";
    }
    return "unknown";
}

void GovernorSpec::validate() const {
    switch (kind) {
        case GovernorKind::fixed:
            if (!(fixed_ghz > 0.0)) throw ConfigError("fixed governor frequency must be positive");
            break;
        case GovernorKind::ondemand:
            if (!(ondemand.up_threshold >= 0.0 && ondemand.up_threshold <= 1.0))
                throw ConfigError("ondemand up_threshold must lie in [0, 1]");
            break;
        case GovernorKind::trinity: trinity.validate(); break;
        case GovernorKind::regulator:
            if (!(regulator.period_s > 0.0) || !(regulator.kp >= 0.0) || !(regulator.ki >= 0.0))
                throw ConfigError("regulator gains must be non-negative and period positive");
            break;
    }
}

GovernorSpec parse_governor(const std::string& text) {
    GovernorSpec spec;
    if (text == "trinity") {
        spec.kind = GovernorKind::trinity;
    } else if (text == "ondemand") {
        spec.kind = GovernorKind::ondemand;
    } else if (text == "regulator") {
        spec.kind = GovernorKind::regulator;
    } else if (text.rfind("fixed-", 0) == 0) {
        spec.kind = GovernorKind::fixed;
        spec.fixed_ghz = parse_double(text.substr(6), "fixed governor frequency");
        if (!(spec.fixed_ghz > 0.0)) throw ConfigError("fixed governor frequency must be positive");
    } else {
        throw ConfigError("unknown governor '" + text + "' (expected trinity, ondemand, regulator or fixed-<GHz>)");
    }
    return spec;
}

TrinityGovernor::TrinityGovernor(const TrinityConfig& config, const FrequencyLadder& ladder)
    : state_(TrinityState::initial(config)),
      ladder_(ladder),
      recalib_every_(std::max(1L, std::lround(config.recalib_period_s / config.control_period_s))) {}

double TrinityGovernor::select(const Measurement& meas) {
    // The first cycle has no previous-cycle power to invert.
    if (state_.cycle > 0 && meas.f_ghz > 0.0)
        state_.estimator = estimate_alpha(meas.power_w, meas.f_ghz, meas.temperature_k, state_.estimator,
                                          state_.config.power);
    if (state_.cycle % recalib_every_ == 0) state_ = recalibrate_r(state_, meas, ladder_);
    ++state_.cycle;
    return trinity_select(state_, meas, ladder_);
}

std::unique_ptr<Governor> make_governor(const GovernorSpec& spec, const FrequencyLadder& ladder) {
    spec.validate();
    switch (spec.kind) {
        case GovernorKind::fixed: return std::make_unique<FixedGovernor>(spec.fixed_ghz, ladder);
        case GovernorKind::ondemand: return std::make_unique<OndemandGovernor>(spec.ondemand, ladder);
        case GovernorKind::trinity: return std::make_unique<TrinityGovernor>(spec.trinity, ladder);
        case GovernorKind::regulator: return std::make_unique<RegulatorGovernor>(spec.regulator, ladder);
    }
    throw ConfigError("unknown governor kind");
}

}  // namespace petsim
