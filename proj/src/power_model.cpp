#include "petsim/power_model.hpp"

#include "petsim/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>

namespace petsim {

namespace {

std::atomic<bool> domain_warned{false};

void warn_domain_once(double f_ghz, double temperature_k, double raw) {
    if (!domain_warned.exchange(true)) {
        std::cerr << "petsim: warning: leakage fit is negative (" << raw << " W at f=" << f_ghz
                  << " GHz, T=" << temperature_k << " K); clamping to 0\n";
    }
}

}  // namespace

void PowerCoefficients::validate(double max_frequency_ghz) const {
    if (!(alpha >= 0.0)) throw ConfigError("activity factor alpha must be non-negative");
    // gamma + delta f is linear in f, so checking the ends covers the ladder.
    if (!(gamma > 0.0) || !(gamma + delta * max_frequency_ghz > 0.0))
        throw ConfigError("leakage must increase with temperature across the frequency range");
}

PowerBreakdown total_power(double f_ghz, double temperature_k, double alpha,
                           const PowerCoefficients& c) {
    PowerBreakdown out;
    out.dynamic_w = alpha * f_ghz * f_ghz * f_ghz;
    const double raw = leakage_power(f_ghz, temperature_k, c);
    if (raw < 0.0) {
        warn_domain_once(f_ghz, temperature_k, raw);
        out.leakage_w = 0.0;
    } else {
        out.leakage_w = raw;
    }
    return out;
}

void AlphaEstimator::validate() const {
    if (!(smoothing > 0.0 && smoothing <= 1.0)) throw ConfigError("alpha smoothing must lie in (0, 1]");
    if (!(floor >= 0.0) || !(ceiling >= floor)) throw ConfigError("alpha clamp bounds are inconsistent");
    if (!(alpha_hat >= floor && alpha_hat <= ceiling))
        throw ConfigError("initial alpha estimate lies outside its clamp bounds");
}

AlphaEstimator estimate_alpha(double measured_power_w, double f_ghz, double temperature_k,
                              const AlphaEstimator& est, const PowerCoefficients& c) {
    if (!(f_ghz > 0.0)) throw NumericError("alpha estimation needs a positive frequency");
    const double cube = f_ghz * f_ghz * f_ghz;
    // Same zero clamp as the forward model, so noise-free inversion is exact.
    const double leak = std::max(0.0, leakage_power(f_ghz, temperature_k, c));
    double sample = (measured_power_w - leak) / cube;
    if (!std::isfinite(sample)) sample = est.floor;
    sample = std::clamp(sample, est.floor, est.ceiling);
    AlphaEstimator out = est;
    out.alpha_hat = std::clamp((1.0 - est.smoothing) * est.alpha_hat + est.smoothing * sample,
                               est.floor, est.ceiling);
    return out;
}

}  // namespace petsim
