#pragma once

// Core power polynomial: P = alpha f^3 + beta f + gamma T + delta f T + epsilon,
// with f in GHz and T in Kelvin. The first term is dynamic power; the rest is
// the temperature-dependent leakage fit.

namespace petsim {

struct PowerCoefficients {
    double alpha = 0.0;          ///< W/GHz^3
    double beta = -426.7e-3;     ///< W/GHz
    double gamma = 0.674e-3;     ///< W/K
    double delta = 1.618e-3;     ///< W/(GHz K)
    double epsilon = -90.38e-3;  ///< W

    /// Leakage must grow with temperature on [0, max_frequency_ghz].
    void validate(double max_frequency_ghz = 1.5) const;
};

/// Raw leakage polynomial; can go negative outside the fitted range.
[[nodiscard]] inline double leakage_power(double f_ghz, double temperature_k,
                                          const PowerCoefficients& c) {
    return c.beta * f_ghz + c.gamma * temperature_k + c.delta * f_ghz * temperature_k + c.epsilon;
}

struct PowerBreakdown {
    double dynamic_w = 0.0;
    double leakage_w = 0.0;
    [[nodiscard]] double total() const { return dynamic_w + leakage_w; }
};

/// Leakage is clamped at zero; the first clamp in a process prints a warning
/// to stderr.
PowerBreakdown total_power(double f_ghz, double temperature_k, double alpha,
                           const PowerCoefficients& c);

struct AlphaEstimator {
    double alpha_hat = 0.0;
    double smoothing = 0.5;  ///< EMA weight of the newest sample, in (0, 1]
    double floor = 0.0;
    double ceiling = 10.0;

    void validate() const;
};

/// Inverts the power model on one measurement and blends it into the EMA.
[[nodiscard]] AlphaEstimator estimate_alpha(double measured_power_w, double f_ghz,
                                            double temperature_k, const AlphaEstimator& est,
                                            const PowerCoefficients& c);

}  // namespace petsim
