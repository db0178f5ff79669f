#pragma once

#include <stdexcept>
#include <string>

namespace petsim {

/// Invalid geometry, materials, or thermal-model construction inputs.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario, trace, or governor configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values or a failed linear-algebra step.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Calibration could not meet its targets; carries the best residuals found.
class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& what, double time_constant_residual_s,
                     double coupling_residual_k)
        : std::runtime_error(what),
          time_constant_residual_s_(time_constant_residual_s),
          coupling_residual_k_(coupling_residual_k) {}

    [[nodiscard]] double time_constant_residual_s() const { return time_constant_residual_s_; }
    [[nodiscard]] double coupling_residual_k() const { return coupling_residual_k_; }

private:
    double time_constant_residual_s_;
    double coupling_residual_k_;
};

}  // namespace petsim
