#include "petsim/errors.hpp"
#include "petsim/thermal_network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>

namespace petsim {

namespace {

// Grid points per decade of the lateral-scale scan, and the scan half-width.
constexpr int kStepsPerDecade = 10;
constexpr int kDecades = 3;
constexpr int kBisections = 60;
constexpr double kTimeConstantTolerance = 0.2;  // relative
constexpr double kCouplingToleranceK = 1.0;

double coupling_metric(const ThermalNetwork& network, const CouplingProbe& probe) {
    return coupling_profile(network, probe).one_hop_max_k;
}

}  // namespace

CouplingProfile coupling_profile(const ThermalNetwork& network, const CouplingProbe& probe) {
    const StackGeometry& g = network.geometry();
    if (probe.row < 0 || probe.row >= g.rows || probe.col < 0 || probe.col >= g.cols)
        throw ModelError("coupling probe lies outside the grid");

    Eigen::VectorXd power = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(network.node_count()));
    power(static_cast<Eigen::Index>(network.node(0, probe.row, probe.col))) = probe.power_w;
    const Eigen::VectorXd rise = network.steady_state(power).array() - network.ambient();

    CouplingProfile out;
    out.one_hop_min_k = std::numeric_limits<double>::infinity();
    bool any_one = false;
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const int hops = std::abs(r - probe.row) + std::abs(c - probe.col);
            const double v = rise(static_cast<Eigen::Index>(network.node(0, r, c)));
            if (hops == 0) {
                out.self_k = v;
            } else if (hops == 1) {
                out.one_hop_max_k = std::max(out.one_hop_max_k, v);
                out.one_hop_min_k = std::min(out.one_hop_min_k, v);
                any_one = true;
            } else if (hops == 2) {
                out.two_hop_max_k = std::max(out.two_hop_max_k, v);
            }
        }
    }
    if (!any_one) out.one_hop_min_k = 0.0;
    return out;
}

ThermalNetwork calibrate_network(const ThermalNetwork& network, double target_time_constant_s,
                                 double target_coupling_k, const CouplingProbe& probe) {
    if (!(target_time_constant_s > 0.0) || !(target_coupling_k > 0.0))
        throw ModelError("calibration targets must be positive");

    const auto residual = [&](double log_scale) {
        return coupling_metric(network.rescaled(1.0, std::exp(log_scale)), probe) - target_coupling_k;
    };

    // Coupling is not monotone in the lateral knob (very high lateral
    // conductance flattens the die), so scan for sign changes and take the
    // root nearest the as-built value.
    std::optional<double> root;
    const double r0 = residual(0.0);
    if (std::abs(r0) <= 1e-9 * target_coupling_k) {
        root = 0.0;
    } else {
        const double step = std::log(10.0) / kStepsPerDecade;
        const int n = kDecades * kStepsPerDecade;
        double best_distance = std::numeric_limits<double>::infinity();
        double prev_x = -n * step;
        double prev_r = residual(prev_x);
        for (int i = -n + 1; i <= n; ++i) {
            const double x = i * step;
            const double r = (i == 0) ? r0 : residual(x);
            if ((prev_r < 0.0) != (r < 0.0)) {
                const double distance = std::min(std::abs(prev_x), std::abs(x));
                if (distance < best_distance) {
                    double lo = prev_x;
                    double hi = x;
                    const bool lo_negative = prev_r < 0.0;
                    for (int k = 0; k < kBisections; ++k) {
                        const double mid = 0.5 * (lo + hi);
                        if ((residual(mid) < 0.0) == lo_negative) lo = mid;
                        else hi = mid;
                    }
                    best_distance = distance;
                    root = 0.5 * (lo + hi);
                }
            }
            prev_x = x;
            prev_r = r;
        }
    }

    if (!root) {
        const double tau_residual = network.dominant_time_constant() - target_time_constant_s;
        std::ostringstream msg;
        msg << "coupling target of " << target_coupling_k
            << " K is unreachable by lateral scaling (as-built residual " << r0 << " K)";
        throw CalibrationError(msg.str(), tau_residual, r0);
    }

    const double lateral = std::exp(*root);
    const ThermalNetwork coupled = *root == 0.0 ? network : network.rescaled(1.0, lateral);
    // Uniform capacitance scaling leaves steady state alone and scales every
    // time constant by the same factor.
    const double tau = coupled.dominant_time_constant();
    ThermalNetwork out =
        tau == target_time_constant_s ? coupled : coupled.rescaled(target_time_constant_s / tau, 1.0);

    const double tau_residual = out.dominant_time_constant() - target_time_constant_s;
    const double coupling_residual = coupling_metric(out, probe) - target_coupling_k;
    if (std::abs(tau_residual) > kTimeConstantTolerance * target_time_constant_s ||
        std::abs(coupling_residual) > kCouplingToleranceK) {
        throw CalibrationError("calibrated network misses its targets", tau_residual,
                               coupling_residual);
    }
    return out;
}

}  // namespace petsim
