#pragma once

// Lumped RC thermal model of a layered die stack.
//
// Each layer is split into a rows x cols grid of cells; every cell is one
// thermal node with a heat capacity, conductances to its 4 in-layer
// neighbours, conductances to the cells directly above and below, and (top
// layer only) a conductance to ambient through the heat sink. The resulting
// affine system
//
//     dT/dt = A T + B P + ambient_injection
//
// has A = -C^-1 G and B = C^-1, where G is the symmetric conductance matrix
// and C the diagonal capacitance matrix.

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace petsim {

struct Material {
    std::string id;
    double conductivity_w_mk = 0.0;      ///< W/(m K)
    double heat_capacity_j_m3k = 0.0;    ///< volumetric, J/(m^3 K)
};

using MaterialTable = std::map<std::string, Material>;

/// Bulk silicon only; the default stack is six thinned silicon dies.
MaterialTable default_materials();

struct Layer {
    std::string name;
    double thickness_um = 0.0;
    std::string material;
};

struct StackGeometry {
    std::vector<Layer> layers;  ///< bottom (compute die) to top (heat sink side)
    int rows = 4;
    int cols = 4;
    double cell_width_um = 1225.0;
    double cell_height_um = 1225.0;
    double heat_sink_coefficient = 2.8e-8;  ///< W/(um^2 K)
    double ambient_k = 300.0;

    [[nodiscard]] std::size_t cells_per_layer() const {
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    [[nodiscard]] std::size_t node_count() const { return cells_per_layer() * layers.size(); }

    /// Throws ModelError when an invariant is violated.
    void validate() const;
};

/// Core die, L2 die and four DRAM dies; 16 cells per layer, 96 nodes.
StackGeometry default_geometry();

struct StackState {
    Eigen::VectorXd temperature;  ///< Kelvin, one entry per node
    double time_s = 0.0;
};

class ThermalNetwork {
public:
    [[nodiscard]] const StackGeometry& geometry() const { return geometry_; }
    [[nodiscard]] std::size_t node_count() const { return static_cast<std::size_t>(capacitance_.size()); }
    [[nodiscard]] double ambient() const { return geometry_.ambient_k; }

    /// Flat index of (layer, row, col); layer-major, then row-major.
    [[nodiscard]] std::size_t node(int layer, int row, int col) const;

    [[nodiscard]] Eigen::MatrixXd a_matrix() const;
    [[nodiscard]] Eigen::MatrixXd b_matrix() const;
    [[nodiscard]] const Eigen::VectorXd& ambient_injection() const { return ambient_injection_; }
    [[nodiscard]] const Eigen::VectorXd& capacitance() const { return capacitance_; }
    [[nodiscard]] const Eigen::MatrixXd& conductance() const { return conductance_; }

    /// Eigenvalues of A in ascending order (all strictly negative).
    [[nodiscard]] Eigen::VectorXd eigenvalues() const { return -decay_rates_.reverse(); }
    /// Slowest decay mode, -1 / max Re(lambda(A)).
    [[nodiscard]] double dominant_time_constant() const { return 1.0 / decay_rates_(0); }

    /// Temperature reached for constant per-node power (W) as t -> infinity.
    [[nodiscard]] Eigen::VectorXd steady_state(const Eigen::VectorXd& power) const;

    [[nodiscard]] StackState ambient_state() const;

    /// Exact solution of the affine ODE over dt with power held constant.
    [[nodiscard]] StackState step(const StackState& state, const Eigen::VectorXd& power,
                                  double dt_s) const;

    /// Cumulative knob values relative to the as-built network.
    [[nodiscard]] double capacitance_scale() const { return capacitance_scale_; }
    [[nodiscard]] double lateral_scale() const { return lateral_scale_; }

    /// Copy with all capacitances multiplied by capacitance_factor and all
    /// in-layer conductances by lateral_factor (0 disconnects cells laterally).
    [[nodiscard]] ThermalNetwork rescaled(double capacitance_factor, double lateral_factor) const;

    friend ThermalNetwork build_network(const StackGeometry& geometry,
                                        const MaterialTable& materials);

private:
    ThermalNetwork(StackGeometry geometry, Eigen::VectorXd base_capacitance,
                   Eigen::MatrixXd lateral, Eigen::MatrixXd vertical, Eigen::VectorXd sink,
                   double capacitance_scale, double lateral_scale);

    void decompose();

    StackGeometry geometry_;
    Eigen::VectorXd base_capacitance_;
    Eigen::MatrixXd lateral_;   // Laplacian of in-layer conductances
    Eigen::MatrixXd vertical_;  // Laplacian of inter-layer conductances plus sink diagonal
    Eigen::VectorXd sink_;      // conductance to ambient per node
    double capacitance_scale_ = 1.0;
    double lateral_scale_ = 1.0;

    Eigen::VectorXd capacitance_;
    Eigen::MatrixXd conductance_;
    Eigen::VectorXd ambient_injection_;

    // Modal form of the symmetrised system S = C^-1/2 G C^-1/2 = V diag(mu) V^T.
    Eigen::VectorXd decay_rates_;      // mu, ascending
    Eigen::MatrixXd to_modal_;         // V^T C^1/2
    Eigen::MatrixXd power_to_modal_;   // V^T C^-1/2
    Eigen::MatrixXd from_modal_;       // C^-1/2 V
};

/// Finite-volume RC discretisation of the stack. Throws ModelError.
ThermalNetwork build_network(const StackGeometry& geometry, const MaterialTable& materials);

/// Free-function form of ThermalNetwork::step. Throws NumericError on
/// non-finite input or a non-positive dt.
StackState step_full(const ThermalNetwork& network, const StackState& state,
                     const Eigen::VectorXd& power, double dt_s);

/// Steady-state neighbourhood elevations for one powered core-layer cell.
struct CouplingProfile {
    double self_k = 0.0;
    double one_hop_max_k = 0.0;
    double one_hop_min_k = 0.0;
    double two_hop_max_k = 0.0;
};

struct CouplingProbe {
    int row = 1;
    int col = 1;
    double power_w = 3.0;
};

CouplingProfile coupling_profile(const ThermalNetwork& network, const CouplingProbe& probe = {});

/// Scales the capacitance and lateral-conductance knobs so that the dominant
/// time constant lands on target_time_constant_s (within 20%) and the
/// single-core 1-hop steady-state elevation on target_coupling_k (within 1 K).
/// Throws CalibrationError with the best residuals otherwise.
ThermalNetwork calibrate_network(const ThermalNetwork& network, double target_time_constant_s,
                                 double target_coupling_k, const CouplingProbe& probe = {});

/// One-step scalar core temperature predictor parameters.
struct ScalarThermalParams {
    double a1 = 0.9998;
    double b1 = 8.46;   ///< K/J
    double c1 = 37.0;   ///< K/s
    double dt_s = 1e-3;

    void validate() const;
};

/// a1*T + dt*(b1*P + c1). Only valid for one step from a measured T; iterating
/// it drifts toward an unphysical fixed point.
[[nodiscard]] inline double predict_scalar(double temperature_k, double power_w,
                                           const ScalarThermalParams& params) {
    return params.a1 * temperature_k + params.dt_s * (params.b1 * power_w + params.c1);
}

}  // namespace petsim
