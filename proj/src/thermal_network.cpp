#include "petsim/thermal_network.hpp"

#include "petsim/errors.hpp"

#include <cmath>
#include <utility>

namespace petsim {

namespace {

constexpr double kUm = 1e-6;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

void add_link(Eigen::MatrixXd& laplacian, std::size_t i, std::size_t j, double g) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    laplacian(a, a) += g;
    laplacian(b, b) += g;
    laplacian(a, b) -= g;
    laplacian(b, a) -= g;
}

}  // namespace

MaterialTable default_materials() {
    MaterialTable table;
    table.emplace("silicon", Material{"silicon", 130.0, 1.628e6});
    return table;
}

StackGeometry default_geometry() {
    StackGeometry g;
    g.layers = {
        {"core", 60.0, "silicon"},  {"l2", 60.0, "silicon"},    {"dram0", 60.0, "silicon"},
        {"dram1", 60.0, "silicon"}, {"dram2", 60.0, "silicon"}, {"dram3", 60.0, "silicon"},
    };
    return g;
}

void StackGeometry::validate() const {
    if (layers.empty()) throw ModelError("geometry has no layers");
    if (rows <= 0 || cols <= 0) throw ModelError("geometry grid must be at least 1x1");
    if (!(cell_width_um > 0.0) || !(cell_height_um > 0.0))
        throw ModelError("cell footprint must be positive");
    if (!(heat_sink_coefficient > 0.0)) throw ModelError("heat sink coefficient must be positive");
    if (!(ambient_k >= 273.0) || !std::isfinite(ambient_k))
        throw ModelError("ambient temperature must be at least 273 K");
    for (const auto& layer : layers) {
        if (!(layer.thickness_um > 0.0) || !std::isfinite(layer.thickness_um))
            throw ModelError("layer '" + layer.name + "' must have positive thickness");
    }
}

ThermalNetwork build_network(const StackGeometry& geometry, const MaterialTable& materials) {
    geometry.validate();

    const std::size_t per_layer = geometry.cells_per_layer();
    const std::size_t n = geometry.node_count();
    const auto ni = static_cast<Eigen::Index>(n);
    const double w = geometry.cell_width_um * kUm;
    const double h = geometry.cell_height_um * kUm;
    const double area = w * h;

    std::vector<Material> layer_material;
    for (const auto& layer : geometry.layers) {
        auto it = materials.find(layer.material);
        if (it == materials.end())
            throw ModelError("layer '" + layer.name + "' uses unknown material '" + layer.material + "'");
        const Material& m = it->second;
        if (!(m.conductivity_w_mk > 0.0))
            throw ModelError("material '" + m.id + "' has non-positive conductivity");
        if (!(m.heat_capacity_j_m3k > 0.0))
            throw ModelError("material '" + m.id + "' has non-positive heat capacity");
        layer_material.push_back(m);
    }

    Eigen::VectorXd capacitance(ni);
    Eigen::MatrixXd lateral = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::MatrixXd vertical = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::VectorXd sink = Eigen::VectorXd::Zero(ni);

    const int rows = geometry.rows;
    const int cols = geometry.cols;
    const auto index = [&](std::size_t l, int r, int c) {
        return l * per_layer + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(c);
    };

    for (std::size_t l = 0; l < geometry.layers.size(); ++l) {
        const double t = geometry.layers[l].thickness_um * kUm;
        const double k = layer_material[l].conductivity_w_mk;
        const double cv = layer_material[l].heat_capacity_j_m3k;
        // Half-cell resistance from the node centre to the top/bottom face.
        const double half_r = t / (2.0 * k * area);

        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const std::size_t i = index(l, r, c);
                capacitance(static_cast<Eigen::Index>(i)) = cv * area * t;
                if (c + 1 < cols) add_link(lateral, i, index(l, r, c + 1), k * t * h / w);
                if (r + 1 < rows) add_link(lateral, i, index(l, r + 1, c), k * t * w / h);
                if (l + 1 < geometry.layers.size()) {
                    const double t_up = geometry.layers[l + 1].thickness_um * kUm;
                    const double k_up = layer_material[l + 1].conductivity_w_mk;
                    const double r_up = half_r + t_up / (2.0 * k_up * area);
                    add_link(vertical, i, index(l + 1, r, c), 1.0 / r_up);
                }
                if (l + 1 == geometry.layers.size()) {
                    const double h_sink = geometry.heat_sink_coefficient / (kUm * kUm);
                    const double g = 1.0 / (half_r + 1.0 / (h_sink * area));
                    sink(static_cast<Eigen::Index>(i)) = g;
                    vertical(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += g;
                }
            }
        }
    }

    return ThermalNetwork(geometry, std::move(capacitance), std::move(lateral), std::move(vertical),
                          std::move(sink), 1.0, 1.0);
}

ThermalNetwork::ThermalNetwork(StackGeometry geometry, Eigen::VectorXd base_capacitance,
                               Eigen::MatrixXd lateral, Eigen::MatrixXd vertical,
                               Eigen::VectorXd sink, double capacitance_scale,
                               double lateral_scale)
    : geometry_(std::move(geometry)),
      base_capacitance_(std::move(base_capacitance)),
      lateral_(std::move(lateral)),
      vertical_(std::move(vertical)),
      sink_(std::move(sink)),
      capacitance_scale_(capacitance_scale),
      lateral_scale_(lateral_scale) {
    decompose();
}

void ThermalNetwork::decompose() {
    capacitance_ = base_capacitance_ * capacitance_scale_;
    if (!(capacitance_.minCoeff() > 0.0) || !capacitance_.allFinite())
        throw ModelError("thermal capacitance matrix is singular");
    conductance_ = lateral_ * lateral_scale_ + vertical_;
    ambient_injection_ = (sink_ * geometry_.ambient_k).cwiseQuotient(capacitance_);

    const Eigen::VectorXd inv_sqrt_c = capacitance_.cwiseSqrt().cwiseInverse();
    const Eigen::VectorXd sqrt_c = capacitance_.cwiseSqrt();
    const Eigen::MatrixXd symmetric = inv_sqrt_c.asDiagonal() * conductance_ * inv_sqrt_c.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition of the thermal network failed");
    decay_rates_ = solver.eigenvalues();
    // Relative floor: a network with no path to ambient has a zero mode.
    if (!(decay_rates_(0) > 1e-12 * decay_rates_.cwiseAbs().maxCoeff()))
        throw ModelError("thermal network is unstable: no conductive path to ambient");

    const Eigen::MatrixXd& v = solver.eigenvectors();
    to_modal_ = v.transpose() * sqrt_c.asDiagonal();
    power_to_modal_ = v.transpose() * inv_sqrt_c.asDiagonal();
    from_modal_ = inv_sqrt_c.asDiagonal() * v;
}

std::size_t ThermalNetwork::node(int layer, int row, int col) const {
    if (layer < 0 || static_cast<std::size_t>(layer) >= geometry_.layers.size() || row < 0 ||
        row >= geometry_.rows || col < 0 || col >= geometry_.cols)
        throw ModelError("node index out of range");
    return static_cast<std::size_t>(layer) * geometry_.cells_per_layer() +
           static_cast<std::size_t>(row) * static_cast<std::size_t>(geometry_.cols) +
           static_cast<std::size_t>(col);
}

Eigen::MatrixXd ThermalNetwork::a_matrix() const {
    return -(capacitance_.cwiseInverse().asDiagonal() * conductance_);
}

Eigen::MatrixXd ThermalNetwork::b_matrix() const {
    return capacitance_.cwiseInverse().asDiagonal();
}

Eigen::VectorXd ThermalNetwork::steady_state(const Eigen::VectorXd& power) const {
    if (power.size() != capacitance_.size()) throw NumericError("power vector has wrong length");
    const Eigen::VectorXd modal = (power_to_modal_ * power).cwiseQuotient(decay_rates_);
    return (from_modal_ * modal).array() + geometry_.ambient_k;
}

StackState ThermalNetwork::ambient_state() const {
    return {Eigen::VectorXd::Constant(capacitance_.size(), geometry_.ambient_k), 0.0};
}

StackState ThermalNetwork::step(const StackState& state, const Eigen::VectorXd& power,
                                 double dt_s) const {
    if (!(dt_s > 0.0) || !std::isfinite(dt_s)) throw NumericError("time step must be positive and finite");
    if (state.temperature.size() != capacitance_.size() || power.size() != capacitance_.size())
        throw NumericError("state or power vector has wrong length");
    if (!all_finite(state.temperature) || !all_finite(power))
        throw NumericError("non-finite temperature or power");

    const Eigen::VectorXd excess = state.temperature.array() - geometry_.ambient_k;
    const Eigen::VectorXd y = to_modal_ * excess;
    const Eigen::VectorXd u = power_to_modal_ * power;

    Eigen::VectorXd next(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double mu = decay_rates_(i);
        const double decay = std::exp(-mu * dt_s);
        const double gain = -std::expm1(-mu * dt_s) / mu;
        next(i) = decay * y(i) + gain * u(i);
    }

    StackState out;
    out.temperature = (from_modal_ * next).array() + geometry_.ambient_k;
    out.time_s = state.time_s + dt_s;
    return out;
}

ThermalNetwork ThermalNetwork::rescaled(double capacitance_factor, double lateral_factor) const {
    if (!(capacitance_factor > 0.0) || !std::isfinite(capacitance_factor))
        throw ModelError("capacitance scale must be positive");
    if (!(lateral_factor >= 0.0) || !std::isfinite(lateral_factor))
        throw ModelError("lateral conductance scale must be non-negative");
    return ThermalNetwork(geometry_, base_capacitance_, lateral_, vertical_, sink_,
                          capacitance_scale_ * capacitance_factor, lateral_scale_ * lateral_factor);
}

StackState step_full(const ThermalNetwork& network, const StackState& state,
                     const Eigen::VectorXd& power, double dt_s) {
    return network.step(state, power, dt_s);
}

void ScalarThermalParams::validate() const {
    if (!(a1 > 0.0 && a1 < 1.0)) throw ModelError("scalar predictor a1 must lie in (0, 1)");
    if (!(dt_s > 0.0)) throw ModelError("scalar predictor dt must be positive");
    if (!std::isfinite(b1) || !std::isfinite(c1)) throw ModelError("scalar predictor constants must be finite");
}

}  // namespace petsim
