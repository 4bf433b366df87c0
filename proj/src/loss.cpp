#include "hlfem/loss.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace hlfem {

namespace {

constexpr double kNodeTol = 1e-12;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

double alternating_sign(std::size_t k) { return (k % 2 == 1) ? 1.0 : -1.0; }

} // namespace

std::string_view to_string(LayerSide side) { return side == LayerSide::Left ? "left" : "right"; }

std::string_view to_string(LossMode mode) { return mode == LossMode::Literal ? "literal" : "exclude-layer"; }

LayerSide parse_layer_side(std::string_view name) {
    if (name == "left") return LayerSide::Left;
    if (name == "right") return LayerSide::Right;
    throw std::invalid_argument(fmt::format("unknown layer side '{}'", name));
}

LossMode parse_loss_mode(std::string_view name) {
    if (name == "literal") return LossMode::Literal;
    if (name == "exclude-layer") return LossMode::ExcludeLayer;
    throw std::invalid_argument(fmt::format("unknown loss mode '{}'", name));
}

double divided_difference2(std::array<double, 3> x, std::array<double, 3> u) {
    if (!(x[0] < x[1] && x[1] < x[2])) {
        throw std::invalid_argument("divided_difference2: nodes must be strictly increasing");
    }
    const double right = (u[2] - u[1]) / (x[2] - x[1]);
    const double left = (u[1] - u[0]) / (x[1] - x[0]);
    return (right - left) / (x[2] - x[0]);
}

std::vector<std::size_t> loss_stencil_nodes(const Mesh1D& mesh, double x_layer, LayerSide side, LossMode mode) {
    const std::size_t n = mesh.element_count();
    std::vector<std::size_t> ks;
    if (n < 3) {
        return ks;
    }
    if (mode == LossMode::Literal) {
        const std::size_t first = side == LayerSide::Right ? 1 : 2;
        const std::size_t last = side == LayerSide::Right ? n - 2 : n - 1;
        for (std::size_t k = first; k <= last; ++k) ks.push_back(k);
        return ks;
    }
    const auto nodes = mesh.nodes();
    for (std::size_t k = 1; k + 1 <= n; ++k) {
        const bool inside = side == LayerSide::Right ? nodes[k + 1] <= x_layer + kNodeTol
                                                     : nodes[k - 1] >= x_layer - kNodeTol;
        if (inside) ks.push_back(k);
    }
    return ks;
}

LossWeights build_loss_weights(const Mesh1D& mesh, double x_layer, LayerSide side, LossMode mode) {
    LossWeights lw;
    lw.stencil_nodes = loss_stencil_nodes(mesh, x_layer, side, mode);
    lw.w.assign(mesh.dof(), 0.0);
    const auto x = mesh.nodes();
    const std::size_t n = mesh.element_count();
    for (const std::size_t k : lw.stencil_nodes) {
        const double h1 = x[k] - x[k - 1];
        const double h2 = x[k + 1] - x[k];
        const double s = alternating_sign(k);
        // node j maps to interior slot j-1; boundary nodes carry u = 0
        if (k - 1 >= 1) lw.w[k - 2] += s / (h1 * (h1 + h2));
        lw.w[k - 1] -= s / (h1 * h2);
        if (k + 1 <= n - 1) lw.w[k] += s / (h2 * (h1 + h2));
    }
    return lw;
}

LossValue loss_from_weights(const LossWeights& weights, std::span<const double> interior) {
    if (weights.w.size() != interior.size()) {
        throw std::invalid_argument("loss_from_weights: size mismatch");
    }
    const double norm = norm2(interior);
    if (norm == 0.0) {
        return {0.0, true};
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < interior.size(); ++i) dot += weights.w[i] * interior[i];
    return {std::abs(dot) / norm, false};
}

LossValue loss_H(const FemField& field, double x_layer, LayerSide side, LossMode mode) {
    const Mesh1D& mesh = field.mesh();
    const std::vector<std::size_t> ks = loss_stencil_nodes(mesh, x_layer, side, mode);
    if (ks.empty()) {
        throw std::invalid_argument("loss_H: no divided-difference stencil in the smooth region");
    }
    const double norm = norm2(field.interior_values());
    if (norm == 0.0) {
        return {0.0, true};
    }
    const auto x = mesh.nodes();
    const auto u = field.values();
    double sum = 0.0;
    for (const std::size_t k : ks) {
        sum += alternating_sign(k) * divided_difference2({x[k - 1], x[k], x[k + 1]}, {u[k - 1], u[k], u[k + 1]});
    }
    return {std::abs(sum) / norm, false};
}

LossValue loss_F_uniform(const FemField& field) {
    const Mesh1D& mesh = field.mesh();
    if (!mesh.is_uniform()) {
        throw std::invalid_argument("loss_F_uniform: mesh is not uniform");
    }
    const std::size_t n = mesh.element_count();
    if (n < 3) {
        throw std::invalid_argument("loss_F_uniform: at least three elements required");
    }
    const double norm = norm2(field.interior_values());
    if (norm == 0.0) {
        return {0.0, true};
    }
    const auto u = field.values();
    double sum = 0.0;
    for (std::size_t k = 1; k <= n - 2; ++k) {
        sum += alternating_sign(k) * (u[k + 1] - 2.0 * u[k] + u[k - 1]);
    }
    return {std::abs(sum) / norm, false};
}

} // namespace hlfem
