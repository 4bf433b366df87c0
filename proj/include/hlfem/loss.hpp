#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hlfem/assembly.hpp"
#include "hlfem/mesh.hpp"

namespace hlfem {

/// Which end of the domain carries the boundary layer.
enum class LayerSide { Left, Right };

/// Range of the alternating divided-difference sum.
///  - ExcludeLayer: every interior node whose three-point stencil lies fully
///    on the smooth side of x_layer.
///  - Literal: the fixed range k = 1..n-2 (right layer) or k = 2..n-1 (left
///    layer), i.e. only the single outermost element is dropped.
enum class LossMode { ExcludeLayer, Literal };

[[nodiscard]] std::string_view to_string(LayerSide side);
[[nodiscard]] std::string_view to_string(LossMode mode);
[[nodiscard]] LayerSide parse_layer_side(std::string_view name);
[[nodiscard]] LossMode parse_loss_mode(std::string_view name);

/// Second divided difference [u0, u1, u2] on strictly increasing x.
/// Throws std::invalid_argument for coincident or unordered nodes.
[[nodiscard]] double divided_difference2(std::array<double, 3> x, std::array<double, 3> u);

/// Node indices k (1-based interior numbering, i.e. mesh node index) whose
/// stencil enters the loss sum.
[[nodiscard]] std::vector<std::size_t> loss_stencil_nodes(const Mesh1D& mesh, double x_layer, LayerSide side,
                                                          LossMode mode);

/// The loss numerator as a linear functional on the interior nodal vector:
/// sum_k (-1)^(k-1) [u_{k-1}, u_k, u_{k+1}] = w . u.
struct LossWeights {
    std::vector<double> w;
    std::vector<std::size_t> stencil_nodes;
};

[[nodiscard]] LossWeights build_loss_weights(const Mesh1D& mesh, double x_layer, LayerSide side, LossMode mode);

struct LossValue {
    double value = 0.0;
    /// Set when every interior value is zero; value is then 0 by convention.
    bool degenerate = false;
};

/// |w . u| / |u| with |u| over all interior nodes.
[[nodiscard]] LossValue loss_from_weights(const LossWeights& weights, std::span<const double> interior);

/// Oscillation loss of a field on an arbitrary mesh, summed stencil by
/// stencil from divided differences.
[[nodiscard]] LossValue loss_H(const FemField& field, double x_layer, LayerSide side,
                               LossMode mode = LossMode::ExcludeLayer);

/// Uniform-mesh loss from central second differences over k = 1..n-2.
/// Throws std::invalid_argument on a nonuniform mesh.
[[nodiscard]] LossValue loss_F_uniform(const FemField& field);

} // namespace hlfem
