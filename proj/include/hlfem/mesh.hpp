#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hlfem {

/// Strictly increasing partition a = x_0 < x_1 < ... < x_n = b into linear elements.
/// Element i (0-based) is [x_i, x_{i+1}].
class Mesh1D {
public:
    /// Throws std::invalid_argument unless nodes has at least two strictly increasing entries.
    explicit Mesh1D(std::vector<double> nodes);

    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] double node(std::size_t i) const { return nodes_.at(i); }
    [[nodiscard]] double a() const noexcept { return nodes_.front(); }
    [[nodiscard]] double b() const noexcept { return nodes_.back(); }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t element_count() const noexcept { return nodes_.size() - 1; }
    /// Interior node count; the homogeneous Dirichlet ends carry no unknowns.
    [[nodiscard]] std::size_t dof() const noexcept { return nodes_.size() - 2; }
    [[nodiscard]] std::pair<double, double> element(std::size_t i) const;
    [[nodiscard]] double element_length(std::size_t i) const;
    /// Index of the element containing x; nodes resolve to the element on their right
    /// (the last element for x == b). Throws std::out_of_range outside [a, b].
    [[nodiscard]] std::size_t locate(double x) const;
    [[nodiscard]] bool is_uniform(double rel_tol = 1e-12) const;

    friend bool operator==(const Mesh1D&, const Mesh1D&) = default;

private:
    std::vector<double> nodes_;
};

/// Elements of a mesh split at the boundary-layer separator node.
struct RegionPartition {
    std::vector<std::size_t> left_elements;
    std::vector<std::size_t> right_elements;
    double x_layer = 0.0;
};

[[nodiscard]] Mesh1D uniform_mesh(std::size_t n_elements, double a, double b);

/// Inserts the midpoint of every marked element. Duplicate indices are ignored.
[[nodiscard]] Mesh1D bisect_elements(const Mesh1D& mesh, std::span<const std::size_t> marked);

/// Left holds elements with both endpoints <= x_layer, Right the rest.
/// x_layer must coincide with a node to within 1e-12.
[[nodiscard]] RegionPartition partition_left_right(const Mesh1D& mesh, double x_layer);

/// Index of the node equal to x within tol, or throws std::invalid_argument.
[[nodiscard]] std::size_t node_index(const Mesh1D& mesh, double x, double tol = 1e-12);

} // namespace hlfem
