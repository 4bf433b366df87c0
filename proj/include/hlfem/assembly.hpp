#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hlfem/cauchy.hpp"
#include "hlfem/mesh.hpp"
#include "hlfem/problem.hpp"

namespace hlfem {

struct FieldSample {
    double value = 0.0;
    double slope = 0.0;
};

/// Continuous piecewise-linear function with homogeneous Dirichlet ends.
class FemField {
public:
    /// values holds one entry per node; first and last must be exactly 0.
    FemField(Mesh1D mesh, std::vector<double> values);
    [[nodiscard]] static FemField from_interior(Mesh1D mesh, std::span<const double> interior);
    [[nodiscard]] static FemField zero(Mesh1D mesh);

    [[nodiscard]] const Mesh1D& mesh() const noexcept { return mesh_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> interior_values() const noexcept {
        return std::span<const double>(values_).subspan(1, values_.size() - 2);
    }
    [[nodiscard]] FieldSample evaluate(double x) const;
    /// Value and slope restricted to element e (slope is constant there).
    [[nodiscard]] FieldSample evaluate_on(std::size_t e, double x) const;

private:
    Mesh1D mesh_;
    std::vector<double> values_;
};

/// Linear interpolation; at a node the slope of the element to its right
/// (left element at x = b). Throws std::out_of_range outside [a, b].
[[nodiscard]] inline FieldSample evaluate_field(const FemField& u, double x) { return u.evaluate(x); }

/// Rows are test hats, columns trial hats, both at interior nodes.
/// sub[i] = A(i+1, i) and super[i] = A(i, i+1), both of length m - 1.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
    /// Throws std::invalid_argument when the band lengths disagree.
    void validate() const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
};

/// Galerkin system of
///   a(u, v) + lambda (u, v)_V = (f, v) + lambda (u0, v)_V
/// on the hat basis of `mesh`. Constant-coefficient bilinear terms use
/// 2-point Gauss (exact), the advection term and every right-hand-side term
/// 5-point Gauss. u0 is not touched when lambda == 0.
[[nodiscard]] TridiagonalSystem assemble_regularized(const Mesh1D& mesh, const ProblemCoefficients& c,
                                                     double lambda, const ReducedSolution& u0);

/// Plain Galerkin system for a(u, v) = (f, v) from closed-form element
/// matrices; kept separate from assemble_regularized as a cross-check.
[[nodiscard]] TridiagonalSystem assemble_galerkin(const Mesh1D& mesh, const ProblemCoefficients& c);

using FieldFunction = std::function<FieldSample(double)>;

/// Integral of u v + u' v' over [lo, hi] with `points`-point Gauss.
[[nodiscard]] double sobolev_inner_product(const FieldFunction& u, const FieldFunction& v, double lo, double hi,
                                           std::size_t points = 5);

/// (u, v)_V on element e; both fields must share the mesh.
[[nodiscard]] double sobolev_inner_product(const FemField& u, const FemField& v, std::size_t element);

/// (u, v)_V over the whole domain as the sum of element contributions.
[[nodiscard]] double sobolev_inner_product(const FemField& u, const FemField& v);

/// Wraps a field for the FieldFunction overloads.
[[nodiscard]] FieldFunction as_function(const FemField& u);

} // namespace hlfem
