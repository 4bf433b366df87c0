#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hlfem/assembly.hpp"
#include "hlfem/cauchy.hpp"
#include "hlfem/loss.hpp"
#include "hlfem/mesh.hpp"

namespace hlfem {

/// The estimator constant alpha = min(mu, sigma) is zero.
class EstimatorUndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// min(mu, sigma); throws EstimatorUndefinedError unless positive.
[[nodiscard]] double estimator_alpha(const ProblemCoefficients& c);

/// f + lambda u0 - lambda u0'' - beta u_h' - (sigma + lambda) u_h on element e.
[[nodiscard]] double residual_on(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                                 const FemField& field, std::size_t e, double x);

/// residual_on for the element containing x (the right one at a node).
[[nodiscard]] double residual_at(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                                 const FemField& field, double x);

/// Squared ingredients of the indicator on one element (7-point Gauss).
struct EtaTerms {
    /// |u0 - u_h|_K^2 in the element Sobolev norm.
    double regularization = 0.0;
    /// |sqrt(omega_K) R|_{L2(K)}^2 with omega_K the quadratic bubble.
    double residual = 0.0;
};

[[nodiscard]] EtaTerms eta_terms(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                                 const FemField& field, std::size_t e);

/// (1/alpha) sqrt(2 lambda^2 regularization + 4 residual).
[[nodiscard]] double eta_from_terms(double alpha, double lambda, const EtaTerms& t);

[[nodiscard]] double eta_element(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                                 const FemField& field, std::size_t e);

[[nodiscard]] std::vector<double> eta_indicators(const ProblemCoefficients& c, double lambda,
                                                 const ReducedSolution& u0, const FemField& field);

/// |f|_{L2(K)} per element, 5-point Gauss.
[[nodiscard]] std::vector<double> source_norms(const ProblemCoefficients& c, const Mesh1D& mesh);

/// Elements away from the layer: Left for a right layer, Right for a left one.
[[nodiscard]] std::span<const std::size_t> smooth_region(const RegionPartition& p, LayerSide side);

/// 100 sqrt(sum_R eta_K^2 / sum_R |f|_K^2) over the region R.
/// Throws std::domain_error when the source norm over R vanishes.
[[nodiscard]] double error_percent(std::span<const double> eta, std::span<const double> source_norm,
                                   std::span<const std::size_t> region);

struct ErrorBreakdown {
    std::vector<double> eta;
    double alpha = 0.0;
    double error_percent = 0.0;
    /// sqrt of the sum of eta_K^2 over the smooth region.
    double eta_left_abs = 0.0;
    RegionPartition partition;
};

[[nodiscard]] ErrorBreakdown global_error_percent(const ProblemCoefficients& c, double lambda,
                                                  const ReducedSolution& u0, const FemField& field, double x_layer,
                                                  LayerSide side = LayerSide::Right);

/// Sum of eta_K^2 over all elements; bounds |u - u_h|_V^2 from above.
[[nodiscard]] double theorem1_bound(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                                    const FemField& field);

/// -(ln eta2 - ln eta1) / (ln N2 - ln N1).
[[nodiscard]] double order_of_convergence(double eta1, double eta2, std::size_t n1, std::size_t n2);

/// |reference - field|_V integrated on the union of both meshes.
[[nodiscard]] double vnorm_error_vs_reference(const FemField& field, const FemField& reference);

/// a(v, v) + lambda (v, v)_V.
[[nodiscard]] double energy_norm_regularized_squared(const ProblemCoefficients& c, double lambda,
                                                     const FemField& v);

} // namespace hlfem
