#include "hlfem/estimator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hlfem/quadrature.hpp"

namespace hlfem {

namespace {

constexpr std::size_t kBubblePoints = 7;
constexpr std::size_t kSourcePoints = 5;

} // namespace

double estimator_alpha(const ProblemCoefficients& c) {
    const double alpha = std::min(c.mu, c.sigma);
    if (!(alpha > 0.0)) {
        throw EstimatorUndefinedError(
            fmt::format("estimator undefined: alpha = min(mu, sigma) = {} must be positive", alpha));
    }
    return alpha;
}

double residual_on(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0, const FemField& field,
                   std::size_t e, double x) {
    const FieldSample u = field.evaluate_on(e, x);
    double r = c.f.evaluate(x) - c.beta.evaluate(x) * u.slope - (c.sigma + lambda) * u.value;
    if (lambda != 0.0) {
        const ReducedSample s = u0.evaluate(x);
        r += lambda * (s.u0 - s.d2);
    }
    return r;
}

double residual_at(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0, const FemField& field,
                   double x) {
    return residual_on(c, lambda, u0, field, field.mesh().locate(x), x);
}

EtaTerms eta_terms(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0, const FemField& field,
                   std::size_t e) {
    const auto [lo, hi] = field.mesh().element(e);
    EtaTerms t;
    if (lambda != 0.0) {
        t.regularization = integrate(lo, hi, kBubblePoints, [&](double x) {
            const ReducedSample s = u0.evaluate(x);
            const FieldSample u = field.evaluate_on(e, x);
            const double dv = s.u0 - u.value;
            const double ds = s.d1 - u.slope;
            return dv * dv + ds * ds;
        });
    }
    t.residual = integrate(lo, hi, kBubblePoints, [&](double x) {
        const double r = residual_on(c, lambda, u0, field, e, x);
        return (hi - x) * (x - lo) * r * r;
    });
    return t;
}

double eta_from_terms(double alpha, double lambda, const EtaTerms& t) {
    return std::sqrt(2.0 * lambda * lambda * t.regularization + 4.0 * t.residual) / alpha;
}

double eta_element(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0, const FemField& field,
                   std::size_t e) {
    const double alpha = estimator_alpha(c);
    return eta_from_terms(alpha, lambda, eta_terms(c, lambda, u0, field, e));
}

std::vector<double> eta_indicators(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                                   const FemField& field) {
    const double alpha = estimator_alpha(c);
    const std::size_t n = field.mesh().element_count();
    std::vector<double> eta(n);
    for (std::size_t e = 0; e < n; ++e) {
        eta[e] = eta_from_terms(alpha, lambda, eta_terms(c, lambda, u0, field, e));
    }
    return eta;
}

std::vector<double> source_norms(const ProblemCoefficients& c, const Mesh1D& mesh) {
    std::vector<double> out(mesh.element_count());
    for (std::size_t e = 0; e < out.size(); ++e) {
        const auto [lo, hi] = mesh.element(e);
        out[e] = std::sqrt(integrate(lo, hi, kSourcePoints, [&](double x) {
            const double f = c.f.evaluate(x);
            return f * f;
        }));
    }
    return out;
}

std::span<const std::size_t> smooth_region(const RegionPartition& p, LayerSide side) {
    return side == LayerSide::Right ? std::span<const std::size_t>(p.left_elements)
                                    : std::span<const std::size_t>(p.right_elements);
}

double error_percent(std::span<const double> eta, std::span<const double> source_norm,
                     std::span<const std::size_t> region) {
    double num = 0.0;
    double den = 0.0;
    for (const std::size_t e : region) {
        num += eta[e] * eta[e];
        den += source_norm[e] * source_norm[e];
    }
    if (!(den > 0.0)) {
        throw std::domain_error("error_percent: source norm over the region is zero");
    }
    return 100.0 * std::sqrt(num / den);
}

ErrorBreakdown global_error_percent(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                                    const FemField& field, double x_layer, LayerSide side) {
    ErrorBreakdown out;
    out.alpha = estimator_alpha(c);
    out.eta = eta_indicators(c, lambda, u0, field);
    out.partition = partition_left_right(field.mesh(), x_layer);
    const auto region = smooth_region(out.partition, side);
    const std::vector<double> fn = source_norms(c, field.mesh());
    out.error_percent = error_percent(out.eta, fn, region);
    double s = 0.0;
    for (const std::size_t e : region) s += out.eta[e] * out.eta[e];
    out.eta_left_abs = std::sqrt(s);
    return out;
}

double theorem1_bound(const ProblemCoefficients& c, double lambda, const ReducedSolution& u0,
                      const FemField& field) {
    double s = 0.0;
    for (const double e : eta_indicators(c, lambda, u0, field)) s += e * e;
    return s;
}

double order_of_convergence(double eta1, double eta2, std::size_t n1, std::size_t n2) {
    if (!(eta1 > 0.0) || !(eta2 > 0.0) || n1 < 1 || n2 <= n1) {
        throw std::invalid_argument("order_of_convergence: need eta1, eta2 > 0 and N2 > N1 >= 1");
    }
    return -(std::log(eta2) - std::log(eta1)) / (std::log(static_cast<double>(n2)) - std::log(static_cast<double>(n1)));
}

double vnorm_error_vs_reference(const FemField& field, const FemField& reference) {
    const Mesh1D& m1 = field.mesh();
    const Mesh1D& m2 = reference.mesh();
    const double scale = std::max(std::abs(m1.a()), std::abs(m1.b())) + (m1.b() - m1.a());
    if (std::abs(m1.a() - m2.a()) > 1e-12 * scale || std::abs(m1.b() - m2.b()) > 1e-12 * scale) {
        throw std::invalid_argument("vnorm_error_vs_reference: fields live on different domains");
    }
    std::vector<double> nodes;
    nodes.reserve(m1.node_count() + m2.node_count());
    std::merge(m1.nodes().begin(), m1.nodes().end(), m2.nodes().begin(), m2.nodes().end(),
               std::back_inserter(nodes));
    const double merge_tol = 1e-13 * scale;
    std::vector<double> unique_nodes;
    for (const double x : nodes) {
        if (unique_nodes.empty() || x - unique_nodes.back() > merge_tol) unique_nodes.push_back(x);
    }
    unique_nodes.back() = m1.b();

    double s = 0.0;
    for (std::size_t i = 0; i + 1 < unique_nodes.size(); ++i) {
        const double lo = unique_nodes[i];
        const double hi = unique_nodes[i + 1];
        const double mid = 0.5 * (lo + hi);
        const std::size_t e1 = m1.locate(std::clamp(mid, m1.a(), m1.b()));
        const std::size_t e2 = m2.locate(std::clamp(mid, m2.a(), m2.b()));
        s += integrate(lo, hi, 2, [&](double x) {
            const FieldSample u = field.evaluate_on(e1, x);
            const FieldSample r = reference.evaluate_on(e2, x);
            const double dv = r.value - u.value;
            const double ds = r.slope - u.slope;
            return dv * dv + ds * ds;
        });
    }
    return std::sqrt(s);
}

double energy_norm_regularized_squared(const ProblemCoefficients& c, double lambda, const FemField& v) {
    const Mesh1D& mesh = v.mesh();
    double s = 0.0;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const auto [lo, hi] = mesh.element(e);
        s += integrate(lo, hi, 5, [&](double x) {
            const FieldSample u = v.evaluate_on(e, x);
            return (c.mu + lambda) * u.slope * u.slope + c.beta.evaluate(x) * u.slope * u.value +
                   (c.sigma + lambda) * u.value * u.value;
        });
    }
    return s;
}

} // namespace hlfem
