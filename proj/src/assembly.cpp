#include "hlfem/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "hlfem/quadrature.hpp"

namespace hlfem {

namespace {

constexpr double kMinElementLength = 1e-14;

void check_element(double h, std::size_t e) {
    if (!(h >= kMinElementLength)) {
        throw std::invalid_argument(fmt::format("degenerate element {} (length {:.3e})", e, h));
    }
}

void check_same_mesh(const FemField& u, const FemField& v) {
    if (!(u.mesh() == v.mesh())) {
        throw std::invalid_argument("fields live on different meshes");
    }
}

// 2x2 element contributions scattered into the interior-node band.
struct Scatter {
    TridiagonalSystem& sys;
    std::size_t n_elements;

    void matrix(std::size_t e, double k00, double k01, double k10, double k11) const {
        // local node 0 -> global node e, local node 1 -> node e+1; unknown = node - 1
        const bool has0 = e >= 1;
        const bool has1 = e + 1 <= n_elements - 1;
        if (has0) sys.diag[e - 1] += k00;
        if (has1) sys.diag[e] += k11;
        if (has0 && has1) {
            sys.super[e - 1] += k01;
            sys.sub[e - 1] += k10;
        }
    }

    void vector(std::size_t e, double f0, double f1) const {
        if (e >= 1) sys.rhs[e - 1] += f0;
        if (e + 1 <= n_elements - 1) sys.rhs[e] += f1;
    }
};

TridiagonalSystem empty_system(std::size_t m) {
    TridiagonalSystem s;
    s.diag.assign(m, 0.0);
    s.rhs.assign(m, 0.0);
    s.sub.assign(m - 1, 0.0);
    s.super.assign(m - 1, 0.0);
    return s;
}

} // namespace

FemField::FemField(Mesh1D mesh, std::vector<double> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != mesh_.node_count()) {
        throw std::invalid_argument("FemField: one value per node required");
    }
    if (values_.front() != 0.0 || values_.back() != 0.0) {
        throw std::invalid_argument("FemField: Dirichlet boundary values must be zero");
    }
}

FemField FemField::from_interior(Mesh1D mesh, std::span<const double> interior) {
    if (interior.size() != mesh.dof()) {
        throw std::invalid_argument("FemField: interior value count does not match mesh");
    }
    std::vector<double> v(mesh.node_count(), 0.0);
    std::copy(interior.begin(), interior.end(), v.begin() + 1);
    return FemField(std::move(mesh), std::move(v));
}

FemField FemField::zero(Mesh1D mesh) {
    std::vector<double> v(mesh.node_count(), 0.0);
    return FemField(std::move(mesh), std::move(v));
}

FieldSample FemField::evaluate_on(std::size_t e, double x) const {
    const auto [lo, hi] = mesh_.element(e);
    const double h = hi - lo;
    const double slope = (values_[e + 1] - values_[e]) / h;
    if (x == hi) {
        return {values_[e + 1], slope};
    }
    return {values_[e] + slope * (x - lo), slope};
}

FieldSample FemField::evaluate(double x) const { return evaluate_on(mesh_.locate(x), x); }

void TridiagonalSystem::validate() const {
    const std::size_t m = diag.size();
    if (m == 0 || rhs.size() != m || sub.size() != m - 1 || super.size() != m - 1) {
        throw std::invalid_argument("TridiagonalSystem: band sizes disagree");
    }
}

std::vector<double> TridiagonalSystem::multiply(std::span<const double> x) const {
    validate();
    const std::size_t m = size();
    if (x.size() != m) {
        throw std::invalid_argument("TridiagonalSystem::multiply: size mismatch");
    }
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += sub[i - 1] * x[i - 1];
        if (i + 1 < m) s += super[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

TridiagonalSystem assemble_regularized(const Mesh1D& mesh, const ProblemCoefficients& c, double lambda,
                                       const ReducedSolution& u0) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("assemble_regularized: lambda must be finite and nonnegative");
    }
    if (mesh.dof() == 0) {
        throw std::invalid_argument("assemble_regularized: mesh has no interior nodes");
    }
    const std::size_t n = mesh.element_count();
    TridiagonalSystem sys = empty_system(n - 1);
    const Scatter scatter{sys, n};
    const double diffusion = c.mu + lambda;
    const double reaction = c.sigma + lambda;

    for (std::size_t e = 0; e < n; ++e) {
        const auto [lo, hi] = mesh.element(e);
        const double h = hi - lo;
        check_element(h, e);
        const double dphi[2] = {-1.0 / h, 1.0 / h};
        const auto phi = [lo = lo, hi = hi, h](int i, double x) { return i == 0 ? (hi - x) / h : (x - lo) / h; };

        double k[2][2];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                // (row i, column j) = form(trial phi_j, test phi_i)
                const double sym = integrate(lo, hi, 2, [&](double x) {
                    return diffusion * dphi[j] * dphi[i] + reaction * phi(j, x) * phi(i, x);
                });
                const double adv =
                    integrate(lo, hi, 5, [&](double x) { return c.beta.evaluate(x) * dphi[j] * phi(i, x); });
                k[i][j] = sym + adv;
            }
        }
        scatter.matrix(e, k[0][0], k[0][1], k[1][0], k[1][1]);

        double load[2];
        for (int i = 0; i < 2; ++i) {
            load[i] = integrate(lo, hi, 5, [&](double x) {
                double v = c.f.evaluate(x) * phi(i, x);
                if (lambda > 0.0) {
                    const ReducedSample s = u0.evaluate(x);
                    v += lambda * (s.u0 * phi(i, x) + s.d1 * dphi[i]);
                }
                return v;
            });
        }
        scatter.vector(e, load[0], load[1]);
    }
    return sys;
}

TridiagonalSystem assemble_galerkin(const Mesh1D& mesh, const ProblemCoefficients& c) {
    if (mesh.dof() == 0) {
        throw std::invalid_argument("assemble_galerkin: mesh has no interior nodes");
    }
    const std::size_t n = mesh.element_count();
    TridiagonalSystem sys = empty_system(n - 1);
    const Scatter scatter{sys, n};
    for (std::size_t e = 0; e < n; ++e) {
        const auto [lo, hi] = mesh.element(e);
        const double h = hi - lo;
        check_element(h, e);
        // stiffness mu/h [1 -1; -1 1], mass sigma h/6 [2 1; 1 2]
        const double ks = c.mu / h;
        const double ms = c.sigma * h / 6.0;
        // advection: row i, column j -> (1/h)(+-1) * integral beta phi_i
        const double b0 = integrate(lo, hi, 5, [&](double x) { return c.beta.evaluate(x) * (hi - x) / h; });
        const double b1 = integrate(lo, hi, 5, [&](double x) { return c.beta.evaluate(x) * (x - lo) / h; });
        scatter.matrix(e, ks + 2.0 * ms - b0 / h, -ks + ms + b0 / h, -ks + ms - b1 / h, ks + 2.0 * ms + b1 / h);
        const double f0 = integrate(lo, hi, 5, [&](double x) { return c.f.evaluate(x) * (hi - x) / h; });
        const double f1 = integrate(lo, hi, 5, [&](double x) { return c.f.evaluate(x) * (x - lo) / h; });
        scatter.vector(e, f0, f1);
    }
    return sys;
}

double sobolev_inner_product(const FieldFunction& u, const FieldFunction& v, double lo, double hi,
                             std::size_t points) {
    return integrate(lo, hi, points, [&](double x) {
        const FieldSample a = u(x);
        const FieldSample b = v(x);
        return a.value * b.value + a.slope * b.slope;
    });
}

double sobolev_inner_product(const FemField& u, const FemField& v, std::size_t element) {
    check_same_mesh(u, v);
    const auto [lo, hi] = u.mesh().element(element);
    return integrate(lo, hi, 5, [&](double x) {
        const FieldSample a = u.evaluate_on(element, x);
        const FieldSample b = v.evaluate_on(element, x);
        return a.value * b.value + a.slope * b.slope;
    });
}

double sobolev_inner_product(const FemField& u, const FemField& v) {
    check_same_mesh(u, v);
    double sum = 0.0;
    for (std::size_t e = 0; e < u.mesh().element_count(); ++e) {
        sum += sobolev_inner_product(u, v, e);
    }
    return sum;
}

FieldFunction as_function(const FemField& u) {
    return [u](double x) { return u.evaluate(x); };
}

} // namespace hlfem
