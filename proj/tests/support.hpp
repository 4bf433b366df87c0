#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hlfem/assembly.hpp"
#include "hlfem/expr.hpp"
#include "hlfem/problem.hpp"

namespace hlfem::testing {

inline ProblemCoefficients problem(double mu, double sigma, const char* beta, const char* f) {
    return make_problem(mu, sigma, expr::parse(beta), expr::parse(f));
}

/// mu = 1, beta = 1e4, sigma = 100, f = 1e4 cos(4.5 pi x).
inline ProblemCoefficients reference_experiment() { return problem(1.0, 100.0, "10000", "10000*cos(4.5*pi*x)"); }

/// Peclet number 10.
inline ProblemCoefficients mild_problem() { return problem(1.0, 1.0, "10", "1"); }

inline Eigen::MatrixXd dense(const TridiagonalSystem& s) {
    const auto m = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        A(i, i) = s.diag[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
            A(i, i + 1) = s.super[static_cast<std::size_t>(i)];
            A(i + 1, i) = s.sub[static_cast<std::size_t>(i)];
        }
    }
    return A;
}

/// Dense LU with partial pivoting.
inline std::vector<double> dense_solve(const TridiagonalSystem& s) {
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(s.rhs.data(), static_cast<Eigen::Index>(s.size()));
    const Eigen::VectorXd x = dense(s).partialPivLu().solve(b);
    return {x.data(), x.data() + x.size()};
}

inline TridiagonalSystem random_dominant_system(std::size_t m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TridiagonalSystem s;
    s.sub.resize(m - 1);
    s.super.resize(m - 1);
    s.diag.resize(m);
    s.rhs.resize(m);
    for (auto& v : s.sub) v = u(rng);
    for (auto& v : s.super) v = u(rng);
    for (std::size_t i = 0; i < m; ++i) {
        const double off = (i > 0 ? std::abs(s.sub[i - 1]) : 0.0) + (i + 1 < m ? std::abs(s.super[i]) : 0.0);
        s.diag[i] = (u(rng) < 0 ? -1.0 : 1.0) * (off + 0.5 + std::abs(u(rng)));
        s.rhs[i] = 10.0 * u(rng);
    }
    return s;
}

inline Mesh1D random_mesh(std::size_t elements, std::mt19937_64& rng, double a = 0.0, double b = 1.0) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::vector<double> w(elements);
    double total = 0.0;
    for (auto& v : w) total += (v = u(rng));
    std::vector<double> nodes{a};
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < elements; ++i) {
        acc += w[i];
        nodes.push_back(a + (b - a) * acc / total);
    }
    nodes.push_back(b);
    return Mesh1D(std::move(nodes));
}

inline FemField random_field(const Mesh1D& mesh, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> interior(mesh.dof());
    for (auto& v : interior) v = u(rng);
    return FemField::from_interior(mesh, interior);
}

} // namespace hlfem::testing
