#include "hlfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace hlfem {

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw std::invalid_argument("Mesh1D: at least two nodes required");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i])) {
            throw std::invalid_argument("Mesh1D: non-finite node coordinate");
        }
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            throw std::invalid_argument(fmt::format("Mesh1D: nodes not strictly increasing at index {}", i));
        }
    }
}

std::pair<double, double> Mesh1D::element(std::size_t i) const {
    if (i >= element_count()) {
        throw std::out_of_range(fmt::format("Mesh1D: element {} out of range", i));
    }
    return {nodes_[i], nodes_[i + 1]};
}

double Mesh1D::element_length(std::size_t i) const {
    const auto [lo, hi] = element(i);
    return hi - lo;
}

std::size_t Mesh1D::locate(double x) const {
    if (!(x >= a() && x <= b())) {
        throw std::out_of_range(fmt::format("Mesh1D: x = {} outside [{}, {}]", x, a(), b()));
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const auto idx = static_cast<std::size_t>(it - nodes_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, element_count() - 1);
}

bool Mesh1D::is_uniform(double rel_tol) const {
    const double h = (b() - a()) / static_cast<double>(element_count());
    for (std::size_t i = 0; i < element_count(); ++i) {
        if (std::abs(element_length(i) - h) > rel_tol * h) {
            return false;
        }
    }
    return true;
}

Mesh1D uniform_mesh(std::size_t n_elements, double a, double b) {
    if (n_elements == 0) {
        throw std::invalid_argument("uniform_mesh: element count must be positive");
    }
    if (!(a < b)) {
        throw std::invalid_argument("uniform_mesh: requires a < b");
    }
    std::vector<double> nodes(n_elements + 1);
    const double n = static_cast<double>(n_elements);
    for (std::size_t i = 0; i <= n_elements; ++i) {
        // a + (b-a)*i/n keeps both ends exact
        nodes[i] = a + (b - a) * (static_cast<double>(i) / n);
    }
    nodes.back() = b;
    return Mesh1D(std::move(nodes));
}

Mesh1D bisect_elements(const Mesh1D& mesh, std::span<const std::size_t> marked) {
    std::vector<char> flag(mesh.element_count(), 0);
    for (const std::size_t k : marked) {
        if (k >= mesh.element_count()) {
            throw std::out_of_range(fmt::format("bisect_elements: element {} out of range", k));
        }
        flag[k] = 1;
    }
    const auto nodes = mesh.nodes();
    std::vector<double> out;
    out.reserve(nodes.size() + marked.size());
    out.push_back(nodes[0]);
    for (std::size_t i = 0; i < mesh.element_count(); ++i) {
        if (flag[i]) {
            out.push_back(0.5 * (nodes[i] + nodes[i + 1]));
        }
        out.push_back(nodes[i + 1]);
    }
    return Mesh1D(std::move(out));
}

std::size_t node_index(const Mesh1D& mesh, double x, double tol) {
    const auto nodes = mesh.nodes();
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), x - tol);
    if (it == nodes.end() || std::abs(*it - x) > tol) {
        throw std::invalid_argument(fmt::format("x = {} is not a mesh node", x));
    }
    return static_cast<std::size_t>(it - nodes.begin());
}

RegionPartition partition_left_right(const Mesh1D& mesh, double x_layer) {
    const std::size_t k = node_index(mesh, x_layer);
    RegionPartition p;
    p.x_layer = mesh.node(k);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        if (e < k) {
            p.left_elements.push_back(e);
        } else {
            p.right_elements.push_back(e);
        }
    }
    return p;
}

} // namespace hlfem
