#include "hlfem/report.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace hlfem {

namespace {

constexpr int kSamplesPerElement = 10;

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error(fmt::format("write to {} failed", path.string()));
    }
}

} // namespace

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

void write_convergence_csv(std::span<const AdaptIteration> history, const std::filesystem::path& path) {
    if (history.empty()) {
        throw std::invalid_argument("write_convergence_csv: empty history");
    }
    std::ofstream out = open_for_write(path);
    out << "iteration,dof,accumulated_dof,error_percent,order,quantum_calls\n";
    for (const AdaptIteration& it : history) {
        out << it.index << ',' << it.dof << ',' << it.accumulated_dof << ',' << format_number(it.error_percent) << ','
            << (it.order ? format_number(*it.order) : std::string()) << ','
            << (it.quantum_calls ? std::to_string(*it.quantum_calls) : std::string()) << '\n';
    }
    finish(out, path);
}

void write_solution_samples(const FemField& field, const FemField* reference, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << (reference ? "x,u,u_ref\n" : "x,u\n");
    const auto row = [&](double x, double u) {
        out << format_number(x) << ',' << format_number(u);
        if (reference) out << ',' << format_number(reference->evaluate(x).value);
        out << '\n';
    };
    const Mesh1D& mesh = field.mesh();
    const auto values = field.values();
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const auto [lo, hi] = mesh.element(e);
        row(lo, values[e]);
        for (int j = 1; j <= kSamplesPerElement; ++j) {
            const double x = lo + (hi - lo) * j / (kSamplesPerElement + 1);
            row(x, field.evaluate_on(e, x).value);
        }
    }
    row(mesh.b(), values.back());
    finish(out, path);
}

void write_loss_scan_csv(std::span<const LossSample> samples, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "lambda,H\n";
    for (const LossSample& s : samples) {
        out << format_number(s.lambda) << ',' << format_number(s.loss) << '\n';
    }
    finish(out, path);
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

} // namespace hlfem
