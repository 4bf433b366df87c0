#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "hlfem/adaptive.hpp"
#include "hlfem/assembly.hpp"
#include "hlfem/stabilize.hpp"

namespace hlfem {

/// Shortest-safe decimal form used in every CSV: 17 significant digits.
[[nodiscard]] std::string format_number(double v);

/// Header `iteration,dof,accumulated_dof,error_percent,order,quantum_calls`.
/// Absent optional values are written as empty fields.
void write_convergence_csv(std::span<const AdaptIteration> history, const std::filesystem::path& path);

/// `x,u` (or `x,u,u_ref` with a reference) at every node plus 10 interior
/// points per element.
void write_solution_samples(const FemField& field, const FemField* reference, const std::filesystem::path& path);

/// `lambda,H`.
void write_loss_scan_csv(std::span<const LossSample> samples, const std::filesystem::path& path);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);

} // namespace hlfem
