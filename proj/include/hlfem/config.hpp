#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hlfem/adaptive.hpp"
#include "hlfem/loss.hpp"
#include "hlfem/problem.hpp"
#include "hlfem/solver.hpp"
#include "hlfem/stabilize.hpp"

namespace hlfem {

enum class RunMode { HLambda, HBaseline, Solve, LossScan };

[[nodiscard]] std::string_view to_string(RunMode mode);
/// Accepts "hlambda", "hbaseline", "solve", "loss-scan".
[[nodiscard]] RunMode parse_run_mode(std::string_view name);

/// Invalid configuration; the message starts with the offending key.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Everything a run needs. Defaults reproduce the reference experiment
/// (mu = 1, beta = 1e4, sigma = 100, f = 1e4 cos(4.5 pi x), theta = 2/3,
/// Tol = 0.2 %, N = 15).
struct RunConfig {
    RunMode mode = RunMode::HLambda;

    double mu = 1.0;
    double sigma = 100.0;
    std::string beta = "10000";
    std::string f = "10000*cos(4.5*pi*x)";
    double a = 0.0;
    double b = 1.0;

    std::size_t n_elements = 15;
    double tol_percent = 0.2;
    double theta = 2.0 / 3.0;
    double lambda_tol = 1.0;
    LayerSide layer_side = LayerSide::Right;
    LossMode loss_mode = LossMode::ExcludeLayer;
    SearchStrategy search = SearchStrategy::ScanTernary;
    int scan_intervals = 8;
    bool reuse_lambda_max = true;
    int max_iterations = 25;
    std::size_t reduced_steps = 0;

    /// 0 disables the reference solve.
    std::size_t reference_elements = 5000;
    /// Fixed lambda for mode solve.
    double lambda = 0.0;
    /// Grid size for mode loss-scan.
    std::size_t scan_samples = 200;

    BackendSettings backend{};
    std::filesystem::path output_dir = "out";

    /// Throws ConfigError naming the key.
    void validate() const;
    [[nodiscard]] ProblemCoefficients problem() const;
    [[nodiscard]] AdaptConfig adapt() const;
};

/// Unknown keys are rejected; absent keys keep their defaults.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json config_to_json(const RunConfig& cfg);

} // namespace hlfem
