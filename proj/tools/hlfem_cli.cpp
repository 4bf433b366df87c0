#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hlfem/config.hpp"
#include "hlfem/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hlambda-adaptive FEM for 1D singularly perturbed advection-diffusion-reaction problems"};
    std::string config_path;
    std::optional<std::string> mode;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON run configuration (defaults are used when omitted)");
    app.add_option("--mode", mode, "hlambda | hbaseline | solve | loss-scan");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "backend PRNG seed");
    CLI11_PARSE(app, argc, argv);

    try {
        hlfem::RunConfig cfg = config_path.empty() ? hlfem::RunConfig{} : hlfem::load_config(config_path);
        if (mode) cfg.mode = hlfem::parse_run_mode(*mode);
        if (out_dir) cfg.output_dir = *out_dir;
        if (seed) cfg.backend.seed = *seed;
        const nlohmann::json summary = hlfem::run(cfg);
        if (summary.contains("final")) {
            const auto& f = summary["final"];
            std::cout << fmt::format("{}: {} iterations, final dof {}, accumulated dof {}, error {:.4g}%\n",
                                     hlfem::to_string(cfg.mode), f["iterations"].get<int>(),
                                     f["dof"].get<std::size_t>(), f["accumulated_dof"].get<std::size_t>(),
                                     f["error_percent"].get<double>());
        } else {
            std::cout << summary["result"].dump() << '\n';
        }
        std::cout << "reports written to " << cfg.output_dir.string() << '\n';
    } catch (const hlfem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
