#include "hlfem/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "hlfem/expr.hpp"

namespace hlfem {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& prefix = "") {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        out = it->template get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("{}{}: wrong type", prefix, key));
    }
}

// Counts are read as signed integers first so negative input is reported
// instead of wrapping.
template <typename T>
void read_count(const json& j, const char* key, T& out, const std::string& prefix = "") {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    if (!it->is_number_integer()) {
        throw ConfigError(fmt::format("{}{}: expected an integer", prefix, key));
    }
    const auto v = it->template get<long long>();
    if (v < 0) {
        throw ConfigError(fmt::format("{}{}: must be nonnegative", prefix, key));
    }
    out = static_cast<T>(v);
}

template <typename Parse>
void read_enum(const json& j, const char* key, Parse parse, const std::string& prefix = "") {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    if (!it->is_string()) {
        throw ConfigError(fmt::format("{}{}: expected a string", prefix, key));
    }
    try {
        parse(it->template get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}{}: {}", prefix, key, e.what()));
    }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& prefix) {
    if (!j.is_object()) {
        throw ConfigError(fmt::format("{}: expected an object", prefix.empty() ? "config" : prefix));
    }
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError(fmt::format("{}{}: unknown key", prefix, key));
        }
    }
}

void require(bool ok, std::string_view key, std::string_view what) {
    if (!ok) {
        throw ConfigError(fmt::format("{}: {}", key, what));
    }
}

} // namespace

std::string_view to_string(RunMode mode) {
    switch (mode) {
    case RunMode::HLambda:
        return "hlambda";
    case RunMode::HBaseline:
        return "hbaseline";
    case RunMode::Solve:
        return "solve";
    case RunMode::LossScan:
        return "loss-scan";
    }
    return "?";
}

RunMode parse_run_mode(std::string_view name) {
    if (name == "hlambda") return RunMode::HLambda;
    if (name == "hbaseline") return RunMode::HBaseline;
    if (name == "solve") return RunMode::Solve;
    if (name == "loss-scan") return RunMode::LossScan;
    throw std::invalid_argument(fmt::format("unknown mode '{}'", name));
}

void RunConfig::validate() const {
    require(std::isfinite(mu) && mu > 0.0, "problem.mu", "must be positive");
    require(std::isfinite(sigma) && sigma >= 0.0, "problem.sigma", "must be nonnegative");
    require(std::isfinite(a) && std::isfinite(b) && a < b, "problem.domain", "need a < b");
    for (const auto& [key, text] : {std::pair{"problem.beta", &beta}, std::pair{"problem.f", &f}}) {
        try {
            (void)expr::parse(*text);
        } catch (const expr::ParseError& e) {
            throw ConfigError(fmt::format("{}: {} (at offset {})", key, e.what(), e.position()));
        }
    }
    require(n_elements >= 3, "N", "must be at least 3");
    require(std::isfinite(tol_percent) && tol_percent > 0.0, "tol_percent", "must be positive");
    require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0, 1]");
    require(std::isfinite(lambda_tol) && lambda_tol > 0.0, "lambda_tol", "must be positive");
    require(scan_intervals >= 2, "scan_intervals", "must be at least 2");
    require(max_iterations >= 1, "max_iterations", "must be at least 1");
    require(reduced_steps == 0 || reduced_steps >= 16, "reduced_steps", "must be 0 or at least 16");
    require(reference_elements == 0 || reference_elements >= 2, "reference_elements", "must be 0 or at least 2");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda", "must be nonnegative");
    require(scan_samples >= 3, "scan_samples", "must be at least 3");
    require(backend.shots >= 1, "backend.shots", "must be positive");
    require(backend.clock_qubits >= 1 && backend.clock_qubits <= 8, "backend.clock_qubits", "must lie in [1, 8]");
    require(std::isfinite(backend.evolution_time) && backend.evolution_time >= 0.0, "backend.evolution_time",
            "must be nonnegative (0 = automatic)");
    require(backend.postselection_retries >= 1, "backend.postselection_retries", "must be positive");
    if (mode == RunMode::HLambda || mode == RunMode::HBaseline) {
        require(sigma > 0.0, "problem.sigma", "must be positive for adaptive modes (estimator constant min(mu, sigma))");
    }
}

ProblemCoefficients RunConfig::problem() const {
    try {
        return make_problem(mu, sigma, expr::parse(beta), expr::parse(f), a, b);
    } catch (const expr::ParseError& e) {
        throw ConfigError(fmt::format("problem: {}", e.what()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("problem: {}", e.what()));
    }
}

AdaptConfig RunConfig::adapt() const {
    AdaptConfig c;
    c.initial_elements = n_elements;
    c.tol_percent = tol_percent;
    c.theta = theta;
    c.side = layer_side;
    c.loss_mode = loss_mode;
    c.search.tol = lambda_tol;
    c.search.strategy = search;
    c.search.scan_intervals = scan_intervals;
    c.reuse_lambda_max = reuse_lambda_max;
    c.max_iterations = max_iterations;
    c.reduced_steps = reduced_steps;
    return c;
}

RunConfig config_from_json(const json& j) {
    reject_unknown(j,
                   {"mode", "problem", "N", "tol_percent", "theta", "lambda_tol", "layer_side", "loss_mode", "search",
                    "scan_intervals", "reuse_lambda_max", "max_iterations", "reduced_steps", "reference_elements",
                    "lambda", "scan_samples", "backend", "output_dir"},
                   "");
    RunConfig c;
    read_enum(j, "mode", [&](const std::string& s) { c.mode = parse_run_mode(s); });
    if (const auto p = j.find("problem"); p != j.end()) {
        reject_unknown(*p, {"mu", "sigma", "beta", "f", "domain"}, "problem.");
        read(*p, "mu", c.mu, "problem.");
        read(*p, "sigma", c.sigma, "problem.");
        read(*p, "beta", c.beta, "problem.");
        read(*p, "f", c.f, "problem.");
        if (const auto d = p->find("domain"); d != p->end()) {
            if (!d->is_array() || d->size() != 2 || !(*d)[0].is_number() || !(*d)[1].is_number()) {
                throw ConfigError("problem.domain: expected [a, b]");
            }
            c.a = (*d)[0].get<double>();
            c.b = (*d)[1].get<double>();
        }
    }
    read_count(j, "N", c.n_elements);
    read(j, "tol_percent", c.tol_percent);
    read(j, "theta", c.theta);
    read(j, "lambda_tol", c.lambda_tol);
    read_enum(j, "layer_side", [&](const std::string& s) { c.layer_side = parse_layer_side(s); });
    read_enum(j, "loss_mode", [&](const std::string& s) { c.loss_mode = parse_loss_mode(s); });
    read_enum(j, "search", [&](const std::string& s) { c.search = parse_search_strategy(s); });
    read_count(j, "scan_intervals", c.scan_intervals);
    read(j, "reuse_lambda_max", c.reuse_lambda_max);
    read_count(j, "max_iterations", c.max_iterations);
    read_count(j, "reduced_steps", c.reduced_steps);
    read_count(j, "reference_elements", c.reference_elements);
    read(j, "lambda", c.lambda);
    read_count(j, "scan_samples", c.scan_samples);
    if (const auto bk = j.find("backend"); bk != j.end()) {
        reject_unknown(*bk,
                       {"kind", "shots", "clock_qubits", "evolution_time", "postselection_retries", "seed",
                        "noisy_search"},
                       "backend.");
        read_enum(*bk, "kind", [&](const std::string& s) { c.backend.kind = parse_backend_kind(s); }, "backend.");
        read_count(*bk, "shots", c.backend.shots, "backend.");
        read_count(*bk, "clock_qubits", c.backend.clock_qubits, "backend.");
        read(*bk, "evolution_time", c.backend.evolution_time, "backend.");
        read_count(*bk, "postselection_retries", c.backend.postselection_retries, "backend.");
        read_count(*bk, "seed", c.backend.seed, "backend.");
        read(*bk, "noisy_search", c.backend.noisy_search, "backend.");
    }
    if (const auto o = j.find("output_dir"); o != j.end()) {
        if (!o->is_string()) throw ConfigError("output_dir: expected a string");
        c.output_dir = o->get<std::string>();
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("config: cannot open {}", path.string()));
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config: {}", e.what()));
    }
    return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
    return json{
        {"mode", to_string(c.mode)},
        {"problem", {{"mu", c.mu}, {"sigma", c.sigma}, {"beta", c.beta}, {"f", c.f}, {"domain", {c.a, c.b}}}},
        {"N", c.n_elements},
        {"tol_percent", c.tol_percent},
        {"theta", c.theta},
        {"lambda_tol", c.lambda_tol},
        {"layer_side", to_string(c.layer_side)},
        {"loss_mode", to_string(c.loss_mode)},
        {"search", to_string(c.search)},
        {"scan_intervals", c.scan_intervals},
        {"reuse_lambda_max", c.reuse_lambda_max},
        {"max_iterations", c.max_iterations},
        {"reduced_steps", c.reduced_steps},
        {"reference_elements", c.reference_elements},
        {"lambda", c.lambda},
        {"scan_samples", c.scan_samples},
        {"backend",
         {{"kind", to_string(c.backend.kind)},
          {"shots", c.backend.shots},
          {"clock_qubits", c.backend.clock_qubits},
          {"evolution_time", c.backend.evolution_time},
          {"postselection_retries", c.backend.postselection_retries},
          {"seed", c.backend.seed},
          {"noisy_search", c.backend.noisy_search}}},
        {"output_dir", c.output_dir.string()},
    };
}

} // namespace hlfem
