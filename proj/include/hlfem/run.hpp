#pragma once

#include <json.hpp>

#include "hlfem/config.hpp"

namespace hlfem {

/// Executes cfg.mode, writes the reports into cfg.output_dir (created if
/// missing) and returns the summary that was written to summary.json.
/// Validation and runtime errors propagate as exceptions.
nlohmann::json run(const RunConfig& cfg);

} // namespace hlfem
