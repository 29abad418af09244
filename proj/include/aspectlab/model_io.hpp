#pragma once

#include <filesystem>
#include <string>

#include "aspectlab/learners.hpp"

namespace aspectlab {

/// Versioned JSON model document with a "kind" field in {threshold,
/// loglinear, gptree, dtree}. Function trees serialize as nested prefix
/// expressions, e.g. ["DIV", ["ADD", "frequency", "not_never"],
/// "temporal_adverb"]. Doubles use shortest round-trip formatting, so
/// save -> load -> predict is bit-identical; infinities are encoded as
/// "-inf" / "+inf" strings.
std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);

void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace aspectlab
