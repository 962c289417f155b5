// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

// JSON experiment configs. Expression trees are nested objects with a "node"
// discriminator; see README.md for the schema. Errors are Errc::config with
// a JSON path such as $.experiments[0].A.terms[1].block.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gltmean/experiments.hpp"

namespace gltmean {

std::vector<ExperimentSpec> parse_config(const std::string& json_text);
std::vector<ExperimentSpec> load_config(const std::filesystem::path& path);

/// Config document {"experiments": [...]}. Throws Errc::config for pieces
/// with no descriptor form (quadrature providers, function-backed weights,
/// user-supplied symbol functions).
std::string to_json(const std::vector<ExperimentSpec>& specs);

}  // namespace gltmean
