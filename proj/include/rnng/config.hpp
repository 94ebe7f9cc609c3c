#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rnng/model.hpp"
#include "rnng/nn/trainer.hpp"

namespace rnng {

inline constexpr int kConfigVersion = 1;

// Ordered "key = value" pairs. Blank lines and '#' comments are skipped.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Everything a training run needs besides data.
struct RunConfig {
  ModelConfig model;
  nn::TrainerConfig trainer;
};

// Throws ConfigError on malformed lines, duplicate keys, or a missing or
// unsupported `version` (which must come first).
KeyValues parse_key_values(std::istream& in, std::string_view source = "<config>");
KeyValues read_key_values(const std::filesystem::path& path);

// Applies known keys; any other key (or a bad value) is a ConfigError.
void apply_config(RunConfig& config, const KeyValues& kv);
// Complete effective configuration, `version` first.
KeyValues to_key_values(const RunConfig& config);
std::string format_key_values(const KeyValues& kv);

}  // namespace rnng
