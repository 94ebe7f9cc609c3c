#include "rnng/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "rnng/error.hpp"

namespace rnng {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad value for " + key + ": '" + value + "' (true|false)");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, std::string_view source) {
  KeyValues kv;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key " + key);
    if (kv.empty() && key != "version")
      throw ConfigError(where + ": the first key must be version");
    kv.emplace_back(std::move(key), std::move(value));
  }
  if (kv.empty()) throw ConfigError(std::string(source) + ": missing version");
  if (kv.front().second != std::to_string(kConfigVersion))
    throw ConfigError(std::string(source) + ": unsupported config version " + kv.front().second);
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_key_values(in, path.string());
}

void apply_config(RunConfig& config, const KeyValues& kv) {
  ModelConfig& m = config.model;
  nn::TrainerConfig& t = config.trainer;
  for (const auto& [key, value] : kv) {
    if (key == "version") {
      if (value != std::to_string(kConfigVersion))
        throw ConfigError("unsupported config version " + value);
    } else if (key == "mode") {
      m.mode = parse_mode(value);
    } else if (key == "composition") {
      m.composition = parse_composition(value);
    } else if (key == "ablation") {
      m.ablation = AblationConfig::parse(value);
    } else if (key == "embedding_dim") {
      m.embedding_dim = parse_number<int>(key, value);
    } else if (key == "hidden_dim") {
      m.hidden_dim = parse_number<int>(key, value);
    } else if (key == "action_dim") {
      m.action_dim = parse_number<int>(key, value);
    } else if (key == "query_dim") {
      m.query_dim = parse_number<int>(key, value);
    } else if (key == "max_open_nts") {
      m.limits.max_open_nts = parse_number<int>(key, value);
    } else if (key == "max_length") {
      m.limits.max_length = parse_number<int>(key, value);
    } else if (key == "max_actions") {
      m.limits.max_actions = parse_number<int>(key, value);
    } else if (key == "seed") {
      m.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "unk_threshold") {
      m.unk_threshold = parse_number<int>(key, value);
    } else if (key == "unlabeled") {
      m.unlabeled = parse_bool(key, value);
    } else if (key == "learning_rate") {
      t.learning_rate = parse_number<double>(key, value);
    } else if (key == "decay") {
      t.decay = parse_number<double>(key, value);
    } else if (key == "epochs") {
      t.epochs = parse_number<int>(key, value);
    } else if (key == "shuffle_seed") {
      t.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "clip") {
      t.clip = parse_number<double>(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  m.validate();
  if (t.learning_rate < 0.0 || t.decay < 0.0 || t.epochs < 0)
    throw ConfigError("learning_rate, decay and epochs must be nonnegative");
}

KeyValues to_key_values(const RunConfig& config) {
  const ModelConfig& m = config.model;
  const nn::TrainerConfig& t = config.trainer;
  return {
      {"version", std::to_string(kConfigVersion)},
      {"mode", std::string(to_string(m.mode))},
      {"composition", std::string(to_string(m.composition))},
      {"ablation", m.ablation.name()},
      {"embedding_dim", std::to_string(m.embedding_dim)},
      {"hidden_dim", std::to_string(m.hidden_dim)},
      {"action_dim", std::to_string(m.action_dim)},
      {"query_dim", std::to_string(m.query_dim)},
      {"max_open_nts", std::to_string(m.limits.max_open_nts)},
      {"max_length", std::to_string(m.limits.max_length)},
      {"max_actions", std::to_string(m.limits.max_actions)},
      {"seed", std::to_string(m.seed)},
      {"unk_threshold", std::to_string(m.unk_threshold)},
      {"unlabeled", m.unlabeled ? "true" : "false"},
      {"learning_rate", format_double(t.learning_rate)},
      {"decay", format_double(t.decay)},
      {"epochs", std::to_string(t.epochs)},
      {"shuffle_seed", std::to_string(t.seed)},
      {"clip", format_double(t.clip)},
  };
}

std::string format_key_values(const KeyValues& kv) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  return out.str();
}

}  // namespace rnng
