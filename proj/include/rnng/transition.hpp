#pragma once

#include <string>
#include <string_view>

#include "rnng/action.hpp"

namespace rnng {

struct Limits {
  int max_open_nts = 100;
  // Generation stops offering GEN once this many words exist.
  int max_length = 200;
  // Sampling gives up (truncation) after this many actions.
  int max_actions = 2000;
};

// Which structures feed the state summary. At least one must be enabled.
struct AblationConfig {
  bool use_stack = true;
  bool use_buffer = true;
  bool use_history = true;

  // full | no-history | no-buffer | no-stack | stack-only | buffer-only | history-only
  static AblationConfig parse(std::string_view name);
  std::string name() const;
  int enabled() const { return int(use_stack) + int(use_buffer) + int(use_history); }
  friend bool operator==(const AblationConfig&, const AblationConfig&) = default;
};

// The counts legality depends on; everything neural is elsewhere.
struct StateShape {
  Mode mode = Mode::kGenerative;
  int stack_size = 0;
  int open_nts = 0;
  bool top_is_open_nt = false;
  // Words generated or shifted so far.
  int terminals = 0;
  int buffer_remaining = 0;

  bool is_final() const;
};

// Kind-level legality. `term` is GEN in generative mode, SHIFT otherwise.
struct LegalActions {
  bool nt = false;
  bool term = false;
  bool reduce = false;
  bool any() const { return nt || term || reduce; }
  friend bool operator==(const LegalActions&, const LegalActions&) = default;
};

// Throws std::logic_error on a final state.
LegalActions legal_actions(const StateShape& s, const Limits& limits);

}  // namespace rnng
