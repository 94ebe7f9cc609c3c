#include "rnng/transition.hpp"

#include <stdexcept>

#include "rnng/error.hpp"

namespace rnng {

AblationConfig AblationConfig::parse(std::string_view name) {
  if (name == "full") return {true, true, true};
  if (name == "no-history") return {true, true, false};
  if (name == "no-buffer") return {true, false, true};
  if (name == "no-stack") return {false, true, true};
  if (name == "stack-only") return {true, false, false};
  if (name == "buffer-only") return {false, true, false};
  if (name == "history-only") return {false, false, true};
  throw ConfigError("unknown ablation '" + std::string(name) +
                    "' (full|no-history|no-buffer|no-stack|stack-only|buffer-only|history-only)");
}

std::string AblationConfig::name() const {
  if (use_stack && use_buffer && use_history) return "full";
  if (use_stack && use_buffer) return "no-history";
  if (use_stack && use_history) return "no-buffer";
  if (use_buffer && use_history) return "no-stack";
  if (use_stack) return "stack-only";
  if (use_buffer) return "buffer-only";
  if (use_history) return "history-only";
  return "none";
}

bool StateShape::is_final() const {
  return stack_size == 1 && open_nts == 0 && !top_is_open_nt &&
         (mode == Mode::kGenerative || buffer_remaining == 0);
}

LegalActions legal_actions(const StateShape& s, const Limits& limits) {
  if (s.is_final()) throw std::logic_error("legal_actions called on a final state");
  LegalActions legal;
  if (s.mode == Mode::kGenerative) {
    legal.nt = s.open_nts < limits.max_open_nts;
    legal.term = s.open_nts >= 1 && s.terminals < limits.max_length;
    legal.reduce = s.open_nts >= 1 && !s.top_is_open_nt;
  } else {
    const bool input_left = s.buffer_remaining > 0;
    legal.nt = s.open_nts < limits.max_open_nts && input_left;
    legal.term = s.open_nts >= 1 && input_left;
    legal.reduce = s.open_nts >= 1 && !s.top_is_open_nt && !(s.open_nts == 1 && input_left);
  }
  return legal;
}

}  // namespace rnng
