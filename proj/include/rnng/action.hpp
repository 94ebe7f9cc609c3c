#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rnng/tree.hpp"

namespace rnng {

enum class Mode { kGenerative, kDiscriminative };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);  // "gen" | "disc"

enum class ActionKind { kNT, kGen, kShift, kReduce };

// One transition. `symbol` holds the label for NT and the word for GEN.
struct Action {
  ActionKind kind = ActionKind::kReduce;
  std::string symbol;

  static Action nt(std::string label) { return {ActionKind::kNT, std::move(label)}; }
  static Action gen(std::string word) { return {ActionKind::kGen, std::move(word)}; }
  static Action shift() { return {ActionKind::kShift, {}}; }
  static Action reduce() { return {ActionKind::kReduce, {}}; }

  // NT(S), GEN(dog), SHIFT, REDUCE
  std::string to_string() const;

  friend bool operator==(const Action&, const Action&) = default;
};

// Top-down, left-to-right derivation of `t`. Its length is
// 2 * #nonterminals + #terminals.
std::vector<Action> tree_to_oracle(const Tree& t, Mode mode);

// Inverse of tree_to_oracle. SHIFT consumes `words` left to right; GEN
// carries its own word. Throws IllegalActionError naming the first offending
// index (index == size for a truncated sequence).
Tree actions_to_tree(std::span<const Action> actions,
                     std::span<const std::string> words = {});

}  // namespace rnng
