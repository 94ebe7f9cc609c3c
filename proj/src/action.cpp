#include "rnng/action.hpp"

#include "rnng/error.hpp"

namespace rnng {

std::string_view to_string(Mode m) {
  return m == Mode::kGenerative ? "gen" : "disc";
}

Mode parse_mode(std::string_view s) {
  if (s == "gen" || s == "generative") return Mode::kGenerative;
  if (s == "disc" || s == "discriminative") return Mode::kDiscriminative;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected gen|disc)");
}

std::string Action::to_string() const {
  switch (kind) {
    case ActionKind::kNT: return "NT(" + symbol + ")";
    case ActionKind::kGen: return "GEN(" + symbol + ")";
    case ActionKind::kShift: return "SHIFT";
    case ActionKind::kReduce: return "REDUCE";
  }
  return {};
}

namespace {

void derive(const Tree& t, Mode mode, std::vector<Action>& out) {
  if (t.is_terminal()) {
    out.push_back(mode == Mode::kGenerative ? Action::gen(t.label())
                                            : Action::shift());
    return;
  }
  out.push_back(Action::nt(t.label()));
  for (const auto& c : t.children()) derive(c, mode, out);
  out.push_back(Action::reduce());
}

}  // namespace

std::vector<Action> tree_to_oracle(const Tree& t, Mode mode) {
  std::vector<Action> out;
  out.reserve(2 * t.num_nonterminals() + t.length());
  derive(t, mode, out);
  return out;
}

Tree actions_to_tree(std::span<const Action> actions,
                     std::span<const std::string> words) {
  struct Open {
    std::string label;
    std::vector<Tree> children;
  };
  std::vector<Open> open;
  std::vector<Tree> done;
  std::size_t next_word = 0;
  bool saw_gen = false, saw_shift = false;

  auto attach = [&](Tree t) {
    if (open.empty())
      done.push_back(std::move(t));
    else
      open.back().children.push_back(std::move(t));
  };

  for (std::size_t i = 0; i < actions.size(); ++i) {
    const Action& a = actions[i];
    if (!done.empty())
      throw IllegalActionError("action " + a.to_string() + " after the root closed", i);
    switch (a.kind) {
      case ActionKind::kNT:
        open.push_back({a.symbol, {}});
        break;
      case ActionKind::kGen:
      case ActionKind::kShift: {
        const bool gen = a.kind == ActionKind::kGen;
        (gen ? saw_gen : saw_shift) = true;
        if (saw_gen && saw_shift)
          throw IllegalActionError("GEN and SHIFT mixed in one sequence", i);
        if (open.empty())
          throw IllegalActionError(a.to_string() + " with no open nonterminal", i);
        if (gen) {
          open.back().children.push_back(Tree::terminal(a.symbol));
        } else {
          if (next_word >= words.size())
            throw IllegalActionError("SHIFT past the end of the input words", i);
          open.back().children.push_back(Tree::terminal(words[next_word++]));
        }
        break;
      }
      case ActionKind::kReduce: {
        if (open.empty())
          throw IllegalActionError("REDUCE with no open nonterminal", i);
        if (open.back().children.empty())
          throw IllegalActionError("REDUCE with zero children", i);
        Open o = std::move(open.back());
        open.pop_back();
        attach(Tree::nonterminal(std::move(o.label), std::move(o.children)));
        break;
      }
    }
  }
  if (!open.empty() || done.empty())
    throw IllegalActionError("sequence ends with open constituents", actions.size());
  if (saw_shift && next_word != words.size())
    throw IllegalActionError("input words left unconsumed", actions.size());
  return std::move(done.front());
}

}  // namespace rnng
