#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rnng/attention_record.hpp"
#include "rnng/tree.hpp"

namespace rnng {

// heads[i] is the 1-based index of token i's head, 0 for the root.
struct DependencyGraph {
  std::vector<std::string> tokens;
  std::vector<int> heads;

  // Exactly one root and no cycles.
  bool is_tree() const;
};

enum class Direction { kLeft, kRight };

struct HeadRule {
  Direction direction = Direction::kLeft;
  // Child labels in priority order. "*" matches any child, "<t>" any
  // terminal; a terminal otherwise matches by its word.
  std::vector<std::string> priorities;
};

// Collins-style percolation table. Text format, one rule per line:
//   PARENT left|right LABEL LABEL ...
// Several lines for one parent are tried in order. "* left|right" sets the
// direction used for parents without rules. '#' starts a comment line.
class HeadRuleTable {
 public:
  static HeadRuleTable parse(std::string_view text);
  static HeadRuleTable load(const std::string& path);

  void add(const std::string& parent, HeadRule rule);
  void set_default(Direction d) { default_direction_ = d; }

  // Index of the head among `children`. Total: falls back to the first child
  // in the first rule's direction, or the default direction.
  std::size_t head_child(const std::string& parent,
                         std::span<const Tree> children) const;

 private:
  std::map<std::string, std::vector<HeadRule>> rules_;
  Direction default_direction_ = Direction::kLeft;
};

DependencyGraph head_rule_heads(const Tree& t, const HeadRuleTable& rules);

// `records` holds one record per nonterminal in pre-order (see
// records_to_preorder). The maximum-weight child heads each constituent,
// leftmost on ties. Throws DataError on misalignment.
DependencyGraph attention_heads(const Tree& t,
                                std::span<const AttentionRecord> records);

// Reorders records emitted at REDUCE time (post-order) into pre-order.
std::vector<AttentionRecord> records_to_preorder(
    const Tree& t, std::span<const AttentionRecord> postorder);

const std::set<std::string>& ptb_punctuation();

struct AttachmentCount {
  long correct = 0;
  long total = 0;
  double score() const {
    return total == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

// Tokens in `punct` are skipped. Throws DataError on a token mismatch.
AttachmentCount attachment_count(const DependencyGraph& pred,
                                 const DependencyGraph& gold,
                                 const std::set<std::string>& punct = ptb_punctuation());

double uas(const DependencyGraph& pred, const DependencyGraph& gold,
           const std::set<std::string>& punct = ptb_punctuation());

// "index<TAB>word<TAB>head" per token, blank line after each sentence.
void write_dependencies(std::ostream& out, std::span<const DependencyGraph> graphs);

}  // namespace rnng
