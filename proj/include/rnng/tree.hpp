#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rnng {

// Immutable phrase-structure tree: nonterminal-labeled internal nodes over
// word leaves. Every nonterminal has at least one child.
class Tree {
 public:
  static Tree terminal(std::string word);
  // Throws DataError when `children` is empty.
  static Tree nonterminal(std::string label, std::vector<Tree> children);

  bool is_terminal() const { return terminal_; }
  // Nonterminal label, or the word for a terminal.
  const std::string& label() const { return label_; }
  const std::vector<Tree>& children() const { return children_; }

  // Number of terminals in the yield.
  std::size_t length() const { return length_; }
  std::size_t num_nonterminals() const;
  std::vector<std::string> yield() const;

  // Single-line bracketed form, e.g. "(S (NP a) (VP b))".
  std::string to_string() const;

  friend bool operator==(const Tree& a, const Tree& b);
  friend bool operator!=(const Tree& a, const Tree& b) { return !(a == b); }

 private:
  Tree() = default;
  void append(std::string& out) const;

  bool terminal_ = false;
  std::string label_;
  std::vector<Tree> children_;
  std::size_t length_ = 0;
};

// A nonterminal node flattened to its label and half-open token span.
struct Constituent {
  std::string label;
  int begin = 0;
  int end = 0;
  friend bool operator==(const Constituent&, const Constituent&) = default;
};

// All nonterminals in pre-order (parent before children, left to right).
std::vector<Constituent> constituents(const Tree& t);

// Same nonterminals in post-order, i.e. the order in which REDUCE closes them.
std::vector<Constituent> constituents_postorder(const Tree& t);

struct ReaderOptions {
  // Replace (TAG word) nodes by the bare word. The root is never collapsed.
  bool collapse_preterminals = true;
  // NP-SBJ-1 -> NP, NP=2 -> NP.
  bool strip_function_tags = true;
  // Delete -NONE- subtrees and any constituent left empty by the deletion.
  bool remove_empty_elements = true;
};

// Reads a sequence of PTB-style trees. A label-less wrapper around a single
// tree, "( (S ...) )", is unwrapped. Throws ParseError with line and column.
std::vector<Tree> parse_bracketed(std::string_view text,
                                  const ReaderOptions& options = {});

inline constexpr std::string_view kUnlabeled = "X";

// Replaces every nonterminal label with "X".
Tree strip_labels(const Tree& t);

}  // namespace rnng
