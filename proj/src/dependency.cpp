#include "rnng/dependency.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "rnng/error.hpp"

namespace rnng {

bool DependencyGraph::is_tree() const {
  const int n = static_cast<int>(heads.size());
  if (static_cast<int>(tokens.size()) != n || n == 0) return false;
  int roots = 0;
  for (int h : heads) {
    if (h < 0 || h > n) return false;
    if (h == 0) ++roots;
  }
  if (roots != 1) return false;
  // Every token must reach the root within n steps.
  for (int i = 0; i < n; ++i) {
    int cur = i + 1, steps = 0;
    while (cur != 0 && steps <= n) {
      cur = heads[cur - 1];
      ++steps;
    }
    if (cur != 0) return false;
  }
  return true;
}

HeadRuleTable HeadRuleTable::parse(std::string_view text) {
  HeadRuleTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string parent, dir;
    if (!(fields >> parent) || parent[0] == '#') continue;
    if (!(fields >> dir) || (dir != "left" && dir != "right"))
      throw DataError("head rules line " + std::to_string(lineno) +
                      ": expected 'left' or 'right' after '" + parent + "'");
    const Direction d = dir == "left" ? Direction::kLeft : Direction::kRight;
    if (parent == "*") {
      table.set_default(d);
      continue;
    }
    HeadRule rule{d, {}};
    for (std::string label; fields >> label;) rule.priorities.push_back(label);
    table.add(parent, std::move(rule));
  }
  return table;
}

HeadRuleTable HeadRuleTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open head rules '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void HeadRuleTable::add(const std::string& parent, HeadRule rule) {
  rules_[parent].push_back(std::move(rule));
}

namespace {

bool matches(const std::string& pattern, const Tree& child) {
  if (pattern == "*") return true;
  if (pattern == "<t>") return child.is_terminal();
  return child.label() == pattern;
}

std::size_t first_in(Direction d, std::size_t n) {
  return d == Direction::kLeft ? 0 : n - 1;
}

}  // namespace

std::size_t HeadRuleTable::head_child(const std::string& parent,
                                      std::span<const Tree> children) const {
  const std::size_t n = children.size();
  auto it = rules_.find(parent);
  if (it == rules_.end() || it->second.empty())
    return first_in(default_direction_, n);
  for (const HeadRule& rule : it->second) {
    for (const std::string& pattern : rule.priorities) {
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = rule.direction == Direction::kLeft ? k : n - 1 - k;
        if (matches(pattern, children[i])) return i;
      }
    }
  }
  return first_in(it->second.front().direction, n);
}

namespace {

// Returns the 0-based lexical head token of `t`, filling heads for all
// non-head tokens below it. `pick` chooses the head child of a nonterminal.
template <typename Pick>
int percolate(const Tree& t, int begin, std::vector<int>& heads, Pick& pick) {
  if (t.is_terminal()) return begin;
  const std::size_t head = pick(t);
  std::vector<int> lexical;
  lexical.reserve(t.children().size());
  int pos = begin;
  for (const auto& c : t.children()) {
    lexical.push_back(percolate(c, pos, heads, pick));
    pos += static_cast<int>(c.length());
  }
  for (std::size_t i = 0; i < lexical.size(); ++i)
    if (i != head) heads[lexical[i]] = lexical[head] + 1;
  return lexical[head];
}

template <typename Pick>
DependencyGraph convert(const Tree& t, Pick pick) {
  DependencyGraph g;
  g.tokens = t.yield();
  g.heads.assign(g.tokens.size(), 0);
  const int root = percolate(t, 0, g.heads, pick);
  g.heads[root] = 0;
  return g;
}

}  // namespace

DependencyGraph head_rule_heads(const Tree& t, const HeadRuleTable& rules) {
  return convert(t, [&](const Tree& node) {
    return rules.head_child(node.label(), node.children());
  });
}

DependencyGraph attention_heads(const Tree& t,
                                std::span<const AttentionRecord> records) {
  if (records.size() != t.num_nonterminals())
    throw DataError("attention_heads: " + std::to_string(records.size()) +
                    " records for " + std::to_string(t.num_nonterminals()) +
                    " constituents");
  std::size_t next = 0;  // pre-order cursor, advanced as percolate descends
  return convert(t, [&](const Tree& node) {
    const AttentionRecord& r = records[next++];
    if (r.weights.size() != node.children().size() ||
        (!r.label.empty() && r.label != node.label()))
      throw DataError("attention_heads: record " + std::to_string(next - 1) +
                      " (" + r.label + ", " + std::to_string(r.weights.size()) +
                      " children) does not align with constituent " + node.label());
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.weights.size(); ++i)
      if (r.weights[i] > r.weights[best]) best = i;
    return best;
  });
}

std::vector<AttentionRecord> records_to_preorder(
    const Tree& t, std::span<const AttentionRecord> postorder) {
  const std::size_t n = t.num_nonterminals();
  if (postorder.size() != n)
    throw DataError("records_to_preorder: " + std::to_string(postorder.size()) +
                    " records for " + std::to_string(n) + " constituents");
  // Number nodes in both orders with one walk.
  std::vector<std::size_t> pre_of_post(n);
  std::size_t pre = 0, post = 0;
  auto walk = [&](const Tree& node, auto&& self) -> void {
    if (node.is_terminal()) return;
    const std::size_t mine = pre++;
    for (const auto& c : node.children()) self(c, self);
    pre_of_post[post++] = mine;
  };
  walk(t, walk);
  std::vector<AttentionRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) out[pre_of_post[i]] = postorder[i];
  return out;
}

const std::set<std::string>& ptb_punctuation() {
  static const std::set<std::string> punct = {
      ",", ".", ":", ";", "?", "!", "``", "''", "`", "'", "--", "...",
      "-LRB-", "-RRB-", "-LCB-", "-RCB-", "(", ")", "{", "}", "\"", "#", "$"};
  return punct;
}

AttachmentCount attachment_count(const DependencyGraph& pred,
                                 const DependencyGraph& gold,
                                 const std::set<std::string>& punct) {
  if (pred.tokens != gold.tokens || pred.heads.size() != gold.heads.size())
    throw DataError("uas: token sequences differ");
  AttachmentCount c;
  for (std::size_t i = 0; i < gold.tokens.size(); ++i) {
    if (punct.count(gold.tokens[i])) continue;
    ++c.total;
    if (pred.heads[i] == gold.heads[i]) ++c.correct;
  }
  return c;
}

double uas(const DependencyGraph& pred, const DependencyGraph& gold,
           const std::set<std::string>& punct) {
  return attachment_count(pred, gold, punct).score();
}

void write_dependencies(std::ostream& out, std::span<const DependencyGraph> graphs) {
  for (const auto& g : graphs) {
    for (std::size_t i = 0; i < g.tokens.size(); ++i)
      out << i + 1 << '\t' << g.tokens[i] << '\t' << g.heads[i] << '\n';
    out << '\n';
  }
}

}  // namespace rnng
