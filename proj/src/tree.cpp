#include "rnng/tree.hpp"

#include <cctype>
#include <optional>

#include "rnng/error.hpp"

namespace rnng {

Tree Tree::terminal(std::string word) {
  Tree t;
  t.terminal_ = true;
  t.label_ = std::move(word);
  t.length_ = 1;
  return t;
}

Tree Tree::nonterminal(std::string label, std::vector<Tree> children) {
  if (children.empty())
    throw DataError("nonterminal '" + label + "' has no children");
  Tree t;
  t.label_ = std::move(label);
  t.children_ = std::move(children);
  for (const auto& c : t.children_) t.length_ += c.length_;
  return t;
}

std::size_t Tree::num_nonterminals() const {
  if (terminal_) return 0;
  std::size_t n = 1;
  for (const auto& c : children_) n += c.num_nonterminals();
  return n;
}

std::vector<std::string> Tree::yield() const {
  std::vector<std::string> words;
  words.reserve(length_);
  auto walk = [&](const Tree& t, auto&& self) -> void {
    if (t.terminal_) {
      words.push_back(t.label_);
      return;
    }
    for (const auto& c : t.children_) self(c, self);
  };
  walk(*this, walk);
  return words;
}

void Tree::append(std::string& out) const {
  if (terminal_) {
    out += label_;
    return;
  }
  out += '(';
  out += label_;
  for (const auto& c : children_) {
    out += ' ';
    c.append(out);
  }
  out += ')';
}

std::string Tree::to_string() const {
  std::string out;
  append(out);
  return out;
}

bool operator==(const Tree& a, const Tree& b) {
  return a.terminal_ == b.terminal_ && a.label_ == b.label_ &&
         a.children_ == b.children_;
}

namespace {

void collect(const Tree& t, int begin, bool pre, std::vector<Constituent>& out) {
  if (t.is_terminal()) return;
  const int end = begin + static_cast<int>(t.length());
  if (pre) out.push_back({t.label(), begin, end});
  int pos = begin;
  for (const auto& c : t.children()) {
    collect(c, pos, pre, out);
    pos += static_cast<int>(c.length());
  }
  if (!pre) out.push_back({t.label(), begin, end});
}

}  // namespace

std::vector<Constituent> constituents(const Tree& t) {
  std::vector<Constituent> out;
  collect(t, 0, true, out);
  return out;
}

std::vector<Constituent> constituents_postorder(const Tree& t) {
  std::vector<Constituent> out;
  collect(t, 0, false, out);
  return out;
}

namespace {

struct Token {
  enum Kind { kOpen, kClose, kAtom, kEnd } kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
    const int line = line_, column = column_;
    if (pos_ >= text_.size()) return {Token::kEnd, "", line, column};
    const char c = text_[pos_];
    if (c == '(' || c == ')') {
      advance();
      return {c == '(' ? Token::kOpen : Token::kClose, std::string(1, c), line,
              column};
    }
    std::string atom;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (d == '(' || d == ')' || std::isspace(static_cast<unsigned char>(d)))
        break;
      atom += d;
      advance();
    }
    return {Token::kAtom, std::move(atom), line, column};
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// Raw node before cleanup; empty elements may leave nonterminals childless.
struct RawNode {
  bool terminal = false;
  std::string label;
  std::vector<RawNode> children;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : lexer_(text) { shift(); }

  std::optional<RawNode> next_tree() {
    if (tok_.kind == Token::kEnd) return std::nullopt;
    if (tok_.kind == Token::kClose)
      throw ParseError("unbalanced parentheses: unexpected ')'", tok_.line,
                       tok_.column);
    if (tok_.kind == Token::kAtom)
      throw ParseError("expected '(' before '" + tok_.text + "'", tok_.line,
                       tok_.column);
    return read_bracket();
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  RawNode read_bracket() {
    const Token open = tok_;
    shift();
    RawNode node;
    if (tok_.kind == Token::kAtom) {
      node.label = tok_.text;
      shift();
    } else if (tok_.kind == Token::kClose) {
      throw ParseError("empty constituent '()'", open.line, open.column);
    }
    while (true) {
      switch (tok_.kind) {
        case Token::kOpen:
          node.children.push_back(read_bracket());
          break;
        case Token::kAtom:
          node.children.push_back(RawNode{true, tok_.text, {}});
          shift();
          break;
        case Token::kClose:
          if (node.children.empty())
            throw ParseError("nonterminal '" + node.label + "' has no children",
                             open.line, open.column);
          shift();
          return node;
        case Token::kEnd:
          throw ParseError("unbalanced parentheses: unclosed '('", open.line,
                           open.column);
      }
    }
  }

  Lexer lexer_;
  Token tok_{Token::kEnd, "", 1, 1};
};

std::string strip_tags(const std::string& label) {
  if (label.empty() || label[0] == '-') return label;
  const auto cut = label.find_first_of("-=");
  return cut == std::string::npos ? label : label.substr(0, cut);
}

std::optional<Tree> convert(const RawNode& n, const ReaderOptions& opt,
                            bool is_root) {
  if (n.terminal) return Tree::terminal(n.label);
  if (opt.remove_empty_elements && n.label == "-NONE-") return std::nullopt;
  std::vector<Tree> kids;
  for (const auto& c : n.children)
    if (auto t = convert(c, opt, false)) kids.push_back(std::move(*t));
  if (kids.empty()) return std::nullopt;
  // A preterminal is a node written over exactly one bare word; nodes left
  // unary by empty-element removal keep their label.
  if (opt.collapse_preterminals && !is_root && n.children.size() == 1 &&
      n.children.front().terminal)
    return std::move(kids.front());
  std::string label = opt.strip_function_tags ? strip_tags(n.label) : n.label;
  return Tree::nonterminal(std::move(label), std::move(kids));
}

}  // namespace

std::vector<Tree> parse_bracketed(std::string_view text,
                                  const ReaderOptions& options) {
  Reader reader(text);
  std::vector<Tree> trees;
  while (auto raw = reader.next_tree()) {
    const RawNode* node = &*raw;
    while (node->label.empty() && node->children.size() == 1 &&
           !node->children.front().terminal)
      node = &node->children.front();
    if (node->label.empty())
      throw DataError("label-less constituent with " +
                      std::to_string(node->children.size()) + " children");
    if (auto t = convert(*node, options, true)) trees.push_back(std::move(*t));
  }
  return trees;
}

Tree strip_labels(const Tree& t) {
  if (t.is_terminal()) return t;
  std::vector<Tree> kids;
  kids.reserve(t.children().size());
  for (const auto& c : t.children()) kids.push_back(strip_labels(c));
  return Tree::nonterminal(std::string(kUnlabeled), std::move(kids));
}

}  // namespace rnng
