#include "rnng/toy.hpp"

#include <array>
#include <random>
#include <string>

namespace rnng {

namespace {

using Words = std::vector<const char*>;

const Words kDet{"the", "a", "every"};
const Words kAdj{"big", "old", "red"};
const Words kNoun{"dog", "cat", "park", "box", "man", "woman"};
const Words kRelNoun{"friend", "side", "owner"};
const Words kName{"alice", "bob", "carol"};
const Words kIntrans{"slept", "ran", "laughed"};
const Words kTrans{"saw", "liked", "chased"};
const Words kDitrans{"put", "placed"};
const Words kSentential{"said", "thought", "knew"};
const Words kPrep{"in", "on", "with"};

class Generator {
 public:
  Generator(std::uint64_t seed, int max_depth) : rng_(seed), max_depth_(max_depth) {}

  Tree sentence(int depth) {
    return nt("S", {noun_phrase(depth), verb_phrase(depth)});
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Tree word(const Words& w) { return Tree::terminal(w[static_cast<std::size_t>(pick(static_cast<int>(w.size())))]); }
  static Tree nt(const char* label, std::vector<Tree> children) {
    return Tree::nonterminal(label, std::move(children));
  }

  Tree noun_phrase(int depth) {
    const int k = pick(depth < max_depth_ ? 4 : 3);
    if (k == 0) return nt("NP", {word(kName)});
    if (k == 1) return nt("NP", {word(kDet), word(kNoun)});
    if (k == 2) return nt("NP", {word(kDet), word(kAdj), word(kNoun)});
    return nt("NP", {word(kDet), word(kRelNoun),
                     nt("PP", {Tree::terminal("of"), noun_phrase(depth + 1)})});
  }

  Tree verb_phrase(int depth) {
    const int k = pick(depth < max_depth_ ? 4 : 3);
    if (k == 0) return nt("VP", {word(kIntrans)});
    if (k == 1) return nt("VP", {word(kTrans), noun_phrase(depth)});
    if (k == 2)
      return nt("VP", {word(kDitrans), noun_phrase(depth),
                       nt("PP", {word(kPrep), noun_phrase(depth)})});
    return nt("VP", {word(kSentential),
                     nt("SBAR", {Tree::terminal("that"), sentence(depth + 1)})});
  }

  std::mt19937_64 rng_;
  int max_depth_;
};

const char* tag_of(const std::string& w) {
  const std::pair<const Words*, const char*> classes[] = {
      {&kDet, "DT"},  {&kAdj, "JJ"},      {&kNoun, "NN"},     {&kRelNoun, "NN"},
      {&kName, "NNP"}, {&kIntrans, "VBD"}, {&kTrans, "VBD"},   {&kDitrans, "VBD"},
      {&kSentential, "VBD"}, {&kPrep, "IN"}};
  for (const auto& [words, tag] : classes)
    for (const char* x : *words)
      if (w == x) return tag;
  return "IN";  // "of", "that"
}

void tagged(const Tree& t, std::string& out) {
  if (t.is_terminal()) {
    out += '(';
    out += tag_of(t.label());
    out += ' ' + t.label() + ')';
    return;
  }
  out += '(' + t.label();
  for (const Tree& c : t.children()) {
    out += ' ';
    tagged(c, out);
  }
  out += ')';
}

}  // namespace

std::string toy_treebank_text(std::size_t n, std::uint64_t seed, int max_depth) {
  std::string out;
  for (const Tree& t : toy_treebank(n, seed, max_depth)) {
    tagged(t, out);
    out += '\n';
  }
  return out;
}

std::vector<Tree> toy_treebank(std::size_t n, std::uint64_t seed, int max_depth) {
  Generator gen(seed, max_depth);
  std::vector<Tree> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.sentence(0));
  return out;
}

}  // namespace rnng
