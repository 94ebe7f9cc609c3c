#pragma once

// Shared fixtures for the unit and acceptance tests: tiny models, parameter
// surgery, and a tree enumerator that knows nothing about the parser.

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "rnng/model.hpp"
#include "rnng/tree.hpp"

namespace rnng {

// Readable gtest failure output.
inline void PrintTo(const Tree& t, std::ostream* os) { *os << t.to_string(); }

}  // namespace rnng

namespace rnng::testing {

inline Tree T(std::string_view s) {
  ReaderOptions raw;
  raw.collapse_preterminals = false;
  return parse_bracketed(s, raw).at(0);
}

inline ModelConfig tiny_config(Mode mode, Composition comp = Composition::kBiLstm,
                               AblationConfig ab = {}) {
  ModelConfig c;
  c.mode = mode;
  c.composition = comp;
  c.ablation = ab;
  c.embedding_dim = 3;
  c.hidden_dim = 4;
  c.action_dim = 2;
  c.query_dim = 2;
  c.unk_threshold = 0;
  return c;
}

inline Vocabulary vocab_of(std::vector<std::string> words, std::vector<std::string> labels) {
  words.insert(words.begin(), std::string(Vocabulary::kUnk));
  return Vocabulary::from_lists(words, labels);
}

inline void set_all(RnngModel& m, double v) {
  for (auto& p : m.params().all()) p->value.fill(v);
}

inline void randomize(RnngModel& m, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& p : m.params().all())
    for (double& x : p->value.values()) x = u(rng);
}

// Every tree over `words` whose nonterminals come from `labels`, with at most
// `max_depth` nonterminals on any root-to-leaf path. Built recursively over
// spans, independently of the transition system.
class TreeEnumerator {
 public:
  TreeEnumerator(std::vector<std::string> words, std::vector<std::string> labels, int max_depth)
      : words_(std::move(words)), labels_(std::move(labels)), max_depth_(max_depth) {}

  std::vector<Tree> all() { return constituents(0, static_cast<int>(words_.size()), max_depth_); }

 private:
  // Nonterminal trees over [b, e) using at most `depth` levels.
  std::vector<Tree> constituents(int b, int e, int depth) {
    std::vector<Tree> out;
    if (depth <= 0) return out;
    for (auto& kids : sequences(b, e, depth - 1))
      for (const auto& l : labels_) out.push_back(Tree::nonterminal(l, kids));
    return out;
  }

  // Nonempty child sequences covering [b, e): each child is a word or a
  // nonterminal of depth <= `depth`.
  std::vector<std::vector<Tree>> sequences(int b, int e, int depth) {
    std::vector<std::vector<Tree>> out;
    for (int m = b + 1; m <= e; ++m) {
      std::vector<Tree> firsts;
      if (m == b + 1) firsts.push_back(Tree::terminal(words_[static_cast<std::size_t>(b)]));
      for (auto& t : constituents(b, m, depth)) firsts.push_back(std::move(t));
      if (m == e) {
        for (auto& f : firsts) out.push_back({f});
        continue;
      }
      const auto rests = sequences(m, e, depth);
      for (const auto& f : firsts)
        for (const auto& r : rests) {
          std::vector<Tree> seq{f};
          seq.insert(seq.end(), r.begin(), r.end());
          out.push_back(std::move(seq));
        }
    }
    return out;
  }

  std::vector<std::string> words_;
  std::vector<std::string> labels_;
  int max_depth_;
};

}  // namespace rnng::testing
