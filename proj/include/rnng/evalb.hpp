#pragma once

#include <span>

#include "rnng/tree.hpp"

namespace rnng {

// Percentages in [0, 100].
struct BracketScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long matched = 0;
  long gold_brackets = 0;
  long predicted_brackets = 0;
};

// Corpus-level EVALB-style scoring over multisets of (label, span)
// constituents, root included. Trees are expected preterminal-free (the
// reader's default), so every nonterminal counts. `labeled == false`
// compares spans only. Throws DataError on a count or yield mismatch.
BracketScore bracket_score(std::span<const Tree> gold,
                           std::span<const Tree> predicted, bool labeled = true);

}  // namespace rnng
