#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnng/tree.hpp"

namespace rnng {

// Small English-like treebank (S, NP, VP, PP, SBAR) without preterminals.
// Every bracketing decision is fixed by words to its left: a verb's class
// fixes its complements, relational nouns always take an "of" PP, and "that"
// always opens an embedded clause. `max_depth` bounds clause and NP nesting.
std::vector<Tree> toy_treebank(std::size_t n, std::uint64_t seed, int max_depth = 2);

// Bracketed text of the same trees with a POS preterminal over every word,
// so that the default reader (which collapses preterminals) restores them.
std::string toy_treebank_text(std::size_t n, std::uint64_t seed, int max_depth = 2);

}  // namespace rnng
