#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rnng/model.hpp"
#include "rnng/tree.hpp"

namespace rnng {

struct WeightedSample {
  Tree tree;
  double log_q = 0.0;  // proposal, log q(y | x)
  double log_p = 0.0;  // generative, log p(x, y)
  double log_weight() const { return log_p - log_q; }
};

// Independent RNG stream for sentence `index`, so per-sentence results do not
// depend on processing order.
std::mt19937_64 sentence_rng(std::uint64_t seed, std::uint64_t index);

// Throws DataError unless `disc` is a discriminative and `gen` a generative
// model over the same labeling with every proposal nonterminal known to `gen`.
void check_compatible(const RnngModel& disc, const RnngModel& gen);

// N ancestral samples from the discriminative model. Truncated samples are
// redrawn; after 10·N truncations the sentence fails with DataError.
std::vector<WeightedSample> propose(const RnngModel& disc, std::span<const std::string> sentence,
                                    int n, std::mt19937_64& rng);

// Fills log_p with the generative oracle score of each tree. Repeated trees
// are scored once (caching only; every draw keeps its own entry).
void score_joint(std::span<WeightedSample> samples, const RnngModel& gen);

// Sample with the largest log p(x, y); the first one wins ties.
const WeightedSample& map_parse(std::span<const WeightedSample> samples);

// log((1/N) sum_i exp(log p_i - log q_i)) over all raw draws.
double marginal_loglik(std::span<const WeightedSample> samples);

// Number of distinct trees, for reporting only.
std::size_t distinct_trees(std::span<const WeightedSample> samples);

struct SentenceEstimate {
  std::size_t tokens = 0;
  double log_phat = 0.0;
  std::size_t distinct = 0;
};

// Perplexity counts words only: exp(-sum log p(x) / sum |x|).
struct LmReport {
  std::vector<SentenceEstimate> sentences;
  std::size_t tokens = 0;
  double total_loglik = 0.0;
  double perplexity = 0.0;
};

double perplexity(double total_loglik, std::size_t tokens);

LmReport corpus_perplexity(std::span<const std::vector<std::string>> corpus,
                           const RnngModel& disc, const RnngModel& gen, int n,
                           std::uint64_t seed);

}  // namespace rnng
