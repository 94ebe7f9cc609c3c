#include "rnng/inference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "rnng/error.hpp"
#include "rnng/parser.hpp"

namespace rnng {

std::mt19937_64 sentence_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

void check_compatible(const RnngModel& disc, const RnngModel& gen) {
  if (disc.config().mode != Mode::kDiscriminative)
    throw DataError("proposal checkpoint is not a discriminative model");
  if (gen.config().mode != Mode::kGenerative)
    throw DataError("scoring checkpoint is not a generative model");
  if (disc.config().unlabeled != gen.config().unlabeled)
    throw DataError("proposal and generative models disagree on unlabeled trees");
  for (const auto& label : disc.vocab().nonterminals())
    if (!gen.vocab().has_nt(label))
      throw DataError("nonterminal '" + label + "' of the proposal model is unknown to the "
                      "generative model");
}

std::vector<WeightedSample> propose(const RnngModel& disc, std::span<const std::string> sentence,
                                    int n, std::mt19937_64& rng) {
  if (n < 1) throw ConfigError("number of samples must be >= 1");
  std::vector<WeightedSample> out;
  out.reserve(static_cast<std::size_t>(n));
  nn::Graph g;
  long truncated = 0;
  while (static_cast<int>(out.size()) < n) {
    g.clear();
    try {
      SampledSequence s = sample_sequence(disc, g, rng, sentence);
      out.push_back({std::move(s.tree), s.logprob, 0.0});
    } catch (const TruncatedSampleError& e) {
      if (++truncated >= 10L * n)
        throw DataError("proposal truncated " + std::to_string(truncated) +
                        " times (last: " + e.what() + ")");
    }
  }
  return out;
}

void score_joint(std::span<WeightedSample> samples, const RnngModel& gen) {
  std::unordered_map<std::string, double> cache;
  nn::Graph g;
  for (WeightedSample& s : samples) {
    const std::string key = s.tree.to_string();
    auto it = cache.find(key);
    if (it == cache.end()) {
      g.clear();
      it = cache.emplace(key, sequence_logprob(gen, g, gen.oracle(s.tree)).logprob).first;
    }
    s.log_p = it->second;
  }
}

const WeightedSample& map_parse(std::span<const WeightedSample> samples) {
  if (samples.empty()) throw std::invalid_argument("map_parse of an empty sample set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].log_p > samples[best].log_p) best = i;
  return samples[best];
}

double marginal_loglik(std::span<const WeightedSample> samples) {
  if (samples.empty()) throw std::invalid_argument("marginal_loglik of an empty sample set");
  double top = -INFINITY;
  for (const auto& s : samples) top = std::max(top, s.log_weight());
  double acc = 0.0;
  for (const auto& s : samples) acc += std::exp(s.log_weight() - top);
  return top + std::log(acc) - std::log(static_cast<double>(samples.size()));
}

std::size_t distinct_trees(std::span<const WeightedSample> samples) {
  std::set<std::string> seen;
  for (const auto& s : samples) seen.insert(s.tree.to_string());
  return seen.size();
}

double perplexity(double total_loglik, std::size_t tokens) {
  if (tokens == 0) throw std::invalid_argument("perplexity over zero tokens");
  return std::exp(-total_loglik / static_cast<double>(tokens));
}

LmReport corpus_perplexity(std::span<const std::vector<std::string>> corpus,
                           const RnngModel& disc, const RnngModel& gen, int n,
                           std::uint64_t seed) {
  check_compatible(disc, gen);
  LmReport report;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::mt19937_64 rng = sentence_rng(seed, i);
    std::vector<WeightedSample> samples = propose(disc, corpus[i], n, rng);
    score_joint(samples, gen);
    SentenceEstimate e;
    e.tokens = corpus[i].size();
    e.log_phat = marginal_loglik(samples);
    e.distinct = distinct_trees(samples);
    report.tokens += e.tokens;
    report.total_loglik += e.log_phat;
    report.sentences.push_back(e);
  }
  report.perplexity = perplexity(report.total_loglik, report.tokens);
  return report;
}

}  // namespace rnng
