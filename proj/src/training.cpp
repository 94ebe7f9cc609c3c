#include "rnng/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "rnng/parser.hpp"

namespace rnng {

std::unique_ptr<RnngModel> make_model(const ModelConfig& config, std::span<const Tree> corpus) {
  config.validate();
  if (!config.unlabeled)
    return std::make_unique<RnngModel>(config, Vocabulary::build(corpus, config.unk_threshold));
  std::vector<Tree> stripped;
  stripped.reserve(corpus.size());
  for (const Tree& t : corpus) stripped.push_back(strip_labels(t));
  return std::make_unique<RnngModel>(config, Vocabulary::build(stripped, config.unk_threshold));
}

double EpochStats::perplexity() const {
  return words > 0 ? std::exp(loss / static_cast<double>(words)) : 1.0;
}

std::string format_epoch(const EpochStats& s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d %.6f %.6g %.3f", s.epoch, s.loss, s.learning_rate,
                s.seconds);
  return buf;
}

std::vector<EpochStats> train(RnngModel& model, std::span<const Tree> corpus,
                              const nn::TrainerConfig& config, const EpochCallback& on_epoch) {
  std::vector<Oracle> oracles;
  oracles.reserve(corpus.size());
  for (const Tree& t : corpus) oracles.push_back(model.oracle(t));

  std::vector<std::size_t> order(oracles.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  const auto start = std::chrono::steady_clock::now();

  std::vector<EpochStats> history;
  nn::Graph g;
  model.params().zero_grad();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochStats stats;
    stats.epoch = epoch;
    stats.learning_rate = config.rate(epoch);
    for (std::size_t i : order) {
      const Oracle& o = oracles[i];
      g.clear();
      const ScoredSequence s = sequence_logprob(model, g, o);
      g.backward(-s.total);
      nn::sgd_step(model.params(), config, epoch);
      stats.loss -= s.logprob;
      stats.words += static_cast<long>(o.surface.size());
      stats.actions += static_cast<long>(o.actions.size());
    }
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_epoch) on_epoch(stats);
    history.push_back(stats);
  }
  return history;
}

double oracle_accuracy(const RnngModel& model, std::span<const Tree> corpus) {
  long correct = 0, total = 0;
  nn::Graph g;
  for (const Tree& t : corpus) {
    g.clear();
    const Oracle o = model.oracle(t);
    Parser parser(model, g);
    ParserState s = parser.initial(o);
    for (const ModelAction& a : o.actions) {
      const ActionDistribution d = parser.distribution(s);
      const auto& lp = d.logprobs.value().values();
      const auto best = std::max_element(lp.begin(), lp.end()) - lp.begin();
      bool ok = d.legal[static_cast<std::size_t>(best)] == model.action_index(a);
      if (ok && a.kind == ActionKind::kGen) {
        const auto& wl = d.word_logprobs->value().values();
        ok = std::max_element(wl.begin(), wl.end()) - wl.begin() == a.id;
      }
      correct += ok;
      ++total;
      parser.apply(s, a);
    }
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 1.0;
}

}  // namespace rnng
