#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rnng/model.hpp"
#include "rnng/nn/trainer.hpp"
#include "rnng/tree.hpp"

namespace rnng {

// Builds the vocabulary from `corpus` (label-stripped first when the config
// is unlabeled) and initializes a model.
std::unique_ptr<RnngModel> make_model(const ModelConfig& config, std::span<const Tree> corpus);

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;  // summed negative log-likelihood over the epoch
  long words = 0;
  long actions = 0;
  double learning_rate = 0.0;
  double seconds = 0.0;

  // Per-word perplexity of the pre-update losses (meaningful for generative
  // models, where the loss is -log p(x, y)).
  double perplexity() const;
};

// "epoch loss lr elapsed"
std::string format_epoch(const EpochStats& s);

using EpochCallback = std::function<void(const EpochStats&)>;

// Per-sentence SGD on oracle log-likelihood, in an order reshuffled every
// epoch from config.seed.
std::vector<EpochStats> train(RnngModel& model, std::span<const Tree> corpus,
                              const nn::TrainerConfig& config,
                              const EpochCallback& on_epoch = {});

// Fraction of oracle steps where the most probable legal action (and, for
// GEN, the most probable word) equals the oracle action.
double oracle_accuracy(const RnngModel& model, std::span<const Tree> corpus);

}  // namespace rnng
