#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "rnng/nn/graph.hpp"

namespace rnng::nn {

struct TrainerConfig {
  double learning_rate = 0.1;
  double decay = 0.08;
  int epochs = 20;
  std::uint64_t seed = 1;
  // Global-norm clipping threshold; <= 0 disables clipping.
  double clip = 5.0;

  // eta(e) = eta0 / (1 + decay * e)
  double rate(int epoch) const { return learning_rate / (1.0 + decay * epoch); }
};

// p <- p - eta(epoch) * clip(g), then zeroes the gradients.
void sgd_step(ParameterCollection& params, const TrainerConfig& config, int epoch);

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  int worst_index = -1;
  std::size_t checked = 0;
  bool passed = false;
};

struct GradCheckOptions {
  double tolerance = 1e-4;
  double step = 1e-5;
  // |analytic - numeric| / max(|analytic|, |numeric|, floor)
  double denominator_floor = 1e-6;
};

// Compares backprop gradients of `build_loss` with central differences over
// every parameter value. `build_loss` must be deterministic.
GradCheckReport grad_check(ParameterCollection& params,
                           const std::function<Expr(Graph&)>& build_loss,
                           const GradCheckOptions& options = {});

}  // namespace rnng::nn
