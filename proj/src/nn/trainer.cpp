#include "rnng/nn/trainer.hpp"

#include <algorithm>
#include <cmath>

namespace rnng::nn {

void sgd_step(ParameterCollection& params, const TrainerConfig& config, int epoch) {
  double scale = 1.0;
  if (config.clip > 0.0) {
    const double norm = params.grad_norm();
    if (norm > config.clip) scale = config.clip / norm;
  }
  const double eta = config.rate(epoch) * scale;
  for (auto& p : params.all()) {
    double* v = p->value.data();
    double* g = p->grad.data();
    for (int i = 0; i < p->value.size(); ++i) {
      v[i] -= eta * g[i];
      g[i] = 0.0;
    }
  }
}

GradCheckReport grad_check(ParameterCollection& params,
                           const std::function<Expr(Graph&)>& build_loss,
                           const GradCheckOptions& options) {
  params.zero_grad();
  {
    Graph g;
    g.backward(build_loss(g));
  }
  auto eval = [&]() {
    Graph g;
    return build_loss(g).scalar();
  };

  GradCheckReport report;
  for (auto& p : params.all()) {
    const Tensor analytic = p->grad;
    for (int i = 0; i < p->value.size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + options.step;
      const double up = eval();
      p->value[i] = saved - options.step;
      const double down = eval();
      p->value[i] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double denom =
          std::max({std::abs(analytic[i]), std::abs(numeric), options.denominator_floor});
      const double err = std::abs(analytic[i] - numeric) / denom;
      ++report.checked;
      if (report.worst_index < 0 || err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst_parameter = p->name;
        report.worst_index = i;
      }
    }
  }
  params.zero_grad();
  report.passed = report.max_relative_error < options.tolerance;
  return report;
}

}  // namespace rnng::nn
