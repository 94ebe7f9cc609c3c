#include "rnng/nn/parameters.hpp"

#include <cmath>

#include "rnng/error.hpp"

namespace rnng::nn {

Parameter& ParameterCollection::add(const std::string& name, int rows, int cols, Init init) {
  if (find(name)) throw ConfigError("duplicate parameter '" + name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Tensor(rows, cols);
  p->grad = Tensor(rows, cols);
  if (init == Init::kGlorot) {
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : p->value.values()) v = dist(rng_);
  }
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter* ParameterCollection::find(const std::string& name) {
  for (auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

const Parameter* ParameterCollection::find(const std::string& name) const {
  for (auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

Parameter& ParameterCollection::get(const std::string& name) {
  if (Parameter* p = find(name)) return *p;
  throw ConfigError("no parameter named '" + name + "'");
}

std::size_t ParameterCollection::num_values() const {
  std::size_t n = 0;
  for (auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

void ParameterCollection::zero_grad() {
  for (auto& p : params_) p->grad.fill(0.0);
}

double ParameterCollection::grad_norm() const {
  double s = 0.0;
  for (auto& p : params_)
    for (double g : p->grad.values()) s += g * g;
  return std::sqrt(s);
}

}  // namespace rnng::nn
