#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rnng/nn/tensor.hpp"

namespace rnng::nn {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

enum class Init {
  kZero,
  // Uniform in +-sqrt(6 / (fan_in + fan_out)).
  kGlorot,
};

// Named learned tensors, in insertion order. Addresses are stable.
class ParameterCollection {
 public:
  explicit ParameterCollection(std::uint64_t seed = 1) : rng_(seed) {}

  // Throws ConfigError on a duplicate name. Vectors are (n x 1); lookup
  // tables are (rows x dim) with one row per symbol.
  Parameter& add(const std::string& name, int rows, int cols, Init init = Init::kGlorot);

  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;
  Parameter& get(const std::string& name);

  const std::vector<std::unique_ptr<Parameter>>& all() const { return params_; }
  std::size_t num_values() const;

  void zero_grad();
  double grad_norm() const;

 private:
  std::mt19937_64 rng_;
  std::vector<std::unique_ptr<Parameter>> params_;
};

}  // namespace rnng::nn
