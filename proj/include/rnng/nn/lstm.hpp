#pragma once

#include <span>
#include <string>
#include <vector>

#include "rnng/nn/graph.hpp"

namespace rnng::nn {

// Single-layer LSTM cell. Gate rows of the stacked weights are ordered
// input, forget, output, candidate:
//   [i f o] = sigmoid(.), g = tanh(.),  c' = f*c + i*g,  h' = o*tanh(c')
// The forget-gate bias starts at 1.0.
class LstmCell {
 public:
  struct State {
    Expr h;
    Expr c;
  };

  LstmCell() = default;
  LstmCell(ParameterCollection& params, const std::string& prefix, int input_dim,
           int hidden_dim);
  // Binds to parameters that already exist (checkpoint loading).
  static LstmCell attach(ParameterCollection& params, const std::string& prefix);

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }

  State initial(Graph& g) const;
  // Throws std::invalid_argument on an input of the wrong size.
  State step(Graph& g, const State& prev, Expr x) const;

 private:
  Parameter* wx_ = nullptr;  // (4H x D)
  Parameter* wh_ = nullptr;  // (4H x H)
  Parameter* b_ = nullptr;   // (4H)
  int input_dim_ = 0;
  int hidden_dim_ = 0;
};

enum class ReadOrder { kForward, kBackward };

// Hidden state after each input. For kBackward the sequence is read from the
// end; out[i] is still the state aligned with inputs[i].
std::vector<Expr> lstm_encode(Graph& g, const LstmCell& cell,
                              std::span<const Expr> inputs,
                              ReadOrder order = ReadOrder::kForward);

// Per-position concatenation [forward; backward].
std::vector<Expr> bilstm_encode(Graph& g, const LstmCell& forward,
                                const LstmCell& backward,
                                std::span<const Expr> inputs);

}  // namespace rnng::nn
