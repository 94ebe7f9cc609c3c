#include "rnng/nn/lstm.hpp"

#include <stdexcept>

#include "rnng/error.hpp"

namespace rnng::nn {

LstmCell::LstmCell(ParameterCollection& params, const std::string& prefix,
                   int input_dim, int hidden_dim)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
  wx_ = &params.add(prefix + ".wx", 4 * hidden_dim, input_dim);
  wh_ = &params.add(prefix + ".wh", 4 * hidden_dim, hidden_dim);
  b_ = &params.add(prefix + ".b", 4 * hidden_dim, 1, Init::kZero);
  for (int i = hidden_dim; i < 2 * hidden_dim; ++i) b_->value[i] = 1.0;
}

LstmCell LstmCell::attach(ParameterCollection& params, const std::string& prefix) {
  LstmCell cell;
  cell.wx_ = &params.get(prefix + ".wx");
  cell.wh_ = &params.get(prefix + ".wh");
  cell.b_ = &params.get(prefix + ".b");
  cell.hidden_dim_ = cell.wh_->value.cols();
  cell.input_dim_ = cell.wx_->value.cols();
  if (cell.wx_->value.rows() != 4 * cell.hidden_dim_ ||
      cell.wh_->value.rows() != 4 * cell.hidden_dim_ ||
      cell.b_->value.rows() != 4 * cell.hidden_dim_)
    throw ConfigError("inconsistent LSTM parameter shapes under '" + prefix + "'");
  return cell;
}

LstmCell::State LstmCell::initial(Graph& g) const {
  return {g.zeros(hidden_dim_), g.zeros(hidden_dim_)};
}

LstmCell::State LstmCell::step(Graph& g, const State& prev, Expr x) const {
  if (x.size() != input_dim_)
    throw std::invalid_argument("LSTM input has size " + std::to_string(x.size()) +
                                ", expected " + std::to_string(input_dim_));
  const int h = hidden_dim_;
  Expr pre = affine(g.param(*b_), {g.param(*wx_), x, g.param(*wh_), prev.h});
  Expr ifo = sigmoid(slice(pre, 0, 3 * h));
  Expr cand = tanh(slice(pre, 3 * h, h));
  Expr i = slice(ifo, 0, h);
  Expr f = slice(ifo, h, h);
  Expr o = slice(ifo, 2 * h, h);
  Expr c = cmul(f, prev.c) + cmul(i, cand);
  return {cmul(o, tanh(c)), c};
}

std::vector<Expr> lstm_encode(Graph& g, const LstmCell& cell,
                              std::span<const Expr> inputs, ReadOrder order) {
  if (inputs.empty()) throw std::invalid_argument("lstm_encode: empty sequence");
  const std::size_t n = inputs.size();
  std::vector<Expr> out(n);
  LstmCell::State s = cell.initial(g);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order == ReadOrder::kForward ? k : n - 1 - k;
    s = cell.step(g, s, inputs[i]);
    out[i] = s.h;
  }
  return out;
}

std::vector<Expr> bilstm_encode(Graph& g, const LstmCell& forward,
                                const LstmCell& backward,
                                std::span<const Expr> inputs) {
  auto f = lstm_encode(g, forward, inputs, ReadOrder::kForward);
  auto b = lstm_encode(g, backward, inputs, ReadOrder::kBackward);
  std::vector<Expr> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) out.push_back(concat({f[i], b[i]}));
  return out;
}

}  // namespace rnng::nn
