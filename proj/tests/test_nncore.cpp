#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "rnng/error.hpp"
#include "rnng/nn/graph.hpp"
#include "rnng/nn/lstm.hpp"
#include "rnng/nn/parameters.hpp"
#include "rnng/nn/trainer.hpp"

namespace rnng::nn {
namespace {

void randomize(ParameterCollection& pc, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& p : pc.all())
    for (double& x : p->value.values()) x = u(rng);
}

// Reduces any expression to a scalar with fixed pseudo-random weights so that
// every output coordinate carries gradient.
Expr readout(Graph& g, Expr y) {
  Tensor w(y.size());
  for (int i = 0; i < w.size(); ++i) w[i] = std::sin(1.0 + 0.7 * i);
  return dot(g.input(w), y);
}

TEST(Graph, SquareHasGradientSix) {
  ParameterCollection pc;
  Parameter& x = pc.add("x", 1, 1, Init::kZero);
  x.value[0] = 3.0;
  Graph g;
  const Expr px = g.param(x);
  const Expr loss = dot(px, px);
  EXPECT_DOUBLE_EQ(loss.scalar(), 9.0);
  g.backward(loss);
  EXPECT_DOUBLE_EQ(x.grad[0], 6.0);
}

TEST(Graph, ConstantLossGivesZeroGradients) {
  ParameterCollection pc(3);
  Parameter& w = pc.add("w", 2, 2);
  Graph g;
  g.param(w);
  g.backward(sum(std::vector<Expr>{g.input(Tensor(1, 1, 4.0))}));
  for (double v : w.grad.values()) EXPECT_EQ(v, 0.0);
}

TEST(Graph, RejectsNonScalarLossAndNonFiniteValues) {
  Graph g;
  EXPECT_THROW(g.backward(g.input(Tensor(2))), std::invalid_argument);
  EXPECT_THROW(g.input(Tensor(1, 1, std::nan(""))), NumericalError);
  EXPECT_THROW(g.input(Tensor(1, 1, INFINITY)), NumericalError);
  ParameterCollection pc;
  Parameter& p = pc.add("p", 1, 1);
  p.value[0] = INFINITY;
  EXPECT_THROW(g.param(p), NumericalError);
}

TEST(Graph, ParamNodeIsSharedPerGraph) {
  ParameterCollection pc;
  Parameter& p = pc.add("p", 2, 1);
  Graph g;
  EXPECT_EQ(g.param(p).id, g.param(p).id);
}

TEST(Graph, BackwardLeavesForwardValuesUnchanged) {
  ParameterCollection pc(5);
  Parameter& w = pc.add("w", 3, 3);
  Parameter& b = pc.add("b", 3, 1);
  Graph g;
  const Expr x = g.input(Tensor::column({0.3, -0.2, 0.9}));
  const Expr h = tanh(affine(g.param(b), {g.param(w), x}));
  const Expr y = softmax(cmul(h, h));
  const Tensor before = y.value();
  const Tensor h_before = h.value();
  g.backward(readout(g, y));
  EXPECT_EQ(y.value(), before);
  EXPECT_EQ(h.value(), h_before);
}

struct OpCase {
  const char* name;
  std::function<Expr(Graph&, ParameterCollection&)> build;
};

// Parameters: a, b (4-vectors), m (3x4), t (5x4 table).
std::vector<OpCase> op_cases() {
  auto A = [](Graph& g, ParameterCollection& pc) { return g.param(pc.get("a")); };
  auto B = [](Graph& g, ParameterCollection& pc) { return g.param(pc.get("b")); };
  auto M = [](Graph& g, ParameterCollection& pc) { return g.param(pc.get("m")); };
  return {
      {"affine", [=](Graph& g, ParameterCollection& pc) {
         return affine(g.param(pc.get("c")), {M(g, pc), A(g, pc), M(g, pc), B(g, pc)});
       }},
      {"matvec", [=](Graph& g, ParameterCollection& pc) { return matvec(M(g, pc), A(g, pc)); }},
      {"add", [=](Graph& g, ParameterCollection& pc) { return A(g, pc) + B(g, pc); }},
      {"sub", [=](Graph& g, ParameterCollection& pc) { return A(g, pc) - B(g, pc); }},
      {"cmul", [=](Graph& g, ParameterCollection& pc) { return cmul(A(g, pc), B(g, pc)); }},
      {"one_minus", [=](Graph& g, ParameterCollection& pc) { return one_minus(A(g, pc)); }},
      {"scale", [=](Graph& g, ParameterCollection& pc) { return scale(A(g, pc), -1.7); }},
      {"neg", [=](Graph& g, ParameterCollection& pc) { return -A(g, pc); }},
      {"tanh", [=](Graph& g, ParameterCollection& pc) { return tanh(A(g, pc)); }},
      {"sigmoid", [=](Graph& g, ParameterCollection& pc) { return sigmoid(A(g, pc)); }},
      {"relu", [=](Graph& g, ParameterCollection& pc) { return relu(A(g, pc)); }},
      {"concat", [=](Graph& g, ParameterCollection& pc) { return concat({A(g, pc), B(g, pc)}); }},
      {"concat_cols", [=](Graph& g, ParameterCollection& pc) {
         const Expr m = concat_cols(std::vector<Expr>{A(g, pc), B(g, pc), A(g, pc)});
         return matvec(m, g.param(pc.get("v3")));
       }},
      {"slice", [=](Graph& g, ParameterCollection& pc) { return slice(A(g, pc), 1, 2); }},
      {"dot", [=](Graph& g, ParameterCollection& pc) { return dot(A(g, pc), B(g, pc)); }},
      {"softmax", [=](Graph& g, ParameterCollection& pc) { return softmax(A(g, pc)); }},
      {"log_softmax_over", [=](Graph& g, ParameterCollection& pc) {
         return log_softmax_over(A(g, pc), {0, 2, 3});
       }},
      {"pick", [=](Graph& g, ParameterCollection& pc) { return pick(A(g, pc), 2); }},
      {"sum", [=](Graph& g, ParameterCollection& pc) {
         return sum(std::vector<Expr>{A(g, pc), B(g, pc), A(g, pc)});
       }},
      {"lookup", [=](Graph& g, ParameterCollection& pc) {
         return cmul(g.lookup(pc.get("t"), 3), g.lookup(pc.get("t"), 1));
       }},
      {"composite", [=](Graph& g, ParameterCollection& pc) {
         const Expr h1 = tanh(affine(g.param(pc.get("c")), {M(g, pc), A(g, pc)}));
         const Expr h2 = sigmoid(concat({h1, slice(B(g, pc), 0, 1)}));
         return log_softmax_over(cmul(h2, h2) + h2, {0, 1, 3});
       }},
  };
}

TEST(GradCheck, EveryOpMatchesCentralDifferencesOverSeeds) {
  for (const OpCase& op : op_cases()) {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      ParameterCollection pc;
      pc.add("a", 4, 1);
      pc.add("b", 4, 1);
      pc.add("c", 3, 1);
      pc.add("m", 3, 4);
      pc.add("t", 5, 4);
      pc.add("v3", 3, 1);
      randomize(pc, seed);
      const GradCheckReport r = grad_check(pc, [&](Graph& g) { return readout(g, op.build(g, pc)); });
      worst = std::max(worst, r.max_relative_error);
      ASSERT_TRUE(r.passed) << op.name << " seed " << seed << ": " << r.max_relative_error
                            << " at " << r.worst_parameter << "[" << r.worst_index << "]";
    }
    RecordProperty(op.name, std::to_string(worst));
  }
}

TEST(GradCheck, LinearFunctionIsNearExact) {
  ParameterCollection pc(2);
  pc.add("w", 3, 1);
  const GradCheckReport r = grad_check(pc, [&](Graph& g) {
    return dot(g.param(pc.get("w")), g.input(Tensor::column({1.0, -2.0, 0.5})));
  });
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.max_relative_error, 1e-9);
  EXPECT_EQ(r.checked, 3u);
}

TEST(GradCheck, DetectsACorruptedGradient) {
  ParameterCollection pc(4);
  pc.add("w", 3, 1);
  // The second factor reads the parameter as a constant, so backprop misses
  // half of d(w.w)/dw while finite differences see all of it.
  const GradCheckReport r = grad_check(pc, [&](Graph& g) {
    Parameter& w = pc.get("w");
    return dot(g.param(w), g.input(w.value));
  });
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.max_relative_error, 0.5, 1e-6);
}

// Independent scalar-loop LSTM step with the documented gate layout.
struct RefLstm {
  int d, h;
  std::vector<double> wx, wh, b;  // row-major (4h x d), (4h x h), 4h

  static double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  void step(const std::vector<double>& x, std::vector<double>& hs, std::vector<double>& cs) const {
    std::vector<double> z(4 * h);
    for (int r = 0; r < 4 * h; ++r) {
      double acc = b[r];
      for (int c = 0; c < d; ++c) acc += wx[r * d + c] * x[c];
      for (int c = 0; c < h; ++c) acc += wh[r * h + c] * hs[c];
      z[r] = acc;
    }
    for (int k = 0; k < h; ++k) {
      const double i = sig(z[k]), f = sig(z[h + k]), o = sig(z[2 * h + k]);
      const double g = std::tanh(z[3 * h + k]);
      cs[k] = f * cs[k] + i * g;
      hs[k] = o * std::tanh(cs[k]);
    }
  }
};

TEST(Lstm, MatchesIndependentRecurrence) {
  ParameterCollection pc;
  LstmCell cell(pc, "l", 2, 3);
  RefLstm ref{2, 3, {}, {}, {}};
  int k = 0;
  for (auto& p : pc.all())
    for (double& v : p->value.values()) v = 0.05 * std::sin(0.37 * ++k);
  ref.wx = pc.get("l.wx").value.vec();
  ref.wh = pc.get("l.wh").value.vec();
  ref.b = pc.get("l.b").value.vec();

  const std::vector<std::vector<double>> xs{{0.5, -1.0}, {0.25, 0.75}, {-0.6, 0.1}};
  Graph g;
  std::vector<Expr> in;
  for (const auto& x : xs) in.push_back(g.input(Tensor::column(x)));

  std::vector<double> hs(3, 0.0), cs(3, 0.0);
  const auto fwd = lstm_encode(g, cell, in);
  for (std::size_t t = 0; t < xs.size(); ++t) {
    ref.step(xs[t], hs, cs);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(fwd[t].value()[j], hs[j], 1e-15);
  }

  std::fill(hs.begin(), hs.end(), 0.0);
  std::fill(cs.begin(), cs.end(), 0.0);
  const auto bwd = lstm_encode(g, cell, in, ReadOrder::kBackward);
  for (std::size_t t = xs.size(); t-- > 0;) {
    ref.step(xs[t], hs, cs);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(bwd[t].value()[j], hs[j], 1e-15);
  }

  const auto bi = bilstm_encode(g, cell, cell, in);
  for (std::size_t t = 0; t < xs.size(); ++t) {
    ASSERT_EQ(bi[t].size(), 6);
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(bi[t].value()[j], fwd[t].value()[j]);
      EXPECT_EQ(bi[t].value()[3 + j], bwd[t].value()[j]);
    }
  }
}

TEST(Lstm, ZeroWeightsGiveZeroStates) {
  ParameterCollection pc;
  LstmCell cell(pc, "l", 2, 3);
  for (auto& p : pc.all()) p->value.fill(0.0);
  Graph g;
  std::vector<Expr> in{g.input(Tensor::column({1.0, 2.0})), g.input(Tensor::column({-3.0, 0.5}))};
  for (const Expr& h : lstm_encode(g, cell, in))
    for (double v : h.value().values()) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, LengthOneEqualsOneStep) {
  ParameterCollection pc(7);
  LstmCell cell(pc, "l", 2, 2);
  Graph g;
  const Expr x = g.input(Tensor::column({0.4, -0.3}));
  const auto out = lstm_encode(g, cell, std::vector<Expr>{x});
  EXPECT_EQ(out[0].value(), cell.step(g, cell.initial(g), x).h.value());
}

TEST(Lstm, ShapesAndForgetBias) {
  ParameterCollection pc;
  LstmCell cell(pc, "l", 5, 3);
  EXPECT_EQ(pc.get("l.wx").value.rows(), 12);
  EXPECT_EQ(pc.get("l.wx").value.cols(), 5);
  EXPECT_EQ(pc.get("l.wh").value.cols(), 3);
  const Tensor& b = pc.get("l.b").value;
  for (int k = 0; k < 12; ++k) EXPECT_EQ(b[k], (k >= 3 && k < 6) ? 1.0 : 0.0);
  Graph g;
  EXPECT_THROW(cell.step(g, cell.initial(g), g.input(Tensor(4))), std::invalid_argument);
  EXPECT_THROW(lstm_encode(g, cell, std::vector<Expr>{}), std::invalid_argument);
}

TEST(Init, GlorotRangeAndDeterminism) {
  ParameterCollection a(11), b(11);
  Parameter& pa = a.add("w", 6, 10);
  Parameter& pb = b.add("w", 6, 10);
  EXPECT_EQ(pa.value, pb.value);
  const double bound = std::sqrt(6.0 / 16.0);
  for (double v : pa.value.values()) EXPECT_LE(std::abs(v), bound);
  EXPECT_THROW(a.add("w", 1, 1), ConfigError);
}

TEST(Sgd, StepArithmetic) {
  ParameterCollection pc;
  Parameter& p = pc.add("p", 1, 1, Init::kZero);
  p.value[0] = 1.0;
  TrainerConfig cfg;
  cfg.clip = 0.0;
  p.grad[0] = 1.0;
  sgd_step(pc, cfg, 0);
  EXPECT_DOUBLE_EQ(p.value[0], 0.9);
  EXPECT_EQ(p.grad[0], 0.0);

  sgd_step(pc, cfg, 0);  // zero gradient
  EXPECT_DOUBLE_EQ(p.value[0], 0.9);

  EXPECT_DOUBLE_EQ(cfg.rate(2), 0.1 / 1.16);
}

TEST(Sgd, ClipsByGlobalNorm) {
  ParameterCollection pc;
  Parameter& p = pc.add("p", 2, 1, Init::kZero);
  p.value.fill(1.0);
  p.grad[0] = 3.0;
  p.grad[1] = 4.0;
  TrainerConfig cfg;
  cfg.clip = 1.0;
  sgd_step(pc, cfg, 0);
  EXPECT_DOUBLE_EQ(p.value[0], 1.0 - 0.1 * 0.6);
  EXPECT_DOUBLE_EQ(p.value[1], 1.0 - 0.1 * 0.8);
}

TEST(Sgd, ZeroLearningRateLeavesParameters) {
  ParameterCollection pc(3);
  Parameter& p = pc.add("p", 3, 2);
  const Tensor before = p.value;
  p.grad.fill(0.7);
  TrainerConfig cfg;
  cfg.learning_rate = 0.0;
  sgd_step(pc, cfg, 4);
  EXPECT_EQ(p.value, before);
}

}  // namespace
}  // namespace rnng::nn
