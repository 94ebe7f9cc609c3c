#include "rnng/nn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rnng/error.hpp"

namespace rnng::nn {

bool Tensor::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

const Tensor& Expr::value() const { return graph->value(id); }

namespace {

const char* op_name(Graph::Op op) {
  switch (op) {
    case Graph::Op::kInput: return "input";
    case Graph::Op::kParam: return "param";
    case Graph::Op::kLookup: return "lookup";
    case Graph::Op::kAffine: return "affine";
    case Graph::Op::kMatVec: return "matvec";
    case Graph::Op::kAdd: return "add";
    case Graph::Op::kSub: return "sub";
    case Graph::Op::kCMul: return "cmul";
    case Graph::Op::kOneMinus: return "one_minus";
    case Graph::Op::kScale: return "scale";
    case Graph::Op::kTanh: return "tanh";
    case Graph::Op::kSigmoid: return "sigmoid";
    case Graph::Op::kRelu: return "relu";
    case Graph::Op::kConcat: return "concat";
    case Graph::Op::kConcatCols: return "concat_cols";
    case Graph::Op::kSlice: return "slice";
    case Graph::Op::kDot: return "dot";
    case Graph::Op::kSoftmax: return "softmax";
    case Graph::Op::kLogSoftmaxOver: return "log_softmax_over";
    case Graph::Op::kPick: return "pick";
    case Graph::Op::kSum: return "sum";
    case Graph::Op::kNeg: return "neg";
  }
  return "?";
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Graph& same_graph(Expr a) {
  require(a.graph != nullptr, "expression without a graph");
  return *a.graph;
}

}  // namespace

Expr Graph::record(Op op, std::vector<int> inputs, Tensor value, int aux,
                   std::vector<int> extra, double scale) {
  if (!value.all_finite())
    throw NumericalError(std::string("non-finite value produced by ") + op_name(op));
  Node n{op, std::move(inputs), std::move(value), nullptr, nullptr, aux, std::move(extra), scale};
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size() - 1)};
}

Expr Graph::input(Tensor t) { return record(Op::kInput, {}, std::move(t)); }

Expr Graph::param(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return {this, it->second};
  if (!p.value.all_finite())
    throw NumericalError("non-finite value in parameter " + p.name);
  Node n{Op::kParam, {}, Tensor(), &p.value, &p, 0, {}, 0.0};
  nodes_.push_back(std::move(n));
  const int id = static_cast<int>(nodes_.size() - 1);
  param_nodes_.emplace(&p, id);
  return {this, id};
}

Expr Graph::lookup(Parameter& p, int row) {
  require(row >= 0 && row < p.value.rows(), "lookup row out of range");
  const int d = p.value.cols();
  Tensor v(d);
  std::copy_n(p.value.data() + static_cast<std::size_t>(row) * d, d, v.data());
  Expr e = record(Op::kLookup, {}, std::move(v), row);
  nodes_.back().param = &p;
  return e;
}

void Graph::clear() {
  nodes_.clear();
  param_nodes_.clear();
}

Expr affine(Expr b, std::span<const Expr> terms) {
  Graph& g = same_graph(b);
  require(terms.size() % 2 == 0, "affine: terms must be (W, x) pairs");
  Tensor y = b.value();
  std::vector<int> in{b.id};
  for (std::size_t t = 0; t < terms.size(); t += 2) {
    const Tensor& w = terms[t].value();
    const Tensor& x = terms[t + 1].value();
    require(x.cols() == 1 && w.cols() == x.rows() && w.rows() == y.rows(),
            "affine: dimension mismatch");
    const int m = w.rows(), n = w.cols();
    const double* wp = w.data();
    const double* xp = x.data();
    for (int r = 0; r < m; ++r) {
      double acc = 0.0;
      const double* row = wp + static_cast<std::size_t>(r) * n;
      for (int c = 0; c < n; ++c) acc += row[c] * xp[c];
      y[r] += acc;
    }
    in.push_back(terms[t].id);
    in.push_back(terms[t + 1].id);
  }
  return g.record(Graph::Op::kAffine, std::move(in), std::move(y));
}

Expr affine(Expr b, std::initializer_list<Expr> terms) {
  return affine(b, std::span<const Expr>(terms.begin(), terms.size()));
}

Expr matvec(Expr m, Expr x) {
  Graph& g = same_graph(m);
  const Tensor& a = m.value();
  const Tensor& v = x.value();
  require(v.cols() == 1 && a.cols() == v.rows(), "matvec: dimension mismatch");
  Tensor y(a.rows());
  for (int r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    for (int c = 0; c < a.cols(); ++c) acc += a.at(r, c) * v[c];
    y[r] = acc;
  }
  return g.record(Graph::Op::kMatVec, {m.id, x.id}, std::move(y));
}

namespace {

template <typename F>
Expr binary(Graph::Op op, Expr a, Expr b, F f) {
  Graph& g = same_graph(a);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require(x.same_shape(y), "elementwise op: shape mismatch");
  Tensor out(x.rows(), x.cols());
  for (int i = 0; i < x.size(); ++i) out[i] = f(x[i], y[i]);
  return g.record(op, {a.id, b.id}, std::move(out));
}

template <typename F>
Expr unary(Graph::Op op, Expr a, F f, double scale = 0.0) {
  Graph& g = same_graph(a);
  const Tensor& x = a.value();
  Tensor out(x.rows(), x.cols());
  for (int i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return g.record(op, {a.id}, std::move(out), 0, {}, scale);
}

}  // namespace

Expr operator+(Expr a, Expr b) {
  return binary(Graph::Op::kAdd, a, b, [](double x, double y) { return x + y; });
}
Expr operator-(Expr a, Expr b) {
  return binary(Graph::Op::kSub, a, b, [](double x, double y) { return x - y; });
}
Expr cmul(Expr a, Expr b) {
  return binary(Graph::Op::kCMul, a, b, [](double x, double y) { return x * y; });
}
Expr one_minus(Expr a) {
  return unary(Graph::Op::kOneMinus, a, [](double x) { return 1.0 - x; });
}
Expr scale(Expr a, double s) {
  return unary(Graph::Op::kScale, a, [s](double x) { return s * x; }, s);
}
Expr operator-(Expr a) {
  return unary(Graph::Op::kNeg, a, [](double x) { return -x; });
}
Expr tanh(Expr a) {
  return unary(Graph::Op::kTanh, a, [](double x) { return std::tanh(x); });
}
Expr sigmoid(Expr a) {
  return unary(Graph::Op::kSigmoid, a, [](double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  });
}
Expr relu(Expr a) {
  return unary(Graph::Op::kRelu, a, [](double x) { return x > 0.0 ? x : 0.0; });
}

Expr concat(std::span<const Expr> parts) {
  require(!parts.empty(), "concat: no inputs");
  Graph& g = same_graph(parts.front());
  int n = 0;
  for (auto& p : parts) {
    require(p.value().cols() == 1, "concat: vectors only");
    n += p.size();
  }
  Tensor out(n);
  std::vector<int> in;
  int off = 0;
  for (auto& p : parts) {
    const Tensor& v = p.value();
    std::copy_n(v.data(), v.size(), out.data() + off);
    off += v.size();
    in.push_back(p.id);
  }
  return g.record(Graph::Op::kConcat, std::move(in), std::move(out));
}

Expr concat(std::initializer_list<Expr> parts) {
  return concat(std::span<const Expr>(parts.begin(), parts.size()));
}

Expr concat_cols(std::span<const Expr> columns) {
  require(!columns.empty(), "concat_cols: no inputs");
  Graph& g = same_graph(columns.front());
  const int d = columns.front().size();
  const int k = static_cast<int>(columns.size());
  Tensor out(d, k);
  std::vector<int> in;
  for (int j = 0; j < k; ++j) {
    const Tensor& v = columns[static_cast<std::size_t>(j)].value();
    require(v.size() == d && v.cols() == 1, "concat_cols: column size mismatch");
    for (int r = 0; r < d; ++r) out.at(r, j) = v[r];
    in.push_back(columns[static_cast<std::size_t>(j)].id);
  }
  return g.record(Graph::Op::kConcatCols, std::move(in), std::move(out));
}

Expr slice(Expr a, int begin, int length) {
  Graph& g = same_graph(a);
  const Tensor& x = a.value();
  require(begin >= 0 && length > 0 && begin + length <= x.size(), "slice: out of range");
  Tensor out(length);
  std::copy_n(x.data() + begin, length, out.data());
  return g.record(Graph::Op::kSlice, {a.id}, std::move(out), begin);
}

Expr dot(Expr a, Expr b) {
  Graph& g = same_graph(a);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require(x.size() == y.size(), "dot: size mismatch");
  double acc = 0.0;
  for (int i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return g.record(Graph::Op::kDot, {a.id, b.id}, Tensor(1, 1, acc));
}

Expr softmax(Expr a) {
  Graph& g = same_graph(a);
  const Tensor& x = a.value();
  Tensor out(x.rows(), x.cols());
  double mx = x[0];
  for (int i = 1; i < x.size(); ++i) mx = std::max(mx, x[i]);
  double z = 0.0;
  for (int i = 0; i < x.size(); ++i) z += (out[i] = std::exp(x[i] - mx));
  for (int i = 0; i < x.size(); ++i) out[i] /= z;
  return g.record(Graph::Op::kSoftmax, {a.id}, std::move(out));
}

Expr log_softmax_over(Expr a, std::vector<int> support) {
  Graph& g = same_graph(a);
  require(!support.empty(), "log_softmax_over: empty support");
  const Tensor& x = a.value();
  double mx = -INFINITY;
  for (int i : support) {
    require(i >= 0 && i < x.size(), "log_softmax_over: index out of range");
    mx = std::max(mx, x[i]);
  }
  double z = 0.0;
  for (int i : support) z += std::exp(x[i] - mx);
  const double lse = mx + std::log(z);
  Tensor out(static_cast<int>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) out[static_cast<int>(j)] = x[support[j]] - lse;
  return g.record(Graph::Op::kLogSoftmaxOver, {a.id}, std::move(out), 0, std::move(support));
}

Expr pick(Expr a, int index) {
  Graph& g = same_graph(a);
  require(index >= 0 && index < a.size(), "pick: index out of range");
  return g.record(Graph::Op::kPick, {a.id}, Tensor(1, 1, a.value()[index]), index);
}

Expr sum(std::span<const Expr> xs) {
  require(!xs.empty(), "sum: no inputs");
  Graph& g = same_graph(xs.front());
  Tensor out = xs.front().value();
  std::vector<int> in{xs.front().id};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const Tensor& v = xs[i].value();
    require(v.same_shape(out), "sum: shape mismatch");
    for (int j = 0; j < v.size(); ++j) out[j] += v[j];
    in.push_back(xs[i].id);
  }
  return g.record(Graph::Op::kSum, std::move(in), std::move(out));
}

void Graph::backward(Expr loss) {
  if (loss.graph != this || value(loss.id).size() != 1)
    throw std::invalid_argument("backward: loss must be a scalar node of this graph");
  std::vector<Tensor> grads(nodes_.size());
  grads[static_cast<std::size_t>(loss.id)] = Tensor(1, 1, 1.0);
  for (std::size_t i = static_cast<std::size_t>(loss.id) + 1; i-- > 0;) {
    if (grads[i].empty()) continue;
    if (!grads[i].all_finite())
      throw NumericalError(std::string("non-finite gradient at ") + op_name(nodes_[i].op));
    backprop_node(i, grads);
  }
}

void Graph::backprop_node(std::size_t id, std::vector<Tensor>& grads) {
  const Node& n = nodes_[id];
  const Tensor& gy = grads[id];
  const Tensor& y = n.get();
  auto acc = [&](int input) -> Tensor& {
    Tensor& t = grads[static_cast<std::size_t>(input)];
    if (t.empty()) {
      const Tensor& v = value(input);
      t = Tensor(v.rows(), v.cols());
    }
    return t;
  };

  switch (n.op) {
    case Op::kInput:
      break;
    case Op::kParam: {
      Tensor& pg = n.param->grad;
      for (int i = 0; i < gy.size(); ++i) pg[i] += gy[i];
      break;
    }
    case Op::kLookup: {
      Tensor& pg = n.param->grad;
      const int d = pg.cols();
      double* row = pg.data() + static_cast<std::size_t>(n.aux) * d;
      for (int i = 0; i < d; ++i) row[i] += gy[i];
      break;
    }
    case Op::kAffine: {
      Tensor& gb = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) gb[i] += gy[i];
      for (std::size_t t = 1; t < n.in.size(); t += 2) {
        const Tensor& w = value(n.in[t]);
        const Tensor& x = value(n.in[t + 1]);
        const int m = w.rows(), cols = w.cols();
        Tensor& gw = acc(n.in[t]);
        for (int r = 0; r < m; ++r) {
          const double g = gy[r];
          if (g == 0.0) continue;
          double* row = gw.data() + static_cast<std::size_t>(r) * cols;
          for (int c = 0; c < cols; ++c) row[c] += g * x[c];
        }
        Tensor& gx = acc(n.in[t + 1]);
        for (int r = 0; r < m; ++r) {
          const double g = gy[r];
          if (g == 0.0) continue;
          const double* row = w.data() + static_cast<std::size_t>(r) * cols;
          for (int c = 0; c < cols; ++c) gx[c] += g * row[c];
        }
      }
      break;
    }
    case Op::kMatVec: {
      const Tensor& a = value(n.in[0]);
      const Tensor& x = value(n.in[1]);
      Tensor& ga = acc(n.in[0]);
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) ga.at(r, c) += gy[r] * x[c];
      Tensor& gx = acc(n.in[1]);
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) gx[c] += gy[r] * a.at(r, c);
      break;
    }
    case Op::kAdd: {
      for (int k = 0; k < 2; ++k) {
        Tensor& g = acc(n.in[static_cast<std::size_t>(k)]);
        for (int i = 0; i < gy.size(); ++i) g[i] += gy[i];
      }
      break;
    }
    case Op::kSub: {
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) ga[i] += gy[i];
      Tensor& gb = acc(n.in[1]);
      for (int i = 0; i < gy.size(); ++i) gb[i] -= gy[i];
      break;
    }
    case Op::kCMul: {
      const Tensor& a = value(n.in[0]);
      const Tensor& b = value(n.in[1]);
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) ga[i] += gy[i] * b[i];
      Tensor& gb = acc(n.in[1]);
      for (int i = 0; i < gy.size(); ++i) gb[i] += gy[i] * a[i];
      break;
    }
    case Op::kOneMinus:
    case Op::kNeg: {
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) ga[i] -= gy[i];
      break;
    }
    case Op::kScale: {
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) ga[i] += n.scale * gy[i];
      break;
    }
    case Op::kTanh: {
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) ga[i] += gy[i] * (1.0 - y[i] * y[i]);
      break;
    }
    case Op::kSigmoid: {
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) ga[i] += gy[i] * y[i] * (1.0 - y[i]);
      break;
    }
    case Op::kRelu: {
      const Tensor& x = value(n.in[0]);
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i)
        if (x[i] > 0.0) ga[i] += gy[i];
      break;
    }
    case Op::kConcat: {
      int off = 0;
      for (int input : n.in) {
        Tensor& g = acc(input);
        for (int i = 0; i < g.size(); ++i) g[i] += gy[off + i];
        off += g.size();
      }
      break;
    }
    case Op::kConcatCols: {
      const int d = y.rows();
      for (std::size_t j = 0; j < n.in.size(); ++j) {
        Tensor& g = acc(n.in[j]);
        for (int r = 0; r < d; ++r) g[r] += gy.at(r, static_cast<int>(j));
      }
      break;
    }
    case Op::kSlice: {
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < gy.size(); ++i) ga[n.aux + i] += gy[i];
      break;
    }
    case Op::kDot: {
      const Tensor& a = value(n.in[0]);
      const Tensor& b = value(n.in[1]);
      const double g = gy[0];
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < a.size(); ++i) ga[i] += g * b[i];
      Tensor& gb = acc(n.in[1]);
      for (int i = 0; i < b.size(); ++i) gb[i] += g * a[i];
      break;
    }
    case Op::kSoftmax: {
      double s = 0.0;
      for (int i = 0; i < y.size(); ++i) s += gy[i] * y[i];
      Tensor& ga = acc(n.in[0]);
      for (int i = 0; i < y.size(); ++i) ga[i] += y[i] * (gy[i] - s);
      break;
    }
    case Op::kLogSoftmaxOver: {
      double s = 0.0;
      for (int j = 0; j < gy.size(); ++j) s += gy[j];
      Tensor& ga = acc(n.in[0]);
      for (std::size_t j = 0; j < n.extra.size(); ++j) {
        const int k = static_cast<int>(j);
        ga[n.extra[j]] += gy[k] - std::exp(y[k]) * s;
      }
      break;
    }
    case Op::kPick: {
      Tensor& ga = acc(n.in[0]);
      ga[n.aux] += gy[0];
      break;
    }
    case Op::kSum: {
      for (int input : n.in) {
        Tensor& g = acc(input);
        for (int i = 0; i < gy.size(); ++i) g[i] += gy[i];
      }
      break;
    }
  }
}

}  // namespace rnng::nn
