#pragma once

#include <initializer_list>
#include <span>
#include <unordered_map>
#include <vector>

#include "rnng/nn/parameters.hpp"
#include "rnng/nn/tensor.hpp"

namespace rnng::nn {

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
struct Expr {
  Graph* graph = nullptr;
  int id = -1;

  const Tensor& value() const;
  double scalar() const { return value()[0]; }
  int size() const { return value().size(); }
};

// Eager reverse-mode tape. Each operation computes its value when it is
// recorded, so nodes are appended in topological order and backward is a
// single reverse sweep. Non-finite values throw NumericalError.
class Graph {
 public:
  enum class Op {
    kInput, kParam, kLookup, kAffine, kMatVec, kAdd, kSub, kCMul, kOneMinus,
    kScale, kTanh, kSigmoid, kRelu, kConcat, kConcatCols, kSlice, kDot,
    kSoftmax, kLogSoftmaxOver, kPick, kSum, kNeg,
  };

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Expr input(Tensor t);
  Expr zeros(int n) { return input(Tensor(n)); }
  // One node per parameter per graph; repeated calls return the same node.
  Expr param(Parameter& p);
  // Row `row` of an (n x d) table, as a d-vector.
  Expr lookup(Parameter& p, int row);

  // Accumulates d(loss)/d(param) into every reachable Parameter::grad.
  // Throws std::invalid_argument if `loss` is not 1x1.
  void backward(Expr loss);

  const Tensor& value(int id) const { return nodes_[static_cast<std::size_t>(id)].get(); }
  std::size_t size() const { return nodes_.size(); }
  void clear();

  Expr record(Op op, std::vector<int> inputs, Tensor value, int aux = 0,
              std::vector<int> extra = {}, double scale = 0.0);

 private:
  struct Node {
    Op op;
    std::vector<int> in;
    Tensor value;
    const Tensor* external = nullptr;  // kParam: parameter storage
    Parameter* param = nullptr;        // kParam, kLookup
    int aux = 0;                       // kLookup row, kSlice begin, kPick index
    std::vector<int> extra;            // kLogSoftmaxOver support
    double scale = 0.0;                // kScale factor
    const Tensor& get() const { return external ? *external : value; }
  };

  void backprop_node(std::size_t id, std::vector<Tensor>& grads);

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
};

// y = b + sum_i W_i x_i, with terms = {W_1, x_1, W_2, x_2, ...}.
Expr affine(Expr b, std::initializer_list<Expr> terms);
Expr affine(Expr b, std::span<const Expr> terms);
// Matrix (m x n) times vector (n).
Expr matvec(Expr m, Expr x);
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr cmul(Expr a, Expr b);
Expr one_minus(Expr a);
Expr scale(Expr a, double s);
Expr operator-(Expr a);
Expr tanh(Expr a);
Expr sigmoid(Expr a);
Expr relu(Expr a);
Expr concat(std::span<const Expr> parts);
Expr concat(std::initializer_list<Expr> parts);
// Column vectors (all of size d) side by side into a (d x k) matrix.
Expr concat_cols(std::span<const Expr> columns);
Expr slice(Expr a, int begin, int length);
Expr dot(Expr a, Expr b);
Expr softmax(Expr a);
// Log-softmax restricted to `support`; result[j] is for index support[j].
Expr log_softmax_over(Expr a, std::vector<int> support);
Expr pick(Expr a, int index);
// Elementwise sum of equally shaped expressions.
Expr sum(std::span<const Expr> xs);

}  // namespace rnng::nn
