#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rnng/attention_record.hpp"
#include "rnng/nn/graph.hpp"
#include "rnng/nn/lstm.hpp"

namespace rnng {

enum class Composition { kBiLstm, kGatedAttention };

std::string_view to_string(Composition c);
Composition parse_composition(std::string_view s);  // bilstm | gated-attention

// Operands of one REDUCE.
struct CompositionInputs {
  int nt = 0;
  // Constituent vectors c_1..c_k in surface order (k >= 1).
  std::vector<nn::Expr> children;
  // Parser-state summary u at the REDUCE.
  nn::Expr summary;
};

// Bidirectional recurrent composition: the forward LSTM reads the label
// embedding then c_1..c_k, the backward LSTM the label embedding then
// c_k..c_1; final states go through tanh(W [f; b] + bias).
class BiLstmComposer {
 public:
  BiLstmComposer() = default;
  BiLstmComposer(nn::ParameterCollection& params, int num_nts, int dim);
  static BiLstmComposer attach(nn::ParameterCollection& params);

  nn::Expr compose(nn::Graph& g, const CompositionInputs& in) const;

 private:
  nn::LstmCell forward_;
  nn::LstmCell backward_;
  nn::Parameter* label_ = nullptr;  // (|N| x dim)
  nn::Parameter* w_ = nullptr;      // (dim x 2 dim)
  nn::Parameter* b_ = nullptr;      // (dim)
};

struct GatedComposition {
  nn::Expr composed;  // c = g * t_nt + (1 - g) * m
  nn::Expr weights;   // a
  nn::Expr mix;       // m = [c_1 ... c_k] a
  nn::Expr gate;      // g
};

// Gated attention over the children:
//   a = softmax([c_1 ... c_k]^T V [u; o_nt])
//   m = [c_1 ... c_k] a
//   g = sigmoid(W1 t_nt + W2 m + b)
//   c = g * t_nt + (1 - g) * m
// o_nt and t_nt come from separate label tables.
class GatedAttentionComposer {
 public:
  GatedAttentionComposer() = default;
  GatedAttentionComposer(nn::ParameterCollection& params, int num_nts, int child_dim,
                         int summary_dim, int query_dim);
  static GatedAttentionComposer attach(nn::ParameterCollection& params);

  nn::Expr attention_weights(nn::Graph& g, const CompositionInputs& in) const;
  GatedComposition compose(nn::Graph& g, const CompositionInputs& in) const;

  int child_dim() const { return child_dim_; }

 private:
  nn::Parameter* v_ = nullptr;       // (child_dim x (summary_dim + query_dim))
  nn::Parameter* query_ = nullptr;   // o_nt table (|N| x query_dim)
  nn::Parameter* gate_nt_ = nullptr; // t_nt table (|N| x child_dim)
  nn::Parameter* w1_ = nullptr;      // (child_dim x child_dim)
  nn::Parameter* w2_ = nullptr;      // (child_dim x child_dim)
  nn::Parameter* b_ = nullptr;       // (child_dim)
  int child_dim_ = 0;
};

// Builds the record for a finished gated composition.
AttentionRecord make_attention_record(std::string label,
                                      std::vector<std::string> child_descriptors,
                                      const nn::Tensor& weights, int begin, int end);

}  // namespace rnng
