#include "rnng/compose.hpp"

#include <stdexcept>

#include "rnng/error.hpp"

namespace rnng {

using nn::Expr;

std::string_view to_string(Composition c) {
  return c == Composition::kBiLstm ? "bilstm" : "gated-attention";
}

Composition parse_composition(std::string_view s) {
  if (s == "bilstm") return Composition::kBiLstm;
  if (s == "gated-attention" || s == "ga" || s == "attention")
    return Composition::kGatedAttention;
  throw ConfigError("unknown composition '" + std::string(s) +
                    "' (bilstm|gated-attention)");
}

namespace {

void check_children(const CompositionInputs& in, int dim) {
  if (in.children.empty()) throw std::invalid_argument("composition with zero children");
  for (const Expr& c : in.children)
    if (c.size() != dim)
      throw std::invalid_argument("composition child has size " + std::to_string(c.size()) +
                                  ", expected " + std::to_string(dim));
}

}  // namespace

BiLstmComposer::BiLstmComposer(nn::ParameterCollection& params, int num_nts, int dim)
    : forward_(params, "compose.fwd", dim, dim),
      backward_(params, "compose.rev", dim, dim) {
  label_ = &params.add("compose.label", num_nts, dim);
  w_ = &params.add("compose.w", dim, 2 * dim);
  b_ = &params.add("compose.b", dim, 1);
}

BiLstmComposer BiLstmComposer::attach(nn::ParameterCollection& params) {
  BiLstmComposer c;
  c.forward_ = nn::LstmCell::attach(params, "compose.fwd");
  c.backward_ = nn::LstmCell::attach(params, "compose.rev");
  c.label_ = &params.get("compose.label");
  c.w_ = &params.get("compose.w");
  c.b_ = &params.get("compose.b");
  return c;
}

Expr BiLstmComposer::compose(nn::Graph& g, const CompositionInputs& in) const {
  check_children(in, forward_.input_dim());
  const Expr label = g.lookup(*label_, in.nt);
  auto f = forward_.step(g, forward_.initial(g), label);
  for (const Expr& c : in.children) f = forward_.step(g, f, c);
  auto b = backward_.step(g, backward_.initial(g), label);
  for (auto it = in.children.rbegin(); it != in.children.rend(); ++it)
    b = backward_.step(g, b, *it);
  return nn::tanh(nn::affine(g.param(*b_), {g.param(*w_), nn::concat({f.h, b.h})}));
}

GatedAttentionComposer::GatedAttentionComposer(nn::ParameterCollection& params,
                                               int num_nts, int child_dim,
                                               int summary_dim, int query_dim)
    : child_dim_(child_dim) {
  v_ = &params.add("attention.v", child_dim, summary_dim + query_dim);
  query_ = &params.add("attention.o_nt", num_nts, query_dim);
  gate_nt_ = &params.add("gate.t_nt", num_nts, child_dim);
  w1_ = &params.add("gate.w1", child_dim, child_dim);
  w2_ = &params.add("gate.w2", child_dim, child_dim);
  b_ = &params.add("gate.b", child_dim, 1);
}

GatedAttentionComposer GatedAttentionComposer::attach(nn::ParameterCollection& params) {
  GatedAttentionComposer c;
  c.v_ = &params.get("attention.v");
  c.query_ = &params.get("attention.o_nt");
  c.gate_nt_ = &params.get("gate.t_nt");
  c.w1_ = &params.get("gate.w1");
  c.w2_ = &params.get("gate.w2");
  c.b_ = &params.get("gate.b");
  c.child_dim_ = c.w1_->value.rows();
  return c;
}

Expr GatedAttentionComposer::attention_weights(nn::Graph& g,
                                               const CompositionInputs& in) const {
  check_children(in, child_dim_);
  const Expr query = nn::matvec(g.param(*v_), nn::concat({in.summary, g.lookup(*query_, in.nt)}));
  std::vector<Expr> logits;
  logits.reserve(in.children.size());
  for (const Expr& c : in.children) logits.push_back(nn::dot(c, query));
  return nn::softmax(nn::concat(logits));
}

GatedComposition GatedAttentionComposer::compose(nn::Graph& g,
                                                 const CompositionInputs& in) const {
  GatedComposition out;
  out.weights = attention_weights(g, in);
  out.mix = nn::matvec(nn::concat_cols(in.children), out.weights);
  const Expr t = g.lookup(*gate_nt_, in.nt);
  out.gate = nn::sigmoid(nn::affine(g.param(*b_), {g.param(*w1_), t, g.param(*w2_), out.mix}));
  out.composed = nn::cmul(out.gate, t) + nn::cmul(nn::one_minus(out.gate), out.mix);
  return out;
}

AttentionRecord make_attention_record(std::string label,
                                      std::vector<std::string> child_descriptors,
                                      const nn::Tensor& weights, int begin, int end) {
  AttentionRecord r;
  r.label = std::move(label);
  r.children = std::move(child_descriptors);
  r.weights = weights.vec();
  r.perplexity = attention_perplexity(r.weights);
  r.begin = begin;
  r.end = end;
  return r;
}

}  // namespace rnng
