#include "rnng/model.hpp"

#include "rnng/error.hpp"

namespace rnng {

void ModelConfig::validate() const {
  if (ablation.enabled() == 0)
    throw ConfigError("ablation must keep at least one of stack, buffer, history");
  if (embedding_dim <= 0 || hidden_dim <= 0 || action_dim <= 0 || query_dim <= 0)
    throw ConfigError("model dimensions must be positive");
  if (limits.max_open_nts <= 0 || limits.max_length <= 0 || limits.max_actions <= 0)
    throw ConfigError("transition limits must be positive");
  if (unk_threshold < 0) throw ConfigError("unk_threshold must be >= 0");
}

ModelConfig ModelConfig::paper_dims(ModelConfig base) {
  base.embedding_dim = 256;
  base.hidden_dim = 256;
  base.action_dim = 16;
  base.query_dim = 256;
  return base;
}

RnngModel::RnngModel(ModelConfig config, Vocabulary vocab)
    : config_(std::move(config)), vocab_(std::move(vocab)), params_(config_.seed) {
  config_.validate();
  const int e = config_.embedding_dim, h = config_.hidden_dim;
  const int nw = vocab_.num_words(), nn_ = vocab_.num_nonterminals();
  if (nn_ == 0) throw DataError("vocabulary has no nonterminals");
  const auto& ab = config_.ablation;

  w_.word_emb = &params_.add("word_emb", nw, e);
  w_.nt_emb = &params_.add("nt_emb", nn_, e);
  w_.summary_b = &params_.add("summary.b", h, 1);
  if (ab.use_stack) {
    w_.stack_guard = &params_.add("stack.guard", e, 1);
    w_.stack_lstm = nn::LstmCell(params_, "stack.lstm", e, h);
    w_.summary_stack = &params_.add("summary.stack", h, h);
  }
  if (ab.use_buffer) {
    w_.buffer_guard = &params_.add("buffer.guard", e, 1);
    w_.buffer_lstm = nn::LstmCell(params_, "buffer.lstm", e, h);
    w_.summary_buffer = &params_.add("summary.buffer", h, h);
  }
  if (ab.use_history) {
    w_.action_emb = &params_.add("history.action_emb", num_actions(), config_.action_dim);
    w_.history_start = &params_.add("history.start", config_.action_dim, 1);
    w_.history_lstm = nn::LstmCell(params_, "history.lstm", config_.action_dim, h);
    w_.summary_history = &params_.add("summary.history", h, h);
  }
  w_.action_w = &params_.add("action.w", num_actions(), h);
  w_.action_b = &params_.add("action.b", num_actions(), 1);
  if (config_.mode == Mode::kGenerative) {
    w_.word_w = &params_.add("word.w", nw, h);
    w_.word_b = &params_.add("word.b", nw, 1);
  }
  if (config_.composition == Composition::kBiLstm)
    w_.bilstm = BiLstmComposer(params_, nn_, e);
  else
    w_.gated = GatedAttentionComposer(params_, nn_, e, h, config_.query_dim);
}

int RnngModel::action_index(const ModelAction& a) const {
  switch (a.kind) {
    case ActionKind::kNT: return a.id;
    case ActionKind::kGen:
    case ActionKind::kShift: return term_index();
    case ActionKind::kReduce: return reduce_index();
  }
  return -1;
}

ModelAction RnngModel::to_model_action(const Action& a) const {
  switch (a.kind) {
    case ActionKind::kNT: return {a.kind, vocab_.nt_id(a.symbol)};
    case ActionKind::kGen: return {a.kind, vocab_.word_id(a.symbol)};
    default: return {a.kind, -1};
  }
}

Action RnngModel::to_action(const ModelAction& a) const {
  switch (a.kind) {
    case ActionKind::kNT: return Action::nt(vocab_.nt(a.id));
    case ActionKind::kGen: return Action::gen(vocab_.word(a.id));
    case ActionKind::kShift: return Action::shift();
    case ActionKind::kReduce: return Action::reduce();
  }
  return Action::reduce();
}

Oracle RnngModel::oracle(const Tree& t) const {
  const Tree labeled = config_.unlabeled ? strip_labels(t) : t;
  Oracle o;
  o.surface = labeled.yield();
  for (const Action& a : tree_to_oracle(labeled, config_.mode))
    o.actions.push_back(to_model_action(a));
  if (config_.mode == Mode::kDiscriminative)
    for (const auto& w : o.surface) o.input.push_back(vocab_.word_id(w));
  return o;
}

}  // namespace rnng
