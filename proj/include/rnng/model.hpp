#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnng/action.hpp"
#include "rnng/compose.hpp"
#include "rnng/nn/lstm.hpp"
#include "rnng/nn/parameters.hpp"
#include "rnng/transition.hpp"
#include "rnng/vocabulary.hpp"

namespace rnng {

struct ModelConfig {
  Mode mode = Mode::kGenerative;
  Composition composition = Composition::kBiLstm;
  AblationConfig ablation;
  // Words, nonterminals, and stack entries share this width.
  int embedding_dim = 32;
  int hidden_dim = 64;
  int action_dim = 16;
  // Width of the attention query embedding o_nt.
  int query_dim = 32;
  Limits limits;
  std::uint64_t seed = 1;
  int unk_threshold = 1;
  bool unlabeled = false;

  // Throws ConfigError.
  void validate() const;
  // Larger widths for full-scale runs; not exercised at desk scale.
  static ModelConfig paper_dims(ModelConfig base);
};

// Vocabulary-level action: `id` is the nonterminal id for NT and the word id
// for GEN; unused otherwise.
struct ModelAction {
  ActionKind kind = ActionKind::kReduce;
  int id = -1;
  friend bool operator==(const ModelAction&, const ModelAction&) = default;
};

// A tree mapped into a model's vocabulary.
struct Oracle {
  std::vector<ModelAction> actions;
  // Discriminative input word ids (empty in generative mode).
  std::vector<int> input;
  // Surface words of the sentence, used for attention descriptors.
  std::vector<std::string> surface;
};

// All learned tensors of one RNNG plus its configuration and vocabulary.
// Parameter names are stable and double as checkpoint keys.
class RnngModel {
 public:
  RnngModel(ModelConfig config, Vocabulary vocab);
  RnngModel(const RnngModel&) = delete;
  RnngModel& operator=(const RnngModel&) = delete;

  const ModelConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  nn::ParameterCollection& params() { return params_; }
  const nn::ParameterCollection& params() const { return params_; }

  // Action softmax layout: [NT(0) .. NT(|N|-1), GEN|SHIFT, REDUCE].
  int num_actions() const { return vocab_.num_nonterminals() + 2; }
  int term_index() const { return vocab_.num_nonterminals(); }
  int reduce_index() const { return vocab_.num_nonterminals() + 1; }
  int action_index(const ModelAction& a) const;

  // Maps the tree's oracle into vocabulary ids (unseen words become UNK).
  // Throws DataError for an unknown nonterminal.
  Oracle oracle(const Tree& t) const;
  ModelAction to_model_action(const Action& a) const;
  Action to_action(const ModelAction& a) const;

  struct Weights {
    nn::Parameter* word_emb = nullptr;
    nn::Parameter* nt_emb = nullptr;
    nn::Parameter* stack_guard = nullptr;
    nn::Parameter* buffer_guard = nullptr;
    nn::Parameter* action_emb = nullptr;
    nn::Parameter* history_start = nullptr;
    nn::Parameter* summary_b = nullptr;
    nn::Parameter* summary_stack = nullptr;
    nn::Parameter* summary_buffer = nullptr;
    nn::Parameter* summary_history = nullptr;
    nn::Parameter* action_w = nullptr;
    nn::Parameter* action_b = nullptr;
    nn::Parameter* word_w = nullptr;
    nn::Parameter* word_b = nullptr;
    nn::LstmCell stack_lstm;
    nn::LstmCell buffer_lstm;
    nn::LstmCell history_lstm;
    BiLstmComposer bilstm;
    GatedAttentionComposer gated;
  };
  const Weights& weights() const { return w_; }

 private:
  ModelConfig config_;
  Vocabulary vocab_;
  nn::ParameterCollection params_;
  Weights w_;
};

}  // namespace rnng
