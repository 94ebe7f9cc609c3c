#pragma once

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rnng/attention_record.hpp"
#include "rnng/model.hpp"
#include "rnng/nn/graph.hpp"

namespace rnng {

struct StackEntry {
  nn::Expr vec;
  bool open = false;
  int nt = -1;             // label id for OpenNT and composed entries
  std::string descriptor;  // word for terminals, label otherwise
  int begin = 0;
  int end = 0;
};

// A composed constituent, captured for phrase-vector export.
struct PhraseRecord {
  std::string label;
  int begin = 0;
  int end = 0;
  std::vector<double> vec;
};

// Algorithmic state plus the recurrent encodings of one trajectory. States
// are plain values: copying one forks the trajectory on the same graph.
struct ParserState {
  Mode mode = Mode::kGenerative;
  std::vector<StackEntry> stack;
  std::vector<int> open_positions;  // stack indices of OpenNT entries
  std::vector<nn::LstmCell::State> stack_lstm;  // [guard, entries...]

  // Generative: LSTM states over generated words. Discriminative: states of
  // the right-to-left read of the input, indexed by words remaining.
  std::vector<nn::LstmCell::State> buffer_lstm;
  std::shared_ptr<const std::vector<int>> input;
  std::shared_ptr<const std::vector<std::string>> surface;
  int next_input = 0;
  int terminals = 0;

  std::vector<ModelAction> history;
  std::optional<nn::LstmCell::State> history_lstm;

  std::optional<nn::Expr> cached_summary;
  bool capture = false;
  std::vector<AttentionRecord> attention;  // REDUCE (post-) order
  std::vector<PhraseRecord> phrases;       // REDUCE order

  int open_nts() const { return static_cast<int>(open_positions.size()); }
  int buffer_remaining() const;
};

// Top recurrent states feeding the summary; disabled structures are ignored.
struct StructureEncodings {
  std::optional<nn::Expr> stack;
  std::optional<nn::Expr> buffer;
  std::optional<nn::Expr> history;
};

struct ActionDistribution {
  std::vector<int> legal;  // action indices, ascending
  nn::Expr logprobs;       // aligned with `legal`
  std::optional<nn::Expr> word_logprobs;  // generative: over the vocabulary

  // log p(action index); -inf when illegal.
  double logprob(int action_index) const;
};

// Steps trajectories of one model on one graph. The model is read-only.
class Parser {
 public:
  Parser(const RnngModel& model, nn::Graph& graph) : model_(model), g_(graph) {}

  // `words` is required in discriminative mode and ignored otherwise.
  ParserState initial(std::span<const std::string> words = {}, bool capture = false) const;
  ParserState initial(const Oracle& oracle, bool capture = false) const;

  StateShape shape(const ParserState& s) const;
  LegalActions legal(const ParserState& s) const;
  bool is_final(const ParserState& s) const { return shape(s).is_final(); }

  StructureEncodings encodings(const ParserState& s) const;
  // u = relu(b + sum over enabled structures of W_s h_s)
  nn::Expr summarize(const StructureEncodings& enc) const;
  nn::Expr summary(ParserState& s) const;

  ActionDistribution distribution(nn::Expr summary, const LegalActions& legal) const;
  ActionDistribution distribution(ParserState& s) const;
  // log p(a | s), including the word term for GEN.
  nn::Expr action_logprob(ParserState& s, const ModelAction& a) const;

  // Throws IllegalActionError (index = history length) for an illegal action.
  void apply(ParserState& s, const ModelAction& a, std::string_view surface = {}) const;

  const RnngModel& model() const { return model_; }
  nn::Graph& graph() const { return g_; }

 private:
  nn::Expr embed_word(int id) const;
  void push_stack(ParserState& s, StackEntry e) const;
  void reduce(ParserState& s) const;

  const RnngModel& model_;
  nn::Graph& g_;
};

struct ScoredSequence {
  double logprob = 0.0;
  nn::Expr total;  // sum of step log-probabilities, differentiable
  std::vector<double> step_logprobs;
  std::vector<AttentionRecord> attention;
  std::vector<PhraseRecord> phrases;
};

// sum_t log p(a_t | a_<t). Generative: log p(x, y); discriminative:
// log q(y | x). Throws IllegalActionError on an illegal or unfinished sequence.
ScoredSequence sequence_logprob(const RnngModel& model, nn::Graph& g,
                                const Oracle& oracle, bool capture = false);
double sequence_logprob(const RnngModel& model, const Tree& t);

class TruncatedSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampledSequence {
  std::vector<ModelAction> actions;
  double logprob = 0.0;
  Tree tree;
};

// Ancestral sampling until a final state. Discriminative samples consume
// exactly `words`. Throws TruncatedSampleError when the action budget runs
// out or a state has no legal action.
SampledSequence sample_sequence(const RnngModel& model, nn::Graph& g,
                                std::mt19937_64& rng,
                                std::span<const std::string> words = {});

}  // namespace rnng
