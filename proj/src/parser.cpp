#include "rnng/parser.hpp"

#include <cmath>
#include <numeric>

#include "rnng/error.hpp"

namespace rnng {

using nn::Expr;

int ParserState::buffer_remaining() const {
  if (mode == Mode::kGenerative || !input) return 0;
  return static_cast<int>(input->size()) - next_input;
}

double ActionDistribution::logprob(int action_index) const {
  for (std::size_t j = 0; j < legal.size(); ++j)
    if (legal[j] == action_index) return logprobs.value()[static_cast<int>(j)];
  return -INFINITY;
}

Expr Parser::embed_word(int id) const {
  return g_.lookup(*model_.weights().word_emb, id);
}

ParserState Parser::initial(std::span<const std::string> words, bool capture) const {
  const auto& cfg = model_.config();
  const auto& w = model_.weights();
  ParserState s;
  s.mode = cfg.mode;
  s.capture = capture;
  if (cfg.ablation.use_stack)
    s.stack_lstm.push_back(
        w.stack_lstm.step(g_, w.stack_lstm.initial(g_), g_.param(*w.stack_guard)));
  if (cfg.ablation.use_history)
    s.history_lstm =
        w.history_lstm.step(g_, w.history_lstm.initial(g_), g_.param(*w.history_start));

  if (cfg.mode == Mode::kDiscriminative) {
    if (words.empty()) throw DataError("discriminative parsing needs a nonempty sentence");
    auto ids = std::make_shared<std::vector<int>>();
    for (const auto& word : words) ids->push_back(model_.vocab().word_id(word));
    s.input = ids;
    s.surface = std::make_shared<std::vector<std::string>>(words.begin(), words.end());
    if (cfg.ablation.use_buffer) {
      auto st = w.buffer_lstm.step(g_, w.buffer_lstm.initial(g_), g_.param(*w.buffer_guard));
      s.buffer_lstm.push_back(st);
      for (std::size_t i = ids->size(); i-- > 0;) {
        st = w.buffer_lstm.step(g_, st, embed_word((*ids)[i]));
        s.buffer_lstm.push_back(st);
      }
    }
  } else if (cfg.ablation.use_buffer) {
    s.buffer_lstm.push_back(
        w.buffer_lstm.step(g_, w.buffer_lstm.initial(g_), g_.param(*w.buffer_guard)));
  }
  return s;
}

ParserState Parser::initial(const Oracle& oracle, bool capture) const {
  ParserState s = initial(std::span<const std::string>(oracle.surface), capture);
  if (model_.config().mode == Mode::kGenerative)
    s.surface = std::make_shared<std::vector<std::string>>(oracle.surface);
  return s;
}

StateShape Parser::shape(const ParserState& s) const {
  StateShape sh;
  sh.mode = s.mode;
  sh.stack_size = static_cast<int>(s.stack.size());
  sh.open_nts = s.open_nts();
  sh.top_is_open_nt = !s.stack.empty() && s.stack.back().open;
  sh.terminals = s.terminals;
  sh.buffer_remaining = s.buffer_remaining();
  return sh;
}

LegalActions Parser::legal(const ParserState& s) const {
  return legal_actions(shape(s), model_.config().limits);
}

StructureEncodings Parser::encodings(const ParserState& s) const {
  const auto& ab = model_.config().ablation;
  StructureEncodings enc;
  if (ab.use_stack) enc.stack = s.stack_lstm.back().h;
  if (ab.use_buffer) {
    if (s.mode == Mode::kGenerative)
      enc.buffer = s.buffer_lstm.back().h;
    else
      enc.buffer = s.buffer_lstm[static_cast<std::size_t>(s.buffer_remaining())].h;
  }
  if (ab.use_history) enc.history = s.history_lstm->h;
  return enc;
}

Expr Parser::summarize(const StructureEncodings& enc) const {
  const auto& ab = model_.config().ablation;
  const auto& w = model_.weights();
  std::vector<Expr> terms;
  if (ab.use_stack) {
    terms.push_back(g_.param(*w.summary_stack));
    terms.push_back(*enc.stack);
  }
  if (ab.use_buffer) {
    terms.push_back(g_.param(*w.summary_buffer));
    terms.push_back(*enc.buffer);
  }
  if (ab.use_history) {
    terms.push_back(g_.param(*w.summary_history));
    terms.push_back(*enc.history);
  }
  return nn::relu(nn::affine(g_.param(*w.summary_b), terms));
}

Expr Parser::summary(ParserState& s) const {
  if (!s.cached_summary) s.cached_summary = summarize(encodings(s));
  return *s.cached_summary;
}

ActionDistribution Parser::distribution(Expr u, const LegalActions& legal) const {
  if (!legal.any()) throw std::invalid_argument("action distribution over an empty legal set");
  const auto& w = model_.weights();
  ActionDistribution d;
  if (legal.nt)
    for (int i = 0; i < model_.vocab().num_nonterminals(); ++i) d.legal.push_back(i);
  if (legal.term) d.legal.push_back(model_.term_index());
  if (legal.reduce) d.legal.push_back(model_.reduce_index());
  const Expr logits = nn::affine(g_.param(*w.action_b), {g_.param(*w.action_w), u});
  d.logprobs = nn::log_softmax_over(logits, d.legal);
  if (legal.term && model_.config().mode == Mode::kGenerative) {
    std::vector<int> all(static_cast<std::size_t>(model_.vocab().num_words()));
    std::iota(all.begin(), all.end(), 0);
    d.word_logprobs = nn::log_softmax_over(
        nn::affine(g_.param(*w.word_b), {g_.param(*w.word_w), u}), std::move(all));
  }
  return d;
}

ActionDistribution Parser::distribution(ParserState& s) const {
  return distribution(summary(s), legal(s));
}

namespace {

void check_kind(const ParserState& s, const ModelAction& a, const LegalActions& legal,
                const RnngModel& model) {
  const std::size_t at = s.history.size();
  bool ok = false;
  switch (a.kind) {
    case ActionKind::kNT:
      ok = legal.nt && a.id >= 0 && a.id < model.vocab().num_nonterminals();
      break;
    case ActionKind::kGen:
      ok = s.mode == Mode::kGenerative && legal.term && a.id >= 0 &&
           a.id < model.vocab().num_words();
      break;
    case ActionKind::kShift:
      ok = s.mode == Mode::kDiscriminative && legal.term;
      break;
    case ActionKind::kReduce:
      ok = legal.reduce;
      break;
  }
  if (!ok)
    throw IllegalActionError(
        "illegal " + model.to_action(a.kind == ActionKind::kNT &&
                                             (a.id < 0 || a.id >= model.vocab().num_nonterminals())
                                         ? ModelAction{ActionKind::kReduce, -1}
                                         : a)
                         .to_string() +
            " in state (stack " + std::to_string(s.stack.size()) + ", open " +
            std::to_string(s.open_nts()) + ", terminals " + std::to_string(s.terminals) +
            ", buffer " + std::to_string(s.buffer_remaining()) + ")",
        at);
}

LegalActions legal_or_throw(const Parser& p, const ParserState& s) {
  if (p.is_final(s))
    throw IllegalActionError("action after the final state", s.history.size());
  return p.legal(s);
}

}  // namespace

Expr Parser::action_logprob(ParserState& s, const ModelAction& a) const {
  const LegalActions legal = legal_or_throw(*this, s);
  check_kind(s, a, legal, model_);
  Expr u = summary(s);
  const ActionDistribution d = distribution(u, legal);
  const int idx = model_.action_index(a);
  int pos = 0;
  while (d.legal[static_cast<std::size_t>(pos)] != idx) ++pos;
  Expr lp = nn::pick(d.logprobs, pos);
  if (a.kind == ActionKind::kGen) lp = lp + nn::pick(*d.word_logprobs, a.id);
  return lp;
}

void Parser::push_stack(ParserState& s, StackEntry e) const {
  if (model_.config().ablation.use_stack) {
    const auto& cell = model_.weights().stack_lstm;
    s.stack_lstm.push_back(cell.step(g_, s.stack_lstm.back(), e.vec));
  }
  s.stack.push_back(std::move(e));
}

void Parser::apply(ParserState& s, const ModelAction& a, std::string_view surface) const {
  const LegalActions legal = legal_or_throw(*this, s);
  check_kind(s, a, legal, model_);
  const auto& cfg = model_.config();
  const auto& w = model_.weights();

  if (a.kind == ActionKind::kReduce && cfg.composition == Composition::kGatedAttention)
    summary(s);  // the composition reads u of the state that chose REDUCE

  if (a.kind == ActionKind::kReduce) {
    reduce(s);
  } else if (a.kind == ActionKind::kNT) {
    StackEntry e{g_.lookup(*w.nt_emb, a.id), true, a.id, model_.vocab().nt(a.id),
                 s.terminals, s.terminals};
    s.open_positions.push_back(static_cast<int>(s.stack.size()));
    push_stack(s, std::move(e));
  } else {
    int id = a.id;
    std::string word;
    if (a.kind == ActionKind::kShift) {
      id = (*s.input)[static_cast<std::size_t>(s.next_input)];
      word = (*s.surface)[static_cast<std::size_t>(s.next_input)];
      ++s.next_input;
    } else if (!surface.empty()) {
      word = std::string(surface);
    } else if (s.surface && s.terminals < static_cast<int>(s.surface->size())) {
      word = (*s.surface)[static_cast<std::size_t>(s.terminals)];
    } else {
      word = model_.vocab().word(id);
    }
    const Expr e = embed_word(id);
    push_stack(s, {e, false, -1, std::move(word), s.terminals, s.terminals + 1});
    ++s.terminals;
    if (a.kind == ActionKind::kGen && cfg.ablation.use_buffer)
      s.buffer_lstm.push_back(w.buffer_lstm.step(g_, s.buffer_lstm.back(), e));
  }

  if (cfg.ablation.use_history)
    s.history_lstm = w.history_lstm.step(
        g_, *s.history_lstm, g_.lookup(*w.action_emb, model_.action_index(a)));
  s.history.push_back(a);
  s.cached_summary.reset();
}

void Parser::reduce(ParserState& s) const {
  const auto& cfg = model_.config();
  const auto& w = model_.weights();
  const std::size_t open = static_cast<std::size_t>(s.open_positions.back());
  const int nt = s.stack[open].nt;

  CompositionInputs in;
  in.nt = nt;
  std::vector<std::string> descriptors;
  for (std::size_t i = open + 1; i < s.stack.size(); ++i) {
    in.children.push_back(s.stack[i].vec);
    descriptors.push_back(s.stack[i].descriptor);
  }
  const int begin = s.stack[open + 1].begin;
  const int end = s.stack.back().end;

  Expr composed;
  if (cfg.composition == Composition::kGatedAttention) {
    in.summary = *s.cached_summary;
    const GatedComposition gc = w.gated.compose(g_, in);
    composed = gc.composed;
    if (s.capture)
      s.attention.push_back(make_attention_record(model_.vocab().nt(nt), std::move(descriptors),
                                                  gc.weights.value(), begin, end));
  } else {
    composed = w.bilstm.compose(g_, in);
  }
  if (s.capture)
    s.phrases.push_back({model_.vocab().nt(nt), begin, end, composed.value().vec()});

  s.stack.resize(open);
  if (cfg.ablation.use_stack) s.stack_lstm.resize(open + 1);
  s.open_positions.pop_back();
  push_stack(s, {composed, false, nt, model_.vocab().nt(nt), begin, end});
}

ScoredSequence sequence_logprob(const RnngModel& model, nn::Graph& g, const Oracle& oracle,
                                bool capture) {
  Parser parser(model, g);
  ParserState s = parser.initial(oracle, capture);
  ScoredSequence out;
  std::vector<Expr> terms;
  terms.reserve(oracle.actions.size());
  for (const ModelAction& a : oracle.actions) {
    Expr lp = parser.action_logprob(s, a);
    out.step_logprobs.push_back(lp.scalar());
    terms.push_back(lp);
    parser.apply(s, a);
  }
  if (!parser.is_final(s))
    throw IllegalActionError("sequence ends before a final state", oracle.actions.size());
  out.total = nn::sum(terms);
  out.logprob = out.total.scalar();
  out.attention = std::move(s.attention);
  out.phrases = std::move(s.phrases);
  return out;
}

double sequence_logprob(const RnngModel& model, const Tree& t) {
  nn::Graph g;
  return sequence_logprob(model, g, model.oracle(t)).logprob;
}

namespace {

// Inverse-CDF draw over log-probabilities.
int draw(const nn::Tensor& logprobs, std::mt19937_64& rng) {
  double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const int n = logprobs.size();
  for (int j = 0; j < n; ++j) {
    r -= std::exp(logprobs[j]);
    if (r < 0.0) return j;
  }
  // Rounding left r slightly positive: take the last entry with mass.
  for (int j = n; j-- > 0;)
    if (std::exp(logprobs[j]) > 0.0) return j;
  return n - 1;
}

}  // namespace

SampledSequence sample_sequence(const RnngModel& model, nn::Graph& g, std::mt19937_64& rng,
                                std::span<const std::string> words) {
  Parser parser(model, g);
  ParserState s = parser.initial(words);
  const Limits& limits = model.config().limits;
  double logprob = 0.0;
  while (!parser.is_final(s)) {
    if (static_cast<int>(s.history.size()) >= limits.max_actions)
      throw TruncatedSampleError("sample exceeded " + std::to_string(limits.max_actions) +
                                 " actions");
    const LegalActions legal = parser.legal(s);
    if (!legal.any()) throw TruncatedSampleError("sample reached a state with no legal action");
    const ActionDistribution d = parser.distribution(parser.summary(s), legal);
    const int j = draw(d.logprobs.value(), rng);
    const int idx = d.legal[static_cast<std::size_t>(j)];
    logprob += d.logprobs.value()[j];
    ModelAction a;
    if (idx == model.reduce_index()) {
      a = {ActionKind::kReduce, -1};
    } else if (idx == model.term_index()) {
      if (model.config().mode == Mode::kGenerative) {
        const int wid = draw(d.word_logprobs->value(), rng);
        logprob += d.word_logprobs->value()[wid];
        a = {ActionKind::kGen, wid};
      } else {
        a = {ActionKind::kShift, -1};
      }
    } else {
      a = {ActionKind::kNT, idx};
    }
    parser.apply(s, a);
  }
  std::vector<Action> actions;
  actions.reserve(s.history.size());
  for (const ModelAction& a : s.history) actions.push_back(model.to_action(a));
  Tree tree = actions_to_tree(actions, words);
  return SampledSequence{std::move(s.history), logprob, std::move(tree)};
}

}  // namespace rnng
