// Command-line driver: data generation, training, parsing, LM evaluation and
// the attention/phrase analyses.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rnng/analysis.hpp"
#include "rnng/checkpoint.hpp"
#include "rnng/config.hpp"
#include "rnng/corpus_io.hpp"
#include "rnng/dependency.hpp"
#include "rnng/error.hpp"
#include "rnng/evalb.hpp"
#include "rnng/inference.hpp"
#include "rnng/parser.hpp"
#include "rnng/toy.hpp"
#include "rnng/training.hpp"

namespace {

using namespace rnng;

// Parser output has no preterminals; a unary constituent over one word must
// survive the round trip.
const ReaderOptions kModelOutput{false, true, true};

// Output file or stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw DataError("cannot write " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

void echo_config(std::ostream& out, const KeyValues& kv) {
  for (const auto& [k, v] : kv) out << "# " << k << " = " << v << '\n';
}

struct GenToyArgs {
  std::size_t n = 500;
  std::uint64_t seed = 1;
  int max_depth = 2;
  std::string out;
};

int cmd_gen_toy(const GenToyArgs& a) {
  Output out(a.out);
  out.get() << toy_treebank_text(a.n, a.seed, a.max_depth);
  return 0;
}

struct TrainArgs {
  std::string config;
  std::vector<std::string> corpora;
  std::string out;
  std::string log;
  bool paper_dims = false;
  bool keep_preterminals = false;
  // Flag overrides, applied after the config file.
  std::string mode, ablation, composition;
  bool unlabeled = false;
  std::string seed, epochs, learning_rate;
};

int cmd_train(const TrainArgs& a) {
  RunConfig config;
  if (a.paper_dims) config.model = ModelConfig::paper_dims(config.model);
  if (!a.config.empty()) apply_config(config, read_key_values(a.config));
  KeyValues flags;
  if (!a.mode.empty()) flags.emplace_back("mode", a.mode);
  if (!a.ablation.empty()) flags.emplace_back("ablation", a.ablation);
  if (!a.composition.empty()) flags.emplace_back("composition", a.composition);
  if (a.unlabeled) flags.emplace_back("unlabeled", "true");
  if (!a.seed.empty()) flags.emplace_back("seed", a.seed);
  if (!a.epochs.empty()) flags.emplace_back("epochs", a.epochs);
  if (!a.learning_rate.empty()) flags.emplace_back("learning_rate", a.learning_rate);
  apply_config(config, flags);

  ReaderOptions reader;
  reader.collapse_preterminals = !a.keep_preterminals;
  std::vector<Tree> corpus;
  for (const auto& path : a.corpora)
    for (Tree& t : read_trees(path, reader)) corpus.push_back(std::move(t));
  if (corpus.empty()) throw DataError("training corpus is empty");

  const KeyValues effective = to_key_values(config);
  echo_config(std::cerr, effective);
  auto model = make_model(config.model, corpus);

  Output log(a.log.empty() ? a.out + ".log" : a.log);
  echo_config(log.get(), effective);
  log.get() << "# epoch loss lr elapsed\n";
  train(*model, corpus, config.trainer, [&](const EpochStats& s) {
    log.get() << format_epoch(s) << '\n';
    log.get().flush();
    std::cerr << format_epoch(s) << '\n';
  });
  save_checkpoint(a.out, *model, config.trainer);
  return 0;
}

struct ParseArgs {
  std::string disc, gen, input, gold, out, attention;
  int samples = 100;
  std::uint64_t seed = 1;
};

const RnngModel* attention_source(const RnngModel& gen, const RnngModel& disc) {
  if (gen.config().composition == Composition::kGatedAttention) return &gen;
  if (disc.config().composition == Composition::kGatedAttention) return &disc;
  return nullptr;
}

int cmd_parse(const ParseArgs& a) {
  const LoadedModel disc = load_checkpoint(a.disc);
  const LoadedModel gen = load_checkpoint(a.gen);
  check_compatible(*disc.model, *gen.model);

  std::vector<Tree> gold;
  std::vector<std::vector<std::string>> sentences;
  if (!a.gold.empty()) {
    gold = read_trees(a.gold);
    for (const Tree& t : gold) sentences.push_back(t.yield());
  } else if (!a.input.empty()) {
    sentences = read_sentences(a.input);
  } else {
    throw ConfigError("parse needs --input or --gold");
  }

  Output out(a.out);
  std::ofstream sidecar;
  const RnngModel* att = attention_source(*gen.model, *disc.model);
  if (!a.attention.empty()) {
    if (!att) throw ConfigError("--attention needs a gated-attention checkpoint");
    sidecar.open(a.attention, std::ios::binary);
    if (!sidecar) throw DataError("cannot write " + a.attention);
  }

  std::vector<Tree> predicted;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::mt19937_64 rng = sentence_rng(a.seed, i);
    std::vector<WeightedSample> samples = propose(*disc.model, sentences[i], a.samples, rng);
    score_joint(samples, *gen.model);
    const Tree& best = map_parse(samples).tree;
    out.get() << best.to_string() << '\n';
    if (sidecar.is_open()) {
      nn::Graph g;
      const auto scored = sequence_logprob(*att, g, att->oracle(best), true);
      write_attention(sidecar, scored.attention);
    }
    predicted.push_back(best);
  }

  if (!gold.empty()) {
    const bool unlabeled = disc.model->config().unlabeled;
    std::fprintf(stderr, "# sentences %zu samples %d seed %llu\n", sentences.size(), a.samples,
                 static_cast<unsigned long long>(a.seed));
    if (!unlabeled) {
      const BracketScore s = bracket_score(gold, predicted, true);
      std::fprintf(stderr, "# labeled P %.2f R %.2f F1 %.2f\n", s.precision, s.recall, s.f1);
    }
    const BracketScore u = bracket_score(gold, predicted, false);
    std::fprintf(stderr, "# unlabeled P %.2f R %.2f F1 %.2f\n", u.precision, u.recall, u.f1);
  }
  return 0;
}

struct LmArgs {
  std::string disc, gen, input, gold, out;
  int samples = 100;
  std::uint64_t seed = 1;
};

int cmd_lm(const LmArgs& a) {
  const LoadedModel disc = load_checkpoint(a.disc);
  const LoadedModel gen = load_checkpoint(a.gen);
  std::vector<std::vector<std::string>> sentences;
  if (!a.gold.empty()) {
    for (const Tree& t : read_trees(a.gold)) sentences.push_back(t.yield());
  } else if (!a.input.empty()) {
    sentences = read_sentences(a.input);
  } else {
    throw ConfigError("lm needs --input or --gold");
  }
  const LmReport r = corpus_perplexity(sentences, *disc.model, *gen.model, a.samples, a.seed);
  Output out(a.out);
  std::ostream& os = out.get();
  char buf[160];
  os << "sentence-id\ttokens\tlog_phat\tdistinct\n";
  for (std::size_t i = 0; i < r.sentences.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu\t%zu\t%.10f\t%zu\n", i, r.sentences[i].tokens,
                  r.sentences[i].log_phat, r.sentences[i].distinct);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "# corpus sentences=%zu tokens=%zu loglik=%.10f perplexity=%.6f\n",
                r.sentences.size(), r.tokens, r.total_loglik, r.perplexity);
  os << buf;
  std::snprintf(buf, sizeof buf, "# token-convention=words-only samples=%d seed=%llu\n",
                a.samples, static_cast<unsigned long long>(a.seed));
  os << buf;
  std::cerr << "perplexity " << r.perplexity << '\n';
  return 0;
}

struct PerpArgs {
  std::string attention, out, csv;
  std::size_t top = 0;
};

int cmd_analyze_perp(const PerpArgs& a) {
  std::vector<AttentionRecord> all;
  for (auto& sentence : read_attention(a.attention))
    for (auto& r : sentence) all.push_back(std::move(r));
  const auto rows = perplexity_by_label(all);
  Output out(a.out);
  write_perplexity_tsv(out.get(), rows);
  if (!a.csv.empty()) {
    Output csv(a.csv);
    write_perplexity_csv(csv.get(), rows);
  }
  if (a.top > 0) {
    for (const auto& row : rows) {
      std::cerr << "## " << row.label << '\n';
      for (const auto& r : top_entropy_samples(all, row.label, a.top))
        std::cerr << format_attention(r) << '\n';
    }
  }
  return 0;
}

struct HeadsArgs {
  std::string trees, attention, rules, deps_out, rule_deps_out, punct;
};

int cmd_analyze_heads(const HeadsArgs& a) {
  const std::vector<Tree> trees = read_trees(a.trees, kModelOutput);
  const auto records = read_attention(a.attention);
  if (records.size() != trees.size())
    throw DataError("attention sidecar has " + std::to_string(records.size()) +
                    " sentences, trees " + std::to_string(trees.size()));
  const HeadRuleTable rules = HeadRuleTable::load(a.rules);
  std::set<std::string> punct = ptb_punctuation();
  if (!a.punct.empty()) {
    const auto items = split_commas(a.punct);
    punct = std::set<std::string>(items.begin(), items.end());
  }
  std::vector<CapturedParse> parses;
  std::vector<DependencyGraph> att_deps, rule_deps;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    parses.push_back({trees[i], records_to_preorder(trees[i], records[i]), {}});
    att_deps.push_back(attention_heads(trees[i], parses.back().attention));
    rule_deps.push_back(head_rule_heads(trees[i], rules));
  }
  if (!a.deps_out.empty()) {
    Output o(a.deps_out);
    write_dependencies(o.get(), att_deps);
  }
  if (!a.rule_deps_out.empty()) {
    Output o(a.rule_deps_out);
    write_dependencies(o.get(), rule_deps);
  }
  const AttachmentCount c = head_overlap(parses, rules, punct);
  std::printf("UAS\t%.4f\t%ld/%ld\n", c.score(), c.correct, c.total);
  return 0;
}

struct ExportArgs {
  std::string model, trees, gold, labels, out;
};

int cmd_analyze_export(const ExportArgs& a) {
  const LoadedModel m = load_checkpoint(a.model);
  const std::vector<Tree> trees = read_trees(a.trees, kModelOutput);
  std::vector<Tree> gold;
  if (!a.gold.empty()) gold = read_trees(a.gold);
  std::vector<CapturedParse> parses;
  for (const Tree& t : trees) parses.push_back(capture(*m.model, t));
  const auto labels = split_commas(a.labels);
  const auto rows =
      export_phrase_vectors(parses, gold, std::set<std::string>(labels.begin(), labels.end()));
  Output out(a.out);
  write_phrase_tsv(out.get(), rows);
  return 0;
}

struct ProjectArgs {
  std::string vectors, out;
};

int cmd_analyze_project(const ProjectArgs& a) {
  std::istringstream in(read_file(a.vectors));
  std::string line;
  std::getline(in, line);  // header
  std::vector<PhraseRow> rows;
  std::vector<std::vector<double>> vecs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) cols.push_back(c);
    if (cols.size() != 5) throw DataError("phrase vector row needs 5 columns: " + line);
    PhraseRow r{cols[0], cols[1], std::stoi(cols[2]), std::stoi(cols[3]), {}};
    std::istringstream vs(cols[4]);
    for (double x; vs >> x;) r.vec.push_back(x);
    vecs.push_back(r.vec);
    rows.push_back(std::move(r));
  }
  const Projection p = project_2d(vecs);
  if (p.rank_deficient) std::cerr << "warning: vectors span fewer than two dimensions\n";
  Output out(a.out);
  write_projection_tsv(out.get(), rows, p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrent neural network grammars: training, parsing, LM and analysis"};
  app.require_subcommand(1);

  GenToyArgs toy;
  auto* gen_toy = app.add_subcommand("gen-toy", "Write a synthetic toy treebank");
  gen_toy->add_option("-n,--sentences", toy.n, "Number of trees");
  gen_toy->add_option("--seed", toy.seed, "Generator seed");
  gen_toy->add_option("--max-depth", toy.max_depth, "Clause and NP nesting bound");
  gen_toy->add_option("-o,--out", toy.out, "Output path (default stdout)");
  gen_toy->footer("Words carry POS preterminals, which the default reader collapses.");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  train_cmd->add_option("--config", tr.config, "key=value config file");
  train_cmd->add_option("--train", tr.corpora, "Bracketed training corpus")->required();
  train_cmd->add_option("-o,--out", tr.out, "Checkpoint path")->required();
  train_cmd->add_option("--log", tr.log, "Training log (default <out>.log)");
  train_cmd->add_option("--mode", tr.mode, "gen|disc");
  train_cmd->add_option("--ablation", tr.ablation,
                        "full|no-history|no-buffer|no-stack|stack-only|buffer-only|history-only");
  train_cmd->add_option("--composition", tr.composition, "bilstm|gated-attention");
  train_cmd->add_flag("--unlabeled", tr.unlabeled, "Strip nonterminal labels before training");
  train_cmd->add_option("--seed", tr.seed, "Initialization seed");
  train_cmd->add_option("--epochs", tr.epochs, "Training epochs");
  train_cmd->add_option("--learning-rate", tr.learning_rate, "Initial learning rate");
  train_cmd->add_flag("--paper-dims", tr.paper_dims, "Full-size dimension profile");
  train_cmd->add_flag("--keep-preterminals", tr.keep_preterminals,
                      "Do not collapse (TAG word) layers");

  ParseArgs pa;
  auto* parse_cmd = app.add_subcommand("parse", "MAP parsing by importance sampling");
  parse_cmd->add_option("--disc", pa.disc, "Discriminative (proposal) checkpoint")->required();
  parse_cmd->add_option("--gen", pa.gen, "Generative checkpoint")->required();
  parse_cmd->add_option("--input", pa.input, "Sentences, one per line");
  parse_cmd->add_option("--gold", pa.gold, "Gold trees; parses their yields and scores F1");
  parse_cmd->add_option("-n,--samples", pa.samples, "Proposal samples per sentence");
  parse_cmd->add_option("--seed", pa.seed, "Sampling seed");
  parse_cmd->add_option("-o,--out", pa.out, "Output trees (default stdout)");
  parse_cmd->add_option("--attention", pa.attention, "Attention sidecar path");

  LmArgs lm;
  auto* lm_cmd = app.add_subcommand("lm", "Importance-sampled perplexity");
  lm_cmd->add_option("--disc", lm.disc, "Discriminative (proposal) checkpoint")->required();
  lm_cmd->add_option("--gen", lm.gen, "Generative checkpoint")->required();
  lm_cmd->add_option("--input", lm.input, "Sentences, one per line");
  lm_cmd->add_option("--gold", lm.gold, "Trees whose yields are evaluated");
  lm_cmd->add_option("-n,--samples", lm.samples, "Proposal samples per sentence");
  lm_cmd->add_option("--seed", lm.seed, "Sampling seed");
  lm_cmd->add_option("-o,--out", lm.out, "TSV output (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "Attention and phrase-vector analyses");
  analyze->require_subcommand(1);

  PerpArgs pp;
  auto* perp = analyze->add_subcommand("perp", "Attention perplexity by label");
  perp->add_option("--attention", pp.attention, "Attention sidecar")->required();
  perp->add_option("-o,--out", pp.out, "TSV output (default stdout)");
  perp->add_option("--csv", pp.csv, "Bar-chart CSV output");
  perp->add_option("--top", pp.top, "Also list the k highest-entropy records per label");

  HeadsArgs hd;
  auto* heads = analyze->add_subcommand("heads", "Attention heads vs head rules");
  heads->add_option("--trees", hd.trees, "Parsed trees")->required();
  heads->add_option("--attention", hd.attention, "Attention sidecar of those trees")->required();
  heads->add_option("--rules", hd.rules, "Head-rule table")->required();
  heads->add_option("--deps-out", hd.deps_out, "Attention dependencies output");
  heads->add_option("--rule-deps-out", hd.rule_deps_out, "Head-rule dependencies output");
  heads->add_option("--punct", hd.punct, "Comma-separated punctuation tokens");

  ExportArgs ex;
  auto* exp = analyze->add_subcommand("export", "Composed phrase vectors");
  exp->add_option("--model", ex.model, "Checkpoint")->required();
  exp->add_option("--trees", ex.trees, "Trees to replay (e.g. parser output)")->required();
  exp->add_option("--gold", ex.gold, "Gold trees for labeling unlabeled phrases");
  exp->add_option("--labels", ex.labels, "Comma-separated label filter");
  exp->add_option("-o,--out", ex.out, "TSV output (default stdout)");

  ProjectArgs pj;
  auto* proj = analyze->add_subcommand("project", "2-D principal-component projection");
  proj->add_option("--vectors", pj.vectors, "Phrase vector TSV")->required();
  proj->add_option("-o,--out", pj.out, "TSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*gen_toy) return cmd_gen_toy(toy);
    if (*train_cmd) return cmd_train(tr);
    if (*parse_cmd) return cmd_parse(pa);
    if (*lm_cmd) return cmd_lm(lm);
    if (*perp) return cmd_analyze_perp(pp);
    if (*heads) return cmd_analyze_heads(hd);
    if (*exp) return cmd_analyze_export(ex);
    if (*proj) return cmd_analyze_project(pj);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
