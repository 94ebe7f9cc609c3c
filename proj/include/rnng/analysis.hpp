#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rnng/attention_record.hpp"
#include "rnng/dependency.hpp"
#include "rnng/model.hpp"
#include "rnng/parser.hpp"
#include "rnng/tree.hpp"

namespace rnng {

// A tree replayed through a model with composition capture. `tree` is the
// version the model sees (label-stripped for unlabeled models); attention is
// in pre-order and empty unless the model uses gated attention; phrases are
// in REDUCE order.
struct CapturedParse {
  Tree tree;
  std::vector<AttentionRecord> attention;
  std::vector<PhraseRecord> phrases;
};

CapturedParse capture(const RnngModel& model, const Tree& tree);

struct PerplexityRow {
  std::string label;
  double learned = 0.0;  // mean attention perplexity
  double uniform = 0.0;  // mean child count k
  long count = 0;
};

// Per-label means over records with at least two children, sorted by label.
std::vector<PerplexityRow> perplexity_by_label(std::span<const AttentionRecord> records);

// The k records of `label` with the highest attention entropy, highest first;
// equal entropies keep input order.
std::vector<AttentionRecord> top_entropy_samples(std::span<const AttentionRecord> records,
                                                 const std::string& label, std::size_t k);

// "Apple (0.62) , (0.02) Compaq (0.10)"
std::string format_attention(const AttentionRecord& r);

// UAS of attention-derived heads against head-rule heads, summed over the
// corpus. Each parse must carry pre-order attention records.
AttachmentCount head_overlap(std::span<const CapturedParse> parses, const HeadRuleTable& rules,
                             const std::set<std::string>& punct = ptb_punctuation());

inline constexpr std::string_view kNoLabel = "∅";

struct PhraseRow {
  std::string label;    // gold label for coloring, kNoLabel when unaligned
  std::string preview;  // "first ... last (n)"
  int begin = 0;
  int end = 0;
  std::vector<double> vec;
};

// One row per captured phrase whose label passes `filter` (empty = all).
// Labeled phrases keep their own label. When `gold` is given (unlabeled
// models), each phrase takes the label of the outermost gold constituent with
// the same span, or kNoLabel.
std::vector<PhraseRow> export_phrase_vectors(std::span<const CapturedParse> parses,
                                             std::span<const Tree> gold,
                                             const std::set<std::string>& filter = {});

struct Projection {
  std::vector<std::array<double, 2>> coords;
  std::array<double, 2> variance{};  // variance along each principal direction
  double total_variance = 0.0;
  bool rank_deficient = false;       // second coordinate zeroed
};

// Mean-centered projection on the top two principal directions. Each
// direction's first nonzero loading is positive. Throws std::invalid_argument
// for fewer than two vectors or ragged input.
Projection project_2d(std::span<const std::vector<double>> vectors);

void write_perplexity_tsv(std::ostream& out, std::span<const PerplexityRow> rows);
// Bar-chart series: label,learned,uniform
void write_perplexity_csv(std::ostream& out, std::span<const PerplexityRow> rows);
void write_phrase_tsv(std::ostream& out, std::span<const PhraseRow> rows);
void write_projection_tsv(std::ostream& out, std::span<const PhraseRow> rows,
                          const Projection& p);

}  // namespace rnng
