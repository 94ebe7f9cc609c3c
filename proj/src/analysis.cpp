#include "rnng/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "rnng/error.hpp"

namespace rnng {

CapturedParse capture(const RnngModel& model, const Tree& tree) {
  nn::Graph g;
  const Oracle o = model.oracle(tree);
  ScoredSequence s = sequence_logprob(model, g, o, true);
  CapturedParse out{model.config().unlabeled ? strip_labels(tree) : tree, {}, {}};
  if (model.config().composition == Composition::kGatedAttention)
    out.attention = records_to_preorder(out.tree, s.attention);
  out.phrases = std::move(s.phrases);
  return out;
}

std::vector<PerplexityRow> perplexity_by_label(std::span<const AttentionRecord> records) {
  std::map<std::string, PerplexityRow> rows;
  for (const auto& r : records) {
    if (r.weights.size() < 2) continue;
    PerplexityRow& row = rows[r.label];
    row.label = r.label;
    row.learned += attention_perplexity(r.weights);
    row.uniform += static_cast<double>(r.weights.size());
    ++row.count;
  }
  std::vector<PerplexityRow> out;
  for (auto& [label, row] : rows) {
    row.learned /= static_cast<double>(row.count);
    row.uniform /= static_cast<double>(row.count);
    out.push_back(row);
  }
  return out;
}

std::vector<AttentionRecord> top_entropy_samples(std::span<const AttentionRecord> records,
                                                 const std::string& label, std::size_t k) {
  std::vector<std::pair<double, const AttentionRecord*>> pool;
  for (const auto& r : records)
    if (r.label == label) pool.emplace_back(attention_entropy(r.weights), &r);
  std::stable_sort(pool.begin(), pool.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<AttentionRecord> out;
  for (std::size_t i = 0; i < pool.size() && i < k; ++i) out.push_back(*pool[i].second);
  return out;
}

std::string format_attention(const AttentionRecord& r) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < r.children.size(); ++i) {
    std::snprintf(buf, sizeof buf, " (%.2f)", r.weights[i]);
    if (i) out += ' ';
    out += r.children[i] + buf;
  }
  return out;
}

AttachmentCount head_overlap(std::span<const CapturedParse> parses, const HeadRuleTable& rules,
                             const std::set<std::string>& punct) {
  AttachmentCount total;
  for (const auto& p : parses) {
    const AttachmentCount c =
        attachment_count(attention_heads(p.tree, p.attention), head_rule_heads(p.tree, rules),
                         punct);
    total.correct += c.correct;
    total.total += c.total;
  }
  return total;
}

namespace {

std::string preview(const std::vector<std::string>& words, int begin, int end) {
  const int n = end - begin;
  if (n == 1) return words[static_cast<std::size_t>(begin)] + " (1)";
  return words[static_cast<std::size_t>(begin)] + " ... " +
         words[static_cast<std::size_t>(end - 1)] + " (" + std::to_string(n) + ")";
}

}  // namespace

std::vector<PhraseRow> export_phrase_vectors(std::span<const CapturedParse> parses,
                                             std::span<const Tree> gold,
                                             const std::set<std::string>& filter) {
  if (!gold.empty() && gold.size() != parses.size())
    throw DataError("gold corpus has " + std::to_string(gold.size()) + " trees, parses " +
                    std::to_string(parses.size()));
  std::vector<PhraseRow> rows;
  for (std::size_t i = 0; i < parses.size(); ++i) {
    const auto words = parses[i].tree.yield();
    std::map<std::pair<int, int>, std::string> gold_labels;
    if (!gold.empty()) {
      if (gold[i].yield() != words)
        throw DataError("gold tree " + std::to_string(i) + " has a different yield");
      for (const auto& c : constituents(gold[i]))  // pre-order: outermost first
        gold_labels.emplace(std::make_pair(c.begin, c.end), c.label);
    }
    for (const auto& ph : parses[i].phrases) {
      std::string label = ph.label;
      if (!gold.empty()) {
        auto it = gold_labels.find({ph.begin, ph.end});
        label = it == gold_labels.end() ? std::string(kNoLabel) : it->second;
      }
      if (!filter.empty() && !filter.count(label)) continue;
      rows.push_back({label, preview(words, ph.begin, ph.end), ph.begin, ph.end, ph.vec});
    }
  }
  return rows;
}

Projection project_2d(std::span<const std::vector<double>> vectors) {
  if (vectors.size() < 2) throw std::invalid_argument("project_2d needs at least two vectors");
  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
  const Eigen::Index d = static_cast<Eigen::Index>(vectors.front().size());
  if (d == 0) throw std::invalid_argument("project_2d of empty vectors");
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = vectors[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(v.size()) != d)
      throw std::invalid_argument("project_2d: vectors differ in size");
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = v[static_cast<std::size_t>(j)];
  }
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd values = eig.eigenvalues();  // ascending
  Eigen::MatrixXd dirs = eig.eigenvectors();

  Projection p;
  p.total_variance = std::max(0.0, values.sum());
  const double tol = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
  for (int k = 0; k < 2; ++k) {
    const Eigen::Index col = d - 1 - k;
    if (col < 0 || values(col) <= tol) {
      p.rank_deficient = true;
      continue;
    }
    p.variance[static_cast<std::size_t>(k)] = values(col);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::abs(dirs(j, col)) > 1e-12) {
        if (dirs(j, col) < 0) dirs.col(col) *= -1.0;
        break;
      }
    }
  }
  p.coords.assign(vectors.size(), {0.0, 0.0});
  for (int k = 0; k < 2; ++k) {
    if (p.variance[static_cast<std::size_t>(k)] == 0.0) continue;
    const Eigen::VectorXd proj = x * dirs.col(d - 1 - k);
    for (Eigen::Index i = 0; i < n; ++i)
      p.coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = proj(i);
  }
  return p;
}

namespace {

std::string fmt(double x, const char* f = "%.6f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

void write_perplexity_tsv(std::ostream& out, std::span<const PerplexityRow> rows) {
  out << "label\tlearned\tuniform\tcount\n";
  for (const auto& r : rows)
    out << r.label << '\t' << fmt(r.learned) << '\t' << fmt(r.uniform) << '\t' << r.count
        << '\n';
}

void write_perplexity_csv(std::ostream& out, std::span<const PerplexityRow> rows) {
  out << "label,learned,uniform\n";
  for (const auto& r : rows) out << r.label << ',' << fmt(r.learned) << ',' << fmt(r.uniform) << '\n';
}

void write_phrase_tsv(std::ostream& out, std::span<const PhraseRow> rows) {
  out << "label\tpreview\tbegin\tend\tvector\n";
  for (const auto& r : rows) {
    out << r.label << '\t' << r.preview << '\t' << r.begin << '\t' << r.end << '\t';
    for (std::size_t j = 0; j < r.vec.size(); ++j) out << (j ? " " : "") << fmt(r.vec[j], "%.17g");
    out << '\n';
  }
}

void write_projection_tsv(std::ostream& out, std::span<const PhraseRow> rows,
                          const Projection& p) {
  if (rows.size() != p.coords.size())
    throw std::invalid_argument("projection and phrase rows differ in length");
  out << "label\tpreview\tx\ty\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << rows[i].label << '\t' << rows[i].preview << '\t' << fmt(p.coords[i][0]) << '\t'
        << fmt(p.coords[i][1]) << '\n';
}

}  // namespace rnng
