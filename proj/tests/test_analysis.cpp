#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rnng/analysis.hpp"
#include "rnng/error.hpp"
#include "rnng/toy.hpp"
#include "rnng/training.hpp"
#include "support.hpp"

namespace rnng {
namespace {

using testing::T;

AttentionRecord rec(std::string label, std::vector<std::string> kids, std::vector<double> w) {
  AttentionRecord r;
  r.label = std::move(label);
  r.children = std::move(kids);
  r.weights = std::move(w);
  r.perplexity = attention_perplexity(r.weights);
  return r;
}

TEST(PerplexityByLabel, OneHotAndUniform) {
  const std::vector<AttentionRecord> hot{rec("NP", {"a", "b"}, {1, 0}),
                                         rec("VP", {"a", "b", "c"}, {0, 0, 1})};
  for (const auto& row : perplexity_by_label(hot)) EXPECT_NEAR(row.learned, 1.0, 1e-12);
  const std::vector<AttentionRecord> flat{rec("NP", {"a", "b"}, {0.5, 0.5}),
                                          rec("NP", {"a", "b", "c", "d"}, {0.25, 0.25, 0.25, 0.25})};
  const auto rows = perplexity_by_label(flat);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].learned, rows[0].uniform, 1e-12);
  EXPECT_EQ(rows[0].uniform, 3.0);
  EXPECT_EQ(rows[0].count, 2);
}

TEST(PerplexityByLabel, SkipsSingleChildAndSortsLabels) {
  const std::vector<AttentionRecord> rs{rec("VP", {"a", "b"}, {0.5, 0.5}), rec("NP", {"a"}, {1}),
                                        rec("ADJP", {"a", "b"}, {0.9, 0.1}),
                                        rec("VP", {"a", "b"}, {1.0, 0.0})};
  const auto rows = perplexity_by_label(rs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].label, "ADJP");
  EXPECT_EQ(rows[1].label, "VP");
  EXPECT_NEAR(rows[1].learned, 1.5, 1e-12);
  EXPECT_EQ(rows[1].uniform, 2.0);
  const double h = -(0.9 * std::log(0.9) + 0.1 * std::log(0.1));
  EXPECT_NEAR(rows[0].learned, std::exp(h), 1e-12);
}

TEST(PerplexityByLabel, LearnedNeverExceedsUniform) {
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> e;
  std::vector<AttentionRecord> rs;
  for (int i = 0; i < 300; ++i) {
    std::vector<double> w(2 + i % 5);
    double z = 0.0;
    for (double& x : w) z += (x = e(rng));
    for (double& x : w) x /= z;
    rs.push_back(rec(i % 3 ? "NP" : "VP", std::vector<std::string>(w.size(), "w"), w));
  }
  for (const auto& row : perplexity_by_label(rs)) EXPECT_LT(row.learned, row.uniform);
}

TEST(TopEntropy, HandOrdering) {
  const std::vector<AttentionRecord> rs{
      rec("NP", {"a", "b"}, {1.0, 0.0}),              // H = 0
      rec("NP", {"a", "b", "c"}, {0.2, 0.3, 0.5}),    // H ~ 1.0297
      rec("VP", {"a", "b"}, {0.5, 0.5}),
      rec("NP", {"a", "b"}, {0.5, 0.5}),              // H = ln 2 ~ 0.6931
      rec("NP", {"a", "b", "c"}, {1 / 3., 1 / 3., 1 / 3.}),  // H = ln 3
      rec("NP", {"x", "y"}, {0.5, 0.5}),              // ties keep input order
  };
  const auto top = top_entropy_samples(rs, "NP", 10);
  ASSERT_EQ(top.size(), 5u);
  EXPECT_EQ(top[0].weights.size(), 3u);
  EXPECT_NEAR(top[0].weights[0], 1 / 3., 1e-15);
  EXPECT_EQ(top[1].weights[2], 0.5);
  EXPECT_EQ(top[2].children[0], "a");
  EXPECT_EQ(top[3].children[0], "x");
  EXPECT_EQ(top[4].weights[0], 1.0);
  EXPECT_EQ(top_entropy_samples(rs, "NP", 2).size(), 2u);
  EXPECT_TRUE(top_entropy_samples(rs, "PP", 3).empty());
}

TEST(TopEntropy, Format) {
  EXPECT_EQ(format_attention(rec("NP", {"Apple", ",", "Compaq"}, {0.62, 0.02, 0.10})),
            "Apple (0.62) , (0.02) Compaq (0.10)");
}

CapturedParse manual(const char* tree, std::vector<AttentionRecord> preorder) {
  return {T(tree), std::move(preorder), {}};
}

TEST(HeadOverlap, HandComputedTwoSentences) {
  const std::vector<CapturedParse> parses{
      manual("(S (NP the dog) (VP ran))",
             {rec("S", {"NP", "VP"}, {0.7, 0.3}), rec("NP", {"the", "dog"}, {0.9, 0.1}),
              rec("VP", {"ran"}, {1.0})}),
      manual("(S (NP alice) (VP saw (NP bob)))",
             {rec("S", {"NP", "VP"}, {0.2, 0.8}), rec("NP", {"alice"}, {1.0}),
              rec("VP", {"saw", "NP"}, {0.6, 0.4}), rec("NP", {"bob"}, {1.0})}),
  };
  const HeadRuleTable rules = HeadRuleTable::parse("S left VP\nNP right <t>\nVP left <t>");
  // Sentence 1: attention heads the/dog/ran -> 0,1,1; rules -> 2,3,0.
  // Sentence 2: both give alice->saw, saw root, bob->saw.
  const AttachmentCount c = head_overlap(parses, rules);
  EXPECT_EQ(c.correct, 3);
  EXPECT_EQ(c.total, 6);

  const HeadRuleTable agree = HeadRuleTable::parse("S left NP\nNP left <t>\nVP left <t>");
  EXPECT_EQ(head_overlap(std::span(parses).first(1), agree).score(), 1.0);
}

std::unique_ptr<RnngModel> trained(Mode mode, Composition comp, bool unlabeled,
                                   const std::vector<Tree>& corpus) {
  ModelConfig c = testing::tiny_config(mode, comp);
  c.unlabeled = unlabeled;
  auto m = make_model(c, corpus);
  nn::TrainerConfig tc;
  tc.epochs = 1;
  train(*m, corpus, tc);
  return m;
}

std::size_t count_nts(const Tree& t) {
  return constituents(t).size();
}

TEST(Capture, PhraseVectorsReplayTheStack) {
  const auto corpus = toy_treebank(15, 5);
  for (Mode mode : {Mode::kGenerative, Mode::kDiscriminative}) {
    for (Composition comp : {Composition::kBiLstm, Composition::kGatedAttention}) {
      auto m = trained(mode, comp, false, corpus);
      for (const Tree& t : corpus) {
        const CapturedParse cp = capture(*m, t);
        ASSERT_EQ(cp.phrases.size(), count_nts(t));
        if (comp == Composition::kGatedAttention) {
          const auto pre = constituents(t);
          ASSERT_EQ(cp.attention.size(), pre.size());
          for (std::size_t i = 0; i < pre.size(); ++i) EXPECT_EQ(cp.attention[i].label, pre[i].label);
        } else {
          EXPECT_TRUE(cp.attention.empty());
        }

        // Step the parser by hand; recompose every constituent standalone
        // from the children and summary on the stack at its REDUCE.
        nn::Graph g;
        Parser p(*m, g);
        const Oracle o = m->oracle(t);
        ParserState s = p.initial(o);
        std::size_t k = 0;
        for (const ModelAction& a : o.actions) {
          if (a.kind == ActionKind::kReduce) {
            const int open = s.open_positions.back();
            CompositionInputs in{s.stack[static_cast<std::size_t>(open)].nt, {}, p.summary(s)};
            for (std::size_t j = static_cast<std::size_t>(open) + 1; j < s.stack.size(); ++j)
              in.children.push_back(s.stack[j].vec);
            const nn::Tensor standalone = comp == Composition::kBiLstm
                                              ? m->weights().bilstm.compose(g, in).value()
                                              : m->weights().gated.compose(g, in).composed.value();
            p.apply(s, a);
            EXPECT_EQ(s.stack.back().vec.value().vec(), cp.phrases[k].vec);
            EXPECT_EQ(standalone.vec(), cp.phrases[k].vec);
            ++k;
          } else {
            p.apply(s, a);
          }
        }
        EXPECT_EQ(k, cp.phrases.size());
      }
    }
  }
}

TEST(Capture, Deterministic) {
  const auto corpus = toy_treebank(5, 6);
  auto m = trained(Mode::kGenerative, Composition::kGatedAttention, false, corpus);
  for (const Tree& t : corpus) {
    const CapturedParse a = capture(*m, t), b = capture(*m, t);
    ASSERT_EQ(a.phrases.size(), b.phrases.size());
    for (std::size_t i = 0; i < a.phrases.size(); ++i) EXPECT_EQ(a.phrases[i].vec, b.phrases[i].vec);
    for (std::size_t i = 0; i < a.attention.size(); ++i)
      EXPECT_EQ(a.attention[i].weights, b.attention[i].weights);
  }
}

TEST(ExportPhrases, RowsLabelsAndPreviews) {
  const auto corpus = toy_treebank(10, 7);
  auto m = trained(Mode::kGenerative, Composition::kGatedAttention, false, corpus);
  std::vector<CapturedParse> parses;
  std::size_t nts = 0, nps = 0;
  for (const Tree& t : corpus) {
    parses.push_back(capture(*m, t));
    for (const auto& c : constituents(t)) {
      ++nts;
      nps += c.label == "NP";
    }
  }
  EXPECT_EQ(export_phrase_vectors(parses, {}).size(), nts);
  const auto np = export_phrase_vectors(parses, {}, {"NP"});
  EXPECT_EQ(np.size(), nps);
  for (const auto& r : np) {
    EXPECT_EQ(r.label, "NP");
    EXPECT_EQ(r.vec.size(), 3u);
  }

  const std::vector<CapturedParse> one{capture(*m, T("(S (NP the dog) (VP slept))"))};
  const auto rows = export_phrase_vectors(one, {});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].preview, "the ... dog (2)");
  EXPECT_EQ(rows[1].preview, "slept (1)");
  EXPECT_EQ(rows[2].label, "S");
  EXPECT_EQ(rows[2].preview, "the ... slept (3)");
}

TEST(ExportPhrases, UnlabeledModelTakesGoldSpanLabels) {
  const auto corpus = toy_treebank(10, 8);
  auto m = trained(Mode::kGenerative, Composition::kGatedAttention, true, corpus);
  const std::vector<CapturedParse> parses{capture(*m, T("(S (NP the dog) slept)"))};
  EXPECT_EQ(parses[0].tree.to_string(), "(X (X the dog) slept)");
  const std::vector<Tree> gold{T("(S (VP (NP the) dog slept))")};
  const auto rows = export_phrase_vectors(parses, gold);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].label, kNoLabel);
  EXPECT_EQ(rows[1].label, "S");  // outermost of S and VP over the same span
  EXPECT_EQ(export_phrase_vectors(parses, gold, {"S"}).size(), 1u);
  const std::vector<Tree> wrong{T("(S a b c)")};
  EXPECT_THROW(export_phrase_vectors(parses, wrong), DataError);
}

// Cyclic Jacobi eigenvalues of a symmetric matrix, descending.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev;
  for (std::size_t i = 0; i < n; ++i) ev.push_back(a[i][i]);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

TEST(Project2d, VarianceMatchesJacobiOracle) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 12, d = 5;
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    for (auto& row : x)
      for (std::size_t j = 0; j < d; ++j) row[j] = nd(rng) * (1.0 + j);
    std::vector<double> mean(d, 0.0);
    for (const auto& row : x)
      for (std::size_t j = 0; j < d; ++j) mean[j] += row[j] / n;
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    double trace = 0.0;
    for (const auto& row : x)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]) / n;
    for (std::size_t i = 0; i < d; ++i) trace += cov[i][i];
    const auto ev = jacobi_eigenvalues(cov);

    const Projection p = project_2d(x);
    EXPECT_NEAR(p.variance[0], ev[0], 1e-10);
    EXPECT_NEAR(p.variance[1], ev[1], 1e-10);
    EXPECT_NEAR(p.total_variance, trace, 1e-10);
    EXPECT_FALSE(p.rank_deficient);
    for (int k = 0; k < 2; ++k) {
      double m = 0.0, v = 0.0;
      for (const auto& c : p.coords) m += c[k] / n;
      for (const auto& c : p.coords) v += (c[k] - m) * (c[k] - m) / n;
      EXPECT_NEAR(m, 0.0, 1e-12);
      EXPECT_NEAR(v, ev[static_cast<std::size_t>(k)], 1e-10);
    }
  }
}

TEST(Project2d, PlanarPointsKeepTheirGeometry) {
  // Points on a 2-D affine plane in R^4: the projection is an isometry, so
  // pairwise distances survive and no variance is lost.
  const std::vector<double> o{1, 2, 3, 4}, u{1, 1, 0, 0}, v{0, 1, -1, 2};
  std::vector<std::vector<double>> x;
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {1, 2}, {-1, 3}, {2, -1}, {0.5, 0.5}}) {
    std::vector<double> p(4);
    for (int j = 0; j < 4; ++j) p[j] = o[j] + a * u[j] + b * v[j];
    x.push_back(p);
  }
  const Projection p = project_2d(x);
  EXPECT_NEAR(p.variance[0] + p.variance[1], p.total_variance, 1e-10);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      double d = 0.0;
      for (int k = 0; k < 4; ++k) d += std::pow(x[i][k] - x[j][k], 2);
      const double e = std::pow(p.coords[i][0] - p.coords[j][0], 2) +
                       std::pow(p.coords[i][1] - p.coords[j][1], 2);
      EXPECT_NEAR(e, d, 1e-9);
    }
}

TEST(Project2d, DuplicatesRankAndErrors) {
  const std::vector<std::vector<double>> dup{{1, 2, 0}, {3, -1, 2}, {1, 2, 0}, {0, 0, 5}};
  const Projection p = project_2d(dup);
  EXPECT_EQ(p.coords[0], p.coords[2]);

  const std::vector<std::vector<double>> line{{0, 0}, {1, 2}, {2, 4}, {-1, -2}};
  const Projection q = project_2d(line);
  EXPECT_TRUE(q.rank_deficient);
  for (const auto& c : q.coords) EXPECT_EQ(c[1], 0.0);
  EXPECT_GT(q.coords[1][0], q.coords[0][0]);  // first loading positive

  EXPECT_THROW(project_2d(std::vector<std::vector<double>>{{1, 2}}), std::invalid_argument);
  EXPECT_THROW(project_2d(std::vector<std::vector<double>>{{1, 2}, {1}}), std::invalid_argument);
}

TEST(Writers, HeadersAndRows) {
  const std::vector<PerplexityRow> rows{{"NP", 1.5, 2.25, 4}};
  std::ostringstream tsv, csv;
  write_perplexity_tsv(tsv, rows);
  write_perplexity_csv(csv, rows);
  EXPECT_EQ(tsv.str(), "label\tlearned\tuniform\tcount\nNP\t1.500000\t2.250000\t4\n");
  EXPECT_EQ(csv.str(), "label,learned,uniform\nNP,1.500000,2.250000\n");

  const std::vector<PhraseRow> ph{{"NP", "the ... dog (2)", 0, 2, {0.1, -2.0}}};
  std::ostringstream pt;
  write_phrase_tsv(pt, ph);
  EXPECT_EQ(pt.str(), "label\tpreview\tbegin\tend\tvector\nNP\tthe ... dog (2)\t0\t2\t0.10000000000000001 -2\n");

  Projection pr;
  pr.coords = {{1.0, -0.5}};
  std::ostringstream pj;
  write_projection_tsv(pj, ph, pr);
  EXPECT_EQ(pj.str(), "label\tpreview\tx\ty\nNP\tthe ... dog (2)\t1.000000\t-0.500000\n");
  pr.coords.push_back({0, 0});
  EXPECT_THROW(write_projection_tsv(pj, ph, pr), std::invalid_argument);
}

}  // namespace
}  // namespace rnng
