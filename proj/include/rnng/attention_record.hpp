#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rnng {

// Shannon entropy in nats, with 0 ln 0 = 0. Weights are floored at 1e-12
// inside the logarithm only.
double attention_entropy(const std::vector<double>& weights);

// exp(entropy): the effective number of attended children, in [1, k].
double attention_perplexity(const std::vector<double>& weights);

// Attention captured at one REDUCE of the gated-attention composition.
struct AttentionRecord {
  std::string label;
  // Per child: the word for a terminal child, the child's label otherwise.
  std::vector<std::string> children;
  std::vector<double> weights;
  double perplexity = 1.0;
  // Token span of the constituent; not serialized.
  int begin = 0;
  int end = 0;

  // "label<TAB>desc:0.6200<TAB>desc:0.0200..." (4 decimals).
  std::string to_line() const;
  // Inverse of to_line; perplexity is recomputed from the parsed weights.
  static AttentionRecord from_line(std::string_view line);
};

}  // namespace rnng
