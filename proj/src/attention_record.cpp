#include "rnng/attention_record.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "rnng/error.hpp"

namespace rnng {

double attention_entropy(const std::vector<double>& weights) {
  double h = 0.0;
  for (double a : weights)
    if (a > 0.0) h -= a * std::log(std::max(a, 1e-12));
  return std::max(h, 0.0);
}

double attention_perplexity(const std::vector<double>& weights) {
  return std::exp(attention_entropy(weights));
}

std::string AttentionRecord::to_line() const {
  std::string out = label;
  char buf[32];
  for (std::size_t i = 0; i < children.size(); ++i) {
    std::snprintf(buf, sizeof buf, ":%.4f", weights[i]);
    out += '\t';
    out += children[i];
    out += buf;
  }
  return out;
}

AttentionRecord AttentionRecord::from_line(std::string_view line) {
  AttentionRecord r;
  std::size_t pos = line.find('\t');
  r.label = std::string(line.substr(0, pos));
  while (pos != std::string_view::npos) {
    const std::size_t next = line.find('\t', pos + 1);
    const std::string_view item = line.substr(pos + 1, next == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : next - pos - 1);
    const std::size_t colon = item.rfind(':');
    if (colon == std::string_view::npos)
      throw DataError("attention record item without weight: '" + std::string(item) + "'");
    r.children.emplace_back(item.substr(0, colon));
    const std::string num(item.substr(colon + 1));
    char* endp = nullptr;
    const double w = std::strtod(num.c_str(), &endp);
    if (endp == num.c_str() || *endp != '\0')
      throw DataError("bad attention weight '" + num + "'");
    r.weights.push_back(w);
    pos = next;
  }
  if (r.children.empty()) throw DataError("attention record with no children");
  r.perplexity = attention_perplexity(r.weights);
  return r;
}

}  // namespace rnng
