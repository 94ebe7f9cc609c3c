#include "rnng/evalb.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "rnng/error.hpp"

namespace rnng {

namespace {

using Key = std::tuple<std::string, int, int>;

std::map<Key, long> bracket_counts(const Tree& t, bool labeled) {
  std::map<Key, long> counts;
  for (auto& c : constituents(t))
    ++counts[{labeled ? c.label : std::string(), c.begin, c.end}];
  return counts;
}

}  // namespace

BracketScore bracket_score(std::span<const Tree> gold,
                           std::span<const Tree> predicted, bool labeled) {
  if (gold.size() != predicted.size())
    throw DataError("bracket_score: " + std::to_string(gold.size()) +
                    " gold trees vs " + std::to_string(predicted.size()) +
                    " predicted");
  BracketScore s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].yield() != predicted[i].yield())
      throw DataError("bracket_score: yield mismatch in sentence " +
                      std::to_string(i));
    const auto g = bracket_counts(gold[i], labeled);
    const auto p = bracket_counts(predicted[i], labeled);
    for (auto& [k, n] : g) {
      s.gold_brackets += n;
      if (auto it = p.find(k); it != p.end()) s.matched += std::min(n, it->second);
    }
    for (auto& [k, n] : p) s.predicted_brackets += n;
  }
  if (s.predicted_brackets > 0)
    s.precision = 100.0 * static_cast<double>(s.matched) / static_cast<double>(s.predicted_brackets);
  if (s.gold_brackets > 0)
    s.recall = 100.0 * static_cast<double>(s.matched) / static_cast<double>(s.gold_brackets);
  if (s.precision + s.recall > 0.0)
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

}  // namespace rnng
