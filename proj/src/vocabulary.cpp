#include "rnng/vocabulary.hpp"

#include <map>
#include <set>

#include "rnng/error.hpp"

namespace rnng {

Vocabulary::Vocabulary() { add_word(std::string(kUnk)); }

Vocabulary Vocabulary::build(std::span<const Tree> corpus, int unk_threshold) {
  std::map<std::string, int> counts;
  std::set<std::string> labels;
  for (const Tree& t : corpus) {
    for (auto& w : t.yield()) ++counts[w];
    for (auto& c : constituents(t)) labels.insert(c.label);
  }
  Vocabulary v;
  for (auto& [w, n] : counts)
    if (n > unk_threshold) v.add_word(w);
  for (auto& l : labels) v.add_nt(l);
  return v;
}

Vocabulary Vocabulary::from_lists(std::span<const std::string> words,
                                  std::span<const std::string> nonterminals) {
  Vocabulary v;
  for (auto& w : words) v.add_word(w);
  for (auto& l : nonterminals) v.add_nt(l);
  return v;
}

void Vocabulary::add_word(const std::string& w) {
  if (word_index_.count(w)) return;
  word_index_.emplace(w, num_words());
  words_.push_back(w);
}

void Vocabulary::add_nt(const std::string& label) {
  if (nt_index_.count(label)) return;
  nt_index_.emplace(label, num_nonterminals());
  nts_.push_back(label);
}

int Vocabulary::word_id(std::string_view w) const {
  auto it = word_index_.find(std::string(w));
  return it == word_index_.end() ? 0 : it->second;
}

bool Vocabulary::has_word(std::string_view w) const {
  return word_index_.count(std::string(w)) > 0;
}

int Vocabulary::nt_id(std::string_view label) const {
  auto it = nt_index_.find(std::string(label));
  if (it == nt_index_.end())
    throw DataError("unknown nonterminal '" + std::string(label) + "'");
  return it->second;
}

bool Vocabulary::has_nt(std::string_view label) const {
  return nt_index_.count(std::string(label)) > 0;
}

}  // namespace rnng
