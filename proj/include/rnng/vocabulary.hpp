#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rnng/tree.hpp"

namespace rnng {

// Dense word and nonterminal id maps. Word id 0 is always the UNK symbol.
class Vocabulary {
 public:
  static constexpr std::string_view kUnk = "<unk>";

  Vocabulary();
  // Words seen at most `unk_threshold` times map to UNK.
  static Vocabulary build(std::span<const Tree> corpus, int unk_threshold);
  static Vocabulary from_lists(std::span<const std::string> words,
                               std::span<const std::string> nonterminals);

  int num_words() const { return static_cast<int>(words_.size()); }
  int num_nonterminals() const { return static_cast<int>(nts_.size()); }

  // UNK for unseen words.
  int word_id(std::string_view w) const;
  bool has_word(std::string_view w) const;
  // Throws DataError for an unknown label.
  int nt_id(std::string_view label) const;
  bool has_nt(std::string_view label) const;

  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  const std::string& nt(int id) const { return nts_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::string>& nonterminals() const { return nts_; }

  void add_word(const std::string& w);
  void add_nt(const std::string& label);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words_ == b.words_ && a.nts_ == b.nts_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::string> nts_;
  std::unordered_map<std::string, int> word_index_;
  std::unordered_map<std::string, int> nt_index_;
};

}  // namespace rnng
