#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rnng/attention_record.hpp"
#include "rnng/tree.hpp"

namespace rnng {

std::string read_file(const std::filesystem::path& path);  // DataError if unreadable

std::vector<Tree> read_trees(const std::filesystem::path& path,
                             const ReaderOptions& options = {});

// One sentence per line, whitespace-separated tokens; blank lines skipped.
std::vector<std::vector<std::string>> read_sentences(const std::filesystem::path& path);

// Attention sidecar: one AttentionRecord::to_line per REDUCE, a blank line
// after each sentence.
void write_attention(std::ostream& out, std::span<const AttentionRecord> sentence);
std::vector<std::vector<AttentionRecord>> read_attention(const std::filesystem::path& path);

}  // namespace rnng
