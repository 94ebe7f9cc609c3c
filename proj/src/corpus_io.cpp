#include "rnng/corpus_io.hpp"

#include <fstream>
#include <sstream>

#include "rnng/error.hpp"

namespace rnng {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Tree> read_trees(const std::filesystem::path& path, const ReaderOptions& options) {
  try {
    return parse_bracketed(read_file(path), options);
  } catch (const ParseError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<std::vector<std::string>> read_sentences(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> words;
    for (std::string w; ls >> w;) words.push_back(w);
    if (!words.empty()) out.push_back(std::move(words));
  }
  return out;
}

void write_attention(std::ostream& out, std::span<const AttentionRecord> sentence) {
  for (const auto& r : sentence) out << r.to_line() << '\n';
  out << '\n';
}

std::vector<std::vector<AttentionRecord>> read_attention(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<AttentionRecord>> out;
  std::vector<AttentionRecord> current;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      out.push_back(std::move(current));
      current.clear();
      continue;
    }
    try {
      current.push_back(AttentionRecord::from_line(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace rnng
