#include "rnng/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rnng/error.hpp"

namespace rnng {

namespace {

constexpr std::string_view kMagic = "rnng-checkpoint";

void write_list(std::ostream& out, std::string_view section,
                const std::vector<std::string>& items) {
  out << '[' << section << "] " << items.size() << '\n';
  for (const auto& s : items) out << s << '\n';
}

class Reader {
 public:
  Reader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of file");
    ++lineno_;
    return s;
  }

  // Reads "[name] count".
  std::size_t section(std::string_view name) {
    std::istringstream ls(line());
    std::string tag;
    std::size_t n = 0;
    if (!(ls >> tag >> n) || tag != "[" + std::string(name) + "]")
      fail("expected section [" + std::string(name) + "]");
    return n;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_ + ":" + std::to_string(lineno_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::string source_;
  int lineno_ = 0;
};

}  // namespace

void save_checkpoint(std::ostream& out, const RnngModel& model,
                     const nn::TrainerConfig& trainer) {
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  out << "# init: glorot-uniform, lstm forget-gate bias 1.0\n";
  const KeyValues kv = to_key_values(RunConfig{model.config(), trainer});
  out << "[config] " << kv.size() << '\n' << format_key_values(kv);
  write_list(out, "words", model.vocab().words());
  write_list(out, "nonterminals", model.vocab().nonterminals());
  const auto& params = model.params().all();
  out << "[tensors] " << params.size() << '\n';
  char buf[32];
  for (const auto& p : params) {
    out << p->name << ' ' << p->value.rows() << ' ' << p->value.cols() << '\n';
    for (int i = 0; i < p->value.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p->value[i]);
      out << (i ? " " : "") << buf;
    }
    out << '\n';
  }
}

void save_checkpoint(const std::filesystem::path& path, const RnngModel& model,
                     const nn::TrainerConfig& trainer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  save_checkpoint(out, model, trainer);
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

LoadedModel load_checkpoint(std::istream& in, std::string_view source) {
  Reader r(in, source);
  {
    std::istringstream ls(r.line());
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != kMagic) r.fail("not an rnng checkpoint");
    if (version != kCheckpointVersion)
      r.fail("unsupported checkpoint version " + std::to_string(version));
  }
  std::string header = r.line();
  while (!header.empty() && header[0] == '#') header = r.line();

  std::istringstream hs(header);
  std::string tag;
  std::size_t n = 0;
  if (!(hs >> tag >> n) || tag != "[config]") r.fail("expected section [config]");
  std::string text;
  for (std::size_t i = 0; i < n; ++i) text += r.line() + '\n';
  std::istringstream cs(text);
  RunConfig config;
  try {
    apply_config(config, parse_key_values(cs, source));
  } catch (const ConfigError& e) {
    throw DataError(std::string(source) + ": embedded config: " + e.what());
  }

  std::vector<std::string> words(r.section("words"));
  for (auto& w : words) w = r.line();
  std::vector<std::string> nts(r.section("nonterminals"));
  for (auto& s : nts) s = r.line();
  if (words.empty() || words.front() != Vocabulary::kUnk) r.fail("word list must start with UNK");

  LoadedModel out;
  out.trainer = config.trainer;
  out.model = std::make_unique<RnngModel>(config.model, Vocabulary::from_lists(words, nts));

  auto& params = out.model->params();
  const std::size_t count = r.section("tensors");
  if (count != params.all().size())
    r.fail("checkpoint has " + std::to_string(count) + " tensors, config implies " +
           std::to_string(params.all().size()));
  std::set<std::string> loaded;
  for (std::size_t t = 0; t < count; ++t) {
    std::istringstream ls(r.line());
    std::string name;
    int rows = 0, cols = 0;
    if (!(ls >> name >> rows >> cols)) r.fail("bad tensor header");
    nn::Parameter* p = params.find(name);
    if (!p) r.fail("unexpected tensor " + name);
    if (!loaded.insert(name).second) r.fail("duplicate tensor " + name);
    if (p->value.rows() != rows || p->value.cols() != cols)
      r.fail("tensor " + name + " has shape " + std::to_string(rows) + "x" +
             std::to_string(cols) + ", expected " + std::to_string(p->value.rows()) + "x" +
             std::to_string(p->value.cols()));
    std::istringstream vs(r.line());
    for (int i = 0; i < p->value.size(); ++i) {
      std::string tok;
      if (!(vs >> tok)) r.fail("tensor " + name + " is short");
      try {
        std::size_t used = 0;
        p->value[i] = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        r.fail("bad number '" + tok + "' in tensor " + name);
      }
    }
    std::string extra;
    if (vs >> extra) r.fail("tensor " + name + " has extra values");
  }
  return out;
}

LoadedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  return load_checkpoint(in, path.string());
}

}  // namespace rnng
