#include "comick/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "comick/config.hpp"
#include "comick/errors.hpp"

namespace comick {

const std::string* CheckpointExtras::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

void write_tensor(std::ostream& out, const Parameter& p) {
  out << "tensor " << p.name << ' ' << p.value.rank();
  for (std::size_t d : p.value.shape()) out << ' ' << d;
  out << '\n';
  const auto data = p.value.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i) out << ' ';
    out << format_exact(data[i]);
  }
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next non-empty line; throws at end of input.
  std::string line(const char* what) {
    std::string l;
    while (std::getline(in_, l)) {
      ++line_no_;
      if (!l.empty() && l.back() == '\r') l.pop_back();
      if (!l.empty()) return l;
    }
    throw FormatError(std::string("checkpoint: unexpected end of file while reading ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError("checkpoint line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::size_t parse_count(Reader& r, const std::string& text) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0') r.fail("bad count '" + text + "'");
  return static_cast<std::size_t>(v);
}

// Splits "head rest of line" at the first space.
std::pair<std::string, std::string> head_rest(const std::string& l) {
  const auto sp = l.find(' ');
  if (sp == std::string::npos) return {l, {}};
  return {l.substr(0, sp), l.substr(sp + 1)};
}

}  // namespace

void save_checkpoint(std::ostream& out, const Model& model, const CheckpointExtras& extras) {
  out << kCheckpointMagic << '\n';
  for (const auto& [k, v] : train_config_entries(model.config)) {
    out << "config " << k << ' ' << v << '\n';
  }
  out << "meta embedding_dim " << model.embedding_dim << '\n';
  for (const auto& [k, v] : extras.entries) out << "meta " << k << ' ' << v << '\n';
  out << "chars " << model.chars.size() << '\n';
  for (char32_t c : model.chars.chars()) out << static_cast<std::uint32_t>(c) << '\n';
  const std::size_t n_words = model.words.size() - Vocabulary::kNumSpecials;
  out << "words " << n_words << '\n';
  for (std::size_t id = Vocabulary::kNumSpecials; id < model.words.size(); ++id) {
    const std::string& w = model.words.word(static_cast<int>(id));
    out << w << ' ' << model.words.count(w) << '\n';
  }
  out << "learned " << model.learned.size() - Vocabulary::kNumSpecials << '\n';
  for (std::size_t id = Vocabulary::kNumSpecials; id < model.learned.size(); ++id) {
    out << model.learned.word(static_cast<int>(id)) << '\n';
  }
  out << "tags " << model.tags.size() << '\n';
  for (const std::string& t : model.tags.tags()) out << t << '\n';
  for (const Parameter* p : model.parameters()) write_tensor(out, *p);
  out << "end\n";
}

void save_checkpoint_file(const std::filesystem::path& path, const Model& model,
                          const CheckpointExtras& extras) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint: " + path.string());
  save_checkpoint(out, model, extras);
  if (!out) throw ConfigError("failed writing checkpoint: " + path.string());
}

LoadedCheckpoint load_checkpoint(std::istream& in) {
  Reader r(in);
  std::string first;
  if (!std::getline(in, first)) throw FormatError("checkpoint: empty file");
  if (!first.empty() && first.back() == '\r') first.pop_back();
  if (first != kCheckpointMagic) {
    throw FormatError("checkpoint: bad magic (expected " + std::string(kCheckpointMagic) + ")");
  }

  LoadedCheckpoint out;
  Model& m = out.model;
  std::size_t embedding_dim = 0;
  std::map<std::string, Tensor> tensors;
  bool saw_end = false;
  while (!saw_end) {
    const std::string l = r.line("section header");
    auto [head, rest] = head_rest(l);
    if (head == "config") {
      auto [key, value] = head_rest(rest);
      if (!apply_train_option(m.config, key, value)) r.fail("unknown config key '" + key + "'");
    } else if (head == "meta") {
      auto [key, value] = head_rest(rest);
      if (key == "embedding_dim") {
        embedding_dim = parse_count(r, value);
      } else {
        out.extras.entries.emplace_back(key, value);
      }
    } else if (head == "chars") {
      const std::size_t n = parse_count(r, rest);
      m.chars = CharVocabulary();
      for (std::size_t i = 0; i < n; ++i) {
        const auto cp = static_cast<char32_t>(parse_count(r, r.line("chars")));
        if (i == 0) continue;  // unknown-character slot
        m.chars.add(cp);
      }
    } else if (head == "words") {
      const std::size_t n = parse_count(r, rest);
      for (std::size_t i = 0; i < n; ++i) {
        auto [w, count] = head_rest(r.line("words"));
        m.words.add(w);
        m.words.set_count(w, parse_count(r, count));
      }
    } else if (head == "learned") {
      const std::size_t n = parse_count(r, rest);
      for (std::size_t i = 0; i < n; ++i) m.learned.add(r.line("learned"));
    } else if (head == "tags") {
      const std::size_t n = parse_count(r, rest);
      for (std::size_t i = 0; i < n; ++i) m.tags.add(r.line("tags"));
    } else if (head == "tensor") {
      std::istringstream hs(rest);
      std::string name;
      std::size_t rank = 0;
      if (!(hs >> name >> rank)) r.fail("bad tensor header");
      std::vector<std::size_t> shape(rank);
      for (auto& d : shape) {
        if (!(hs >> d)) r.fail("bad tensor shape for '" + name + "'");
      }
      std::vector<double> data;
      std::size_t expected = 1;
      for (auto d : shape) expected *= d;
      if (expected > 0) {
        std::istringstream ds(r.line("tensor data"));
        std::string field;
        while (ds >> field) {
          char* end = nullptr;
          data.push_back(std::strtod(field.c_str(), &end));
          if (*end != '\0') r.fail("bad value '" + field + "' in tensor '" + name + "'");
        }
      } else {
        // An empty tensor still writes an (empty) data line.
        std::string blank;
        std::getline(in, blank);
      }
      if (data.size() != expected) r.fail("tensor '" + name + "' has wrong element count");
      tensors.emplace(name, Tensor(std::move(shape), std::move(data)));
    } else if (head == "end") {
      saw_end = true;
    } else {
      r.fail("unknown section '" + head + "'");
    }
  }
  if (embedding_dim == 0) throw FormatError("checkpoint: missing embedding_dim");
  if (m.tags.size() == 0) throw FormatError("checkpoint: empty tag set");

  m.embedding_dim = embedding_dim;
  Rng unused(0);
  m.tagger = TaggerParams::init(embedding_dim, m.config.tagger_hidden, m.tags.size(), unused);
  m.lexicon = LexiconParams::init(embedding_dim, m.learned.size() - Vocabulary::kNumSpecials,
                                  unused);
  if (m.config.oov_mode == OovMode::kPredictor) {
    PredictorConfig pc;
    pc.char_dim = m.config.char_dim;
    pc.hidden_dim = m.config.encoder_hidden;
    pc.embedding_dim = embedding_dim;
    pc.context_window = m.config.k_ctx;
    m.predictor = PredictorParams::init(pc, m.chars.size(), unused);
  }
  for (Parameter* p : m.parameters()) {
    auto it = tensors.find(p->name);
    if (it == tensors.end()) throw FormatError("checkpoint: missing tensor '" + p->name + "'");
    if (!it->second.same_shape(p->value)) {
      throw FormatError("checkpoint: tensor '" + p->name + "' has shape " +
                        it->second.shape_string() + ", model expects " + p->value.shape_string());
    }
    p->value = std::move(it->second);
    p->grad = Tensor::zeros_like(p->value);
    tensors.erase(it);
  }
  if (!tensors.empty()) {
    throw FormatError("checkpoint: unexpected tensor '" + tensors.begin()->first + "'");
  }
  return out;
}

LoadedCheckpoint load_checkpoint_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read checkpoint: " + path.string());
  return load_checkpoint(in);
}

}  // namespace comick
