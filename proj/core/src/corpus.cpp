#include "comick/corpus.hpp"

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "comick/errors.hpp"
#include "comick/rng.hpp"

namespace comick {

Task parse_task(std::string_view name) {
  if (name == "ner") return Task::kNer;
  if (name == "pos") return Task::kPos;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected ner or pos)");
}

const char* task_name(Task task) { return task == Task::kNer ? "ner" : "pos"; }

const std::string& gold_tag(const Token& token, Task task) {
  return task == Task::kNer ? token.ner : token.pos;
}

std::vector<std::string> gold_tags(const Sentence& sentence, Task task) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (const Token& t : sentence.tokens) out.push_back(gold_tag(t, task));
  return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> cols;
  std::istringstream ss(line);
  std::string col;
  while (ss >> col) cols.push_back(col);
  return cols;
}

void finish_sentence(Corpus& corpus, std::vector<Token>& pending) {
  if (!pending.empty()) {
    std::vector<std::string> tags;
    tags.reserve(pending.size());
    for (const Token& t : pending) tags.push_back(t.ner);
    const auto bio = iob1_to_bio(tags);
    for (std::size_t i = 0; i < pending.size(); ++i) pending[i].ner = bio[i];
    corpus.push_back(Sentence{std::move(pending)});
  }
  pending.clear();
}

}  // namespace

Corpus parse_conll(std::istream& in) {
  Corpus corpus;
  std::vector<Token> pending;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cols = split_ws(line);
    if (cols.empty()) {
      finish_sentence(corpus, pending);
      continue;
    }
    if (cols[0] == "-DOCSTART-") {
      finish_sentence(corpus, pending);
      continue;
    }
    if (cols.size() < 4) {
      throw ParseError("conll line " + std::to_string(line_no) + ": expected 4 columns, got " +
                       std::to_string(cols.size()));
    }
    Token tok;
    tok.surface = cols[0];
    tok.pos = cols[1];
    tok.ner = cols[3];
    pending.push_back(std::move(tok));
  }
  finish_sentence(corpus, pending);
  return corpus;
}

Corpus read_conll_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read corpus file: " + path.string());
  return parse_conll(in);
}

void write_conll(std::ostream& out, const Corpus& corpus) {
  for (const Sentence& s : corpus) {
    for (const Token& t : s.tokens) {
      out << t.surface << ' ' << t.pos << " O " << t.ner << '\n';
    }
    out << '\n';
  }
}

std::vector<std::string> iob1_to_bio(const std::vector<std::string>& tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  std::string prev_type;  // empty == outside
  for (const std::string& tag : tags) {
    if (tag == "O") {
      out.push_back(tag);
      prev_type.clear();
      continue;
    }
    if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
      throw ParseError("malformed tag '" + tag + "'");
    }
    const std::string type = tag.substr(2);
    if (tag[0] == 'I' && type != prev_type) {
      out.push_back("B-" + type);
    } else {
      out.push_back(tag);
    }
    prev_type = type;
  }
  return out;
}

std::vector<std::size_t> shuffle_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(seed, 0x5348554646ULL));
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.index(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

Corpus shuffle_batches(const Corpus& sentences, std::uint64_t seed) {
  Corpus out;
  out.reserve(sentences.size());
  for (std::size_t i : shuffle_order(sentences.size(), seed)) out.push_back(sentences[i]);
  return out;
}

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace comick
