#include "comick/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "comick/errors.hpp"

namespace comick {

bool EmbeddingTable::insert(const std::string& word, std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw FormatError("embedding for '" + word + "' has " + std::to_string(vec.size()) +
                      " values, table dim is " + std::to_string(dim_));
  }
  return vectors_.emplace(word, std::move(vec)).second;
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  if (auto it = vectors_.find(std::string(word)); it != vectors_.end()) return &it->second;
  if (lowercase_fallback_) {
    if (auto it = vectors_.find(ascii_lower(word)); it != vectors_.end()) return &it->second;
  }
  return nullptr;
}

const std::vector<double>& EmbeddingTable::at(std::string_view word) const {
  const auto* v = find(word);
  if (v == nullptr) throw IndexError("no pretrained embedding for '" + std::string(word) + "'");
  return *v;
}

EmbeddingTable load_embeddings(std::istream& in, std::optional<std::size_t> expected_dim) {
  std::optional<EmbeddingTable> table;
  if (expected_dim) table.emplace(*expected_dim);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;
    std::vector<double> vec;
    std::string field;
    while (ss >> field) {
      double v = 0.0;
      const auto* end = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(field.data(), end, v);
      if (ec != std::errc() || ptr != end) {
        throw FormatError("embeddings line " + std::to_string(line_no) + ": bad number '" +
                          field + "'");
      }
      vec.push_back(v);
    }
    if (!table) table.emplace(vec.size());
    if (vec.size() != table->dim() || vec.empty()) {
      throw FormatError("embeddings line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table->dim()) + " values, got " +
                        std::to_string(vec.size()));
    }
    table->insert(word, std::move(vec));
  }
  return table ? std::move(*table) : EmbeddingTable(0);
}

EmbeddingTable load_embeddings_file(const std::filesystem::path& path,
                                    std::optional<std::size_t> expected_dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read embeddings file: " + path.string());
  return load_embeddings(in, expected_dim);
}

bool is_oov_word(std::string_view surface, const EmbeddingTable& table,
                 const Vocabulary& train_vocab, std::size_t min_count) {
  if (table.contains(surface)) return false;
  if (min_count > 0 && train_vocab.count(surface) >= min_count) return false;
  return true;
}

void mark_oov(Corpus& sentences, const EmbeddingTable& table, const Vocabulary& train_vocab,
              std::size_t min_count) {
  for (Sentence& s : sentences) {
    for (Token& t : s.tokens) t.is_oov = is_oov_word(t.surface, table, train_vocab, min_count);
  }
}

}  // namespace comick
