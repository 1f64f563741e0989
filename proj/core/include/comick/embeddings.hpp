#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "comick/corpus.hpp"
#include "comick/vocab.hpp"

namespace comick {

// Pretrained word vectors. Lookup tries the exact surface first and, when
// lowercase fallback is on, the ASCII-lowercased surface second.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim, bool lowercase_fallback = true)
      : dim_(dim), lowercase_fallback_(lowercase_fallback) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool lowercase_fallback() const { return lowercase_fallback_; }
  void set_lowercase_fallback(bool on) { lowercase_fallback_ = on; }

  // Returns false (and keeps the old vector) when the word is already present.
  bool insert(const std::string& word, std::vector<double> vec);

  const std::vector<double>* find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) != nullptr; }
  // Throws IndexError for unknown words.
  const std::vector<double>& at(std::string_view word) const;

 private:
  std::size_t dim_ = 0;
  bool lowercase_fallback_ = true;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// One "word v1 v2 ... vd" entry per line; blank lines are skipped. The
// dimension comes from expected_dim or else the first line; any line with a
// different count throws FormatError with its line number.
EmbeddingTable load_embeddings(std::istream& in,
                               std::optional<std::size_t> expected_dim = std::nullopt);
EmbeddingTable load_embeddings_file(const std::filesystem::path& path,
                                    std::optional<std::size_t> expected_dim = std::nullopt);

// Is this surface out of vocabulary? It is unless the table knows it or (when
// min_count > 0) it occurred at least min_count times in training.
bool is_oov_word(std::string_view surface, const EmbeddingTable& table,
                 const Vocabulary& train_vocab, std::size_t min_count);

// Sets Token::is_oov on every token. min_count == 0 means table membership only.
void mark_oov(Corpus& sentences, const EmbeddingTable& table, const Vocabulary& train_vocab,
              std::size_t min_count);

}  // namespace comick
