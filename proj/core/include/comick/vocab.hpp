#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "comick/corpus.hpp"

namespace comick {

// Word vocabulary with fixed special ids. Also remembers the training
// frequency of every word it saw, including the ones below min-count.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kPad = 3;
  static constexpr int kNumSpecials = 4;

  Vocabulary();

  // Returns the id of an existing word or assigns the next one.
  int add(const std::string& word);
  // Unknown words map to kUnk.
  int id(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  void set_count(const std::string& word, std::size_t count) { counts_[word] = count; }
  std::size_t count(std::string_view word) const;
  const std::unordered_map<std::string, std::size_t>& counts() const { return counts_; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> counts_;
};

// Characters are Unicode scalar values; id 0 is the unknown character.
class CharVocabulary {
 public:
  static constexpr int kUnkChar = 0;

  CharVocabulary() : chars_{U'\0'} {}

  int add(char32_t c);
  int id(char32_t c) const;
  std::size_t size() const { return chars_.size(); }
  const std::vector<char32_t>& chars() const { return chars_; }
  std::vector<int> encode(std::string_view surface) const;

 private:
  std::unordered_map<char32_t, int> ids_;
  std::vector<char32_t> chars_;
};

struct Vocabularies {
  Vocabulary words;
  CharVocabulary chars;
};

// Words with frequency >= min_count get ids in first-occurrence order; the
// character vocabulary covers every character of every training surface.
Vocabularies build_vocab(const Corpus& sentences, std::size_t min_count = 1);

// Fills Token::char_ids from the character vocabulary.
void encode_chars(Corpus& sentences, const CharVocabulary& chars);

}  // namespace comick
