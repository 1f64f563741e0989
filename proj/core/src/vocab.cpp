#include "comick/vocab.hpp"

namespace comick {

Vocabulary::Vocabulary() {
  for (const char* s : {"<UNK>", "<BOS>", "<EOS>", "<PAD>"}) add(s);
}

int Vocabulary::add(const std::string& word) {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  ids_.emplace(word, id);
  words_.push_back(word);
  return id;
}

int Vocabulary::id(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return ids_.count(std::string(word)) > 0;
}

std::size_t Vocabulary::count(std::string_view word) const {
  auto it = counts_.find(std::string(word));
  return it == counts_.end() ? 0 : it->second;
}

int CharVocabulary::add(char32_t c) {
  if (auto it = ids_.find(c); it != ids_.end()) return it->second;
  const int id = static_cast<int>(chars_.size());
  ids_.emplace(c, id);
  chars_.push_back(c);
  return id;
}

int CharVocabulary::id(char32_t c) const {
  auto it = ids_.find(c);
  return it == ids_.end() ? kUnkChar : it->second;
}

std::vector<int> CharVocabulary::encode(std::string_view surface) const {
  std::vector<int> out;
  for (char32_t c : decode_utf8(surface)) out.push_back(id(c));
  return out;
}

Vocabularies build_vocab(const Corpus& sentences, std::size_t min_count) {
  Vocabularies v;
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const Sentence& s : sentences) {
    for (const Token& t : s.tokens) {
      if (counts[t.surface]++ == 0) order.push_back(t.surface);
      for (char32_t c : decode_utf8(t.surface)) v.chars.add(c);
    }
  }
  for (const std::string& w : order) {
    const std::size_t n = counts[w];
    v.words.set_count(w, n);
    if (n >= min_count) v.words.add(w);
  }
  return v;
}

void encode_chars(Corpus& sentences, const CharVocabulary& chars) {
  for (Sentence& s : sentences) {
    for (Token& t : s.tokens) t.char_ids = chars.encode(t.surface);
  }
}

}  // namespace comick
