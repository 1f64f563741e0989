#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace comick {

struct Token {
  std::string surface;
  std::string pos;
  std::string ner;  // BIO
  bool is_oov = false;
  std::vector<int> char_ids;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
};

using Corpus = std::vector<Sentence>;

enum class Task { kNer, kPos };

Task parse_task(std::string_view name);
const char* task_name(Task task);
// Gold tag of a token for the given task.
const std::string& gold_tag(const Token& token, Task task);
std::vector<std::string> gold_tags(const Sentence& sentence, Task task);

// CoNLL 2003 column format: "surface POS chunk NER" per line, blank lines
// between sentences, "-DOCSTART-" lines as document markers. The chunk column
// is dropped and NER tags are converted to BIO. Throws ParseError with the line
// number for lines with fewer than four columns.
Corpus parse_conll(std::istream& in);
Corpus read_conll_file(const std::filesystem::path& path);
// Writes sentences back in four-column form with "O" in the chunk column.
void write_conll(std::ostream& out, const Corpus& corpus);

// IOB1 -> BIO: an I-X that opens an entity (after O, at the start, or after a
// different type) becomes B-X. Throws ParseError on tags that are neither "O"
// nor "B-type"/"I-type".
std::vector<std::string> iob1_to_bio(const std::vector<std::string>& tags);

// Deterministic Fisher-Yates permutation of [0, n).
std::vector<std::size_t> shuffle_order(std::size_t n, std::uint64_t seed);
Corpus shuffle_batches(const Corpus& sentences, std::uint64_t seed);

// Unicode scalar values of a UTF-8 string; malformed bytes decode to U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view text);
// ASCII lowercase; other bytes are left as they are.
std::string ascii_lower(std::string_view text);

}  // namespace comick
