#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "comick/corpus.hpp"
#include "comick/embeddings.hpp"
#include "comick/predictor.hpp"
#include "comick/tagger.hpp"

namespace comick {

// Mean attention over the OOV tokens sharing one gold tag.
struct TagAttentionRow {
  std::string tag;
  std::size_t count = 0;
  double word = 0.0;
  double left = 0.0;
  double right = 0.0;
};

// Attention of one occurrence of a word, with the surrounding excerpt.
struct TraceRow {
  double word = 0.0;
  double left = 0.0;
  double right = 0.0;
  std::string excerpt;
};

// Groups (gold tag, attention) observations and averages them. NER rows
// follow O, B-PER, I-PER, B-ORG, I-ORG, B-LOC, I-LOC, B-MISC, I-MISC and then
// any other tag alphabetically; POS rows are sorted by descending count, then
// by tag.
std::vector<TagAttentionRow> aggregate_attention(
    const std::vector<std::pair<std::string, AttentionTriple>>& observations, Task task);

// Table of average attention per gold tag over every OOV token of corpus.
// The corpus must be prepared; the model must be in predictor mode.
std::vector<TagAttentionRow> attention_by_tag(const Corpus& corpus, const Model& model,
                                              const EmbeddingTable& table);

// Up to k_show words either side of position, "<BOS>"/"<EOS>" where the window
// passes the sentence edge, and the target written as *word*.
std::string render_excerpt(const Sentence& sentence, std::size_t position, std::size_t k_show);

// One row per OOV occurrence of target (compared case-insensitively).
std::vector<TraceRow> attention_trace(const std::string& target, const Corpus& corpus,
                                      const Model& model, const EmbeddingTable& table,
                                      std::size_t k_show = 7);

// Reports: aligned text tables and CSV with a header row, '.' decimals and
// two-decimal rounding.
void write_tag_attention_text(std::ostream& out, const std::vector<TagAttentionRow>& rows);
void write_tag_attention_csv(std::ostream& out, const std::vector<TagAttentionRow>& rows);
void write_trace_text(std::ostream& out, const std::vector<TraceRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

// Fixed two-decimal rendering independent of the global locale.
std::string format2(double value);

}  // namespace comick
