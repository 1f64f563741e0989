#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "comick/corpus.hpp"
#include "comick/embeddings.hpp"
#include "comick/graph.hpp"
#include "comick/lstm.hpp"
#include "comick/vocab.hpp"

namespace comick {

struct PredictorConfig {
  std::size_t char_dim = 25;
  std::size_t hidden_dim = 50;  // per direction, for all three encoders
  std::size_t embedding_dim = 50;
  std::size_t context_window = 7;
};

// Trainable vectors that stand in for words without a pretrained vector:
// sentence boundary markers, the shared unknown-word vector, and one row per
// training word that is known only through training frequency.
struct LexiconParams {
  Parameter bos;
  Parameter eos;
  Parameter unk;
  Parameter learned;  // [rows x embedding_dim]; row = learned-vocab id - kNumSpecials

  static LexiconParams init(std::size_t embedding_dim, std::size_t learned_rows, Rng& rng);

  template <typename F>
  void visit(F&& f) {
    f(bos);
    f(eos);
    f(unk);
    f(learned);
  }
  template <typename F>
  void visit(F&& f) const {
    f(bos);
    f(eos);
    f(unk);
    f(learned);
  }
};

// Resolves the vectors of the words surrounding an OOV token.
struct WordSources {
  const EmbeddingTable* table = nullptr;
  // Words with a row in LexiconParams::learned; may be null.
  const Vocabulary* learned = nullptr;
  // Used to encode characters of tokens whose char_ids are not filled in.
  const CharVocabulary* chars = nullptr;
  bool boundary_markers = true;
};

struct ContextWord {
  enum class Source { kPretrained, kLearned, kBos, kEos, kUnk };
  Source source = Source::kUnk;
  std::string surface;
  const std::vector<double>* pretrained = nullptr;
  std::size_t learned_row = 0;

  friend bool operator==(const ContextWord& a, const ContextWord& b) {
    return a.source == b.source && a.surface == b.surface && a.learned_row == b.learned_row;
  }
};

struct ContextView {
  std::vector<ContextWord> left;   // textual order, nearest word last
  std::vector<ContextWord> right;  // textual order, nearest word first
  std::vector<int> char_ids;

  friend bool operator==(const ContextView&, const ContextView&) = default;
};

struct AttentionTriple {
  double word = 0.0;
  double left = 0.0;
  double right = 0.0;

  double sum() const { return word + left + right; }
};

struct PredictorParams {
  PredictorConfig config;
  Parameter char_embedding;  // [n_chars x char_dim]
  SequenceEncoder chars;
  SequenceEncoder left;
  SequenceEncoder right;
  Parameter attention_w;  // [3 x 3 * encoding_dim], rows ordered (word, left, right)
  Parameter attention_b;  // [3]
  Parameter output_w;     // [embedding_dim x encoding_dim]
  Parameter output_b;     // [embedding_dim]

  static PredictorParams init(const PredictorConfig& config, std::size_t n_chars, Rng& rng);
  std::size_t encoding_dim() const { return 2 * config.hidden_dim; }

  template <typename F>
  void visit(F&& f) {
    f(char_embedding);
    chars.visit(f);
    left.visit(f);
    right.visit(f);
    f(attention_w);
    f(attention_b);
    f(output_w);
    f(output_b);
  }
  template <typename F>
  void visit(F&& f) const {
    f(char_embedding);
    chars.visit(f);
    left.visit(f);
    right.visit(f);
    f(attention_w);
    f(attention_b);
    f(output_w);
    f(output_b);
  }
};

// Up to k_ctx items on each side of position. The left window is the tail of
// [<BOS>, w_0, ..., w_{position-1}] and the right window the head of
// [w_{position+1}, ..., w_{n-1}, <EOS>], so a marker only appears when the
// window reaches past the sentence edge. OOV neighbours resolve to <UNK>.
ContextView make_context_view(const Sentence& sentence, std::size_t position,
                              std::size_t k_ctx, const WordSources& sources);

// Vector node for a known (non-target) word or marker.
Var context_vector(Graph& g, const ContextWord& word, const LexiconParams& lexicon);

struct WordEncodings {
  Var left;
  Var right;
  Var chars;
};

// Runs the three encoders. The right context is fed farthest-to-nearest so the
// adjacent word is the last one each encoder's forward half reads.
WordEncodings encode_word(Graph& g, const ContextView& view, const PredictorParams& p,
                          const LexiconParams& lexicon);

// softmax(W_a [h_chars; h_left; h_right] + b_a), a 3-vector (word, left, right).
Var attend(const WordEncodings& enc, const PredictorParams& p);
AttentionTriple to_triple(const Tensor& attention);

// W_o (a_word h_chars + a_left h_left + a_right h_right) + b_o.
Var combine(const WordEncodings& enc, Var attention, const PredictorParams& p);

struct OovPrediction {
  Var embedding;
  Var attention;
  AttentionTriple triple;
};

// Full prediction for the OOV token at position. Throws ContractError when the
// token is not flagged OOV and IndexError when position is out of range.
OovPrediction predict_oov(Graph& g, const Sentence& sentence, std::size_t position,
                          std::size_t k_ctx, const PredictorParams& p,
                          const LexiconParams& lexicon, const WordSources& sources);

}  // namespace comick
