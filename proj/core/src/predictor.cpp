#include "comick/predictor.hpp"

#include <algorithm>

#include "comick/errors.hpp"
#include "comick/ops.hpp"

namespace comick {

namespace {

constexpr double kEmbeddingInitRange = 0.25;

Tensor uniform_tensor(std::vector<std::size_t> shape, double range, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.uniform(-range, range);
  return t;
}

ContextWord resolve_neighbour(const Token& token, const WordSources& sources) {
  ContextWord w;
  w.surface = token.surface;
  if (!token.is_oov) {
    if (sources.table != nullptr) {
      if (const auto* v = sources.table->find(token.surface)) {
        w.source = ContextWord::Source::kPretrained;
        w.pretrained = v;
        return w;
      }
    }
    if (sources.learned != nullptr && sources.learned->contains(token.surface)) {
      const int id = sources.learned->id(token.surface);
      if (id >= Vocabulary::kNumSpecials) {
        w.source = ContextWord::Source::kLearned;
        w.learned_row = static_cast<std::size_t>(id - Vocabulary::kNumSpecials);
        return w;
      }
    }
  }
  w.source = ContextWord::Source::kUnk;
  return w;
}

ContextWord marker(ContextWord::Source source) {
  ContextWord w;
  w.source = source;
  w.surface = source == ContextWord::Source::kBos ? "<BOS>" : "<EOS>";
  return w;
}

}  // namespace

LexiconParams LexiconParams::init(std::size_t embedding_dim, std::size_t learned_rows,
                                  Rng& rng) {
  LexiconParams l;
  l.bos = Parameter("lexicon.bos", uniform_tensor({embedding_dim}, kEmbeddingInitRange, rng));
  l.eos = Parameter("lexicon.eos", uniform_tensor({embedding_dim}, kEmbeddingInitRange, rng));
  l.unk = Parameter("lexicon.unk", uniform_tensor({embedding_dim}, kEmbeddingInitRange, rng));
  l.learned = Parameter("lexicon.learned",
                        uniform_tensor({learned_rows, embedding_dim}, kEmbeddingInitRange, rng));
  return l;
}

PredictorParams PredictorParams::init(const PredictorConfig& config, std::size_t n_chars,
                                      Rng& rng) {
  PredictorParams p;
  p.config = config;
  const std::size_t enc = 2 * config.hidden_dim;
  p.char_embedding = Parameter("predictor.char_embedding",
                               uniform_tensor({n_chars, config.char_dim}, kEmbeddingInitRange, rng));
  p.chars = SequenceEncoder::init("predictor.chars", config.char_dim, config.hidden_dim, rng);
  p.left = SequenceEncoder::init("predictor.left", config.embedding_dim, config.hidden_dim, rng);
  p.right = SequenceEncoder::init("predictor.right", config.embedding_dim, config.hidden_dim, rng);
  p.attention_w = Parameter("predictor.attention_w", glorot_uniform(3, 3 * enc, rng));
  p.attention_b = Parameter("predictor.attention_b", Tensor::zeros(3));
  p.output_w = Parameter("predictor.output_w", glorot_uniform(config.embedding_dim, enc, rng));
  p.output_b = Parameter("predictor.output_b", Tensor::zeros(config.embedding_dim));
  return p;
}

ContextView make_context_view(const Sentence& sentence, std::size_t position,
                              std::size_t k_ctx, const WordSources& sources) {
  const std::size_t n = sentence.size();
  if (position >= n) {
    throw IndexError("context position " + std::to_string(position) + " out of range for a " +
                     std::to_string(n) + "-token sentence");
  }
  ContextView view;
  // Left: tail of [<BOS>, w_0 .. w_{position-1}].
  const std::size_t left_real = std::min(k_ctx, position);
  const bool left_marker = sources.boundary_markers && position < k_ctx;
  if (left_marker) view.left.push_back(marker(ContextWord::Source::kBos));
  for (std::size_t i = position - left_real; i < position; ++i) {
    view.left.push_back(resolve_neighbour(sentence.tokens[i], sources));
  }
  // Right: head of [w_{position+1} .. w_{n-1}, <EOS>].
  const std::size_t after = n - position - 1;
  const std::size_t right_real = std::min(k_ctx, after);
  for (std::size_t i = position + 1; i <= position + right_real; ++i) {
    view.right.push_back(resolve_neighbour(sentence.tokens[i], sources));
  }
  if (sources.boundary_markers && after < k_ctx) {
    view.right.push_back(marker(ContextWord::Source::kEos));
  }

  const Token& target = sentence.tokens[position];
  view.char_ids = target.char_ids;
  if (view.char_ids.empty() && sources.chars != nullptr) {
    view.char_ids = sources.chars->encode(target.surface);
  }
  if (view.char_ids.empty()) {
    throw ContractError("token '" + target.surface + "' has no character ids");
  }
  return view;
}

Var context_vector(Graph& g, const ContextWord& word, const LexiconParams& lexicon) {
  switch (word.source) {
    case ContextWord::Source::kPretrained:
      return g.constant(Tensor::vector(*word.pretrained));
    case ContextWord::Source::kLearned:
      return g.param_row(lexicon.learned, word.learned_row);
    case ContextWord::Source::kBos:
      return g.param(lexicon.bos);
    case ContextWord::Source::kEos:
      return g.param(lexicon.eos);
    case ContextWord::Source::kUnk:
      break;
  }
  return g.param(lexicon.unk);
}

WordEncodings encode_word(Graph& g, const ContextView& view, const PredictorParams& p,
                          const LexiconParams& lexicon) {
  std::vector<Var> chars;
  chars.reserve(view.char_ids.size());
  const std::size_t n_chars = p.char_embedding.value.rows();
  for (int id : view.char_ids) {
    // Characters beyond the trained inventory fall back to the unknown id.
    const auto row = (id >= 0 && static_cast<std::size_t>(id) < n_chars)
                         ? static_cast<std::size_t>(id)
                         : static_cast<std::size_t>(CharVocabulary::kUnkChar);
    chars.push_back(g.param_row(p.char_embedding, row));
  }
  std::vector<Var> left;
  left.reserve(view.left.size());
  for (const ContextWord& w : view.left) left.push_back(context_vector(g, w, lexicon));
  std::vector<Var> right;
  right.reserve(view.right.size());
  for (auto it = view.right.rbegin(); it != view.right.rend(); ++it) {
    right.push_back(context_vector(g, *it, lexicon));
  }
  WordEncodings enc;
  enc.chars = bilstm_encode(g, chars, p.chars);
  enc.left = bilstm_encode(g, left, p.left);
  enc.right = bilstm_encode(g, right, p.right);
  return enc;
}

Var attend(const WordEncodings& enc, const PredictorParams& p) {
  Graph& g = *enc.chars.graph;
  const Var joined = concat({enc.chars, enc.left, enc.right});
  return softmax(linear(joined, g.param(p.attention_w), g.param(p.attention_b)));
}

AttentionTriple to_triple(const Tensor& attention) {
  if (attention.size() != 3) {
    throw ShapeError("attention must have 3 entries, got " + attention.shape_string());
  }
  return {attention[0], attention[1], attention[2]};
}

Var combine(const WordEncodings& enc, Var attention, const PredictorParams& p) {
  Graph& g = *enc.chars.graph;
  const Var mixed = add(add(scale_by(slice(attention, 0, 1), enc.chars),
                            scale_by(slice(attention, 1, 1), enc.left)),
                        scale_by(slice(attention, 2, 1), enc.right));
  return linear(mixed, g.param(p.output_w), g.param(p.output_b));
}

OovPrediction predict_oov(Graph& g, const Sentence& sentence, std::size_t position,
                          std::size_t k_ctx, const PredictorParams& p,
                          const LexiconParams& lexicon, const WordSources& sources) {
  if (position >= sentence.size()) {
    throw IndexError("predict_oov: position " + std::to_string(position) +
                     " out of range for a " + std::to_string(sentence.size()) +
                     "-token sentence");
  }
  if (!sentence.tokens[position].is_oov) {
    throw ContractError("predict_oov: '" + sentence.tokens[position].surface +
                        "' is a known word; use its table embedding");
  }
  const ContextView view = make_context_view(sentence, position, k_ctx, sources);
  const WordEncodings enc = encode_word(g, view, p, lexicon);
  const Var attention = attend(enc, p);
  OovPrediction out;
  out.attention = attention;
  out.triple = to_triple(attention.value());
  out.embedding = combine(enc, attention, p);
  return out;
}

}  // namespace comick
