#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "comick/corpus.hpp"
#include "comick/embeddings.hpp"
#include "comick/graph.hpp"
#include "comick/lstm.hpp"
#include "comick/predictor.hpp"
#include "comick/rng.hpp"
#include "comick/vocab.hpp"

namespace comick {

// How embeddings of OOV tokens are produced.
enum class OovMode {
  kPredictor,  // context + character predictor, trained jointly
  kRandom,     // fixed random vector per word type
  kUnk,        // one shared trainable vector
};

OovMode parse_oov_mode(std::string_view name);
const char* oov_mode_name(OovMode mode);

class TagSet {
 public:
  std::size_t add(const std::string& tag);
  std::optional<std::size_t> find(const std::string& tag) const;
  const std::string& tag(std::size_t id) const { return tags_.at(id); }
  std::size_t size() const { return tags_.size(); }
  const std::vector<std::string>& tags() const { return tags_; }

 private:
  std::vector<std::string> tags_;
  std::unordered_map<std::string, std::size_t> ids_;
};

struct TrainConfig {
  Task task = Task::kNer;
  OovMode oov_mode = OovMode::kPredictor;
  std::uint64_t seed = 0;
  std::size_t epochs = 50;
  std::size_t patience = 10;
  std::size_t k_ctx = 7;
  double learning_rate = 1e-3;
  double clip = 5.0;
  double dropout = 0.0;  // on tagger inputs, training only
  std::size_t char_dim = 25;
  std::size_t encoder_hidden = 50;
  std::size_t tagger_hidden = 100;
  // 0: OOV means "no pretrained vector". Otherwise training words seen at
  // least this often are also known and get a trainable vector.
  std::size_t oov_min_count = 0;
  bool boundary_markers = true;
  bool lowercase_lookup = true;
  // Stop as soon as the dev metric reaches this value.
  std::optional<double> target_metric;
};

struct TaggerParams {
  BilstmParams lstm;
  Parameter output_w;  // [n_tags x 2 * hidden]
  Parameter output_b;

  static TaggerParams init(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_tags,
                           Rng& rng);

  template <typename F>
  void visit(F&& f) {
    lstm.visit(f);
    f(output_w);
    f(output_b);
  }
  template <typename F>
  void visit(F&& f) const {
    lstm.visit(f);
    f(output_w);
    f(output_b);
  }
};

// Everything needed to tag a sentence except the pretrained table.
struct Model {
  TrainConfig config;
  std::size_t embedding_dim = 0;
  CharVocabulary chars;
  Vocabulary words;    // training words with their counts
  Vocabulary learned;  // words with a row in lexicon.learned
  TagSet tags;
  TaggerParams tagger;
  LexiconParams lexicon;
  std::optional<PredictorParams> predictor;  // predictor mode only

  // Builds vocabularies and the tag set from train and initializes every
  // parameter group from its own seed-derived stream.
  static Model create(const TrainConfig& config, const Corpus& train,
                      const EmbeddingTable& table);

  WordSources sources(const EmbeddingTable& table) const;

  // All trainable parameters in a fixed order.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
};

// Encodes characters with the model's vocabulary and flags OOV tokens with the
// model's criterion.
void prepare_corpus(Corpus& corpus, const Model& model, const EmbeddingTable& table);

// Fixed U(-0.25, 0.25)^dim vector for an OOV word type: the same (seed, word)
// always gives the same vector.
std::vector<double> random_oov_vector(std::uint64_t seed, std::string_view word,
                                      std::size_t dim);

struct AssembledSentence {
  std::vector<Var> embeddings;
  std::vector<std::optional<AttentionTriple>> attention;  // set at OOV positions in predictor mode
};

// Tagger inputs for every token: table (or learned) vectors for known words
// and the mode-specific vector for OOV ones. Throws ConfigError in predictor
// mode when the model has no predictor.
AssembledSentence assemble_embeddings(Graph& g, const Sentence& sentence, const Model& model,
                                      const EmbeddingTable& table);

// Per-token tag distributions: bi-LSTM over the sentence, then a softmax
// classifier on each position's [forward; backward] state.
std::vector<Var> tag_scores(Graph& g, std::span<const Var> embeddings, const TaggerParams& p);

// Mean cross-entropy over tokens. Throws ContractError on length mismatch.
Var sentence_loss(std::span<const Var> scores, std::span<const std::size_t> gold);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(const Tensor& scores);

struct SentencePrediction {
  std::vector<std::string> tags;
  std::vector<std::optional<AttentionTriple>> attention;
};

SentencePrediction predict_sentence(const Sentence& sentence, const Model& model,
                                    const EmbeddingTable& table);
std::vector<std::string> predict_tags(const Sentence& sentence, const Model& model,
                                      const EmbeddingTable& table);

// F1 for ner, accuracy for pos, both in percent.
double evaluate_metric(const Corpus& corpus, const Model& model, const EmbeddingTable& table);

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double dev_metric = 0.0;
};

struct TrainResult {
  Model model;  // parameters of the best dev epoch
  std::vector<EpochMetrics> log;
  std::size_t best_epoch = 0;
  double best_metric = 0.0;
};

// Joint training: every sentence step updates tagger, lexicon and (in
// predictor mode) predictor parameters together with Adam. Corpora must be
// prepared. An empty dev set falls back to scoring the training set. Throws
// NumericError naming the epoch and sentence on a non-finite loss.
TrainResult train(Model model, const Corpus& train_set, const Corpus& dev_set,
                  const EmbeddingTable& table);
TrainResult train(const Corpus& train_set, const Corpus& dev_set, const TrainConfig& config,
                  const EmbeddingTable& table);

}  // namespace comick
