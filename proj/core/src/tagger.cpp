#include "comick/tagger.hpp"

#include <cmath>

#include "comick/errors.hpp"
#include "comick/metrics.hpp"
#include "comick/ops.hpp"
#include "comick/optimizer.hpp"

namespace comick {

namespace {

constexpr double kRandomEmbeddingRange = 0.25;

Var known_vector(Graph& g, const Token& token, const Model& model, const EmbeddingTable& table) {
  if (const auto* v = table.find(token.surface)) return g.constant(Tensor::vector(*v));
  const int id = model.learned.id(token.surface);
  if (id >= Vocabulary::kNumSpecials) {
    return g.param_row(model.lexicon.learned,
                       static_cast<std::size_t>(id - Vocabulary::kNumSpecials));
  }
  return g.param(model.lexicon.unk);
}

Var apply_dropout(Var x, double rate, Rng& rng) {
  Tensor mask = Tensor::zeros_like(x.value());
  const double keep = 1.0 - rate;
  for (double& m : mask.data()) m = rng.uniform01() < keep ? 1.0 / keep : 0.0;
  return mul(x, x.graph->constant(std::move(mask)));
}

struct ForwardPass {
  AssembledSentence assembled;
  std::vector<Var> scores;
};

ForwardPass forward(Graph& g, const Sentence& sentence, const Model& model,
                    const EmbeddingTable& table, Rng* dropout_rng) {
  ForwardPass f;
  f.assembled = assemble_embeddings(g, sentence, model, table);
  std::vector<Var> inputs = f.assembled.embeddings;
  if (dropout_rng != nullptr && model.config.dropout > 0.0) {
    for (Var& x : inputs) x = apply_dropout(x, model.config.dropout, *dropout_rng);
  }
  f.scores = tag_scores(g, inputs, model.tagger);
  return f;
}

}  // namespace

OovMode parse_oov_mode(std::string_view name) {
  if (name == "predictor") return OovMode::kPredictor;
  if (name == "random") return OovMode::kRandom;
  if (name == "unk") return OovMode::kUnk;
  throw ConfigError("unknown oov mode '" + std::string(name) +
                    "' (expected predictor, random or unk)");
}

const char* oov_mode_name(OovMode mode) {
  switch (mode) {
    case OovMode::kPredictor: return "predictor";
    case OovMode::kRandom: return "random";
    case OovMode::kUnk: return "unk";
  }
  return "predictor";
}

std::size_t TagSet::add(const std::string& tag) {
  if (auto it = ids_.find(tag); it != ids_.end()) return it->second;
  ids_.emplace(tag, tags_.size());
  tags_.push_back(tag);
  return tags_.size() - 1;
}

std::optional<std::size_t> TagSet::find(const std::string& tag) const {
  auto it = ids_.find(tag);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TaggerParams TaggerParams::init(std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t n_tags, Rng& rng) {
  TaggerParams p;
  p.lstm = BilstmParams::init("tagger.lstm", input_dim, hidden_dim, rng);
  p.output_w = Parameter("tagger.output_w", glorot_uniform(n_tags, 2 * hidden_dim, rng));
  p.output_b = Parameter("tagger.output_b", Tensor::zeros(n_tags));
  return p;
}

Model Model::create(const TrainConfig& config, const Corpus& train, const EmbeddingTable& table) {
  if (table.dim() == 0) throw ConfigError("embedding table is empty");
  if (config.epochs < 1) throw ConfigError("epochs must be at least 1");
  Model m;
  m.config = config;
  m.embedding_dim = table.dim();
  Vocabularies v = build_vocab(train, 1);
  m.words = std::move(v.words);
  m.chars = std::move(v.chars);
  if (config.oov_min_count > 0) {
    for (std::size_t id = Vocabulary::kNumSpecials; id < m.words.size(); ++id) {
      const std::string& w = m.words.word(static_cast<int>(id));
      if (!table.contains(w) && m.words.count(w) >= config.oov_min_count) m.learned.add(w);
    }
  }
  for (const Sentence& s : train) {
    for (const Token& t : s.tokens) m.tags.add(gold_tag(t, config.task));
  }
  if (m.tags.size() == 0) throw ConfigError("training corpus has no tagged tokens");

  Rng tagger_rng = Rng::derive(config.seed, "tagger");
  m.tagger = TaggerParams::init(m.embedding_dim, config.tagger_hidden, m.tags.size(), tagger_rng);
  Rng lexicon_rng = Rng::derive(config.seed, "lexicon");
  m.lexicon = LexiconParams::init(m.embedding_dim,
                                  m.learned.size() - Vocabulary::kNumSpecials, lexicon_rng);
  if (config.oov_mode == OovMode::kPredictor) {
    PredictorConfig pc;
    pc.char_dim = config.char_dim;
    pc.hidden_dim = config.encoder_hidden;
    pc.embedding_dim = m.embedding_dim;
    pc.context_window = config.k_ctx;
    Rng predictor_rng = Rng::derive(config.seed, "predictor");
    m.predictor = PredictorParams::init(pc, m.chars.size(), predictor_rng);
  }
  return m;
}

WordSources Model::sources(const EmbeddingTable& table) const {
  WordSources s;
  s.table = &table;
  s.learned = &learned;
  s.chars = &chars;
  s.boundary_markers = config.boundary_markers;
  return s;
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  auto collect = [&out](Parameter& p) { out.push_back(&p); };
  tagger.visit(collect);
  lexicon.visit(collect);
  if (predictor) predictor->visit(collect);
  return out;
}

std::vector<const Parameter*> Model::parameters() const {
  std::vector<const Parameter*> out;
  auto collect = [&out](const Parameter& p) { out.push_back(&p); };
  tagger.visit(collect);
  lexicon.visit(collect);
  if (predictor) predictor->visit(collect);
  return out;
}

void prepare_corpus(Corpus& corpus, const Model& model, const EmbeddingTable& table) {
  encode_chars(corpus, model.chars);
  mark_oov(corpus, table, model.words, model.config.oov_min_count);
}

std::vector<double> random_oov_vector(std::uint64_t seed, std::string_view word,
                                      std::size_t dim) {
  Rng rng(mix_seed(seed, fnv1a(word)));
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform(-kRandomEmbeddingRange, kRandomEmbeddingRange);
  return v;
}

AssembledSentence assemble_embeddings(Graph& g, const Sentence& sentence, const Model& model,
                                      const EmbeddingTable& table) {
  const OovMode mode = model.config.oov_mode;
  if (mode == OovMode::kPredictor && !model.predictor) {
    throw ConfigError("predictor mode requires predictor parameters");
  }
  AssembledSentence out;
  out.embeddings.reserve(sentence.size());
  out.attention.resize(sentence.size());
  const WordSources sources = model.sources(table);
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const Token& tok = sentence.tokens[i];
    if (!tok.is_oov) {
      out.embeddings.push_back(known_vector(g, tok, model, table));
      continue;
    }
    switch (mode) {
      case OovMode::kPredictor: {
        const OovPrediction pred = predict_oov(g, sentence, i, model.config.k_ctx,
                                               *model.predictor, model.lexicon, sources);
        out.embeddings.push_back(pred.embedding);
        out.attention[i] = pred.triple;
        break;
      }
      case OovMode::kRandom:
        out.embeddings.push_back(g.constant(Tensor::vector(
            random_oov_vector(model.config.seed, tok.surface, model.embedding_dim))));
        break;
      case OovMode::kUnk:
        out.embeddings.push_back(g.param(model.lexicon.unk));
        break;
    }
  }
  return out;
}

std::vector<Var> tag_scores(Graph& g, std::span<const Var> embeddings, const TaggerParams& p) {
  if (embeddings.empty()) throw ContractError("tag_scores: empty sentence");
  const std::vector<Var> states = bilstm_states(g, embeddings, p.lstm);
  std::vector<Var> out;
  out.reserve(states.size());
  const Var w = g.param(p.output_w);
  const Var b = g.param(p.output_b);
  for (const Var& h : states) out.push_back(softmax(linear(h, w, b)));
  return out;
}

Var sentence_loss(std::span<const Var> scores, std::span<const std::size_t> gold) {
  if (scores.size() != gold.size()) {
    throw ContractError("sentence_loss: " + std::to_string(scores.size()) + " score rows vs " +
                        std::to_string(gold.size()) + " gold tags");
  }
  if (scores.empty()) throw ContractError("sentence_loss: empty sentence");
  std::vector<Var> losses;
  losses.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) losses.push_back(cross_entropy(scores[i], gold[i]));
  return mean(losses);
}

std::size_t argmax(const Tensor& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

SentencePrediction predict_sentence(const Sentence& sentence, const Model& model,
                                    const EmbeddingTable& table) {
  Graph g(Graph::Mode::kInference);
  ForwardPass f = forward(g, sentence, model, table, nullptr);
  SentencePrediction out;
  out.tags.reserve(sentence.size());
  for (const Var& s : f.scores) out.tags.push_back(model.tags.tag(argmax(s.value())));
  out.attention = std::move(f.assembled.attention);
  return out;
}

std::vector<std::string> predict_tags(const Sentence& sentence, const Model& model,
                                      const EmbeddingTable& table) {
  return predict_sentence(sentence, model, table).tags;
}

double evaluate_metric(const Corpus& corpus, const Model& model, const EmbeddingTable& table) {
  std::vector<std::vector<std::string>> pred, gold;
  pred.reserve(corpus.size());
  gold.reserve(corpus.size());
  for (const Sentence& s : corpus) {
    pred.push_back(predict_tags(s, model, table));
    gold.push_back(gold_tags(s, model.config.task));
  }
  if (model.config.task == Task::kNer) return span_f1(pred, gold).f1;
  return token_accuracy(pred, gold);
}

TrainResult train(Model model, const Corpus& train_set, const Corpus& dev_set,
                  const EmbeddingTable& table) {
  const TrainConfig cfg = model.config;
  if (train_set.empty()) throw ConfigError("training corpus is empty");

  // Gold ids are resolved once; every training tag is in the tag set.
  std::vector<std::vector<std::size_t>> gold(train_set.size());
  for (std::size_t s = 0; s < train_set.size(); ++s) {
    for (const Token& t : train_set[s].tokens) {
      const auto id = model.tags.find(gold_tag(t, cfg.task));
      if (!id) throw ConfigError("training tag '" + gold_tag(t, cfg.task) + "' missing from tag set");
      gold[s].push_back(*id);
    }
  }

  OptimizerConfig oc;
  oc.learning_rate = cfg.learning_rate;
  oc.clip_norm = cfg.clip;
  Optimizer optimizer(oc);
  const std::vector<Parameter*> params = model.parameters();
  for (Parameter* p : params) p->zero_grad();

  const Corpus& scored = dev_set.empty() ? train_set : dev_set;
  TrainResult result{model, {}, 0, 0.0};
  bool have_best = false;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto order = shuffle_order(train_set.size(), mix_seed(cfg.seed, epoch));
    Rng dropout_rng = Rng::derive(mix_seed(cfg.seed, epoch), "dropout");
    double loss_sum = 0.0;
    for (std::size_t s : order) {
      const Sentence& sentence = train_set[s];
      if (sentence.tokens.empty()) continue;
      const std::string where =
          "epoch " + std::to_string(epoch) + ", sentence " + std::to_string(s);
      Graph g(Graph::Mode::kTrain);
      Var loss;
      try {
        ForwardPass f = forward(g, sentence, model, table, &dropout_rng);
        loss = sentence_loss(f.scores, gold[s]);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (" + where + ")");
      }
      const double value = loss.value()[0];
      if (!std::isfinite(value)) throw NumericError("non-finite loss at " + where);
      loss_sum += value;
      g.backward(loss);
      try {
        optimizer.step(params);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (" + where + ")");
      }
      for (Parameter* p : params) p->zero_grad();
    }
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(train_set.size());
    m.dev_metric = evaluate_metric(scored, model, table);
    result.log.push_back(m);

    if (!have_best || m.dev_metric > result.best_metric) {
      have_best = true;
      result.best_metric = m.dev_metric;
      result.best_epoch = epoch;
      result.model = model;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (cfg.target_metric && result.best_metric >= *cfg.target_metric) break;
    if (since_best > 0 && since_best >= cfg.patience) break;
  }
  return result;
}

TrainResult train(const Corpus& train_set, const Corpus& dev_set, const TrainConfig& config,
                  const EmbeddingTable& table) {
  return train(Model::create(config, train_set, table), train_set, dev_set, table);
}

}  // namespace comick
