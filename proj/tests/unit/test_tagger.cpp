#include <gtest/gtest.h>

#include <cmath>

#include "comick/errors.hpp"
#include "comick/ops.hpp"
#include "comick/optimizer.hpp"
#include "comick/tagger.hpp"
#include "support/synthetic.hpp"

namespace comick {
namespace {

using namespace comick::testing;

Corpus one_sentence(const std::vector<std::pair<std::string, std::string>>& words) {
  Sentence s;
  for (const auto& [w, t] : words) s.tokens.push_back(make_token(w, t));
  return {s};
}

std::vector<Tensor> snapshot(const std::vector<const Parameter*>& ps) {
  std::vector<Tensor> out;
  for (const Parameter* p : ps) out.push_back(p->value);
  return out;
}

TEST(OovModes, ParseAndName) {
  EXPECT_EQ(parse_oov_mode("random"), OovMode::kRandom);
  EXPECT_STREQ(oov_mode_name(OovMode::kUnk), "unk");
  EXPECT_THROW(parse_oov_mode("zero"), ConfigError);
}

TEST(RandomBaseline, IsFixedPerTypeAndBounded) {
  const auto a = random_oov_vector(1, "foo", 16);
  EXPECT_EQ(a, random_oov_vector(1, "foo", 16));
  EXPECT_NE(a, random_oov_vector(1, "bar", 16));
  EXPECT_NE(a, random_oov_vector(2, "foo", 16));
  for (double v : a) {
    EXPECT_GE(v, -0.25);
    EXPECT_LT(v, 0.25);
  }
}

TEST(Argmax, TiesGoToLowestIndex) {
  EXPECT_EQ(argmax(Tensor::vector({0.2, 0.5, 0.5})), 1u);
  EXPECT_EQ(argmax(Tensor::vector({1.0, 1.0})), 0u);
}

TEST(SentenceLoss, UniformScoresGiveLogK) {
  Graph g;
  std::vector<Var> scores(3, g.constant(Tensor::vector({0.25, 0.25, 0.25, 0.25})));
  const std::vector<std::size_t> gold = {0, 3, 1};
  EXPECT_NEAR(sentence_loss(scores, gold).value()[0], std::log(4.0), 1e-11);
  EXPECT_THROW(sentence_loss(scores, std::vector<std::size_t>{0}), ContractError);
}

TEST(SentenceLoss, FixtureValue) {
  Graph g;
  std::vector<Var> scores = {g.constant(Tensor::vector({0.7, 0.2, 0.1})),
                             g.constant(Tensor::vector({0.1, 0.6, 0.3}))};
  const std::vector<std::size_t> gold = {0, 2};
  const double expect = (-std::log(0.7 + 1e-12) - std::log(0.3 + 1e-12)) / 2.0;
  EXPECT_NEAR(sentence_loss(scores, gold).value()[0], expect, 1e-15);
}

TEST(Model, CreateValidatesInputs) {
  SyntheticTask task = make_overfit_task(1, 6);
  TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, 1);
  EXPECT_THROW(Model::create(cfg, task.train, EmbeddingTable()), ConfigError);
  cfg.epochs = 0;
  EXPECT_THROW(Model::create(cfg, task.train, task.table), ConfigError);
  cfg.epochs = 1;
  const Model m = Model::create(cfg, task.train, task.table);
  EXPECT_TRUE(m.predictor.has_value());
  EXPECT_EQ(m.tags.size(), 4u);
  cfg.oov_mode = OovMode::kRandom;
  EXPECT_FALSE(Model::create(cfg, task.train, task.table).predictor.has_value());
}

TEST(Model, FrequentWordsGetLearnedRows) {
  EmbeddingTable table = random_table({"the"}, 3, 1);
  Corpus c = one_sentence({{"the", "DT"}, {"cat", "NN"}, {"cat", "NN"}, {"dog", "NN"}});
  TrainConfig cfg = small_config(Task::kPos, OovMode::kUnk, 1);
  cfg.oov_min_count = 2;
  Model m = Model::create(cfg, c, table);
  EXPECT_TRUE(m.learned.contains("cat"));
  EXPECT_FALSE(m.learned.contains("dog"));
  EXPECT_EQ(m.lexicon.learned.value.rows(), 1u);
  prepare_corpus(c, m, table);
  EXPECT_FALSE(c[0].tokens[1].is_oov);
  EXPECT_TRUE(c[0].tokens[3].is_oov);
}

TEST(Assemble, PredictorModeNeedsPredictor) {
  SyntheticTask task = make_overfit_task(2, 6);
  Model m = Model::create(small_config(Task::kPos, OovMode::kRandom, 2), task.train, task.table);
  prepare_corpus(task.train, m, task.table);
  m.config.oov_mode = OovMode::kPredictor;
  Graph g(Graph::Mode::kInference);
  EXPECT_THROW(assemble_embeddings(g, task.train[0], m, task.table), ConfigError);
}

TEST(Assemble, ModesDifferOnlyAtOovTokens) {
  EmbeddingTable table = random_table({"a", "b"}, 4, 3);
  Corpus c = one_sentence({{"a", "X"}, {"zzz", "Y"}, {"b", "X"}});
  std::vector<Tensor> oov_vectors;
  for (OovMode mode : {OovMode::kPredictor, OovMode::kRandom, OovMode::kUnk}) {
    Model m = Model::create(small_config(Task::kPos, mode, 3), c, table);
    prepare_corpus(c, m, table);
    Graph g(Graph::Mode::kInference);
    const AssembledSentence a = assemble_embeddings(g, c[0], m, table);
    EXPECT_EQ(a.embeddings[0].value(), Tensor::vector(table.at("a")));
    EXPECT_EQ(a.attention[1].has_value(), mode == OovMode::kPredictor);
    EXPECT_FALSE(a.attention[0].has_value());
    oov_vectors.push_back(a.embeddings[1].value());
    if (mode == OovMode::kRandom) {
      EXPECT_EQ(a.embeddings[1].value(), Tensor::vector(random_oov_vector(3, "zzz", 4)));
    }
    if (mode == OovMode::kUnk) EXPECT_EQ(a.embeddings[1].value(), m.lexicon.unk.value);
  }
  EXPECT_NE(oov_vectors[0], oov_vectors[1]);
}

TEST(Train, OneStepMovesPredictorWhenOovPresent) {
  EmbeddingTable table = random_table({"a", "b"}, 4, 4);
  Corpus c = one_sentence({{"a", "X"}, {"zzz", "Y"}, {"b", "X"}});
  TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, 4);
  cfg.epochs = 1;
  Model m = Model::create(cfg, c, table);
  prepare_corpus(c, m, table);
  std::vector<const Parameter*> before_ps;
  m.predictor->visit([&](const Parameter& p) { before_ps.push_back(&p); });
  const auto before = snapshot(before_ps);
  TrainResult r = train(m, c, {}, table);
  std::vector<const Parameter*> after_ps;
  r.model.predictor->visit([&](const Parameter& p) { after_ps.push_back(&p); });
  EXPECT_NE(snapshot(after_ps), before);
  EXPECT_EQ(r.log.size(), 1u);
}

TEST(Train, PredictorUntouchedWithoutOov) {
  EmbeddingTable table = random_table({"a", "b"}, 4, 5);
  Corpus c = one_sentence({{"a", "X"}, {"b", "Y"}});
  TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, 5);
  cfg.epochs = 3;
  Model m = Model::create(cfg, c, table);
  prepare_corpus(c, m, table);
  std::vector<const Parameter*> before_ps;
  m.predictor->visit([&](const Parameter& p) { before_ps.push_back(&p); });
  const auto before = snapshot(before_ps);
  TrainResult r = train(m, c, {}, table);
  std::vector<const Parameter*> after_ps;
  r.model.predictor->visit([&](const Parameter& p) { after_ps.push_back(&p); });
  EXPECT_EQ(snapshot(after_ps), before);
}

TEST(Train, ModeIsolationWithoutOov) {
  EmbeddingTable table = random_table({"a", "b", "c"}, 4, 6);
  Corpus c = one_sentence({{"a", "X"}, {"b", "Y"}, {"c", "X"}});
  std::vector<std::vector<EpochMetrics>> logs;
  std::vector<std::vector<Tensor>> taggers;
  for (OovMode mode : {OovMode::kPredictor, OovMode::kRandom, OovMode::kUnk}) {
    TrainConfig cfg = small_config(Task::kPos, mode, 6);
    cfg.epochs = 4;
    Model m = Model::create(cfg, c, table);
    prepare_corpus(c, m, table);
    TrainResult r = train(m, c, {}, table);
    logs.push_back(r.log);
    std::vector<const Parameter*> ps;
    r.model.tagger.visit([&](const Parameter& p) { ps.push_back(&p); });
    taggers.push_back(snapshot(ps));
  }
  for (std::size_t i = 1; i < 3; ++i) {
    ASSERT_EQ(logs[i].size(), logs[0].size());
    for (std::size_t e = 0; e < logs[0].size(); ++e) {
      EXPECT_EQ(logs[i][e].train_loss, logs[0][e].train_loss);
    }
    EXPECT_EQ(taggers[i], taggers[0]);
  }
}

TEST(Train, GradientReachesAttentionLayer) {
  SyntheticTask task = make_overfit_task(7, 6);
  Model m = Model::create(small_config(Task::kPos, OovMode::kPredictor, 7), task.train, task.table);
  prepare_corpus(task.train, m, task.table);
  bool reached = false;
  for (const Sentence& s : task.train) {
    bool has_oov = false;
    for (const Token& t : s.tokens) has_oov = has_oov || t.is_oov;
    if (!has_oov) continue;
    Graph g;
    const AssembledSentence a = assemble_embeddings(g, s, m, task.table);
    std::vector<std::size_t> gold;
    for (const Token& t : s.tokens) gold.push_back(*m.tags.find(t.pos));
    g.backward(sentence_loss(tag_scores(g, a.embeddings, m.tagger), gold));
    reached = m.predictor->attention_w.grad.squared_norm() > 0.0;
    break;
  }
  EXPECT_TRUE(reached);
}

TEST(Train, EarlyStoppingKeepsBestEpoch) {
  SyntheticTask task = make_heldout_oov_task(8, 6);
  TrainConfig cfg = small_config(Task::kPos, OovMode::kRandom, 8);
  cfg.epochs = 12;
  cfg.patience = 2;
  cfg.learning_rate = 0.05;
  Model m = Model::create(cfg, task.train, task.table);
  prepare_corpus(task.train, m, task.table);
  prepare_corpus(task.test, m, task.table);
  TrainResult r = train(m, task.train, task.test, task.table);
  double best = -1.0;
  std::size_t best_epoch = 0;
  for (const auto& e : r.log) {
    if (e.dev_metric > best) {
      best = e.dev_metric;
      best_epoch = e.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  EXPECT_EQ(r.best_metric, best);
  EXPECT_EQ(evaluate_metric(task.test, r.model, task.table), best);
  EXPECT_LE(r.log.size(), r.best_epoch + cfg.patience);
}

TEST(Train, TargetMetricStopsEarly) {
  SyntheticTask task = make_overfit_task(9, 8);
  TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, 9);
  cfg.epochs = 200;
  cfg.target_metric = 100.0;
  TrainResult r = fit(task, cfg);
  EXPECT_LT(r.log.size(), 200u);
  EXPECT_EQ(r.best_metric, 100.0);
}

TEST(Train, FullBatchLossDecreasesAtSmallRate) {
  SyntheticTask task = make_overfit_task(10, 8);
  TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, 10);
  Model m = Model::create(cfg, task.train, task.table);
  prepare_corpus(task.train, m, task.table);
  std::vector<std::vector<std::size_t>> gold;
  for (const Sentence& s : task.train) {
    gold.emplace_back();
    for (const Token& t : s.tokens) gold.back().push_back(*m.tags.find(t.pos));
  }
  OptimizerConfig oc;
  oc.learning_rate = 1e-3;
  Optimizer opt(oc);
  const auto params = m.parameters();
  double previous = INFINITY;
  for (int step = 0; step < 6; ++step) {
    double total = 0.0;
    for (std::size_t i = 0; i < task.train.size(); ++i) {
      Graph g;
      const AssembledSentence a = assemble_embeddings(g, task.train[i], m, task.table);
      const Var loss = scale(sentence_loss(tag_scores(g, a.embeddings, m.tagger), gold[i]),
                             1.0 / static_cast<double>(task.train.size()));
      total += loss.value()[0];
      g.backward(loss);
    }
    EXPECT_LT(total, previous) << "step " << step;
    previous = total;
    opt.step(params);
    for (Parameter* p : params) p->zero_grad();
  }
}

TEST(Train, NonFiniteValuesNameEpochAndSentence) {
  EmbeddingTable table = random_table({"a", "b"}, 4, 11);
  Corpus c = one_sentence({{"a", "X"}, {"zzz", "Y"}, {"b", "X"}});
  TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, 11);
  cfg.epochs = 1;
  Model m = Model::create(cfg, c, table);
  prepare_corpus(c, m, table);
  m.tagger.output_b.value[0] = NAN;
  try {
    train(m, c, {}, table);
    FAIL();
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("epoch 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("sentence 0"), std::string::npos) << msg;
  }
}

TEST(Train, SeedDeterminism) {
  auto run = [](std::uint64_t seed) {
    SyntheticTask task = make_overfit_task(12, 6);
    TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, seed);
    cfg.epochs = 2;
    cfg.dropout = 0.2;
    TrainResult r = fit(task, cfg);
    std::vector<const Parameter*> ps;
    for (const Parameter* p : std::as_const(r.model).parameters()) ps.push_back(p);
    return snapshot(ps);
  };
  EXPECT_EQ(run(1), run(1));
  EXPECT_NE(run(1), run(2));
}

TEST(Predict, DeterministicAndMatchesManualArgmax) {
  SyntheticTask task = make_overfit_task(13, 6);
  Model m = Model::create(small_config(Task::kPos, OovMode::kPredictor, 13), task.train, task.table);
  prepare_corpus(task.train, m, task.table);
  const Sentence& s = task.train[0];
  const auto tags = predict_tags(s, m, task.table);
  EXPECT_EQ(tags, predict_tags(s, m, task.table));
  Graph g(Graph::Mode::kInference);
  const AssembledSentence a = assemble_embeddings(g, s, m, task.table);
  const auto scores = tag_scores(g, a.embeddings, m.tagger);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(tags[i], m.tags.tag(argmax(scores[i].value())));
  }
}

}  // namespace
}  // namespace comick
