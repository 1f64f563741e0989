#include <benchmark/benchmark.h>

#include <string>

#include "comick/lstm.hpp"
#include "comick/optimizer.hpp"
#include "comick/predictor.hpp"
#include "comick/rng.hpp"
#include "comick/tagger.hpp"

namespace comick {
namespace {

constexpr std::size_t kDim = 50;

// Twenty 12-token sentences over 40 known words plus one OOV word per
// sentence, with random 50-d vectors for the known ones.
struct Fixture {
  Corpus corpus;
  EmbeddingTable table{kDim};
  Model model;

  explicit Fixture(OovMode mode) {
    Rng rng(1);
    for (int w = 0; w < 40; ++w) {
      std::vector<double> v(kDim);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      table.insert("w" + std::to_string(w), std::move(v));
    }
    for (int s = 0; s < 20; ++s) {
      Sentence sent;
      for (int i = 0; i < 12; ++i) {
        Token t;
        t.surface = i == 5 ? "unseen" + std::to_string(s) + "ing"
                           : "w" + std::to_string((s * 7 + i * 3) % 40);
        t.pos = i == 5 ? "VBG" : "NN";
        t.ner = i % 4 == 0 ? "B-PER" : "O";
        sent.tokens.push_back(std::move(t));
      }
      corpus.push_back(std::move(sent));
    }
    TrainConfig cfg;
    cfg.oov_mode = mode;
    model = Model::create(cfg, corpus, table);
    prepare_corpus(corpus, model, table);
  }
};

void BM_LstmStep(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const LstmParams p = LstmParams::init("bench", kDim, hidden, rng);
  Tensor x = Tensor::zeros(kDim);
  for (auto _ : state) {
    Graph g(Graph::Mode::kInference);
    LstmState s = lstm_zero_state(g, p);
    s = lstm_step(g.constant(x), s.h, s.c, p);
    benchmark::DoNotOptimize(s.h.value().data().data());
  }
}
BENCHMARK(BM_LstmStep)->Arg(50)->Arg(100);

void BM_PredictOov(benchmark::State& state) {
  const Fixture f(OovMode::kPredictor);
  const Sentence& s = f.corpus[0];
  const WordSources src = f.model.sources(f.table);
  for (auto _ : state) {
    Graph g(Graph::Mode::kInference);
    const OovPrediction p =
        predict_oov(g, s, 5, f.model.config.k_ctx, *f.model.predictor, f.model.lexicon, src);
    benchmark::DoNotOptimize(p.triple.word);
  }
}
BENCHMARK(BM_PredictOov);

void BM_TagSentence(benchmark::State& state) {
  const Fixture f(static_cast<OovMode>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_tags(f.corpus[0], f.model, f.table));
  }
}
BENCHMARK(BM_TagSentence)
    ->Arg(static_cast<int>(OovMode::kPredictor))
    ->Arg(static_cast<int>(OovMode::kRandom));

// Forward, backward and one Adam update on a single sentence.
void BM_TrainStep(benchmark::State& state) {
  Fixture f(OovMode::kPredictor);
  const auto params = f.model.parameters();
  Optimizer opt;
  std::vector<std::size_t> gold;
  for (const Token& t : f.corpus[0].tokens) gold.push_back(*f.model.tags.find(t.ner));
  for (auto _ : state) {
    for (Parameter* p : params) p->zero_grad();
    Graph g;
    const AssembledSentence a = assemble_embeddings(g, f.corpus[0], f.model, f.table);
    const std::vector<Var> scores = tag_scores(g, a.embeddings, f.model.tagger);
    g.backward(sentence_loss(scores, gold));
    opt.step(params);
  }
}
BENCHMARK(BM_TrainStep);

}  // namespace
}  // namespace comick

BENCHMARK_MAIN();
