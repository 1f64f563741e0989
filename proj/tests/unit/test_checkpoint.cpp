#include <gtest/gtest.h>

#include <sstream>

#include "comick/checkpoint.hpp"
#include "comick/config.hpp"
#include "comick/errors.hpp"
#include "support/synthetic.hpp"

namespace comick {
namespace {

using namespace comick::testing;

std::string save(const Model& m, const CheckpointExtras& extras = {}) {
  std::ostringstream os;
  save_checkpoint(os, m, extras);
  return os.str();
}

LoadedCheckpoint load(const std::string& text) {
  std::istringstream in(text);
  return load_checkpoint(in);
}

Model trained_model(OovMode mode) {
  SyntheticTask task = make_overfit_task(3, 6);
  TrainConfig cfg = small_config(Task::kPos, mode, 3);
  cfg.epochs = 1;
  cfg.oov_min_count = 2;
  cfg.target_metric = 97.5;
  return fit(task, cfg).model;
}

TEST(Checkpoint, RoundTripIsBitExact) {
  for (OovMode mode : {OovMode::kPredictor, OovMode::kRandom, OovMode::kUnk}) {
    const Model m = trained_model(mode);
    CheckpointExtras extras;
    extras.entries.emplace_back("embeddings", "/data/vectors with space.txt");
    const std::string first = save(m, extras);
    EXPECT_EQ(first.rfind("COMICK1\n", 0), 0u);
    const LoadedCheckpoint l = load(first);
    EXPECT_EQ(save(l.model, l.extras), first);
    ASSERT_NE(l.extras.find("embeddings"), nullptr);
    EXPECT_EQ(*l.extras.find("embeddings"), "/data/vectors with space.txt");

    const auto a = m.parameters();
    const auto b = l.model.parameters();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i]->name, b[i]->name);
      EXPECT_EQ(a[i]->value, b[i]->value) << a[i]->name;
    }
    EXPECT_EQ(l.model.tags.tags(), m.tags.tags());
    EXPECT_EQ(l.model.learned.words(), m.learned.words());
    EXPECT_EQ(l.model.chars.chars(), m.chars.chars());
    EXPECT_EQ(train_config_entries(l.model.config), train_config_entries(m.config));
  }
}

TEST(Checkpoint, LoadedModelPredictsIdentically) {
  SyntheticTask task = make_overfit_task(4, 6);
  TrainConfig cfg = small_config(Task::kPos, OovMode::kPredictor, 4);
  cfg.epochs = 2;
  const Model m = fit(task, cfg).model;
  const Model l = load(save(m)).model;
  for (const Sentence& s : task.train) {
    EXPECT_EQ(predict_tags(s, l, task.table), predict_tags(s, m, task.table));
  }
}

TEST(Checkpoint, RejectsBadMagic) {
  const std::string good = save(trained_model(OovMode::kUnk));
  EXPECT_THROW(load("COMICK0" + good.substr(7)), FormatError);
  EXPECT_THROW(load(""), FormatError);
  EXPECT_THROW(load("{\"json\": true}\n"), FormatError);
}

TEST(Checkpoint, RejectsTruncatedOrCorruptBody) {
  const std::string good = save(trained_model(OovMode::kPredictor));
  EXPECT_THROW(load(good.substr(0, good.size() / 2)), FormatError);
  std::string no_end = good.substr(0, good.rfind("end"));
  EXPECT_THROW(load(no_end), FormatError);
  std::string bad_shape = good;
  const auto at = bad_shape.find("tensor tagger.output_b 1 ");
  ASSERT_NE(at, std::string::npos);
  bad_shape.replace(at, 25, "tensor tagger.output_b 1 9");
  EXPECT_THROW(load(bad_shape), FormatError);
}

TEST(Checkpoint, MissingFile) {
  EXPECT_THROW(load_checkpoint_file("/nonexistent/comick.ckpt"), Error);
}

TEST(Config, ParsesKeyValueText) {
  std::istringstream in("# comment\nseed = 4\n\n  epochs=3 # trailing\n");
  const ConfigEntries e = parse_config(in);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0], (std::pair<std::string, std::string>{"seed", "4"}));
  EXPECT_EQ(e[1], (std::pair<std::string, std::string>{"epochs", "3"}));
  std::istringstream bad("seed 4\n");
  try {
    parse_config(bad);
    FAIL();
  } catch (const ConfigError& err) {
    EXPECT_NE(std::string(err.what()).find("line 1"), std::string::npos);
  }
}

TEST(Config, TrainOptionsRoundTrip) {
  TrainConfig c;
  EXPECT_TRUE(apply_train_option(c, "learning_rate", "0.1"));
  EXPECT_TRUE(apply_train_option(c, "task", "pos"));
  EXPECT_TRUE(apply_train_option(c, "target_metric", "99.5"));
  EXPECT_FALSE(apply_train_option(c, "bogus", "1"));
  EXPECT_THROW(apply_train_option(c, "epochs", "ten"), ConfigError);
  EXPECT_THROW(apply_train_option(c, "boundary_markers", "maybe"), ConfigError);
  TrainConfig d;
  for (const auto& [k, v] : train_config_entries(c)) EXPECT_TRUE(apply_train_option(d, k, v));
  EXPECT_EQ(train_config_entries(d), train_config_entries(c));
  EXPECT_EQ(d.learning_rate, 0.1);
  EXPECT_EQ(d.target_metric, 99.5);
}

}  // namespace
}  // namespace comick
