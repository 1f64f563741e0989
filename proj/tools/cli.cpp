#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "comick/analysis.hpp"
#include "comick/checkpoint.hpp"
#include "comick/config.hpp"
#include "comick/embeddings.hpp"
#include "comick/errors.hpp"
#include "comick/metrics.hpp"

namespace comick::cli {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  return out;
}

Corpus read_corpus(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " corpus path given");
  return read_conll_file(path);
}

EmbeddingTable read_embeddings(const std::string& path, std::optional<std::size_t> dim,
                               bool lowercase) {
  if (path.empty()) throw ConfigError("no embeddings path given");
  EmbeddingTable t = load_embeddings_file(path, dim);
  t.set_lowercase_fallback(lowercase);
  return t;
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Model, pretrained table and extras behind a saved checkpoint.
struct Loaded {
  LoadedCheckpoint checkpoint;
  EmbeddingTable table;
};

Loaded load_for_inference(const RunConfig& config) {
  if (config.checkpoint_path.empty()) throw ConfigError("no checkpoint path given");
  Loaded l{load_checkpoint_file(config.checkpoint_path), {}};
  const Model& m = l.checkpoint.model;
  if (config.has("task") && config.train.task != m.config.task) {
    throw ConfigError(std::string("task mismatch: checkpoint was trained for ") +
                      task_name(m.config.task) + ", requested " + task_name(config.train.task));
  }
  std::string emb = config.embeddings_path;
  if (emb.empty()) {
    if (const auto* p = l.checkpoint.extras.find("embeddings")) emb = *p;
  }
  l.table = read_embeddings(emb, m.embedding_dim, m.config.lowercase_lookup);
  return l;
}

Corpus corpus_for(const RunConfig& config, const CheckpointExtras& extras) {
  std::string path = config.corpus_path;
  if (path.empty()) {
    const std::string& split = config.split;
    if (split != "train" && split != "dev" && split != "test") {
      throw ConfigError("config key 'split': expected train, dev or test, got '" + split + "'");
    }
    path = split == "train" ? config.train_path : split == "dev" ? config.dev_path : config.test_path;
    if (path.empty()) {
      if (const auto* p = extras.find(split)) path = *p;
    }
  }
  return read_corpus(path, config.split.c_str());
}

}  // namespace

void apply_option(RunConfig& c, const std::string& key, const std::string& value) {
  if (apply_train_option(c.train, key, value)) {
  } else if (key == "train") {
    c.train_path = value;
  } else if (key == "dev") {
    c.dev_path = value;
  } else if (key == "test") {
    c.test_path = value;
  } else if (key == "embeddings") {
    c.embeddings_path = value;
  } else if (key == "embedding_dim") {
    c.embedding_dim = parse_uint(key, value);
  } else if (key == "checkpoint") {
    c.checkpoint_path = value;
  } else if (key == "metrics_log") {
    c.metrics_log_path = value;
  } else if (key == "out") {
    c.out_path = value;
  } else if (key == "split") {
    c.split = value;
  } else if (key == "corpus") {
    c.corpus_path = value;
  } else if (key == "word") {
    c.word = value;
  } else if (key == "mode") {
    c.mode = value;
  } else if (key == "sentence") {
    c.sentence = value;
  } else if (key == "position") {
    c.position = parse_uint(key, value);
  } else if (key == "k_show") {
    c.k_show = parse_uint(key, value);
  } else if (key == "gold_as_pred") {
    c.gold_as_pred = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
  c.explicit_keys.insert(key);
}

RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const std::vector<std::pair<std::string, std::string>>& flags,
                         const char* env_seed) {
  RunConfig c;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw ConfigError("cannot read config file: " + *config_path);
    for (const auto& [k, v] : parse_config(in)) apply_option(c, k, v);
  }
  bool flag_seed = false;
  for (const auto& [k, v] : flags) flag_seed = flag_seed || k == "seed";
  if (!c.has("seed") && !flag_seed && env_seed != nullptr && *env_seed != '\0') {
    apply_option(c, "seed", env_seed);
  }
  for (const auto& [k, v] : flags) apply_option(c, k, v);
  return c;
}

void cmd_train(const RunConfig& config, std::ostream& out) {
  if (!config.has("seed")) {
    throw ConfigError("no seed given (use --seed, a 'seed' config key or COMICK_SEED)");
  }
  if (config.checkpoint_path.empty()) throw ConfigError("no checkpoint path given");
  const TrainConfig& tc = config.train;
  EmbeddingTable table =
      read_embeddings(config.embeddings_path, config.embedding_dim, tc.lowercase_lookup);
  Corpus train_set = read_corpus(config.train_path, "train");
  if (train_set.empty()) throw ConfigError("training corpus is empty: " + config.train_path);
  Corpus dev_set;
  if (!config.dev_path.empty()) dev_set = read_conll_file(config.dev_path);

  Model model = Model::create(tc, train_set, table);
  prepare_corpus(train_set, model, table);
  prepare_corpus(dev_set, model, table);
  const TrainResult result = train(std::move(model), train_set, dev_set, table);

  const std::string log_path =
      config.metrics_log_path.empty() ? config.checkpoint_path + ".metrics.tsv"
                                      : config.metrics_log_path;
  {
    std::ofstream log = open_output(log_path);
    log << "epoch\ttrain_loss\tdev_metric\n";
    for (const EpochMetrics& m : result.log) {
      log << m.epoch << '\t' << format_metric(m.train_loss) << '\t'
          << format_metric(m.dev_metric) << '\n';
    }
  }
  CheckpointExtras extras;
  extras.entries.emplace_back("embeddings", config.embeddings_path);
  if (!config.train_path.empty()) extras.entries.emplace_back("train", config.train_path);
  if (!config.dev_path.empty()) extras.entries.emplace_back("dev", config.dev_path);
  if (!config.test_path.empty()) extras.entries.emplace_back("test", config.test_path);
  extras.entries.emplace_back("best_epoch", std::to_string(result.best_epoch));
  save_checkpoint_file(config.checkpoint_path, result.model, extras);

  for (const EpochMetrics& m : result.log) {
    out << "epoch " << m.epoch << " loss " << format_metric(m.train_loss) << " dev "
        << format2(m.dev_metric) << '\n';
  }
  out << "best epoch " << result.best_epoch << " dev " << format2(result.best_metric) << '\n';
  out << "checkpoint " << config.checkpoint_path << '\n';
  out << "metrics " << log_path << '\n';
}

void cmd_evaluate(const RunConfig& config, std::ostream& out) {
  Loaded l = load_for_inference(config);
  const Model& model = l.checkpoint.model;
  Corpus corpus = corpus_for(config, l.checkpoint.extras);
  if (corpus.empty()) throw ConfigError("evaluation corpus is empty");
  prepare_corpus(corpus, model, l.table);

  std::vector<std::vector<std::string>> pred, gold;
  for (const Sentence& s : corpus) {
    gold.push_back(gold_tags(s, model.config.task));
    pred.push_back(config.gold_as_pred ? gold.back() : predict_tags(s, model, l.table));
  }
  std::ostringstream csv;
  csv << "metric,value\n";
  if (model.config.task == Task::kNer) {
    const SpanScores sc = span_f1(pred, gold);
    out << "precision " << format2(sc.precision) << '\n'
        << "recall " << format2(sc.recall) << '\n'
        << "F1 " << format2(sc.f1) << '\n';
    csv << "precision," << format2(sc.precision) << "\nrecall," << format2(sc.recall)
        << "\nf1," << format2(sc.f1) << '\n';
  } else {
    const double acc = token_accuracy(pred, gold);
    out << "accuracy " << format2(acc) << '\n';
    csv << "accuracy," << format2(acc) << '\n';
  }
  if (!config.out_path.empty()) {
    std::ofstream f = open_output(config.out_path);
    f << csv.str();
  }
}

void cmd_analyze(const RunConfig& config, std::ostream& out) {
  if (config.mode != "by-tag" && config.mode != "trace") {
    throw ConfigError("analyze needs --mode by-tag or --mode trace");
  }
  if (config.mode == "trace" && config.word.empty()) {
    throw ConfigError("trace mode needs --word");
  }
  Loaded l = load_for_inference(config);
  const Model& model = l.checkpoint.model;
  Corpus corpus = corpus_for(config, l.checkpoint.extras);
  prepare_corpus(corpus, model, l.table);
  const std::string prefix = config.out_path.empty() ? "analysis" : config.out_path;

  std::ostringstream text, csv;
  if (config.mode == "by-tag") {
    const auto rows = attention_by_tag(corpus, model, l.table);
    write_tag_attention_text(text, rows);
    write_tag_attention_csv(csv, rows);
  } else {
    const auto rows = attention_trace(config.word, corpus, model, l.table, config.k_show);
    write_trace_text(text, rows);
    write_trace_csv(csv, rows);
  }
  {
    std::ofstream f = open_output(prefix + ".txt");
    f << text.str();
  }
  {
    std::ofstream f = open_output(prefix + ".csv");
    f << csv.str();
  }
  out << text.str();
}

void cmd_embed(const RunConfig& config, std::ostream& out) {
  if (config.sentence.empty()) throw ConfigError("embed needs --sentence");
  if (!config.position) throw ConfigError("embed needs --position");
  Loaded l = load_for_inference(config);
  const Model& model = l.checkpoint.model;
  if (!model.predictor) throw ConfigError("embed needs a predictor-mode checkpoint");

  Corpus corpus(1);
  std::istringstream words(config.sentence);
  std::string w;
  while (words >> w) {
    Token t;
    t.surface = w;
    t.pos = "-";
    t.ner = "O";
    corpus[0].tokens.push_back(std::move(t));
  }
  prepare_corpus(corpus, model, l.table);
  const Sentence& s = corpus[0];
  const std::size_t pos = *config.position;
  if (pos >= s.size()) {
    throw ConfigError("position " + std::to_string(pos) + " is outside the " +
                      std::to_string(s.size()) + "-token sentence");
  }
  if (!s.tokens[pos].is_oov) {
    throw ConfigError("'" + s.tokens[pos].surface +
                      "' is in the vocabulary; only OOV words get predicted embeddings");
  }
  Graph g(Graph::Mode::kInference);
  const OovPrediction p = predict_oov(g, s, pos, model.config.k_ctx, *model.predictor,
                                      model.lexicon, model.sources(l.table));
  out << "attention word " << format2(p.triple.word) << " left " << format2(p.triple.left)
      << " right " << format2(p.triple.right) << '\n';
  out << "embedding";
  char buf[64];
  for (double v : p.embedding.value().data()) {
    std::snprintf(buf, sizeof buf, " %.6f", v);
    out << buf;
  }
  out << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Context- and character-aware OOV embedding prediction for sequence tagging",
               "comick"};
  app.require_subcommand(1, 1);

  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "key=value configuration file");

  // Flag name -> config key, in the order they are applied.
  const std::vector<std::pair<std::string, std::string>> flag_keys = {
      {"--task", "task"},         {"--oov-mode", "oov_mode"}, {"--seed", "seed"},
      {"--kctx", "kctx"},         {"--epochs", "epochs"},     {"--checkpoint", "checkpoint"},
      {"--split", "split"},       {"--word", "word"},         {"--out", "out"},
      {"--corpus", "corpus"},     {"--embeddings", "embeddings"},
      {"--mode", "mode"},         {"--sentence", "sentence"}, {"--position", "position"},
  };
  std::vector<std::optional<std::string>> flag_values(flag_keys.size());
  for (std::size_t i = 0; i < flag_keys.size(); ++i) {
    app.add_option(flag_keys[i].first, flag_values[i]);
  }
  bool gold_as_pred = false;
  app.add_flag("--gold-as-pred", gold_as_pred, "score gold tags as predictions (evaluate)");
  std::vector<std::string> sets;
  app.add_option("--set", sets, "extra key=value overrides");

  auto* train_cmd = app.add_subcommand("train", "train a tagger and write a checkpoint");
  auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint on a corpus");
  auto* analyze_cmd = app.add_subcommand("analyze", "attention reports by tag or per word");
  auto* embed_cmd = app.add_subcommand("embed", "predict the embedding of one OOV word");
  for (auto* sub : {train_cmd, eval_cmd, analyze_cmd, embed_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "comick: error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::vector<std::pair<std::string, std::string>> flags;
    for (std::size_t i = 0; i < flag_keys.size(); ++i) {
      if (flag_values[i]) flags.emplace_back(flag_keys[i].second, *flag_values[i]);
    }
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      flags.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (gold_as_pred) flags.emplace_back("gold_as_pred", "true");
    const RunConfig config = resolve_config(config_path, flags, std::getenv("COMICK_SEED"));

    if (train_cmd->parsed()) {
      cmd_train(config, out);
    } else if (eval_cmd->parsed()) {
      cmd_evaluate(config, out);
    } else if (analyze_cmd->parsed()) {
      cmd_analyze(config, out);
    } else {
      cmd_embed(config, out);
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << "comick: error: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace comick::cli
