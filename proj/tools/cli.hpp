#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "comick/tagger.hpp"

namespace comick::cli {

// Everything a command may need: the training options plus file paths and
// per-command arguments.
struct RunConfig {
  TrainConfig train;
  std::set<std::string> explicit_keys;  // keys set by file, environment or flag

  std::string train_path;
  std::string dev_path;
  std::string test_path;
  std::string embeddings_path;
  std::optional<std::size_t> embedding_dim;
  std::string checkpoint_path;
  std::string metrics_log_path;
  std::string out_path;
  std::string split = "dev";
  std::string corpus_path;
  std::string word;
  std::string mode;
  std::string sentence;
  std::optional<std::size_t> position;
  std::size_t k_show = 7;
  bool gold_as_pred = false;

  bool has(const std::string& key) const { return explicit_keys.count(key) > 0; }
};

// Applies one key; throws ConfigError naming unknown keys.
void apply_option(RunConfig& config, const std::string& key, const std::string& value);

// Defaults < config file < flags; COMICK_SEED (when set) fills the seed only if
// neither the file nor a flag did.
RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const std::vector<std::pair<std::string, std::string>>& flags,
                         const char* env_seed);

void cmd_train(const RunConfig& config, std::ostream& out);
void cmd_evaluate(const RunConfig& config, std::ostream& out);
void cmd_analyze(const RunConfig& config, std::ostream& out);
void cmd_embed(const RunConfig& config, std::ostream& out);

// Parses argv and dispatches. Errors print one "comick: error: ..." line to err
// and return a nonzero status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace comick::cli
