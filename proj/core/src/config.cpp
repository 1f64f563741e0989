#include "comick/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>

#include "comick/errors.hpp"

namespace comick {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigEntries parse_config(std::istream& in) {
  ConfigEntries out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  if (value.empty() || value[0] == '-') {
    throw ConfigError("config key '" + key + "': not a non-negative integer: '" + value + "'");
  }
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': not a non-negative integer: '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + value + "'");
}

bool apply_train_option(TrainConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "task") {
      c.task = parse_task(value);
    } else if (key == "oov_mode") {
      c.oov_mode = parse_oov_mode(value);
    } else if (key == "seed") {
      c.seed = parse_uint(key, value);
    } else if (key == "epochs") {
      c.epochs = parse_uint(key, value);
      if (c.epochs < 1) throw ConfigError("config key 'epochs': must be at least 1");
    } else if (key == "patience") {
      c.patience = parse_uint(key, value);
    } else if (key == "kctx") {
      c.k_ctx = parse_uint(key, value);
    } else if (key == "learning_rate") {
      c.learning_rate = parse_double(key, value);
    } else if (key == "clip") {
      c.clip = parse_double(key, value);
    } else if (key == "dropout") {
      c.dropout = parse_double(key, value);
      if (c.dropout < 0.0 || c.dropout >= 1.0) {
        throw ConfigError("config key 'dropout': must be in [0, 1)");
      }
    } else if (key == "char_dim") {
      c.char_dim = parse_uint(key, value);
    } else if (key == "encoder_hidden") {
      c.encoder_hidden = parse_uint(key, value);
    } else if (key == "tagger_hidden") {
      c.tagger_hidden = parse_uint(key, value);
    } else if (key == "oov_min_count") {
      c.oov_min_count = parse_uint(key, value);
    } else if (key == "boundary_markers") {
      c.boundary_markers = parse_bool(key, value);
    } else if (key == "lowercase_lookup") {
      c.lowercase_lookup = parse_bool(key, value);
    } else if (key == "target_metric") {
      if (value.empty() || value == "none") {
        c.target_metric.reset();
      } else {
        c.target_metric = parse_double(key, value);
      }
    } else {
      return false;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
  return true;
}

ConfigEntries train_config_entries(const TrainConfig& c) {
  return {
      {"task", task_name(c.task)},
      {"oov_mode", oov_mode_name(c.oov_mode)},
      {"seed", std::to_string(c.seed)},
      {"epochs", std::to_string(c.epochs)},
      {"patience", std::to_string(c.patience)},
      {"kctx", std::to_string(c.k_ctx)},
      {"learning_rate", format_exact(c.learning_rate)},
      {"clip", format_exact(c.clip)},
      {"dropout", format_exact(c.dropout)},
      {"char_dim", std::to_string(c.char_dim)},
      {"encoder_hidden", std::to_string(c.encoder_hidden)},
      {"tagger_hidden", std::to_string(c.tagger_hidden)},
      {"oov_min_count", std::to_string(c.oov_min_count)},
      {"boundary_markers", c.boundary_markers ? "true" : "false"},
      {"lowercase_lookup", c.lowercase_lookup ? "true" : "false"},
      {"target_metric", c.target_metric ? format_exact(*c.target_metric) : "none"},
  };
}

}  // namespace comick
