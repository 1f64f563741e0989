#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "comick/tagger.hpp"

namespace comick {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Parses flat "key = value" text. '#' starts a comment; blank lines are
// ignored. Throws ConfigError with the line number on lines without '='.
ConfigEntries parse_config(std::istream& in);

// Sets one TrainConfig field. Returns false if key is not a TrainConfig key;
// throws ConfigError naming the key when the value does not parse.
bool apply_train_option(TrainConfig& config, const std::string& key, const std::string& value);

// Every TrainConfig field as key/value text, in a fixed order. Doubles are
// written exactly (hexadecimal floating point).
ConfigEntries train_config_entries(const TrainConfig& config);

std::string format_exact(double value);
double parse_double(const std::string& key, const std::string& value);
std::uint64_t parse_uint(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

}  // namespace comick
