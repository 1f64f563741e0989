#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "comick/tagger.hpp"

namespace comick {

inline constexpr const char* kCheckpointMagic = "COMICK1";

// Line-oriented text container:
//
//   COMICK1
//   config <key> <value>            (every TrainConfig field)
//   meta <key> <value>              (embedding_dim, free-form extras)
//   chars <n>                       followed by n code points, one per line
//   words <n>                       followed by n "word count" lines
//   learned <n>                     followed by n words
//   tags <n>                        followed by n tags
//   tensor <name> <rank> <dims...>  followed by one line of hex floats
//   end
//
// Values are written in hexadecimal floating point, so a load reproduces the
// parameters bit for bit and equal models give byte-identical files.
struct CheckpointExtras {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
};

void save_checkpoint(std::ostream& out, const Model& model, const CheckpointExtras& extras = {});
void save_checkpoint_file(const std::filesystem::path& path, const Model& model,
                          const CheckpointExtras& extras = {});

struct LoadedCheckpoint {
  Model model;
  CheckpointExtras extras;
};

// Verifies the magic line before reading anything else; throws FormatError on
// any malformed or missing section.
LoadedCheckpoint load_checkpoint(std::istream& in);
LoadedCheckpoint load_checkpoint_file(const std::filesystem::path& path);

}  // namespace comick
