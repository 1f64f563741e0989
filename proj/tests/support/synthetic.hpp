#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "comick/corpus.hpp"
#include "comick/embeddings.hpp"
#include "comick/tagger.hpp"

namespace comick::testing {

// Random table with one dim-sized vector per word.
EmbeddingTable random_table(const std::vector<std::string>& words, std::size_t dim,
                            std::uint64_t seed);

// Lowercase letter string of the given length.
std::string random_word(Rng& rng, std::size_t length);

Token make_token(const std::string& surface, const std::string& pos = "NN",
                 const std::string& ner = "O");
Sentence make_sentence(const std::vector<std::string>& surfaces);

// A synthetic task: corpora plus the pretrained table they were built against.
struct SyntheticTask {
  Corpus train;
  Corpus test;
  EmbeddingTable table;
  std::vector<std::string> oov_words;
};

// 50 sentences over a 60-word vocabulary of which 12 types (20%) have no
// pretrained vector. Every word type carries one fixed POS-column tag.
SyntheticTask make_overfit_task(std::uint64_t seed, std::size_t dim);

// Each sentence holds one target OOV token whose tag is fixed by the word
// right before it. The same OOV strings also appear as fillers, and every
// string occurs with both classes, so the characters carry no tag signal.
SyntheticTask make_context_keyed_task(std::uint64_t seed, std::size_t dim,
                                      std::size_t sentences);

// Each sentence holds one OOV token whose tag is fixed by its suffix; the
// neighbouring words are uninformative.
SyntheticTask make_suffix_keyed_task(std::uint64_t seed, std::size_t dim,
                                     std::size_t sentences);

// OOV-heavy corpus whose test split only uses OOV types never seen in
// training. Tags of OOV tokens follow their suffix.
SyntheticTask make_heldout_oov_task(std::uint64_t seed, std::size_t dim);

// Small dimensions that keep desk-scale training fast.
TrainConfig small_config(Task task, OovMode mode, std::uint64_t seed);

// Builds a model from task.train, prepares both splits against it and trains
// with the training split doubling as the dev set.
TrainResult fit(SyntheticTask& task, const TrainConfig& config);

// Mean attention over every OOV token of a prepared corpus.
AttentionTriple mean_attention(const Corpus& corpus, const Model& model,
                               const EmbeddingTable& table);

}  // namespace comick::testing
