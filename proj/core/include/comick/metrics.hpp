#pragma once

#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace comick {

// Entity span over inclusive token indices.
struct Span {
  std::string type;
  std::size_t start = 0;
  std::size_t end = 0;

  friend auto operator<=>(const Span& a, const Span& b) {
    return std::tie(a.start, a.end, a.type) <=> std::tie(b.start, b.end, b.type);
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// Maximal B-X (I-X)* runs. Ill-formed input is first repaired the way
// iob1_to_bio does (an I-X that cannot continue an entity opens a new one).
std::set<Span> extract_spans(const std::vector<std::string>& tags);

struct SpanScores {
  double precision = 0.0;  // percent
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro-averaged exact-match span scores over aligned corpora of tag
// sequences. With no predicted spans precision is 100 if there are no gold
// spans either and 0 otherwise; F1 is 0 when P + R is 0. Throws
// ContractError when the corpora are not aligned.
SpanScores span_f1(const std::vector<std::vector<std::string>>& pred,
                   const std::vector<std::vector<std::string>>& gold);

// Percentage of matching tags. Throws ContractError on misalignment or when
// there are no tokens at all.
double token_accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold);
double token_accuracy(const std::vector<std::vector<std::string>>& pred,
                      const std::vector<std::vector<std::string>>& gold);

}  // namespace comick
