#include <gtest/gtest.h>

#include "comick/errors.hpp"
#include "comick/metrics.hpp"

namespace comick {
namespace {

using Tags = std::vector<std::string>;

TEST(Spans, ExtractsMaximalRuns) {
  const auto spans = extract_spans({"B-PER", "I-PER", "O", "B-LOC", "B-LOC", "I-LOC"});
  const std::set<Span> expect = {{"PER", 0, 1}, {"LOC", 3, 3}, {"LOC", 4, 5}};
  EXPECT_EQ(spans, expect);
}

TEST(Spans, RepairsDanglingInside) {
  const auto spans = extract_spans({"O", "I-ORG", "I-ORG", "I-PER"});
  const std::set<Span> expect = {{"ORG", 1, 2}, {"PER", 3, 3}};
  EXPECT_EQ(spans, expect);
  EXPECT_TRUE(extract_spans({}).empty());
}

TEST(SpanF1, HandComputedFixture) {
  // Gold: PER[0,1], LOC[3], ORG[5]; predicted: PER[0,1], MISC[4].
  const std::vector<Tags> gold = {{"B-PER", "I-PER", "O", "B-LOC", "O", "B-ORG"}};
  const std::vector<Tags> pred = {{"B-PER", "I-PER", "O", "O", "B-MISC", "O"}};
  const SpanScores s = span_f1(pred, gold);
  EXPECT_DOUBLE_EQ(s.precision, 50.0);
  EXPECT_NEAR(s.recall, 100.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.f1, 40.0, 1e-12);
}

TEST(SpanF1, BoundaryMismatchIsWrong) {
  const std::vector<Tags> gold = {{"B-PER", "I-PER"}};
  const std::vector<Tags> pred = {{"B-PER", "O"}};
  const SpanScores s = span_f1(pred, gold);
  EXPECT_EQ(s.precision, 0.0);
  EXPECT_EQ(s.f1, 0.0);
}

TEST(SpanF1, EmptyCases) {
  const std::vector<Tags> none = {{"O", "O"}};
  const std::vector<Tags> one = {{"B-PER", "O"}};
  SpanScores s = span_f1(none, none);
  EXPECT_EQ(s.precision, 100.0);
  EXPECT_EQ(s.recall, 100.0);
  s = span_f1(none, one);
  EXPECT_EQ(s.precision, 0.0);
  EXPECT_EQ(s.recall, 0.0);
  EXPECT_EQ(s.f1, 0.0);
}

TEST(SpanF1, GoldAsPredictionIsPerfect) {
  const std::vector<Tags> gold = {{"B-PER", "I-PER", "O"}, {"B-LOC"}};
  const SpanScores s = span_f1(gold, gold);
  EXPECT_EQ(s.f1, 100.0);
}

TEST(SpanF1, MisalignedCorporaAreRejected) {
  EXPECT_THROW(span_f1({{"O"}}, {{"O"}, {"O"}}), ContractError);
  EXPECT_THROW(span_f1({{"O"}}, {{"O", "O"}}), ContractError);
}

TEST(Accuracy, Values) {
  EXPECT_DOUBLE_EQ(token_accuracy(Tags{"A", "B", "C", "D"}, Tags{"A", "B", "X", "D"}), 75.0);
  EXPECT_DOUBLE_EQ(token_accuracy(std::vector<Tags>{{"A"}, {"B", "C"}},
                                  std::vector<Tags>{{"A"}, {"B", "X"}}),
                   200.0 / 3.0);
  EXPECT_THROW(token_accuracy(Tags{}, Tags{}), ContractError);
  EXPECT_THROW(token_accuracy(Tags{"A"}, Tags{"A", "B"}), ContractError);
}

}  // namespace
}  // namespace comick
