#include <vector>

#include <gtest/gtest.h>

#include "oieval/sequential.hpp"
#include "oracles.hpp"

using namespace oieval;

namespace {

EntitySequence seq(std::vector<TaggedEntity> v) { return oracle::as_sequence(v); }

const TaggedEntity kJohn{"name", "John", {}};
const TaggedEntity kParis{"location", "Paris", {}};

}  // namespace

TEST(Ecer, ReversedOrderCostsTwo) {
  const auto cost = ecer_ewer_document(seq({kJohn, kParis}), seq({kParis, kJohn}), SubstitutionCostKind::ECER);
  EXPECT_EQ(cost.total_cost, Exact(2));
  EXPECT_EQ(cost.reference_length, 2u);
  EXPECT_DOUBLE_EQ(cost.normalized(), 1.0);
}

TEST(Ecer, SubstitutionBlendsTagAndTranscription) {
  EXPECT_DOUBLE_EQ(entity_substitution_cost(kJohn, {"name", "Jhn", {}}, SubstitutionCostKind::ECER).value, 0.25);
  EXPECT_DOUBLE_EQ(entity_substitution_cost(kJohn, {"place", "John", {}}, SubstitutionCostKind::ECER).value, 1.0);
  EXPECT_DOUBLE_EQ(entity_substitution_cost({"d", "26 mai 1770", {}}, {"d", "26 mai 1771", {}},
                                            SubstitutionCostKind::EWER).value,
                   1.0 / 3.0);
}

TEST(Ecer, EmptySequences) {
  EXPECT_EQ(ecer_ewer_document(seq({}), seq({kJohn}), SubstitutionCostKind::ECER).total_cost, Exact(1));
  EXPECT_EQ(ecer_ewer_document(seq({kJohn}), seq({}), SubstitutionCostKind::ECER).total_cost, Exact(1));
  EXPECT_EQ(ecer_ewer_document(seq({}), seq({}), SubstitutionCostKind::ECER).total_cost, Exact(0));
}

TEST(Ecer, MatchesExhaustiveAlignment) {
  oracle::Generator gen(21);
  for (int i = 0; i < 500; ++i) {
    const auto x = gen.sequence(5);
    const auto y = gen.below(2) ? gen.perturb(x) : gen.sequence(5);
    for (bool ecer : {true, false}) {
      const auto kind = ecer ? SubstitutionCostKind::ECER : SubstitutionCostKind::EWER;
      const double got = to_double(ecer_ewer_document(seq(x), seq(y), kind).total_cost);
      EXPECT_NEAR(got, oracle::brute_force_monotone(x, y, ecer), 1e-12);
    }
  }
}

TEST(Ecer, CorpusNeedsReferenceEntities) {
  const Corpus c({{Document{"a", {}}, Document{"a", {}}}});
  EXPECT_THROW(ecer_corpus(c, SubstitutionCostKind::ECER), InsufficientDataError);
}

TEST(Nerval, ThresholdIsInclusive) {
  const PairwiseEdits pairs(seq({{"x", "abcdefghij", {}}}), seq({{"x", "abcdefgXYZ", {}}}));
  EXPECT_EQ(nerval_document(pairs, NervalConfig(0.30)).tp, 1u);
  EXPECT_EQ(nerval_document(pairs, NervalConfig(0.29)).tp, 0u);
}

TEST(Nerval, ConfigRejectsOutOfRange) {
  EXPECT_THROW(NervalConfig(-0.1), std::invalid_argument);
  EXPECT_THROW(NervalConfig(1.5), std::invalid_argument);
  EXPECT_NO_THROW(NervalConfig(0.0));
  EXPECT_NO_THROW(NervalConfig(1.0));
}

TEST(Nerval, ReversedOrderMatchesOnlyOne) {
  const MatchCounts c = nerval_document(seq({kJohn, kParis}), seq({kParis, kJohn}), NervalConfig());
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
}

TEST(Nerval, CountsAreConsistent) {
  oracle::Generator gen(22);
  for (int i = 0; i < 500; ++i) {
    const auto x = gen.sequence(6);
    const auto y = gen.perturb(x);
    const MatchCounts c = nerval_document(seq(x), seq(y), NervalConfig());
    EXPECT_EQ(c.tp + c.fn, x.size());
    EXPECT_EQ(c.tp + c.fp, y.size());
    // A monotone matching never beats the order-free maximum.
    EXPECT_LE(c.tp, oracle::brute_force_oi_nerval(x, y, 0.30).tp);
  }
}

TEST(Nerval, MonotoneMatchIsMaximal) {
  // Longest common subsequence under the match relation.
  oracle::Generator gen(23);
  for (int i = 0; i < 500; ++i) {
    const auto x = gen.sequence(6);
    const auto y = gen.perturb(x);
    std::vector<std::vector<std::size_t>> lcs(x.size() + 1, std::vector<std::size_t>(y.size() + 1, 0));
    for (std::size_t a = 1; a <= x.size(); ++a)
      for (std::size_t b = 1; b <= y.size(); ++b) {
        const bool ok = x[a - 1].category == y[b - 1].category &&
                        oracle::capped_cer(x[a - 1].transcription, y[b - 1].transcription) <= 0.30;
        lcs[a][b] = std::max({lcs[a - 1][b], lcs[a][b - 1], lcs[a - 1][b - 1] + (ok ? 1 : 0)});
      }
    EXPECT_EQ(nerval_document(seq(x), seq(y), NervalConfig()).tp, lcs[x.size()][y.size()]);
  }
}
