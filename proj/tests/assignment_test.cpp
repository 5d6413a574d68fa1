#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "oieval/assignment.hpp"
#include "oieval/order_independent.hpp"
#include "oracles.hpp"

using namespace oieval;

namespace {

EntitySequence seq(std::vector<TaggedEntity> v) { return oracle::as_sequence(v); }

const TaggedEntity kJohn{"name", "John", {}};
const TaggedEntity kParis{"location", "Paris", {}};
const TaggedEntity kSpurious{"date", "1770", {}};

std::vector<std::vector<double>> to_rows(const CostMatrix& m) {
  std::vector<std::vector<double>> rows(m.size(), std::vector<double>(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) rows[r][c] = m.at(r, c);
  return rows;
}

bool is_permutation_of_indices(const std::vector<std::size_t>& p) {
  std::vector<bool> seen(p.size(), false);
  for (std::size_t c : p) {
    if (c >= p.size() || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

}  // namespace

TEST(Solver, SmallKnownProblem) {
  const CostMatrix m{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  const Assignment a = solve_assignment(m);
  EXPECT_DOUBLE_EQ(a.total_cost, 5.0);
  EXPECT_TRUE(is_permutation_of_indices(a.column_of_row));
}

TEST(Solver, EmptyMatrix) {
  const Assignment a = solve_assignment(CostMatrix(0));
  EXPECT_TRUE(a.column_of_row.empty());
  EXPECT_EQ(a.total_cost, 0.0);
}

TEST(Solver, RejectsBadInput) {
  EXPECT_THROW((CostMatrix{{1, 2}, {3}}), ContractViolation);
  EXPECT_THROW(CostMatrix::from_rows(2, 3, std::vector<double>(6, 0.0)), ContractViolation);
  EXPECT_THROW(solve_assignment(CostMatrix{{-1.0}}), ContractViolation);
  EXPECT_THROW(solve_assignment(CostMatrix{{std::numeric_limits<double>::quiet_NaN()}}), ContractViolation);
  EXPECT_THROW(solve_assignment(CostMatrix{{std::numeric_limits<double>::infinity()}}), ContractViolation);
}

TEST(Solver, MatchesPermutationSearch) {
  oracle::Generator gen(31);
  for (std::size_t n = 1; n <= 7; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      CostMatrix m(n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m.at(r, c) = gen.unit() * 10.0;
      const Assignment a = solve_assignment(m);
      ASSERT_TRUE(is_permutation_of_indices(a.column_of_row));
      double recomputed = 0.0;
      for (std::size_t r = 0; r < n; ++r) recomputed += m.at(r, a.column_of_row[r]);
      EXPECT_NEAR(a.total_cost, recomputed, 1e-9);
      EXPECT_NEAR(a.total_cost, oracle::brute_force_assignment(to_rows(m)), 1e-9);
    }
  }
}

TEST(Solver, HandlesManyTies) {
  oracle::Generator gen(32);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + gen.below(7);
    CostMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m.at(r, c) = static_cast<double>(gen.below(3));
    EXPECT_EQ(solve_assignment(m).total_cost, oracle::brute_force_assignment(to_rows(m)));
  }
}

TEST(Padding, DummiesCostOne) {
  const CostMatrix m = build_oi_cost_matrix(seq({kJohn}), seq({kJohn, kParis, kSpurious}), SubstitutionCostKind::ECER);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.at(0, 0), 0.0);
  EXPECT_EQ(m.at(0, 1), 1.0);
  for (std::size_t r = 1; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(m.at(r, c), 1.0);
}

TEST(Padding, NervalMatrixEncodesMatches) {
  const CostMatrix m = build_nerval_cost_matrix(seq({kJohn, kParis}), seq({kParis}), NervalConfig());
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at(0, 0), 2.0);
  EXPECT_EQ(m.at(1, 0), 0.0);
  EXPECT_EQ(m.at(0, 1), 1.0);
}

TEST(OrderIndependent, ReversedOrderIsFree) {
  EXPECT_EQ(oi_document(seq({kJohn, kParis}), seq({kParis, kJohn}), SubstitutionCostKind::ECER).total_cost, Exact(0));
}

TEST(OrderIndependent, SpuriousEntityCostsOne) {
  const DocumentCost c = oi_document(seq({kJohn, kParis}), seq({kParis, kSpurious, kJohn}), SubstitutionCostKind::ECER);
  EXPECT_EQ(c.total_cost, Exact(1));
  EXPECT_EQ(c.reference_length, 2u);
}

TEST(OrderIndependent, MatchesBruteForce) {
  oracle::Generator gen(33);
  for (int i = 0; i < 400; ++i) {
    const auto x = gen.sequence(5);
    const auto y = gen.below(3) ? gen.perturb(x) : gen.sequence(5);
    for (bool ecer : {true, false}) {
      const auto kind = ecer ? SubstitutionCostKind::ECER : SubstitutionCostKind::EWER;
      EXPECT_NEAR(to_double(oi_document(seq(x), seq(y), kind).total_cost), oracle::brute_force_oi_cost(x, y, ecer),
                  1e-12);
    }
  }
}

TEST(OrderIndependent, NervalMatchesMaxTpSearch) {
  oracle::Generator gen(34);
  for (int i = 0; i < 400; ++i) {
    const auto x = gen.sequence(6);
    const auto y = gen.perturb(x);
    for (double t : {0.0, 0.3, 1.0}) {
      const MatchCounts got = oi_nerval_document(seq(x), seq(y), NervalConfig(t));
      const oracle::Counts want = oracle::brute_force_oi_nerval(x, y, t);
      EXPECT_EQ(got.tp, want.tp);
      EXPECT_EQ(got.fp, want.fp);
      EXPECT_EQ(got.fn, want.fn);
    }
  }
}

TEST(OrderIndependent, ExactCostUsesRationals) {
  // Three thirds sum to exactly one.
  const auto x = seq({{"a", "abc", {}}, {"b", "abc", {}}, {"c", "abc", {}}});
  const auto y = seq({{"a", "abX", {}}, {"b", "aXc", {}}, {"c", "Xbc", {}}});
  EXPECT_EQ(oi_document(x, y, SubstitutionCostKind::ECER).total_cost, Exact(1));
}

TEST(OrderIndependent, CorpusRateNeedsReferenceEntities) {
  const Corpus c({{Document{"a", {}}, Document{"a", {{"x", Tag::begin("P")}}}}});
  EXPECT_THROW(oiecer_corpus(c, SubstitutionCostKind::ECER), InsufficientDataError);
}
