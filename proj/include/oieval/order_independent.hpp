#pragma once

// Reading-order-independent OIECER, OIEWER and OINerval: the monotone
// alignment is replaced by an optimal one-to-one assignment over a square
// matrix padded with dummy entities.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "oieval/assignment.hpp"
#include "oieval/corpus.hpp"
#include "oieval/counts.hpp"
#include "oieval/pairwise.hpp"
#include "oieval/sequential.hpp"

namespace oieval {

/// A row or column of a padded matrix: a real entity index, or a dummy.
struct AssignmentSlot {
  std::optional<std::size_t> entity;

  bool is_dummy() const noexcept { return !entity.has_value(); }
  friend bool operator==(const AssignmentSlot&, const AssignmentSlot&) = default;
};

/// Padded problem: rows [0, reference_count) and columns [0, hypothesis_count)
/// are real entities, everything beyond is a dummy.
struct PaddedProblem {
  std::size_t reference_count = 0;
  std::size_t hypothesis_count = 0;
  CostMatrix matrix;
  std::vector<Exact> exact;  // row-major, same layout as matrix

  std::size_t size() const noexcept { return matrix.size(); }
  AssignmentSlot row_slot(std::size_t r) const {
    return r < reference_count ? AssignmentSlot{r} : AssignmentSlot{};
  }
  AssignmentSlot col_slot(std::size_t c) const {
    return c < hypothesis_count ? AssignmentSlot{c} : AssignmentSlot{};
  }
};

namespace detail {

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Cell (r, c) compares reference row_order[r] with hypothesis col_order[c].
template <typename CellCost>
PaddedProblem build_padded(const std::vector<std::size_t>& row_order,
                           const std::vector<std::size_t>& col_order, CellCost&& cell) {
  PaddedProblem p;
  p.reference_count = row_order.size();
  p.hypothesis_count = col_order.size();
  const std::size_t n = std::max(p.reference_count, p.hypothesis_count);
  p.exact.reserve(n * n);
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      Exact cost = (r < p.reference_count && c < p.hypothesis_count)
                       ? cell(row_order[r], col_order[c])
                       : Exact(1);
      values.push_back(to_double(cost));
      p.exact.push_back(std::move(cost));
    }
  }
  p.matrix = CostMatrix::from_rows(n, n, std::move(values));
  return p;
}

inline PaddedProblem oi_problem(const PairwiseEdits& pairs, SubstitutionCostKind kind,
                                const std::vector<std::size_t>& row_order,
                                const std::vector<std::size_t>& col_order) {
  return build_padded(row_order, col_order, [&](std::size_t j, std::size_t k) {
    return substitution_cost(pairs.at(j, k), kind);
  });
}

inline PaddedProblem nerval_problem(const PairwiseEdits& pairs, const NervalConfig& cfg,
                                    const std::vector<std::size_t>& row_order,
                                    const std::vector<std::size_t>& col_order) {
  return build_padded(row_order, col_order, [&](std::size_t j, std::size_t k) {
    return Exact(nerval_match(pairs.at(j, k), cfg) ? 0 : 2);
  });
}

}  // namespace detail

/// Padded OIECER/OIEWER matrix in input order: 1 for dummies and category
/// mismatches, capped CER/WER otherwise.
inline CostMatrix build_oi_cost_matrix(const EntitySequence& x, const EntitySequence& y,
                                       SubstitutionCostKind kind) {
  return detail::oi_problem(PairwiseEdits(x, y), kind, detail::identity_order(x.size()),
                            detail::identity_order(y.size()))
      .matrix;
}

/// Padded OINerval matrix in input order, entries in {0, 1, 2}.
inline CostMatrix build_nerval_cost_matrix(const EntitySequence& x, const EntitySequence& y,
                                           const NervalConfig& cfg) {
  return detail::nerval_problem(PairwiseEdits(x, y), cfg, detail::identity_order(x.size()),
                                detail::identity_order(y.size()))
      .matrix;
}

/// Exact sum of the matrix cells chosen by an assignment.
inline Exact assignment_exact_cost(const PaddedProblem& p, const Assignment& a) {
  Exact total;
  for (std::size_t r = 0; r < p.size(); ++r) total += p.exact[r * p.size() + a.column_of_row[r]];
  return total;
}

/// Optimal assignment cost for one document. Entities are put in canonical
/// order first, so the result does not depend on either input order.
inline DocumentCost oi_document(const PairwiseEdits& pairs, const EntitySequence& x,
                                const EntitySequence& y, SubstitutionCostKind kind) {
  const PaddedProblem p = detail::oi_problem(pairs, kind, canonical_order(x), canonical_order(y));
  return {assignment_exact_cost(p, solve_assignment(p.matrix)), x.size()};
}

inline DocumentCost oi_document(const EntitySequence& x, const EntitySequence& y,
                                SubstitutionCostKind kind) {
  return oi_document(PairwiseEdits(x, y), x, y, kind);
}

/// Σ optimal cost / Σ |X| over the corpus, in percent.
inline double oiecer_corpus(const Corpus& corpus, SubstitutionCostKind kind) {
  Exact cost;
  std::size_t length = 0;
  for (const DocumentPair& p : corpus) {
    const DocumentCost d = oi_document(p.reference.entities(), p.hypothesis.entities(), kind);
    cost += d.total_cost;
    length += d.reference_length;
  }
  return detail::corpus_percent(cost, length);
}

/// Reads counts off an optimal Nerval assignment: cost 0 is TP, cost 2 is one
/// FP and one FN, a dummy-paired reference is FN, a dummy-paired hypothesis FP.
inline MatchCounts nerval_counts_from_assignment(const PaddedProblem& p, const Assignment& a) {
  MatchCounts counts;
  for (std::size_t r = 0; r < p.size(); ++r) {
    const std::size_t c = a.column_of_row[r];
    const bool real_row = !p.row_slot(r).is_dummy();
    const bool real_col = !p.col_slot(c).is_dummy();
    if (real_row && real_col) {
      if (p.matrix.at(r, c) == 0.0) {
        ++counts.tp;
      } else {
        ++counts.fp;
        ++counts.fn;
      }
    } else if (real_row) {
      ++counts.fn;
    } else if (real_col) {
      ++counts.fp;
    }
  }
  return counts;
}

inline MatchCounts oi_nerval_document(const PairwiseEdits& pairs, const EntitySequence& x,
                                      const EntitySequence& y, const NervalConfig& cfg) {
  const PaddedProblem p =
      detail::nerval_problem(pairs, cfg, canonical_order(x), canonical_order(y));
  return nerval_counts_from_assignment(p, solve_assignment(p.matrix));
}

inline MatchCounts oi_nerval_document(const EntitySequence& x, const EntitySequence& y,
                                      const NervalConfig& cfg) {
  return oi_nerval_document(PairwiseEdits(x, y), x, y, cfg);
}

}  // namespace oieval
