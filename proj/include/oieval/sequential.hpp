#pragma once

// Reading-order-dependent metrics: ECER/EWER via a monotone alignment over
// entities, and Nerval precision/recall/F1.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "oieval/corpus.hpp"
#include "oieval/counts.hpp"
#include "oieval/distance.hpp"
#include "oieval/pairwise.hpp"

namespace oieval {

enum class SubstitutionCostKind { ECER, EWER };

struct NervalConfig {
  double threshold = 0.30;

  NervalConfig() = default;
  explicit NervalConfig(double t) : threshold(t) {
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("Nerval threshold must lie in [0, 1]");
  }
};

/// 1 on category mismatch, else the capped CER (ECER) or WER (EWER) of the
/// transcriptions.
inline Exact substitution_cost(const PairComparison& c, SubstitutionCostKind kind) {
  if (!c.same_category) return Exact(1);
  return (kind == SubstitutionCostKind::ECER ? c.chars : c.words).capped();
}

inline Rate entity_substitution_cost(const TaggedEntity& x, const TaggedEntity& y,
                                     SubstitutionCostKind kind) {
  if (x.category != y.category) return Rate{1.0};
  const EditCount e = kind == SubstitutionCostKind::ECER
                          ? char_edits(x.transcription, y.transcription)
                          : word_edits(x.transcription, y.transcription);
  return Rate{to_double(e.capped())};
}

struct DocumentCost {
  Exact total_cost;
  std::size_t reference_length = 0;

  double normalized() const {
    return reference_length == 0 ? 0.0 : to_double(total_cost / Exact(reference_length));
  }
};

/// Weighted edit distance over entity sequences: insertion = deletion = 1,
/// substitution = substitution_cost.
inline Exact sequence_alignment_cost(const PairwiseEdits& pairs, SubstitutionCostKind kind) {
  const std::size_t n = pairs.rows();
  const std::size_t m = pairs.cols();
  std::vector<Exact> prev(m + 1);
  std::vector<Exact> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = Exact(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = Exact(i);
    for (std::size_t j = 1; j <= m; ++j) {
      Exact best = prev[j] + 1;
      Exact insertion = cur[j - 1] + 1;
      if (insertion < best) best = std::move(insertion);
      Exact substitution = prev[j - 1] + substitution_cost(pairs.at(i - 1, j - 1), kind);
      if (substitution < best) best = std::move(substitution);
      cur[j] = std::move(best);
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

inline DocumentCost ecer_ewer_document(const EntitySequence& x, const EntitySequence& y,
                                       SubstitutionCostKind kind) {
  return {sequence_alignment_cost(PairwiseEdits(x, y), kind), x.size()};
}

namespace detail {

inline double corpus_percent(const Exact& cost, std::size_t reference_entities) {
  if (reference_entities == 0) throw InsufficientDataError("no reference entities");
  return to_double(cost * 100 / Exact(reference_entities));
}

}  // namespace detail

/// Σ cost / Σ |X| over the corpus, in percent.
inline double ecer_corpus(const Corpus& corpus, SubstitutionCostKind kind) {
  Exact cost;
  std::size_t length = 0;
  for (const DocumentPair& p : corpus) {
    const DocumentCost d = ecer_ewer_document(p.reference.entities(), p.hypothesis.entities(), kind);
    cost += d.total_cost;
    length += d.reference_length;
  }
  return detail::corpus_percent(cost, length);
}

/// Same category and capped CER within the threshold.
inline bool nerval_match(const PairComparison& c, const NervalConfig& cfg) {
  return c.same_category && to_double(c.chars.capped()) <= cfg.threshold;
}

/// Monotone alignment: matches cost 0, non-matching pairs 2, skips 1; ties
/// resolved toward more matches.
inline MatchCounts nerval_document(const PairwiseEdits& pairs, const NervalConfig& cfg) {
  const std::size_t n = pairs.rows();
  const std::size_t m = pairs.cols();
  struct Cell {
    std::size_t cost = 0;
    std::size_t tp = 0;
    bool better_than(const Cell& o) const { return cost < o.cost || (cost == o.cost && tp > o.tp); }
  };
  std::vector<Cell> prev(m + 1);
  std::vector<Cell> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = {j, 0};
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = {i, 0};
    for (std::size_t j = 1; j <= m; ++j) {
      Cell best{prev[j].cost + 1, prev[j].tp};
      const Cell insertion{cur[j - 1].cost + 1, cur[j - 1].tp};
      if (insertion.better_than(best)) best = insertion;
      const bool match = nerval_match(pairs.at(i - 1, j - 1), cfg);
      const Cell pair{prev[j - 1].cost + (match ? 0 : 2), prev[j - 1].tp + (match ? 1 : 0)};
      if (pair.better_than(best)) best = pair;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const std::size_t tp = prev[m].tp;
  return {tp, m - tp, n - tp};
}

inline MatchCounts nerval_document(const EntitySequence& x, const EntitySequence& y,
                                   const NervalConfig& cfg) {
  return nerval_document(PairwiseEdits(x, y), cfg);
}

}  // namespace oieval
