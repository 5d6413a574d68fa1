#pragma once

// Per-category breakdowns, entity-block shuffling, bootstrap confidence
// intervals and cross-metric correlation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "oieval/assignment.hpp"
#include "oieval/corpus.hpp"
#include "oieval/counts.hpp"
#include "oieval/distance.hpp"
#include "oieval/order_independent.hpp"
#include "oieval/random.hpp"

namespace oieval {

// ---------------------------------------------------------------------------
// Per-category CER/WER

struct CategoryRow {
  std::string category;
  EditCount chars;
  EditCount words;
  std::size_t reference_entities = 0;

  double cer_percent() const { return 100.0 * chars.rate().value; }
  double wer_percent() const { return 100.0 * words.rate().value; }
};

struct CategoryReport {
  std::vector<CategoryRow> rows;  // sorted by category
  /// Plain CER/WER over full document texts, untagged words included.
  EditCount total_chars;
  EditCount total_words;

  std::size_t reference_entities() const {
    std::size_t n = 0;
    for (const CategoryRow& r : rows) n += r.reference_entities;
    return n;
  }
  const CategoryRow* find(const std::string& category) const {
    for (const CategoryRow& r : rows)
      if (r.category == category) return &r;
    return nullptr;
  }
};

namespace detail {

inline EntitySequence filter_category(const EntitySequence& seq, const std::string& category) {
  EntitySequence out;
  for (const TaggedEntity& e : seq)
    if (e.category == category) out.entities.push_back(e);
  return out;
}

inline void accumulate_category(CategoryRow& row, const EntitySequence& x, const EntitySequence& y) {
  row.reference_entities += x.size();
  const PairwiseEdits pairs(x, y);
  const std::vector<std::size_t> xo = canonical_order(x);
  const std::vector<std::size_t> yo = canonical_order(y);
  const PaddedProblem p = oi_problem(pairs, SubstitutionCostKind::ECER, xo, yo);
  const Assignment a = solve_assignment(p.matrix);
  std::vector<bool> hyp_used(y.size(), false);
  for (std::size_t r = 0; r < p.size(); ++r) {
    const std::size_t c = a.column_of_row[r];
    if (r < x.size() && c < y.size()) {
      const PairComparison& cmp = pairs.at(xo[r], yo[c]);
      row.chars += cmp.chars;
      row.words += cmp.words;
      hyp_used[yo[c]] = true;
    } else if (r < x.size()) {
      const TaggedEntity& e = x[xo[r]];
      const std::size_t nc = to_code_points(e.transcription).size();
      const std::size_t nw = split_words(e.transcription).size();
      row.chars += {nc, nc};
      row.words += {nw, nw};
    }
  }
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (hyp_used[k]) continue;
    row.chars += {to_code_points(y[k].transcription).size(), 0};
    row.words += {split_words(y[k].transcription).size(), 0};
  }
}

}  // namespace detail

/// Reference entities are paired with same-category hypothesis entities by an
/// order-independent assignment within each category. Matched pairs pool
/// their edits; unmatched reference entities count as full deletions and
/// unmatched hypothesis entities as full insertions. Rows exist for every
/// category seen in the reference.
inline CategoryReport per_category_breakdown(const Corpus& corpus) {
  std::map<std::string, CategoryRow> rows;
  CategoryReport report;
  for (const DocumentPair& pair : corpus) {
    const EntitySequence x = pair.reference.entities();
    const EntitySequence y = pair.hypothesis.entities();
    std::set<std::string> categories;
    for (const TaggedEntity& e : x) categories.insert(e.category);
    for (const TaggedEntity& e : y) categories.insert(e.category);
    for (const std::string& category : categories) {
      CategoryRow& row = rows[category];
      row.category = category;
      detail::accumulate_category(row, detail::filter_category(x, category),
                                  detail::filter_category(y, category));
    }
    const std::string ref_text = pair.reference.text();
    const std::string hyp_text = pair.hypothesis.text();
    report.total_chars += char_edits(ref_text, hyp_text);
    report.total_words += word_edits(ref_text, hyp_text);
  }
  for (auto& [_, row] : rows)
    if (row.reference_entities > 0) report.rows.push_back(std::move(row));
  return report;
}

// ---------------------------------------------------------------------------
// Shuffling

enum class ShuffleScope { HypothesisOnly, Both };

struct ShuffleConfig {
  std::uint64_t seed = 0;
  ShuffleScope scope = ShuffleScope::HypothesisOnly;
};

/// Permutes entity blocks uniformly among the entity-block positions. Tokens
/// keep their order inside a block; runs of O tokens stay where they are.
/// The first token of each emitted block is tagged B-, so re-parsing yields
/// the permuted entity sequence even when equal categories become adjacent.
/// `salt` selects an independent stream (0: hypothesis, 1: reference).
inline Document shuffle_entities(const Document& doc, const ShuffleConfig& cfg,
                                 std::uint32_t salt = 0) {
  const EntitySequence seq = doc.entities();
  if (seq.size() < 2) return doc;

  std::vector<std::vector<Token>> blocks;
  for (const TaggedEntity& e : seq) {
    std::vector<Token> block;
    for (std::size_t i = e.source_span.begin; i < e.source_span.end; ++i) {
      block.push_back({doc.tokens[i].text, i == e.source_span.begin ? Tag::begin(e.category)
                                                                    : Tag::inside(e.category)});
    }
    blocks.push_back(std::move(block));
  }
  std::mt19937_64 rng = make_stream(cfg.seed, doc.id, salt);
  shuffle_in_place(blocks, rng);

  Document out{doc.id, {}};
  out.tokens.reserve(doc.tokens.size());
  std::size_t next_block = 0;
  std::size_t i = 0;
  for (const TaggedEntity& e : seq) {
    for (; i < e.source_span.begin; ++i) out.tokens.push_back(doc.tokens[i]);
    const auto& block = blocks[next_block++];
    out.tokens.insert(out.tokens.end(), block.begin(), block.end());
    i = e.source_span.end;
  }
  for (; i < doc.tokens.size(); ++i) out.tokens.push_back(doc.tokens[i]);
  return out;
}

inline Corpus shuffle_corpus(const Corpus& corpus, const ShuffleConfig& cfg) {
  std::vector<DocumentPair> pairs;
  pairs.reserve(corpus.size());
  for (const DocumentPair& p : corpus) {
    Document ref = cfg.scope == ShuffleScope::Both ? shuffle_entities(p.reference, cfg, 1)
                                                   : p.reference;
    pairs.push_back({std::move(ref), shuffle_entities(p.hypothesis, cfg, 0)});
  }
  return Corpus(std::move(pairs));
}

// ---------------------------------------------------------------------------
// Bootstrap

struct ConfidenceInterval {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
  double level = 0.95;
  std::size_t resamples = 0;
};

struct BootstrapConfig {
  double level = 0.95;
  std::size_t resamples = 1000;
  std::uint64_t seed = 0;
};

namespace detail {

// Linear interpolation between order statistics (sorted input).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Percentile bootstrap over documents for several statistics at once: every
/// replicate draws one resample and evaluates all statistics on it.
/// `aggregate` maps a sample of records to one optional value per statistic
/// (empty: undefined on that sample). Statistics undefined on the full data
/// get no interval; replicates where one is undefined are discarded for it.
template <typename Record, typename Aggregate>
std::vector<std::optional<ConfidenceInterval>> bootstrap_cis(std::span<const Record> records,
                                                             Aggregate&& aggregate,
                                                             const BootstrapConfig& cfg = {}) {
  if (records.size() < 2) throw InsufficientDataError("bootstrap needs at least 2 documents");
  if (!(cfg.level > 0.0 && cfg.level < 1.0))
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  if (cfg.resamples == 0) throw std::invalid_argument("resamples must be positive");

  const std::vector<std::optional<double>> points = aggregate(records);
  std::vector<std::vector<double>> replicates(points.size());
  for (auto& r : replicates) r.reserve(cfg.resamples);

  std::mt19937_64 rng = make_stream(cfg.seed, "bootstrap");
  std::vector<Record> sample(records.size());
  for (std::size_t b = 0; b < cfg.resamples; ++b) {
    for (Record& r : sample) r = records[uniform_below(rng, records.size())];
    const std::vector<std::optional<double>> values = aggregate(std::span<const Record>(sample));
    for (std::size_t i = 0; i < points.size() && i < values.size(); ++i)
      if (values[i] && std::isfinite(*values[i])) replicates[i].push_back(*values[i]);
  }

  const double tail = (1.0 - cfg.level) / 2.0;
  std::vector<std::optional<ConfidenceInterval>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i]) continue;
    ConfidenceInterval ci;
    ci.level = cfg.level;
    ci.point = *points[i];
    ci.resamples = replicates[i].size();
    std::vector<double>& reps = replicates[i];
    if (reps.empty()) {
      ci.low = ci.high = ci.point;
    } else {
      std::sort(reps.begin(), reps.end());
      ci.low = std::min(detail::quantile_sorted(reps, tail), ci.point);
      ci.high = std::max(detail::quantile_sorted(reps, 1.0 - tail), ci.point);
    }
    out[i] = ci;
  }
  return out;
}

/// Single-statistic form. `aggregate` returns a double and may throw
/// InsufficientDataError on a sample; such resamples are discarded.
template <typename Record, typename Aggregate>
ConfidenceInterval bootstrap_ci(std::span<const Record> records, Aggregate&& aggregate,
                                const BootstrapConfig& cfg = {}) {
  if (records.size() < 2) throw InsufficientDataError("bootstrap needs at least 2 documents");
  (void)aggregate(records);  // undefined on the full data: let the error propagate
  auto wrapped = [&](std::span<const Record> sample) {
    try {
      return std::vector<std::optional<double>>{aggregate(sample)};
    } catch (const InsufficientDataError&) {
      return std::vector<std::optional<double>>{std::nullopt};
    }
  };
  return *bootstrap_cis(records, wrapped, cfg).front();
}

// ---------------------------------------------------------------------------
// Correlation

enum class CorrelationKind { Pearson, Spearman };

/// Named columns of per-document metric values, all of the same length.
struct MetricTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

struct CorrelationMatrix {
  CorrelationKind kind = CorrelationKind::Pearson;
  std::vector<std::string> names;
  std::size_t samples = 0;
  /// Row-major; empty optional where a column has zero variance.
  std::vector<std::optional<double>> coefficients;
  std::vector<std::optional<double>> p_values;

  std::size_t size() const noexcept { return names.size(); }
  const std::optional<double>& coefficient(std::size_t i, std::size_t j) const {
    return coefficients[i * names.size() + j];
  }
  const std::optional<double>& p_value(std::size_t i, std::size_t j) const {
    return p_values[i * names.size() + j];
  }
};

/// "***" p<0.001, "**" p<0.01, "*" p<0.05, otherwise empty.
inline std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

/// 1-based ranks, ties receive the average of the ranks they span.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

/// Pearson coefficient; empty when either side has zero variance.
inline std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n != b.size()) throw std::invalid_argument("correlated columns differ in length");
  if (n == 0) return std::nullopt;
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Two-sided p-value of r under H0: rho = 0, t = r sqrt((n-2)/(1-r^2)) with n-2 dof.
inline double correlation_p_value(double r, std::size_t n) {
  if (n < 3) throw InsufficientDataError("correlation needs at least 3 samples");
  if (std::abs(r) >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = std::abs(r) * std::sqrt(dof / (1.0 - r * r));
  const boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

inline CorrelationMatrix correlate(const MetricTable& table, CorrelationKind kind) {
  const std::size_t n = table.rows();
  if (n < 3) throw InsufficientDataError("correlation needs at least 3 documents");
  for (const auto& column : table.columns)
    if (column.size() != n) throw std::invalid_argument("metric columns differ in length");
  if (table.names.size() != table.columns.size())
    throw std::invalid_argument("metric names and columns differ in count");

  std::vector<std::vector<double>> columns = table.columns;
  if (kind == CorrelationKind::Spearman)
    for (auto& column : columns) column = average_ranks(column);

  CorrelationMatrix m;
  m.kind = kind;
  m.names = table.names;
  m.samples = n;
  const std::size_t k = columns.size();
  m.coefficients.assign(k * k, std::nullopt);
  m.p_values.assign(k * k, std::nullopt);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::optional<double> r = pearson(columns[i], columns[j]);
      if (r && i == j) r = 1.0;
      std::optional<double> p;
      if (r) p = correlation_p_value(*r, n);
      m.coefficients[i * k + j] = m.coefficients[j * k + i] = r;
      m.p_values[i * k + j] = m.p_values[j * k + i] = p;
    }
  }
  return m;
}

}  // namespace oieval
