#pragma once

// Whole-corpus evaluation: every metric computed per document in one pass,
// then folded into corpus scores.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "oieval/bag.hpp"
#include "oieval/corpus.hpp"
#include "oieval/counts.hpp"
#include "oieval/distance.hpp"
#include "oieval/order_independent.hpp"
#include "oieval/pairwise.hpp"
#include "oieval/sequential.hpp"

namespace oieval {

/// Rows in display order.
inline const std::vector<std::string>& all_metric_names() {
  static const std::vector<std::string> names = {
      "ECER",       "OIECER",     "EWER",       "OIEWER",     "Nerval-P",
      "OINerval-P", "Nerval-R",   "OINerval-R", "Nerval-F1",  "OINerval-F1",
      "btWER",      "bt-P",       "bt-R",       "bt-F1",      "beER",
      "be-P",       "be-R",       "be-F1",      "CER",        "WER"};
  return names;
}

inline bool is_metric_name(std::string_view name) {
  const auto& names = all_metric_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

/// Thresholds-dependent metrics (evaluated once per Nerval threshold).
inline bool is_threshold_metric(std::string_view name) {
  return name.find("Nerval") != std::string_view::npos;
}

/// Additive per-document statistics; a corpus total is their sum.
struct Totals {
  std::size_t documents = 0;
  std::size_t reference_entities = 0;
  std::size_t hypothesis_entities = 0;
  std::size_t reference_repairs = 0;
  std::size_t hypothesis_repairs = 0;
  EditCount chars;
  EditCount words;
  Exact ecer;
  Exact ewer;
  Exact oiecer;
  Exact oiewer;
  std::vector<MatchCounts> nerval;     // one per threshold
  std::vector<MatchCounts> oi_nerval;  // one per threshold
  MatchCounts bt;
  MatchCounts be;
  BagErrors bt_errors;
  BagErrors be_errors;

  Totals& operator+=(const Totals& o) {
    documents += o.documents;
    reference_entities += o.reference_entities;
    hypothesis_entities += o.hypothesis_entities;
    reference_repairs += o.reference_repairs;
    hypothesis_repairs += o.hypothesis_repairs;
    chars += o.chars;
    words += o.words;
    ecer += o.ecer;
    ewer += o.ewer;
    oiecer += o.oiecer;
    oiewer += o.oiewer;
    if (nerval.size() < o.nerval.size()) nerval.resize(o.nerval.size());
    if (oi_nerval.size() < o.oi_nerval.size()) oi_nerval.resize(o.oi_nerval.size());
    for (std::size_t i = 0; i < o.nerval.size(); ++i) nerval[i] += o.nerval[i];
    for (std::size_t i = 0; i < o.oi_nerval.size(); ++i) oi_nerval[i] += o.oi_nerval[i];
    bt += o.bt;
    be += o.be;
    bt_errors += o.bt_errors;
    be_errors += o.be_errors;
    return *this;
  }
};

struct DocumentScores {
  std::string id;
  Totals totals;
};

struct EvaluationOptions {
  std::vector<double> thresholds = {0.30};
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

inline DocumentScores evaluate_document(const DocumentPair& pair, const EvaluationOptions& options) {
  DocumentScores d;
  d.id = pair.reference.id;
  Totals& t = d.totals;
  const EntitySequence x = pair.reference.entities();
  const EntitySequence y = pair.hypothesis.entities();
  t.documents = 1;
  t.reference_entities = x.size();
  t.hypothesis_entities = y.size();
  t.reference_repairs = x.repaired_tags;
  t.hypothesis_repairs = y.repaired_tags;

  const std::string ref_text = pair.reference.text();
  const std::string hyp_text = pair.hypothesis.text();
  t.chars = char_edits(ref_text, hyp_text);
  t.words = word_edits(ref_text, hyp_text);

  const PairwiseEdits pairs(x, y);
  t.ecer = sequence_alignment_cost(pairs, SubstitutionCostKind::ECER);
  t.ewer = sequence_alignment_cost(pairs, SubstitutionCostKind::EWER);
  t.oiecer = oi_document(pairs, x, y, SubstitutionCostKind::ECER).total_cost;
  t.oiewer = oi_document(pairs, x, y, SubstitutionCostKind::EWER).total_cost;
  for (double threshold : options.thresholds) {
    const NervalConfig cfg(threshold);
    t.nerval.push_back(nerval_document(pairs, cfg));
    t.oi_nerval.push_back(oi_nerval_document(pairs, x, y, cfg));
  }

  const FrequencyTable xw = tagged_word_bag(x);
  const FrequencyTable yw = tagged_word_bag(y);
  const FrequencyTable xe = entity_bag(x);
  const FrequencyTable ye = entity_bag(y);
  t.bt = bag_match_counts(xw, yw);
  t.be = bag_match_counts(xe, ye);
  t.bt_errors = bag_errors(xw, yw);
  t.be_errors = bag_errors(xe, ye);
  return d;
}

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Per-document scores in corpus order.
inline std::vector<DocumentScores> evaluate_documents(const Corpus& corpus,
                                                      const EvaluationOptions& options = {}) {
  for (double threshold : options.thresholds) (void)NervalConfig(threshold);
  if (options.thresholds.empty()) throw std::invalid_argument("at least one Nerval threshold is required");
  std::vector<DocumentScores> scores(corpus.size());
  detail::parallel_for(corpus.size(), options.threads, [&](std::size_t i) {
    scores[i] = evaluate_document(corpus.pairs()[i], options);
  });
  return scores;
}

inline Totals sum_totals(std::span<const DocumentScores> docs) {
  Totals total;
  for (const DocumentScores& d : docs) total += d.totals;
  return total;
}

/// Value of one metric in percent. Throws InsufficientDataError when the
/// normalizer is zero.
inline double metric_value(const Totals& t, std::string_view name, std::size_t threshold_index = 0) {
  auto entity_rate = [&](const Exact& cost) { return detail::corpus_percent(cost, t.reference_entities); };
  auto text_rate = [](const EditCount& e) {
    if (e.reference_length == 0) throw InsufficientDataError("empty reference text");
    return 100.0 * e.rate().value;
  };
  auto prf = [&](const std::vector<MatchCounts>& v) {
    if (threshold_index >= v.size()) throw std::out_of_range("threshold index out of range");
    if (t.reference_entities == 0) throw InsufficientDataError("no reference entities");
    return prf_from_counts(v[threshold_index]);
  };
  auto bag_prf = [&](const MatchCounts& c) {
    if (t.reference_entities == 0) throw InsufficientDataError("no reference entities");
    return prf_from_counts(c);
  };
  if (name == "ECER") return entity_rate(t.ecer);
  if (name == "OIECER") return entity_rate(t.oiecer);
  if (name == "EWER") return entity_rate(t.ewer);
  if (name == "OIEWER") return entity_rate(t.oiewer);
  if (name == "Nerval-P") return prf(t.nerval).precision;
  if (name == "Nerval-R") return prf(t.nerval).recall;
  if (name == "Nerval-F1") return prf(t.nerval).f1;
  if (name == "OINerval-P") return prf(t.oi_nerval).precision;
  if (name == "OINerval-R") return prf(t.oi_nerval).recall;
  if (name == "OINerval-F1") return prf(t.oi_nerval).f1;
  if (name == "btWER") return t.bt_errors.percent();
  if (name == "bt-P") return bag_prf(t.bt).precision;
  if (name == "bt-R") return bag_prf(t.bt).recall;
  if (name == "bt-F1") return bag_prf(t.bt).f1;
  if (name == "beER") return t.be_errors.percent();
  if (name == "be-P") return bag_prf(t.be).precision;
  if (name == "be-R") return bag_prf(t.be).recall;
  if (name == "be-F1") return bag_prf(t.be).f1;
  if (name == "CER") return text_rate(t.chars);
  if (name == "WER") return text_rate(t.words);
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

}  // namespace oieval
