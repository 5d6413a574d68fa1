#pragma once

// Bag-of-tagged-words and bag-of-entities metrics: multiset comparisons that
// ignore order entirely.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "oieval/corpus.hpp"
#include "oieval/counts.hpp"
#include "oieval/text.hpp"

namespace oieval {

/// A (category, text) item; text is one word for tagged words, a whole
/// transcription for entities.
struct TaggedWord {
  std::string category;
  std::string word;

  friend auto operator<=>(const TaggedWord&, const TaggedWord&) = default;
};

class FrequencyTable {
 public:
  void add(TaggedWord item, std::size_t count = 1) {
    if (count == 0) return;
    counts_[std::move(item)] += count;
    total_ += count;
  }

  std::size_t count(const TaggedWord& item) const {
    const auto it = counts_.find(item);
    return it == counts_.end() ? 0 : it->second;
  }
  std::size_t total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  const std::map<TaggedWord, std::size_t>& counts() const noexcept { return counts_; }

 private:
  std::map<TaggedWord, std::size_t> counts_;
  std::size_t total_ = 0;
};

/// One item per whitespace-separated word of each entity, tagged with the
/// entity's category. Untagged tokens never appear.
inline FrequencyTable tagged_word_bag(const EntitySequence& seq) {
  FrequencyTable bag;
  for (const TaggedEntity& e : seq)
    for (std::string& w : split_words(e.transcription)) bag.add({e.category, std::move(w)});
  return bag;
}

inline FrequencyTable entity_bag(const EntitySequence& seq) {
  FrequencyTable bag;
  for (const TaggedEntity& e : seq) bag.add({e.category, e.transcription});
  return bag;
}

/// TP = Σ min(fX, fY), FP = Σ max(fY - fX, 0), FN = Σ max(fX - fY, 0).
inline MatchCounts bag_match_counts(const FrequencyTable& x, const FrequencyTable& y) {
  MatchCounts c;
  auto xi = x.counts().begin();
  auto yi = y.counts().begin();
  const auto xe = x.counts().end();
  const auto ye = y.counts().end();
  while (xi != xe || yi != ye) {
    if (yi == ye || (xi != xe && xi->first < yi->first)) {
      c.fn += xi->second;
      ++xi;
    } else if (xi == xe || yi->first < xi->first) {
      c.fp += yi->second;
      ++yi;
    } else {
      const std::size_t fx = xi->second;
      const std::size_t fy = yi->second;
      c.tp += std::min(fx, fy);
      if (fy > fx) c.fp += fy - fx;
      if (fx > fy) c.fn += fx - fy;
      ++xi;
      ++yi;
    }
  }
  return c;
}

/// Numerator and |X| of the bag error rate, pooled across documents.
struct BagErrors {
  std::size_t errors = 0;
  std::size_t reference_total = 0;

  BagErrors& operator+=(const BagErrors& o) {
    errors += o.errors;
    reference_total += o.reference_total;
    return *this;
  }
  friend bool operator==(const BagErrors&, const BagErrors&) = default;

  double percent() const {
    if (reference_total == 0) throw InsufficientDataError("no reference items");
    return 100.0 * static_cast<double>(errors) / static_cast<double>(reference_total);
  }
};

/// (||X| - |Y|| + Σ |fX(v) - fY(v)|) / 2; the sum is even, so this is an integer.
inline BagErrors bag_errors(const FrequencyTable& x, const FrequencyTable& y) {
  const MatchCounts c = bag_match_counts(x, y);
  const std::size_t size_gap = x.total() > y.total() ? x.total() - y.total() : y.total() - x.total();
  const std::size_t abs_diff_sum = c.fp + c.fn;
  return {(size_gap + abs_diff_sum) / 2, x.total()};
}

/// (1 / 2|X|) (||X| - |Y|| + Σ |fX(v) - fY(v)|), in percent.
inline double bag_error_rate(const FrequencyTable& x, const FrequencyTable& y) {
  return bag_errors(x, y).percent();
}

}  // namespace oieval
