#pragma once

// Per-document table of entity-pair comparisons shared by every entity metric.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "oieval/corpus.hpp"
#include "oieval/distance.hpp"

namespace oieval {

struct PairComparison {
  bool same_category = false;
  EditCount chars;
  EditCount words;
};

/// Row-major |x| * |y| comparisons; rows are reference entities.
class PairwiseEdits {
 public:
  PairwiseEdits() = default;
  PairwiseEdits(const EntitySequence& x, const EntitySequence& y)
      : rows_(x.size()), cols_(y.size()) {
    cells_.reserve(rows_ * cols_);
    std::vector<std::u32string> y_chars;
    std::vector<std::vector<std::string>> y_words;
    for (const TaggedEntity& ye : y) {
      y_chars.push_back(to_code_points(ye.transcription));
      y_words.push_back(split_words(ye.transcription));
    }
    for (const TaggedEntity& xe : x) {
      const std::u32string x_chars = to_code_points(xe.transcription);
      const std::vector<std::string> x_words = split_words(xe.transcription);
      for (std::size_t k = 0; k < cols_; ++k) {
        PairComparison c;
        c.same_category = xe.category == y[k].category;
        // Unused for cross-category pairs; those always cost the maximum.
        if (c.same_category) {
          c.chars = {levenshtein(x_chars, y_chars[k]), x_chars.size()};
          c.words = {levenshtein(x_words, y_words[k]), x_words.size()};
        }
        cells_.push_back(c);
      }
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const PairComparison& at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<PairComparison> cells_;
};

/// Index order sorting entities by (category, transcription, position). Two
/// sequences holding the same multiset of entities yield the same sorted view.
inline std::vector<std::size_t> canonical_order(const EntitySequence& seq) {
  std::vector<std::size_t> order(seq.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const TaggedEntity& ea = seq[a];
    const TaggedEntity& eb = seq[b];
    if (ea.category != eb.category) return ea.category < eb.category;
    return ea.transcription < eb.transcription;
  });
  return order;
}

}  // namespace oieval
