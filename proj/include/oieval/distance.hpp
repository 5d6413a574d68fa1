#pragma once

// Unit-cost edit distance and the character/word error rates built on it.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "oieval/text.hpp"

namespace oieval {

/// Exact rational used wherever per-entity costs are summed.
using Exact = boost::multiprecision::cpp_rational;

inline double to_double(const Exact& value) { return value.convert_to<double>(); }

/// Dimensionless error rate. Uncapped rates may exceed 1.
struct Rate {
  double value = 0.0;
  friend auto operator<=>(const Rate&, const Rate&) = default;
};

/// Minimal number of unit-cost insertions, deletions and substitutions
/// turning `a` into `b`.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::size_t levenshtein(const A& a, const B& b) {
  const std::size_t n = std::ranges::size(a);
  const std::size_t m = std::ranges::size(b);
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  auto ai = std::ranges::begin(a);
  for (std::size_t i = 1; i <= n; ++i, ++ai) {
    std::size_t diagonal = row[0];
    row[0] = i;
    auto bj = std::ranges::begin(b);
    for (std::size_t j = 1; j <= m; ++j, ++bj) {
      const std::size_t above = row[j];
      const std::size_t substitution = diagonal + (*ai == *bj ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitution});
      diagonal = above;
    }
  }
  return row[m];
}

/// Edits plus reference length; pooled (micro) across strings or documents.
struct EditCount {
  std::size_t edits = 0;
  std::size_t reference_length = 0;

  EditCount& operator+=(const EditCount& other) {
    edits += other.edits;
    reference_length += other.reference_length;
    return *this;
  }
  friend EditCount operator+(EditCount a, const EditCount& b) { return a += b; }
  friend bool operator==(const EditCount&, const EditCount&) = default;

  /// edits / reference_length; 0 for 0/0, +inf for x/0.
  Rate rate() const {
    if (reference_length == 0)
      return Rate{edits == 0 ? 0.0 : std::numeric_limits<double>::infinity()};
    return Rate{static_cast<double>(edits) / static_cast<double>(reference_length)};
  }

  /// min(1, edits / reference_length), exactly; 1 when the reference is empty
  /// and the hypothesis is not.
  Exact capped() const {
    if (reference_length == 0) return Exact(edits == 0 ? 0 : 1);
    if (edits >= reference_length) return Exact(1);
    return Exact(edits) / Exact(reference_length);
  }
};

inline EditCount char_edits(std::string_view reference, std::string_view hypothesis) {
  const std::u32string ref = to_code_points(reference);
  const std::u32string hyp = to_code_points(hypothesis);
  return {levenshtein(ref, hyp), ref.size()};
}

inline EditCount word_edits(std::string_view reference, std::string_view hypothesis) {
  const std::vector<std::string> ref = split_words(reference);
  const std::vector<std::string> hyp = split_words(hypothesis);
  return {levenshtein(ref, hyp), ref.size()};
}

/// Code-point edit distance over reference code-point count.
inline Rate cer(std::string_view reference, std::string_view hypothesis) {
  return char_edits(reference, hypothesis).rate();
}

inline Rate wer(std::string_view reference, std::string_view hypothesis) {
  return word_edits(reference, hypothesis).rate();
}

inline Rate capped_cer(std::string_view reference, std::string_view hypothesis) {
  return Rate{to_double(char_edits(reference, hypothesis).capped())};
}

inline Rate capped_wer(std::string_view reference, std::string_view hypothesis) {
  return Rate{to_double(word_edits(reference, hypothesis).capped())};
}

}  // namespace oieval
