#pragma once

#include <cstddef>
#include <stdexcept>

namespace oieval {

/// A corpus (or resample) has nothing to normalize by.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend MatchCounts operator+(MatchCounts a, const MatchCounts& b) { return a += b; }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

/// Percentages in [0, 100].
struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Micro precision/recall/F1 in percent. Each is 0 when its denominator is 0.
inline PrfScores prf_from_counts(const MatchCounts& c) {
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  const double p = ratio(c.tp, c.tp + c.fp);
  const double r = ratio(c.tp, c.tp + c.fn);
  const double f = (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  return {100.0 * p, 100.0 * r, 100.0 * f};
}

}  // namespace oieval
