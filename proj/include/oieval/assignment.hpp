#pragma once

// Square minimum-cost assignment (Kuhn-Munkres with row/column potentials).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oieval {

/// Precondition failure on solver input (non-square, negative, non-finite).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t n, double fill = 0.0) : n_(n), costs_(n * n, fill) {}

  CostMatrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
    costs_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw ContractViolation("cost matrix is not square");
      costs_.insert(costs_.end(), row.begin(), row.end());
    }
  }

  /// From a row-major buffer of rows*cols entries; throws unless rows == cols.
  static CostMatrix from_rows(std::size_t rows, std::size_t cols, std::vector<double> values) {
    if (rows != cols) throw ContractViolation("cost matrix is not square");
    if (values.size() != rows * cols) throw ContractViolation("cost buffer size mismatch");
    CostMatrix m;
    m.n_ = rows;
    m.costs_ = std::move(values);
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  double& at(std::size_t r, std::size_t c) { return costs_[r * n_ + c]; }
  double at(std::size_t r, std::size_t c) const { return costs_[r * n_ + c]; }

  void validate() const {
    for (double v : costs_)
      if (!std::isfinite(v) || v < 0.0)
        throw ContractViolation("cost matrix entries must be finite and non-negative");
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> costs_;
};

struct Assignment {
  /// column_of_row[r] is the column paired with row r; a permutation of 0..n-1.
  std::vector<std::size_t> column_of_row;
  double total_cost = 0.0;
};

/// Minimum-total-cost bijection between rows and columns, O(n^3).
inline Assignment solve_assignment(const CostMatrix& m) {
  m.validate();
  const std::size_t n = m.size();
  Assignment result;
  result.column_of_row.assign(n, 0);
  if (n == 0) return result;

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual column 0; row_of_col[j] is the row matched to column j.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  std::vector<double> min_slack(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    row_of_col[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = row_of_col[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = m.at(r0 - 1, j - 1) - u[r0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col0 = col1;
    } while (row_of_col[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      row_of_col[col0] = row_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  for (std::size_t j = 1; j <= n; ++j) result.column_of_row[row_of_col[j] - 1] = j - 1;
  for (std::size_t r = 0; r < n; ++r) result.total_cost += m.at(r, result.column_of_row[r]);
  return result;
}

}  // namespace oieval
