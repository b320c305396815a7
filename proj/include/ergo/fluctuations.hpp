#pragma once

// epsilon-fluctuation counting on finite real sequences.
//
// fluc(N, eps, x) is the largest k admitting indices
//   i_1 < j_1 <= i_2 < j_2 <= ... <= i_k < j_k < N
// with |x_{i_l} - x_{j_l}| >= eps. Pairs are compared with >= eps and
// metastable windows with <= eps; in binary64 mode both comparisons carry the
// kAbsTol slack from numeric.hpp.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/numeric.hpp"

namespace ergo {

struct FlucResult {
  std::size_t count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> witness;
};

/// Streaming greedy counter. Each push extends the sequence by one term and
/// closes a fluctuation as soon as the spread of the current window reaches
/// eps; the closing index then starts the next window.
///
/// Closing each fluctuation at the earliest possible index is optimal by an
/// exchange argument, so the count after N pushes equals fluc(N, eps, x) and
/// the scanner yields every prefix count for free.
template <class T>
class FlucScanner {
 public:
  explicit FlucScanner(T eps, bool keep_witness = false) : eps_(std::move(eps)), keep_witness_(keep_witness) {
    if (!(eps_ > 0)) throw InvalidParameter("fluctuation threshold eps must be positive");
  }

  // Returns true when this term closed a fluctuation.
  bool push(const T& x) {
    const std::size_t at = length_++;
    if (at == start_) {
      lo_ = x;
      hi_ = x;
      lo_at_ = hi_at_ = at;
      return false;
    }
    if (x < lo_) {
      lo_ = x;
      lo_at_ = at;
    }
    if (x > hi_) {
      hi_ = x;
      hi_at_ = at;
    }
    if (!at_least(T(hi_ - lo_), eps_)) return false;
    // Before this term the window spread was below eps, so x is the new extreme.
    const std::size_t from = (hi_at_ == at) ? lo_at_ : hi_at_;
    ++count_;
    if (keep_witness_) witness_.emplace_back(from, at);
    start_ = at;
    lo_ = hi_ = x;
    lo_at_ = hi_at_ = at;
    return true;
  }

  std::size_t count() const { return count_; }
  std::size_t length() const { return length_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& witness() const { return witness_; }

 private:
  T eps_;
  bool keep_witness_;
  std::size_t length_ = 0;
  std::size_t start_ = 0;
  std::size_t count_ = 0;
  T lo_{}, hi_{};
  std::size_t lo_at_ = 0, hi_at_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> witness_;
};

namespace detail {
template <class T>
void require_finite(std::span<const T> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!is_finite(x[i])) throw InvalidParameter("sequence entry " + std::to_string(i) + " is not finite");
}
}  // namespace detail

/// O(N) greedy count with the (leftmost-ending) witness chain.
template <class T>
FlucResult fluc_count(std::span<const T> x, const T& eps) {
  detail::require_finite(x);
  FlucScanner<T> scan(eps, true);
  for (const auto& v : x) scan.push(v);
  return FlucResult{scan.count(), scan.witness()};
}

template <class T>
std::size_t fluc_count_only(std::span<const T> x, const T& eps) {
  FlucScanner<T> scan(eps);
  for (const auto& v : x) scan.push(v);
  return scan.count();
}

inline constexpr std::size_t kFlucOracleMaxLength = 20;

/// Independent exact maximum by dynamic programming over chain end points:
/// best(j) = max over i < j with |x_i - x_j| >= eps of 1 + (best chain ending
/// at or before i). Quadratic; intended for cross-checking fluc_count.
template <class T>
std::size_t fluc_count_oracle(std::span<const T> x, const T& eps) {
  if (!(eps > 0)) throw InvalidParameter("fluctuation threshold eps must be positive");
  if (x.size() > kFlucOracleMaxLength)
    throw BudgetError("oracle is limited to sequences of length <= " + std::to_string(kFlucOracleMaxLength));
  const std::size_t n = x.size();
  std::vector<std::size_t> ending_at(n, 0), ending_by(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < j; ++i) {
      if (at_least(T(magnitude(T(x[i] - x[j]))), eps)) best = std::max(best, 1 + ending_by[i]);
    }
    ending_at[j] = best;
    ending_by[j] = std::max(j > 0 ? ending_by[j - 1] : 0, best);
  }
  return n == 0 ? 0 : ending_by[n - 1];
}

/// true iff every pair in [n; n+k] is within eps, i.e. max - min <= eps.
template <class T>
bool metastable_window_ok(std::span<const T> x, std::size_t n, std::size_t k, const T& eps) {
  if (!(eps > 0)) throw InvalidParameter("window tolerance eps must be positive");
  if (n + k >= x.size())
    throw RangeError("window [" + std::to_string(n) + ";" + std::to_string(n + k) + "] exceeds sequence length " +
                     std::to_string(x.size()));
  const auto window = x.subspan(n, k + 1);
  const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
  return at_most(T(*hi - *lo), eps);
}

}  // namespace ergo
