#pragma once

// Asymptotic density on the integers and the shift counterexample: for
// f = I_A with A a subset of Z+ and tau(w) = w + 1,
//   A_n f(w) = |A ∩ [w+1; w+n]| / n,
//   d_N(A)   = |A ∩ [-N; N]| / (2N + 1),
// and |A_n f(w) - 2 d_{n+w}(A)| <= (2w+1)/n for w >= 0.
//
// The finitely additive extension of d to all subsets needs a Banach limit and
// is not constructed; densities are reported along explicit subsequences.

#include <cstdint>
#include <optional>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/numeric.hpp"

namespace ergo {

/// Union of blocks [beta^k, gamma * beta^k), k >= 0, integer 2 <= beta,
/// 1 < gamma <= beta; or the empty set.
class BlockSet {
 public:
  static BlockSet geometric(std::uint64_t beta, std::uint64_t gamma);
  static BlockSet empty();

  bool is_empty() const { return starts_.empty(); }
  std::uint64_t beta() const { return beta_; }
  std::uint64_t gamma() const { return gamma_; }

  // |A ∩ [1; N]|, 0 for N <= 0.
  std::uint64_t prefix_count(std::int64_t N) const;
  bool contains(std::int64_t m) const;

  // Block boundaries [start_k, end_k), cached up to the int64 range.
  std::size_t block_count() const { return starts_.size(); }
  std::uint64_t block_start(std::size_t k) const { return starts_.at(k); }
  std::uint64_t block_end(std::size_t k) const { return ends_.at(k); }

 private:
  BlockSet() = default;
  std::uint64_t beta_ = 0, gamma_ = 0;
  std::vector<std::uint64_t> starts_, ends_, before_;  // before_[k] = members below start_k
};

struct DensityValue {
  std::uint64_t count = 0;        // |A ∩ [-N; N]|
  std::uint64_t denominator = 1;  // 2N + 1
  Rational value;
};

DensityValue density_prefix(const BlockSet& A, std::int64_t N);

struct DensityOscillation {
  std::vector<Rational> upper;  // d_N at N = gamma * beta^m - 1, m = 0..m_max
  std::vector<Rational> lower;  // d_N at N = beta^(m+1) - 1
  Rational gap;                 // min over m of upper_m - lower_m
};

DensityOscillation density_oscillation(const BlockSet& A, std::size_t m_max);

/// |A ∩ [w+1; w+n]| / n (A lies in Z+, so the window is clipped at 1).
Rational shift_average(const BlockSet& A, std::int64_t omega, std::int64_t n);

struct ApproxIdentity {
  Rational lhs;  // |A_n f(w) - 2 d_{n+w}(A)|
  Rational rhs;  // (2w + 1) / n
  // For w <= 0 the exact form A_n f = (2 + (2w+1)/n) d_{n+w} is checked; for
  // w > 0 the inequality lhs <= rhs and the exact decomposition
  // A_n f = 2 d_{n+w} + ((2w+1)/n)(d_{n+w} - d_w).
  bool exact_form_holds = false;
  bool bound_holds = false;
  bool ok = false;
};

ApproxIdentity approx_identity_check(const BlockSet& A, std::int64_t omega, std::int64_t n);

struct NonconvergenceWitness {
  std::int64_t i = 0, j = 0;
  Rational delta;  // |A_i f(w) - A_j f(w)|
};

/// First i < j in [N; N+budget] (smallest j, then smallest i) with
/// |A_i f(w) - A_j f(w)| > eps0; nullopt when the budget has none.
std::optional<NonconvergenceWitness> nonconvergence_witness(const BlockSet& A, double eps0, std::int64_t omega,
                                                            std::int64_t N, std::int64_t budget);

}  // namespace ergo
