#pragma once

// Oscillation operators O_N: R^N -> R+, the discrete weak-type condition on
// cyclic shifts
//   |{k in [1;2K] : O_K((Ã_n f(k))_{n<=K}) >= a}| <= C(a) * sum_i |f(i)|,
// its transfer to arbitrary finite measure-preserving systems
//   mu(O_K((A_n f)_{n<=K}) >= a) <= C(a) * ||f||_1,
// and the empirical estimation of the constant in C(a) = c_hat / a.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "ergo/dynamics.hpp"
#include "ergo/fluctuations.hpp"
#include "ergo/measure.hpp"
#include "ergo/numeric.hpp"
#include "ergo/random.hpp"

namespace ergo {

enum class OperatorKind { Fluc, Max };

/// FLUC(eps): x -> eps * sqrt(fluc(N, eps, x)), so {O >= eps*sqrt(k)} is
/// exactly {fluc >= k}. MAX: x -> max_n |x_n|. Both use C(a) = c_hat / a.
class OscillationOperator {
 public:
  static OscillationOperator fluc(double eps, double c_hat = 1.0);
  static OscillationOperator maximal(double c_hat = 1.0);

  OperatorKind kind() const { return kind_; }
  double eps() const { return eps_; }
  double c_hat() const { return c_hat_; }
  OscillationOperator with_constant(double c_hat) const;
  std::string name() const;

  double bound_shape(double a) const { return c_hat_ / a; }

  template <class T>
  double apply(std::span<const T> x) const {
    if (kind_ == OperatorKind::Fluc) {
      const auto count = fluc_count_only(x, scalar_from_double<T>(eps_));
      return eps_ * std::sqrt(static_cast<double>(count));
    }
    T best(0);
    for (const auto& v : x) {
      const T m = magnitude(v);
      if (m > best) best = m;
    }
    return to_double(best);
  }

  // O(x) >= a, deciding MAX exactly in the rational mode.
  template <class T>
  bool at_least(std::span<const T> x, double a) const {
    if constexpr (std::is_same_v<T, Rational>) {
      if (kind_ == OperatorKind::Max) {
        const T threshold = decimal(a);
        for (const auto& v : x)
          if (T(magnitude(v)) >= threshold) return true;
        return false;
      }
    }
    return value_at_least(apply(x), a);
  }

  // Same decision from a precomputed binary64 operator value.
  bool value_at_least(double value, double a) const {
    return kind_ == OperatorKind::Fluc ? value >= a : ergo::at_least(value, a);
  }

  /// Geometric grid with ratio 2: eps/4 .. eps*sqrt(K) for FLUC,
  /// max|f|/(2K) .. max|f| for MAX. The upper end is always included.
  std::vector<double> grid(std::size_t K, double max_abs_f) const;

 private:
  OscillationOperator(OperatorKind kind, double eps, double c_hat);
  OperatorKind kind_;
  double eps_;
  double c_hat_;
};

struct WeakTypeCheck {
  std::size_t lhs_count = 0;
  double rhs_bound = 0.0;
  bool ok = true;
};

namespace serial {
std::vector<double> cyclic_operator_values(const OscillationOperator& op, const CyclicSystem<double>& sys);
}  // namespace serial

/// O_K((Ã_n f(k))_{n<=K}) for k = 1..2K (index k-1); parallel over k.
std::vector<double> cyclic_operator_values(const OscillationOperator& op, const CyclicSystem<double>& sys);

/// Weak-type check from precomputed operator values.
WeakTypeCheck discrete_weak_type_check(const OscillationOperator& op, std::span<const double> values, double abs_sum,
                                       double a);

template <class T>
WeakTypeCheck discrete_weak_type_check(const OscillationOperator& op, const CyclicSystem<T>& sys, double a) {
  if (!(a > 0)) throw InvalidParameter("threshold a must be positive");
  WeakTypeCheck out;
  for (std::size_t k = 1; k <= sys.period(); ++k) {
    const auto seq = cyclic_average_sequence(sys, k);
    if (op.at_least(std::span<const T>(seq), a)) ++out.lhs_count;
  }
  out.rhs_bound = op.bound_shape(a) * to_double(sys.abs_sum());
  out.ok = at_most(static_cast<double>(out.lhs_count), out.rhs_bound);
  return out;
}

/// One (K, trial, a) sample: lhs events against rhs = shape(a) * sum|f|.
struct WeakTypeRow {
  std::string op;
  std::size_t K = 0;
  std::string family;
  std::size_t trial = 0;
  double a = 0.0;
  std::size_t lhs = 0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool ok = true;
};

struct ConstantEstimate {
  double c_hat = 0.0;
  WeakTypeRow argmax;  // first row attaining the supremum
  std::vector<WeakTypeRow> rows;
  std::uint64_t seed = 0;
};

/// c_hat = sup over sampled (K, f, a) of lhs / (sum|f| / a). Trial t at size
/// K draws from Stream(seed, {name_key(family), K, t}); rows are ordered by
/// (K, trial, a) whatever the thread count.
ConstantEstimate estimate_constant(const OscillationOperator& op, std::span<const std::size_t> K_list, Family family,
                                   std::size_t trials, std::uint64_t seed);

namespace serial {
ConstantEstimate estimate_constant(const OscillationOperator& op, std::span<const std::size_t> K_list, Family family,
                                   std::size_t trials, std::uint64_t seed);
}  // namespace serial

/// Re-runs the sampling of estimate_constant with the operator's own c_hat
/// and records, per row, whether the weak-type inequality holds.
std::vector<WeakTypeRow> weak_type_sweep(const OscillationOperator& op, std::span<const std::size_t> K_list, Family family,
                                         std::size_t trials, std::uint64_t seed);

struct TransferBound {
  Rational mu_value;
  double bound = 0.0;
  bool ok = true;
};

template <class T>
TransferBound transfer_bound(const PermutationSystem<T>& sys, const OscillationOperator& op, std::size_t K, double a) {
  if (K < 1) throw InvalidParameter("K must be positive");
  if (!(a > 0)) throw InvalidParameter("threshold a must be positive");
  TransferBound out;
  out.mu_value = event_measure_over_orbit(sys, K, [&](std::span<const T> x) { return op.at_least(x, a); });
  out.bound = op.bound_shape(a) * to_double(l1_norm(sys.space(), sys.f()));
  out.ok = at_most(to_double(out.mu_value), out.bound);
  return out;
}

struct IdentityReport {
  std::vector<Rational> mu;   // mu(E_k), k = 0..2K
  Rational average;           // (1/2K) sum_{k=1}^{2K} mu(E_k)
  bool cyclic_form_agrees = true;
  bool ok = true;
};

/// E_k = {w : O_K((A_n f(tau^k w))_{n<=K}) >= a}. Checks, exactly, that every
/// mu(E_k) equals mu(E_0), that mu(E_0) equals the average over k = 1..2K, and
/// that for k in [1;K] the set E_k coincides with its cyclic description
/// {w : O_K((Ã_n f_w(k))_{n<=K}) >= a}, f_w(j) = f(tau^j w).
template <class T>
IdentityReport transference_identity_check(const PermutationSystem<T>& sys, const OscillationOperator& op, std::size_t K,
                                           double a) {
  if (K < 1) throw InvalidParameter("K must be positive");
  if (!(a > 0)) throw InvalidParameter("threshold a must be positive");
  const std::size_t atoms = sys.size();
  const std::size_t period = 2 * K;
  // member[k][w] = w in E_k
  std::vector<std::vector<char>> member(period + 1, std::vector<char>(atoms, 0));
  bool cyclic_agrees = true;
  const auto n_atoms = static_cast<std::int64_t>(atoms);
#pragma omp parallel for schedule(dynamic) reduction(&& : cyclic_agrees)
  for (std::int64_t wi = 0; wi < n_atoms; ++wi) {
    const auto w = static_cast<std::size_t>(wi);
    const auto restricted = orbit_restriction(sys, w, K);
    std::size_t shifted = w;
    for (std::size_t k = 0; k <= period; ++k) {
      const auto seq = average_sequence(sys, K, shifted);
      member[k][w] = op.at_least(std::span<const T>(seq), a) ? 1 : 0;
      if (k >= 1 && k <= K) {
        const auto cyc = cyclic_average_sequence(restricted, k);
        const bool cyclic_member = op.at_least(std::span<const T>(cyc), a);
        cyclic_agrees = cyclic_agrees && (cyclic_member == (member[k][w] != 0)) && (cyc == seq);
      }
      shifted = sys.tau().forward(shifted);
    }
  }
  IdentityReport out;
  out.cyclic_form_agrees = cyclic_agrees;
  Rational sum = 0;
  for (std::size_t k = 0; k <= period; ++k) {
    Rational m = 0;
    for (std::size_t w = 0; w < atoms; ++w)
      if (member[k][w]) m += sys.space().weight(w);
    out.mu.push_back(m);
    if (k >= 1) sum += m;
  }
  out.average = sum / Rational(static_cast<unsigned long>(period));
  out.average.canonicalize();
  bool all_equal = true;
  for (const auto& m : out.mu) all_equal = all_equal && (m == out.mu[0]);
  out.ok = all_equal && (out.mu[0] == out.average) && cyclic_agrees;
  return out;
}

struct FlucReportRow {
  double a = 0.0;
  Rational mu_value;
  double bound = 0.0;
  bool ok = true;
};

/// Rows (a, mu(fluc_K(eps, A_n f) >= a), c_hat ||f||_1 / (eps sqrt(a)), ok).
template <class T>
std::vector<FlucReportRow> fluc_weak_type_report(const PermutationSystem<T>& sys, double eps, std::span<const double> a_grid,
                                                 std::size_t K, double c_hat) {
  if (!(eps > 0 && eps < 1)) throw InvalidParameter("eps must lie in (0,1)");
  if (a_grid.empty()) throw InvalidParameter("a grid is empty");
  for (double a : a_grid)
    if (!(a > 0)) throw InvalidParameter("a grid values must be positive");
  if (K < 1) throw InvalidParameter("K must be positive");
  const T eps_t = scalar_from_double<T>(eps);
  std::vector<std::size_t> counts(sys.size());
  const auto atoms = static_cast<std::int64_t>(sys.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t w = 0; w < atoms; ++w) {
    const auto seq = average_sequence(sys, K, static_cast<std::size_t>(w));
    counts[static_cast<std::size_t>(w)] = fluc_count_only(std::span<const T>(seq), eps_t);
  }
  const double norm1 = to_double(l1_norm(sys.space(), sys.f()));
  std::vector<FlucReportRow> rows;
  for (double a : a_grid) {
    FlucReportRow row;
    row.a = a;
    row.mu_value = 0;
    for (std::size_t w = 0; w < sys.size(); ++w)
      if (static_cast<double>(counts[w]) >= a) row.mu_value += sys.space().weight(w);
    row.bound = c_hat * norm1 / (eps * std::sqrt(a));
    row.ok = at_most(to_double(row.mu_value), row.bound);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// The same report on a cyclic system (uniform measure on [1;2K], shift).
std::vector<FlucReportRow> fluc_weak_type_report(const CyclicSystem<double>& sys, double eps, std::span<const double> a_grid,
                                                 double c_hat);

}  // namespace ergo
