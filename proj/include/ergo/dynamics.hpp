#pragma once

// Measure-preserving systems and their ergodic averages
//   A_n f(w) = (1/n) sum_{i=1}^{n} f(tau^i w),
// which never include f(w) itself. Sequences are 0-indexed: entry n-1 of an
// average sequence holds A_n f.
//
// Orbit evaluations for different atoms are independent; the kernels below
// run them with OpenMP and keep a serial reference in ergo::serial.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/measure.hpp"
#include "ergo/numeric.hpp"

namespace ergo {

/// f: [1;2K] -> R under the shift k -> k+1 mod 2K.
template <class T>
class CyclicSystem {
 public:
  CyclicSystem(std::size_t K, std::vector<T> values) : K_(K), values_(std::move(values)) {
    if (K_ == 0) throw InvalidParameter("cyclic system needs K >= 1");
    if (values_.size() != 2 * K_)
      throw InvalidParameter("cyclic system with K=" + std::to_string(K_) + " needs " + std::to_string(2 * K_) +
                             " values, got " + std::to_string(values_.size()));
  }

  std::size_t K() const { return K_; }
  std::size_t period() const { return 2 * K_; }
  // f(m) for m in [1;2K]
  const T& value(std::size_t m) const { return values_[m - 1]; }
  std::span<const T> values() const { return values_; }

  // ((m-1) mod 2K) + 1, the representative of m in [1;2K].
  std::size_t wrap(std::int64_t m) const {
    const auto p = static_cast<std::int64_t>(period());
    return static_cast<std::size_t>(((m - 1) % p + p) % p) + 1;
  }

  T abs_sum() const {
    T total(0);
    for (const auto& v : values_) total += magnitude(v);
    return total;
  }

 private:
  std::size_t K_;
  std::vector<T> values_;
};

/// (Omega, mu, tau, f) with tau checked to preserve mu.
template <class T>
class PermutationSystem {
 public:
  PermutationSystem(FiniteProbSpace space, Automorphism tau, SimpleFunction<T> f)
      : space_(std::move(space)), tau_(std::move(tau)), f_(std::move(f)) {
    if (tau_.size() != space_.size()) throw DomainMismatch("automorphism and space have different atom counts");
    if (f_.size() != space_.size()) throw DomainMismatch("function and space have different atom counts");
    if (!is_measure_preserving(space_, tau_)) throw InvalidParameter("automorphism does not preserve the measure");
  }

  const FiniteProbSpace& space() const { return space_; }
  const Automorphism& tau() const { return tau_; }
  const SimpleFunction<T>& f() const { return f_; }
  std::size_t size() const { return space_.size(); }

 private:
  FiniteProbSpace space_;
  Automorphism tau_;
  SimpleFunction<T> f_;
};

/// Ã_n f(k) = (1/n) sum_{i=1}^{n} f(wrap(k+i)), 1 <= n <= K, 1 <= k <= 2K.
template <class T>
T cyclic_average(const CyclicSystem<T>& sys, std::size_t n, std::size_t k) {
  if (n < 1 || n > sys.K()) throw RangeError("cyclic average needs 1 <= n <= K");
  if (k < 1 || k > sys.period()) throw RangeError("cyclic average needs 1 <= k <= 2K");
  T sum(0);
  for (std::size_t i = 1; i <= n; ++i) sum += sys.value(sys.wrap(static_cast<std::int64_t>(k + i)));
  return divide(sum, n);
}

/// (Ã_n f(k))_{n=1..K} by running sums.
template <class T>
std::vector<T> cyclic_average_sequence(const CyclicSystem<T>& sys, std::size_t k) {
  if (k < 1 || k > sys.period()) throw RangeError("cyclic average needs 1 <= k <= 2K");
  std::vector<T> out;
  out.reserve(sys.K());
  T sum(0);
  for (std::size_t n = 1; n <= sys.K(); ++n) {
    sum += sys.value(sys.wrap(static_cast<std::int64_t>(k + n)));
    out.push_back(divide(sum, n));
  }
  return out;
}

/// The same dynamics as a permutation system: atom j stands for the point
/// j+1 of [1;2K], uniform weights, tau(j) = j+1 mod 2K.
template <class T>
PermutationSystem<T> as_permutation_system(const CyclicSystem<T>& sys) {
  return PermutationSystem<T>(FiniteProbSpace::uniform(sys.period()), Automorphism::cycle(sys.period()),
                              SimpleFunction<T>(std::vector<T>(sys.values().begin(), sys.values().end())));
}

/// f_w(k) = f(tau^k w) on [1;2K], the cyclic system seen from atom w.
template <class T>
CyclicSystem<T> orbit_restriction(const PermutationSystem<T>& sys, std::size_t omega, std::size_t K) {
  if (omega >= sys.size()) throw RangeError("atom outside the space");
  std::vector<T> values;
  values.reserve(2 * K);
  std::size_t w = omega;
  for (std::size_t k = 1; k <= 2 * K; ++k) {
    w = sys.tau().forward(w);
    values.push_back(sys.f()(w));
  }
  return CyclicSystem<T>(K, std::move(values));
}

template <class T>
T ergodic_average(const PermutationSystem<T>& sys, std::size_t n, std::size_t omega) {
  if (n < 1) throw RangeError("ergodic average needs n >= 1");
  if (omega >= sys.size()) throw RangeError("atom " + std::to_string(omega) + " outside the space");
  T sum(0);
  std::size_t w = omega;
  for (std::size_t i = 1; i <= n; ++i) {
    w = sys.tau().forward(w);
    sum += sys.f()(w);
  }
  return divide(sum, n);
}

/// (A_n f(w))_{n=1..N}, entry n-1 <-> A_n, in O(N).
template <class T>
std::vector<T> average_sequence(const PermutationSystem<T>& sys, std::size_t N, std::size_t omega) {
  if (N < 1) throw RangeError("average sequence needs N >= 1");
  if (omega >= sys.size()) throw RangeError("atom " + std::to_string(omega) + " outside the space");
  std::vector<T> out;
  out.reserve(N);
  T sum(0);
  std::size_t w = omega;
  for (std::size_t n = 1; n <= N; ++n) {
    w = sys.tau().forward(w);
    sum += sys.f()(w);
    out.push_back(divide(sum, n));
  }
  return out;
}

/// A_n f as a simple function on the space.
template <class T>
SimpleFunction<T> average_function(const PermutationSystem<T>& sys, std::size_t n) {
  std::vector<T> v;
  v.reserve(sys.size());
  for (std::size_t w = 0; w < sys.size(); ++w) v.push_back(ergodic_average(sys, n, w));
  return SimpleFunction<T>(std::move(v));
}

namespace serial {

template <class T, class Pred>
std::vector<char> orbit_hits(const PermutationSystem<T>& sys, std::size_t N, const Pred& pred) {
  std::vector<char> hits(sys.size(), 0);
  for (std::size_t w = 0; w < sys.size(); ++w) {
    const auto seq = average_sequence(sys, N, w);
    hits[w] = pred(std::span<const T>(seq)) ? 1 : 0;
  }
  return hits;
}

template <class T, class Pred>
Rational event_measure_over_orbit(const PermutationSystem<T>& sys, std::size_t N, const Pred& pred) {
  const auto hits = serial::orbit_hits(sys, N, pred);
  Rational total = 0;
  for (std::size_t w = 0; w < hits.size(); ++w)
    if (hits[w]) total += sys.space().weight(w);
  return total;
}

}  // namespace serial

/// Per-atom truth of pred((A_n f(w))_{n<=N}); parallel over atoms.
template <class T, class Pred>
std::vector<char> orbit_hits(const PermutationSystem<T>& sys, std::size_t N, const Pred& pred) {
  const auto atoms = static_cast<std::int64_t>(sys.size());
  std::vector<char> hits(sys.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t w = 0; w < atoms; ++w) {
    const auto seq = average_sequence(sys, N, static_cast<std::size_t>(w));
    hits[static_cast<std::size_t>(w)] = pred(std::span<const T>(seq)) ? 1 : 0;
  }
  return hits;
}

/// mu({w : pred((A_n f(w))_{n<=N})}); exact since every set is an event.
template <class T, class Pred>
Rational event_measure_over_orbit(const PermutationSystem<T>& sys, std::size_t N, const Pred& pred) {
  const auto hits = ergo::orbit_hits(sys, N, pred);
  Rational total = 0;
  for (std::size_t w = 0; w < hits.size(); ++w)
    if (hits[w]) total += sys.space().weight(w);
  return total;
}

/// X_n(w) = A_{n+1} f(w) for n < horizon and every atom, materialized once so
/// that validators can query many windows of the same system.
template <class T>
class AverageTable {
 public:
  AverageTable(const PermutationSystem<T>& sys, std::size_t horizon)
      : horizon_(horizon), weights_(sys.space().weights().begin(), sys.space().weights().end()) {
    if (horizon_ < 1) throw InvalidParameter("average table needs horizon >= 1");
    rows_.resize(sys.size());
    const auto atoms = static_cast<std::int64_t>(sys.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t w = 0; w < atoms; ++w)
      rows_[static_cast<std::size_t>(w)] = average_sequence(sys, horizon_, static_cast<std::size_t>(w));
  }

  std::size_t atoms() const { return rows_.size(); }
  std::size_t horizon() const { return horizon_; }
  std::span<const T> sequence(std::size_t omega) const { return rows_.at(omega); }
  const Rational& weight(std::size_t omega) const { return weights_.at(omega); }

  // mu({w : pred(w)})
  template <class Pred>
  Rational measure_where(const Pred& pred) const {
    Rational total = 0;
    for (std::size_t w = 0; w < rows_.size(); ++w)
      if (pred(w)) total += weights_[w];
    return total;
  }

 private:
  std::size_t horizon_;
  std::vector<Rational> weights_;
  std::vector<std::vector<T>> rows_;
};

}  // namespace ergo
