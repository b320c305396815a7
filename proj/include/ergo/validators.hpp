#pragma once

// Executable checks of the quantitative convergence notions on a finite
// measure-preserving system, with X_n = A_{n+1} f (n >= 0).
//
// Universal statements ("for all k", "for all g", "for all interval chains")
// are checked up to a finite horizon; verdicts carry that horizon and are
// never reported as unconditional.
//
//   modulus of finite fluctuations phi:  mu(fluc(k, eps, X) < phi) > 1 - lambda
//   learnable rate psi:   some n <= psi has mu(exists i,j in [a_n,b_n]: |X_i - X_j| >= eps) <= lambda
//   uniform metastability rate Phi:  some n <= Phi has mu(forall i,j in [n, n+g(n)]: |X_i - X_j| <= eps) > 1 - lambda

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergo/dynamics.hpp"
#include "ergo/errors.hpp"
#include "ergo/fluctuations.hpp"
#include "ergo/numeric.hpp"
#include "ergo/rates.hpp"
#include "json.hpp"

namespace ergo {

struct Verdict {
  std::string check;
  nlohmann::json params;
  bool verdict = false;
  std::optional<std::uint64_t> witness;
  std::uint64_t horizon = 0;

  nlohmann::json to_json() const {
    nlohmann::json j{{"check", check}, {"params", params}, {"verdict", verdict}, {"horizon", horizon}};
    j["witness"] = witness ? nlohmann::json(*witness) : nlohmann::json(nullptr);
    return j;
  }
};

struct Interval {
  std::uint64_t a = 0, b = 0;
};

namespace detail {

inline void require_eps_lambda(double eps, double lambda) {
  if (!(eps > 0)) throw InvalidParameter("eps must be positive");
  if (!(lambda > 0 && lambda < 1)) throw InvalidParameter("lambda must lie in (0,1)");
}

inline Rational one_minus(double lambda) { return Rational(1) - decimal(lambda); }

// max - min of X over [from; to] for one atom.
template <class T>
T spread(std::span<const T> x, std::size_t from, std::size_t to) {
  const auto w = x.subspan(from, to - from + 1);
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  return T(*hi - *lo);
}

}  // namespace detail

/// True iff mu(fluc(N, eps, X) < phi_value) > 1 - lambda for every N in N_list.
/// The witness on failure is the first failing N.
template <class T>
Verdict validate_modulus(const AverageTable<T>& table, double phi_value, double eps, double lambda,
                         std::span<const std::size_t> N_list) {
  detail::require_eps_lambda(eps, lambda);
  if (N_list.empty()) throw InvalidParameter("N list is empty");
  if (phi_value < 0) throw InvalidParameter("phi must be nonnegative");
  std::vector<std::size_t> sorted(N_list.begin(), N_list.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() > table.horizon()) throw BudgetError("N exceeds the table horizon");

  // counts[w][t] = fluc(sorted[t], eps, X(w))
  std::vector<std::vector<std::size_t>> counts(table.atoms());
  const T eps_t = scalar_from_double<T>(eps);
  for (std::size_t w = 0; w < table.atoms(); ++w) {
    FlucScanner<T> scan(eps_t);
    const auto x = table.sequence(w);
    std::size_t t = 0;
    for (std::size_t len = 0; len <= sorted.back(); ++len) {
      while (t < sorted.size() && sorted[t] == len) {
        counts[w].push_back(scan.count());
        ++t;
      }
      if (len < x.size()) scan.push(x[len]);
    }
  }
  Verdict v{"modulus", {{"phi", phi_value}, {"eps", eps}, {"lambda", lambda}}, true, std::nullopt, table.horizon()};
  const Rational threshold = detail::one_minus(lambda);
  for (std::size_t t = 0; t < sorted.size(); ++t) {
    const Rational good =
        table.measure_where([&](std::size_t w) { return static_cast<double>(counts[w][t]) < phi_value; });
    if (!(good > threshold)) {
      v.verdict = false;
      v.witness = sorted[t];
      return v;
    }
  }
  return v;
}

/// Smallest natural m that passes validate_modulus at N = horizon (and hence,
/// by prefix monotonicity of fluctuation counts, at every N <= horizon).
template <class T>
std::uint64_t certified_modulus(const AverageTable<T>& table, double eps, double lambda) {
  detail::require_eps_lambda(eps, lambda);
  const T eps_t = scalar_from_double<T>(eps);
  std::vector<std::pair<std::size_t, std::size_t>> by_count;  // (count, atom)
  for (std::size_t w = 0; w < table.atoms(); ++w) by_count.emplace_back(fluc_count_only(table.sequence(w), eps_t), w);
  std::sort(by_count.begin(), by_count.end());
  const Rational threshold = detail::one_minus(lambda);
  // mu(count < m) only changes at m = count + 1.
  Rational below = 0;
  std::size_t i = 0;
  std::uint64_t m = 0;
  while (true) {
    while (i < by_count.size() && by_count[i].first < m) below += table.weight(by_count[i++].second);
    if (below > threshold) return m;
    m = (i < by_count.size()) ? by_count[i].first + 1 : m + 1;
  }
}

/// Some n <= psi_value has mu(spread over [a_n; b_n] >= eps) <= lambda.
/// A chain too short to decide (fewer than floor(psi)+1 intervals without a
/// good one) raises BudgetError.
template <class T>
Verdict validate_learnable_rate(const AverageTable<T>& table, double psi_value, double eps, double lambda,
                                std::span<const Interval> intervals) {
  detail::require_eps_lambda(eps, lambda);
  if (!(psi_value >= 0)) throw InvalidParameter("psi must be nonnegative");
  if (intervals.empty()) throw InvalidParameter("interval chain is empty");
  for (std::size_t n = 0; n < intervals.size(); ++n) {
    if (!(intervals[n].a < intervals[n].b)) throw InvalidParameter("interval chain needs a_n < b_n");
    if (n > 0 && intervals[n - 1].b > intervals[n].a) throw InvalidParameter("interval chain needs b_n <= a_{n+1}");
  }
  const T eps_t = scalar_from_double<T>(eps);
  const Rational lam = decimal(lambda);
  const double fl = std::floor(psi_value);
  const std::uint64_t last =
      fl >= 0x1.0p64 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(fl);
  Verdict v{"learnable_rate", {{"psi", psi_value}, {"eps", eps}, {"lambda", lambda}}, false, std::nullopt,
            table.horizon()};
  for (std::uint64_t n = 0; n <= last && n < intervals.size(); ++n) {
    const auto [a, b] = intervals[n];
    if (b >= table.horizon()) throw BudgetError("interval exceeds the table horizon");
    const Rational bad = table.measure_where([&](std::size_t w) {
      return at_least(detail::spread(table.sequence(w), a, b), eps_t);
    });
    if (bad <= lam) {
      v.verdict = true;
      v.witness = n;
      return v;
    }
  }
  if (intervals.size() <= last) throw BudgetError("interval chain has fewer than floor(psi)+1 intervals");
  return v;
}

/// Some n <= Phi has mu(spread over [n; n+g(n)] <= eps) > 1 - lambda.
/// Phi == nullopt stands for a bound beyond the 64-bit range. The scan stops
/// at the first good n; reaching the horizon first raises BudgetError.
template <class T>
Verdict validate_uniform_metastability(const AverageTable<T>& table, std::optional<std::uint64_t> Phi, double lambda,
                                       double eps, const GrowthFunction& g) {
  detail::require_eps_lambda(eps, lambda);
  const T eps_t = scalar_from_double<T>(eps);
  const Rational threshold = detail::one_minus(lambda);
  Verdict v{"uniform_metastability",
            {{"Phi", Phi ? nlohmann::json(*Phi) : nlohmann::json("overflow")},
             {"eps", eps},
             {"lambda", lambda},
             {"g", g.describe()}},
            false,
            std::nullopt,
            table.horizon()};
  for (std::uint64_t n = 0; !Phi || n <= *Phi; ++n) {
    const std::uint64_t gn = g(n);
    if (gn >= table.horizon() || n >= table.horizon() - gn)
      throw BudgetError("window [" + std::to_string(n) + ", " + std::to_string(n) + "+g(n)] exceeds horizon " +
                        std::to_string(table.horizon()));
    const Rational good = table.measure_where([&](std::size_t w) {
      return at_most(detail::spread(table.sequence(w), n, n + gn), eps_t);
    });
    if (good > threshold) {
      v.verdict = true;
      v.witness = n;
      return v;
    }
  }
  return v;
}

/// Least k <= k_budget with mu(spread over [N; N+k] <= eps) <= 1 - lambda.
template <class T>
std::optional<std::uint64_t> least_failing_k(const AverageTable<T>& table, std::uint64_t N, double eps, double lambda,
                                             std::uint64_t k_budget) {
  detail::require_eps_lambda(eps, lambda);
  if (N + k_budget >= table.horizon()) throw BudgetError("search window exceeds the table horizon");
  const T eps_t = scalar_from_double<T>(eps);
  const Rational threshold = detail::one_minus(lambda);
  std::vector<T> lo, hi;
  for (std::size_t w = 0; w < table.atoms(); ++w) {
    lo.push_back(table.sequence(w)[N]);
    hi.push_back(table.sequence(w)[N]);
  }
  for (std::uint64_t k = 0; k <= k_budget; ++k) {
    if (k > 0) {
      for (std::size_t w = 0; w < table.atoms(); ++w) {
        const T& x = table.sequence(w)[N + k];
        if (x < lo[w]) lo[w] = x;
        if (x > hi[w]) hi[w] = x;
      }
    }
    const Rational good = table.measure_where([&](std::size_t w) { return at_most(T(hi[w] - lo[w]), eps_t); });
    if (good <= threshold) return k;
  }
  return std::nullopt;
}

/// g(N) := least_failing_k(N) for N <= N_max (k_budget where none fails), 0
/// beyond: the growth function that defeats uniform metastability when finite
/// almost sure convergence fails. With settle > 0 the table ends early, after
/// `settle` consecutive N without a failing k.
template <class T>
GrowthFunction adversarial_growth(const AverageTable<T>& table, double eps, double lambda, std::uint64_t N_max,
                                  std::uint64_t k_budget, std::uint64_t settle = 0) {
  std::vector<std::uint64_t> values;
  std::uint64_t quiet = 0;
  for (std::uint64_t N = 0; N <= N_max; ++N) {
    const auto k = least_failing_k(table, N, eps, lambda, k_budget);
    values.push_back(k.value_or(k_budget));
    quiet = k ? 0 : quiet + 1;
    if (settle > 0 && quiet >= settle) break;
  }
  return GrowthFunction::table(std::move(values));
}

}  // namespace ergo
