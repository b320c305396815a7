#pragma once

// Rate pipeline: weak-type fluctuation bound -> modulus of finite fluctuations
// -> learnable rate of uniform convergence -> rate of uniform metastability,
// and the growth-function iteration n -> n + g(n) behind the last step.
//
// Rate functions are generic over the scalar so the algebraic identities can
// be checked exactly with rationals; ceilings are taken only where a rate is
// turned into an iteration count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/numeric.hpp"

namespace ergo {

/// A total map N -> N from a serializable rule set.
class GrowthFunction {
 public:
  struct Constant {
    std::uint64_t c = 0;
  };
  struct Affine {
    std::uint64_t a = 0, b = 0;
  };
  // values[n] for n < size, 0 beyond the table.
  struct Table {
    std::vector<std::uint64_t> values;
  };
  using Rule = std::variant<Constant, Affine, Table>;

  explicit GrowthFunction(Rule rule) : rule_(std::move(rule)) {}

  static GrowthFunction constant(std::uint64_t c) { return GrowthFunction(Constant{c}); }
  static GrowthFunction affine(std::uint64_t a, std::uint64_t b) { return GrowthFunction(Affine{a, b}); }
  static GrowthFunction table(std::vector<std::uint64_t> values) { return GrowthFunction(Table{std::move(values)}); }

  // g(n); throws OverflowError instead of wrapping.
  std::uint64_t operator()(std::uint64_t n) const;
  // n + g(n)
  std::uint64_t step(std::uint64_t n) const;

  const Rule& rule() const { return rule_; }
  std::string describe() const;

 private:
  Rule rule_;
};

/// The i-th iterate of n -> n + g(n) applied to start.
std::uint64_t iterate_growth(const GrowthFunction& g, std::uint64_t i, std::uint64_t start);
/// As iterate_growth, but an overflowing orbit yields nullopt.
std::optional<std::uint64_t> try_iterate_growth(const GrowthFunction& g, std::uint64_t i, std::uint64_t start);

template <class T>
struct RateParams {
  T c_hat;  // weak-type constant
  T norm1;  // ||f||_1
};

// phi(lambda, eps)
template <class T>
using RateFunction = std::function<T(const T& lambda, const T& eps)>;

namespace detail {
template <class T>
void require_unit_open(const T& v, const char* name) {
  if (!(v > 0 && v < 1)) throw InvalidParameter(std::string(name) + " must lie in (0,1)");
}
template <class T>
void require_params(const RateParams<T>& p) {
  if (!(p.c_hat > 0)) throw InvalidParameter("c_hat must be positive");
  if (p.norm1 < 0) throw InvalidParameter("norm1 must be nonnegative");
}
}  // namespace detail

/// (c_hat * norm1 / (eps * lambda))^2: the least a with
/// c_hat * norm1 / (eps * sqrt(a)) <= lambda.
template <class T>
T modulus_from_weak_type(const RateParams<T>& p, const T& eps, const T& lambda) {
  detail::require_params(p);
  detail::require_unit_open(eps, "eps");
  detail::require_unit_open(lambda, "lambda");
  const T base = T(p.c_hat * p.norm1) / T(eps * lambda);
  return T(base * base);
}

/// psi(lambda, eps) = 2 * phi(lambda/2, eps) / lambda
template <class T>
T learnable_from_modulus(const RateFunction<T>& phi, const T& lambda, const T& eps) {
  detail::require_unit_open(eps, "eps");
  detail::require_unit_open(lambda, "lambda");
  const T value = phi(T(lambda / 2), eps);
  if (value < 0) throw InvalidParameter("modulus must be nonnegative");
  return T(T(2 * value) / lambda);
}

/// delta(lambda, eps) = (8 / lambda) * (c_hat * norm1 / (eps * lambda))^2,
/// i.e. the learnable rate obtained from the weak-type modulus.
template <class T>
T delta(const RateParams<T>& p, const T& lambda, const T& eps) {
  detail::require_params(p);
  detail::require_unit_open(eps, "eps");
  detail::require_unit_open(lambda, "lambda");
  const T base = T(p.c_hat * p.norm1) / T(eps * lambda);
  return T(T(8 / lambda) * T(base * base));
}

/// Phi(lambda, eps, g) = (n -> n + g(n))^(ceil(phi(lambda, eps)))(0)
template <class T>
std::uint64_t metastability_bound(const RateFunction<T>& phi, const T& lambda, const T& eps, const GrowthFunction& g) {
  detail::require_unit_open(eps, "eps");
  detail::require_unit_open(lambda, "lambda");
  const T value = phi(lambda, eps);
  if (value < 0) throw InvalidParameter("rate must be nonnegative");
  return iterate_growth(g, ceil_to_u64(value), 0);
}

/// As metastability_bound, with an overflowing bound reported as nullopt
/// ("larger than any 64-bit index").
template <class T>
std::optional<std::uint64_t> try_metastability_bound(const RateFunction<T>& phi, const T& lambda, const T& eps,
                                                     const GrowthFunction& g) {
  detail::require_unit_open(eps, "eps");
  detail::require_unit_open(lambda, "lambda");
  const T value = phi(lambda, eps);
  if (value < 0) throw InvalidParameter("rate must be nonnegative");
  std::uint64_t steps = 0;
  try {
    steps = ceil_to_u64(value);
  } catch (const OverflowError&) {
    return std::nullopt;
  }
  return try_iterate_growth(g, steps, 0);
}

}  // namespace ergo
