#pragma once

// Finitely additive probability spaces on finite atom sets.
//
// The algebra of events is the full power set of the atoms, so every event
// and every function is measurable and integration of simple functions is
// exact in the rational mode.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/numeric.hpp"

namespace ergo {

/// Atoms 0..M-1 with nonnegative rational weights summing to exactly one.
class FiniteProbSpace {
 public:
  explicit FiniteProbSpace(std::vector<Rational> weights);

  static FiniteProbSpace uniform(std::size_t atoms);

  std::size_t size() const { return weights_.size(); }
  const Rational& weight(std::size_t atom) const { return weights_.at(atom); }
  std::span<const Rational> weights() const { return weights_; }
  // binary64 copies of the weights, for the floating-point mode.
  std::span<const double> weights_f64() const { return weights_f64_; }

 private:
  std::vector<Rational> weights_;
  std::vector<double> weights_f64_;
};

/// A subset of atoms. Members are kept sorted and unique; ownership by a
/// space is checked where the event is used.
class EventSet {
 public:
  EventSet() = default;
  explicit EventSet(std::vector<std::size_t> members);

  static EventSet all(std::size_t atoms);

  std::span<const std::size_t> members() const { return members_; }
  bool contains(std::size_t atom) const;
  bool empty() const { return members_.empty(); }

 private:
  std::vector<std::size_t> members_;
};

/// One value per atom. T is Rational (exact mode) or double (binary64 mode).
template <class T>
class SimpleFunction {
 public:
  SimpleFunction() = default;
  explicit SimpleFunction(std::vector<T> values) : values_(std::move(values)) {}

  static SimpleFunction constant(std::size_t atoms, const T& c) {
    return SimpleFunction(std::vector<T>(atoms, c));
  }
  static SimpleFunction indicator(std::size_t atoms, const EventSet& event) {
    std::vector<T> v(atoms, T(0));
    for (auto m : event.members()) {
      if (m >= atoms) throw DomainMismatch("indicator event references atom " + std::to_string(m));
      v[m] = T(1);
    }
    return SimpleFunction(std::move(v));
  }

  std::size_t size() const { return values_.size(); }
  const T& operator()(std::size_t atom) const { return values_[atom]; }
  std::span<const T> values() const { return values_; }

  friend bool operator==(const SimpleFunction&, const SimpleFunction&) = default;

 private:
  std::vector<T> values_;
};

SimpleFunction<double> to_f64(const SimpleFunction<Rational>& f);

/// An invertible map on the atoms, stored with its inverse.
class Automorphism {
 public:
  explicit Automorphism(std::vector<std::size_t> forward);

  static Automorphism identity(std::size_t atoms);
  // 0 -> 1 -> ... -> atoms-1 -> 0
  static Automorphism cycle(std::size_t atoms);

  std::size_t size() const { return forward_.size(); }
  std::size_t forward(std::size_t atom) const { return forward_[atom]; }
  std::size_t inverse(std::size_t atom) const { return inverse_[atom]; }
  // tau^k(atom)
  std::size_t apply_power(std::size_t atom, std::size_t k) const;
  std::span<const std::size_t> forward_map() const { return forward_; }

 private:
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

Rational measure(const FiniteProbSpace& space, const EventSet& event);

template <class T>
T integrate(const FiniteProbSpace& space, const SimpleFunction<T>& f);

template <class T>
T l1_norm(const FiniteProbSpace& space, const SimpleFunction<T>& f);

// On the full power set, preserving every event is equivalent to
// weight(tau(w)) == weight(w) for each atom.
bool is_measure_preserving(const FiniteProbSpace& space, const Automorphism& tau);

// g(w) = f(tau(w))
template <class T>
SimpleFunction<T> compose(const SimpleFunction<T>& f, const Automorphism& tau);

// tau^{-1}(E)
EventSet preimage(const EventSet& event, const Automorphism& tau);

extern template Rational integrate(const FiniteProbSpace&, const SimpleFunction<Rational>&);
extern template double integrate(const FiniteProbSpace&, const SimpleFunction<double>&);
extern template Rational l1_norm(const FiniteProbSpace&, const SimpleFunction<Rational>&);
extern template double l1_norm(const FiniteProbSpace&, const SimpleFunction<double>&);
extern template SimpleFunction<Rational> compose(const SimpleFunction<Rational>&, const Automorphism&);
extern template SimpleFunction<double> compose(const SimpleFunction<double>&, const Automorphism&);

}  // namespace ergo
