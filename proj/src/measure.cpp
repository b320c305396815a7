#include "ergo/measure.hpp"

#include <algorithm>

namespace ergo {

namespace {

template <class T>
void require_same_space(const FiniteProbSpace& space, const SimpleFunction<T>& f) {
  if (f.size() != space.size())
    throw DomainMismatch("function has " + std::to_string(f.size()) + " values but the space has " +
                         std::to_string(space.size()) + " atoms");
}

}  // namespace

FiniteProbSpace::FiniteProbSpace(std::vector<Rational> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidParameter("a probability space needs at least one atom");
  Rational total = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i].canonicalize();
    if (weights_[i] < 0)
      throw InvalidParameter("weight of atom " + std::to_string(i) + " is negative (" + to_string(weights_[i]) + ")");
    total += weights_[i];
  }
  if (total != 1) throw InvalidParameter("weights sum to " + to_string(total) + ", expected 1");
  weights_f64_.reserve(weights_.size());
  for (const auto& w : weights_) weights_f64_.push_back(w.get_d());
}

FiniteProbSpace FiniteProbSpace::uniform(std::size_t atoms) {
  if (atoms == 0) throw InvalidParameter("a probability space needs at least one atom");
  return FiniteProbSpace(std::vector<Rational>(atoms, Rational(1, static_cast<unsigned long>(atoms))));
}

EventSet::EventSet(std::vector<std::size_t> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

EventSet EventSet::all(std::size_t atoms) {
  std::vector<std::size_t> m(atoms);
  for (std::size_t i = 0; i < atoms; ++i) m[i] = i;
  return EventSet(std::move(m));
}

bool EventSet::contains(std::size_t atom) const {
  return std::binary_search(members_.begin(), members_.end(), atom);
}

SimpleFunction<double> to_f64(const SimpleFunction<Rational>& f) {
  std::vector<double> v;
  v.reserve(f.size());
  for (const auto& x : f.values()) v.push_back(x.get_d());
  return SimpleFunction<double>(std::move(v));
}

Automorphism::Automorphism(std::vector<std::size_t> forward) : forward_(std::move(forward)) {
  const std::size_t n = forward_.size();
  inverse_.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t image = forward_[i];
    if (image >= n) throw InvalidParameter("permutation maps atom " + std::to_string(i) + " outside 0.." + std::to_string(n - 1));
    if (inverse_[image] != n) throw InvalidParameter("permutation is not injective at image " + std::to_string(image));
    inverse_[image] = i;
  }
}

Automorphism Automorphism::identity(std::size_t atoms) {
  std::vector<std::size_t> f(atoms);
  for (std::size_t i = 0; i < atoms; ++i) f[i] = i;
  return Automorphism(std::move(f));
}

Automorphism Automorphism::cycle(std::size_t atoms) {
  std::vector<std::size_t> f(atoms);
  for (std::size_t i = 0; i < atoms; ++i) f[i] = (i + 1) % atoms;
  return Automorphism(std::move(f));
}

std::size_t Automorphism::apply_power(std::size_t atom, std::size_t k) const {
  for (std::size_t i = 0; i < k; ++i) atom = forward_[atom];
  return atom;
}

Rational measure(const FiniteProbSpace& space, const EventSet& event) {
  Rational total = 0;
  for (auto m : event.members()) {
    if (m >= space.size())
      throw DomainMismatch("event references atom " + std::to_string(m) + " of a " + std::to_string(space.size()) + "-atom space");
    total += space.weight(m);
  }
  return total;
}

template <class T>
T integrate(const FiniteProbSpace& space, const SimpleFunction<T>& f) {
  require_same_space(space, f);
  T total(0);
  if constexpr (std::is_same_v<T, double>) {
    const auto w = space.weights_f64();
    for (std::size_t i = 0; i < f.size(); ++i) total += f(i) * w[i];
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) total += f(i) * space.weight(i);
    total.canonicalize();
  }
  return total;
}

template <class T>
T l1_norm(const FiniteProbSpace& space, const SimpleFunction<T>& f) {
  require_same_space(space, f);
  std::vector<T> abs_values;
  abs_values.reserve(f.size());
  for (const auto& x : f.values()) abs_values.push_back(T(magnitude(x)));
  return integrate(space, SimpleFunction<T>(std::move(abs_values)));
}

bool is_measure_preserving(const FiniteProbSpace& space, const Automorphism& tau) {
  if (tau.size() != space.size()) throw DomainMismatch("automorphism and space have different atom counts");
  for (std::size_t i = 0; i < space.size(); ++i)
    if (space.weight(tau.forward(i)) != space.weight(i)) return false;
  return true;
}

template <class T>
SimpleFunction<T> compose(const SimpleFunction<T>& f, const Automorphism& tau) {
  if (tau.size() != f.size()) throw DomainMismatch("function and automorphism have different atom counts");
  std::vector<T> out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(f(tau.forward(i)));
  return SimpleFunction<T>(std::move(out));
}

EventSet preimage(const EventSet& event, const Automorphism& tau) {
  std::vector<std::size_t> out;
  out.reserve(event.members().size());
  for (auto m : event.members()) {
    if (m >= tau.size()) throw DomainMismatch("event references atom outside the automorphism's domain");
    out.push_back(tau.inverse(m));
  }
  return EventSet(std::move(out));
}

template Rational integrate(const FiniteProbSpace&, const SimpleFunction<Rational>&);
template double integrate(const FiniteProbSpace&, const SimpleFunction<double>&);
template Rational l1_norm(const FiniteProbSpace&, const SimpleFunction<Rational>&);
template double l1_norm(const FiniteProbSpace&, const SimpleFunction<double>&);
template SimpleFunction<Rational> compose(const SimpleFunction<Rational>&, const Automorphism&);
template SimpleFunction<double> compose(const SimpleFunction<double>&, const Automorphism&);

}  // namespace ergo
