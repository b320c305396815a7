#include "ergo/random.hpp"

#include <cmath>
#include <numbers>

namespace ergo {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t name_key(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Stream::Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) : key_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {
  for (auto p : path) key_ = mix64(key_ ^ mix64(p + 0x9E3779B97F4A7C15ULL));
}

double Stream::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t Stream::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % n;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Family parse_family(std::string_view name) {
  if (name == "zero") return Family::Zero;
  if (name == "random_indicator" || name == "indicator") return Family::RandomIndicator;
  if (name == "unit_spike" || name == "spike") return Family::UnitSpike;
  if (name == "gaussian") return Family::Gaussian;
  throw InvalidParameter("unknown family '" + std::string(name) + "'");
}

std::string to_string(Family family) {
  switch (family) {
    case Family::Zero: return "zero";
    case Family::RandomIndicator: return "random_indicator";
    case Family::UnitSpike: return "unit_spike";
    case Family::Gaussian: return "gaussian";
  }
  return "?";
}

namespace {

std::vector<double> sample_values(Family family, std::size_t n, Stream& rng) {
  std::vector<double> v(n, 0.0);
  switch (family) {
    case Family::Zero: break;
    case Family::RandomIndicator:
      for (auto& x : v) x = (rng() >> 63) ? 1.0 : 0.0;
      break;
    case Family::UnitSpike: v[rng.below(n)] = 1.0; break;
    case Family::Gaussian:
      for (auto& x : v) x = rng.normal();
      break;
  }
  return v;
}

}  // namespace

CyclicSystem<double> sample_cyclic(Family family, std::size_t K, Stream& rng) {
  return CyclicSystem<double>(K, sample_values(family, 2 * K, rng));
}

Automorphism random_permutation(std::size_t atoms, Stream& rng) {
  std::vector<std::size_t> p(atoms);
  for (std::size_t i = 0; i < atoms; ++i) p[i] = i;
  for (std::size_t i = atoms; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return Automorphism(std::move(p));
}

FiniteProbSpace random_invariant_space(const Automorphism& tau, Stream& rng) {
  const std::size_t n = tau.size();
  std::vector<std::size_t> cycle_of(n, n);
  std::vector<unsigned long> mass;
  for (std::size_t start = 0; start < n; ++start) {
    if (cycle_of[start] != n) continue;
    const std::size_t id = mass.size();
    mass.push_back(rng.below(10));
    for (std::size_t w = start; cycle_of[w] == n; w = tau.forward(w)) cycle_of[w] = id;
  }
  bool any = false;
  for (auto m : mass) any = any || m > 0;
  if (!any) mass[rng.below(mass.size())] = 1 + rng.below(9);
  unsigned long total = 0;
  for (std::size_t w = 0; w < n; ++w) total += mass[cycle_of[w]];
  std::vector<Rational> weights;
  weights.reserve(n);
  for (std::size_t w = 0; w < n; ++w)
    weights.push_back(make_rational(static_cast<long>(mass[cycle_of[w]]), static_cast<long>(total)));
  return FiniteProbSpace(std::move(weights));
}

PermutationSystem<Rational> random_rational_system(Stream& rng, std::size_t min_atoms, std::size_t max_atoms) {
  const std::size_t atoms = min_atoms + rng.below(max_atoms - min_atoms + 1);
  auto tau = random_permutation(atoms, rng);
  auto space = random_invariant_space(tau, rng);
  std::vector<Rational> f;
  f.reserve(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    f.push_back(make_rational(static_cast<long>(rng.below(13)) - 6, static_cast<long>(1 + rng.below(4))));
  }
  return PermutationSystem<Rational>(std::move(space), std::move(tau), SimpleFunction<Rational>(std::move(f)));
}

PermutationSystem<double> random_f64_system(Stream& rng, std::size_t min_atoms, std::size_t max_atoms, Family family) {
  const std::size_t atoms = min_atoms + rng.below(max_atoms - min_atoms + 1);
  auto tau = random_permutation(atoms, rng);
  auto space = random_invariant_space(tau, rng);
  return PermutationSystem<double>(std::move(space), std::move(tau),
                                   SimpleFunction<double>(sample_values(family, atoms, rng)));
}

}  // namespace ergo
