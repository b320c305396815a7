#pragma once

// Seeded, splittable random streams and the sample families used by the
// experiments. A stream is counter based: output i is a SplitMix64 finalizer
// applied to key + i * golden, where the key is derived from (seed, path...).
// Results therefore depend only on the key, never on worker scheduling.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>

#include "ergo/dynamics.hpp"
#include "ergo/measure.hpp"

namespace ergo {

std::uint64_t mix64(std::uint64_t x);
// FNV-1a, for turning names into stream keys.
std::uint64_t name_key(std::string_view name);

class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

  // [0,1) with 53 random bits.
  double uniform01();
  // Uniform on 0..n-1, n >= 1.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller (self-contained so streams are portable).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class Family { Zero, RandomIndicator, UnitSpike, Gaussian };

Family parse_family(std::string_view name);
std::string to_string(Family family);

/// f on [1;2K]: zero, indicator of a set with each point in it w.p. 1/2, a
/// single unit spike at a uniform point, or i.i.d. standard normal values.
CyclicSystem<double> sample_cyclic(Family family, std::size_t K, Stream& rng);

Automorphism random_permutation(std::size_t atoms, Stream& rng);

/// Weights constant on each cycle of tau (so tau preserves them): every cycle
/// gets an integer mass in 0..9, at least one cycle positive, then normalized.
FiniteProbSpace random_invariant_space(const Automorphism& tau, Stream& rng);

/// Random measure-preserving system with atoms in [min_atoms, max_atoms] and
/// rational values p/q, |p| <= 6, 1 <= q <= 4.
PermutationSystem<Rational> random_rational_system(Stream& rng, std::size_t min_atoms, std::size_t max_atoms);

/// Random measure-preserving system whose f is drawn from a family (the
/// cyclic families, read on the atoms).
PermutationSystem<double> random_f64_system(Stream& rng, std::size_t min_atoms, std::size_t max_atoms, Family family);

}  // namespace ergo
