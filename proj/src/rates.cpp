#include "ergo/rates.hpp"

#include <limits>

namespace ergo {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("growth iteration overflows 64-bit naturals");
  return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("growth function value overflows 64-bit naturals");
  return out;
}

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

std::uint64_t GrowthFunction::operator()(std::uint64_t n) const {
  return std::visit(Overloaded{
                        [](const Constant& r) { return r.c; },
                        [n](const Affine& r) { return checked_add(checked_mul(r.a, n), r.b); },
                        [n](const Table& r) { return n < r.values.size() ? r.values[n] : std::uint64_t{0}; },
                    },
                    rule_);
}

std::uint64_t GrowthFunction::step(std::uint64_t n) const { return checked_add(n, (*this)(n)); }

std::string GrowthFunction::describe() const {
  return std::visit(Overloaded{
                        [](const Constant& r) { return "constant(" + std::to_string(r.c) + ")"; },
                        [](const Affine& r) { return "affine(" + std::to_string(r.a) + "," + std::to_string(r.b) + ")"; },
                        [](const Table& r) { return "table[" + std::to_string(r.values.size()) + "]"; },
                    },
                    rule_);
}

std::uint64_t iterate_growth(const GrowthFunction& g, std::uint64_t i, std::uint64_t start) {
  // Closed form for constant steps; every other rule either reaches a fixed
  // point or overflows within a bounded number of steps.
  if (const auto* c = std::get_if<GrowthFunction::Constant>(&g.rule())) {
    return checked_add(start, checked_mul(c->c, i));
  }
  if (const auto* a = std::get_if<GrowthFunction::Affine>(&g.rule()); a && a->a == 0) {
    return checked_add(start, checked_mul(a->b, i));
  }
  std::uint64_t x = start;
  for (std::uint64_t t = 0; t < i; ++t) {
    const std::uint64_t next = g.step(x);
    if (next == x) break;
    x = next;
  }
  return x;
}

std::optional<std::uint64_t> try_iterate_growth(const GrowthFunction& g, std::uint64_t i, std::uint64_t start) {
  try {
    return iterate_growth(g, i, start);
  } catch (const OverflowError&) {
    return std::nullopt;
  }
}

}  // namespace ergo
