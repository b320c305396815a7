#include "ergo/density.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace ergo {

namespace {

constexpr std::uint64_t kLimit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());

Rational ratio(std::uint64_t num, std::uint64_t den) {
  Rational q{mpz_class(static_cast<unsigned long>(num)), mpz_class(static_cast<unsigned long>(den))};
  q.canonicalize();
  return q;
}

}  // namespace

BlockSet BlockSet::geometric(std::uint64_t beta, std::uint64_t gamma) {
  if (beta < 2) throw InvalidParameter("block rule needs beta >= 2");
  if (gamma < 2 || gamma > beta) throw InvalidParameter("block rule needs 1 < gamma <= beta");
  BlockSet A;
  A.beta_ = beta;
  A.gamma_ = gamma;
  std::uint64_t start = 1;
  std::uint64_t members = 0;
  while (true) {
    if (start > kLimit / gamma) break;
    const std::uint64_t end = start * gamma;
    A.starts_.push_back(start);
    A.ends_.push_back(end);
    A.before_.push_back(members);
    members += end - start;
    if (start > kLimit / beta) break;
    start *= beta;
  }
  return A;
}

BlockSet BlockSet::empty() { return BlockSet(); }

std::uint64_t BlockSet::prefix_count(std::int64_t N) const {
  if (N <= 0 || starts_.empty()) return 0;
  const auto n = static_cast<std::uint64_t>(N);
  // last block whose start is <= N
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), n);
  if (it == starts_.begin()) return 0;
  const auto k = static_cast<std::size_t>(it - starts_.begin()) - 1;
  return before_[k] + (std::min(n + 1, ends_[k]) - starts_[k]);
}

bool BlockSet::contains(std::int64_t m) const {
  if (m <= 0) return false;
  return prefix_count(m) != prefix_count(m - 1);
}

DensityValue density_prefix(const BlockSet& A, std::int64_t N) {
  if (N < 1) throw RangeError("density prefix needs N >= 1");
  DensityValue d;
  d.count = A.prefix_count(N);
  d.denominator = 2 * static_cast<std::uint64_t>(N) + 1;
  d.value = ratio(d.count, d.denominator);
  return d;
}

DensityOscillation density_oscillation(const BlockSet& A, std::size_t m_max) {
  if (m_max < 1) throw InvalidParameter("density oscillation needs m_max >= 1");
  if (A.is_empty()) throw InvalidParameter("density oscillation needs a block rule");
  if (m_max + 1 >= A.block_count()) throw RangeError("m_max exceeds the cached block range");
  DensityOscillation out;
  for (std::size_t m = 0; m <= m_max; ++m) {
    const auto upper_N = static_cast<std::int64_t>(A.block_end(m) - 1);          // gamma*beta^m - 1
    const auto lower_N = static_cast<std::int64_t>(A.block_start(m + 1) - 1);    // beta^(m+1) - 1
    out.upper.push_back(density_prefix(A, upper_N).value);
    out.lower.push_back(density_prefix(A, lower_N).value);
    const Rational g = out.upper.back() - out.lower.back();
    if (m == 0 || g < out.gap) out.gap = g;
  }
  return out;
}

Rational shift_average(const BlockSet& A, std::int64_t omega, std::int64_t n) {
  if (n < 1) throw RangeError("shift average needs n >= 1");
  if (omega + n < 1) return Rational(0);
  const auto hits = A.prefix_count(omega + n) - A.prefix_count(std::max<std::int64_t>(omega, 0));
  return ratio(hits, static_cast<std::uint64_t>(n));
}

ApproxIdentity approx_identity_check(const BlockSet& A, std::int64_t omega, std::int64_t n) {
  if (n < 1 || n + omega < 1) throw RangeError("identity needs n >= 1 and n + omega >= 1");
  const Rational avg = shift_average(A, omega, n);
  const Rational d = density_prefix(A, n + omega).value;
  const Rational correction = make_rational(2 * omega + 1, n);  // (2w+1)/n
  ApproxIdentity out;
  out.lhs = abs(Rational(avg - 2 * d));
  out.rhs = correction;
  if (omega <= 0) {
    out.exact_form_holds = avg == Rational((2 + correction) * d);
    out.bound_holds = omega < 0 || out.lhs <= out.rhs;
  } else {
    const Rational d_omega = density_prefix(A, omega).value;
    out.exact_form_holds = avg == Rational(2 * d + correction * (d - d_omega));
    out.bound_holds = out.lhs <= out.rhs;
  }
  out.ok = out.exact_form_holds && out.bound_holds;
  return out;
}

std::optional<NonconvergenceWitness> nonconvergence_witness(const BlockSet& A, double eps0, std::int64_t omega,
                                                            std::int64_t N, std::int64_t budget) {
  if (!(eps0 > 0)) throw InvalidParameter("eps0 must be positive");
  if (budget < 0) throw InvalidParameter("budget must be nonnegative");
  const Rational eps = decimal(eps0);
  const std::int64_t first = std::max<std::int64_t>(N, 1);
  const std::int64_t last = N + budget;
  if (last <= first) return std::nullopt;
  std::vector<Rational> seen;
  seen.reserve(static_cast<std::size_t>(last - first + 1));
  Rational lo, hi;
  for (std::int64_t j = first; j <= last; ++j) {
    const Rational x = shift_average(A, omega, j);
    if (!seen.empty() && (x - lo > eps || hi - x > eps)) {
      for (std::size_t t = 0; t < seen.size(); ++t) {
        const Rational diff = abs(Rational(seen[t] - x));
        if (diff > eps) return NonconvergenceWitness{first + static_cast<std::int64_t>(t), j, diff};
      }
    }
    if (seen.empty() || x < lo) lo = x;
    if (seen.empty() || x > hi) hi = x;
    seen.push_back(x);
  }
  return std::nullopt;
}

}  // namespace ergo
