#include "ergo/transference.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <limits>

namespace ergo {

OscillationOperator::OscillationOperator(OperatorKind kind, double eps, double c_hat)
    : kind_(kind), eps_(eps), c_hat_(c_hat) {
  if (kind_ == OperatorKind::Fluc && !(eps_ > 0)) throw InvalidParameter("FLUC operator needs eps > 0");
  if (!(c_hat_ >= 0) || !std::isfinite(c_hat_)) throw InvalidParameter("operator constant must be finite and >= 0");
}

OscillationOperator OscillationOperator::fluc(double eps, double c_hat) {
  return OscillationOperator(OperatorKind::Fluc, eps, c_hat);
}

OscillationOperator OscillationOperator::maximal(double c_hat) {
  return OscillationOperator(OperatorKind::Max, 0.0, c_hat);
}

OscillationOperator OscillationOperator::with_constant(double c_hat) const {
  return OscillationOperator(kind_, eps_, c_hat);
}

std::string OscillationOperator::name() const {
  if (kind_ == OperatorKind::Max) return "MAX";
  char buf[64];
  std::snprintf(buf, sizeof buf, "FLUC(%g)", eps_);
  return buf;
}

std::vector<double> OscillationOperator::grid(std::size_t K, double max_abs_f) const {
  double lo, hi;
  if (kind_ == OperatorKind::Fluc) {
    lo = eps_ / 4.0;
    hi = eps_ * std::sqrt(static_cast<double>(K));
  } else {
    if (!(max_abs_f > 0)) return {};
    lo = max_abs_f / static_cast<double>(2 * K);
    hi = max_abs_f;
  }
  std::vector<double> out;
  for (double a = lo; a < hi; a *= 2.0) out.push_back(a);
  out.push_back(hi);
  return out;
}

namespace {

std::size_t cyclic_fluc(const CyclicSystem<double>& sys, std::size_t k, double eps) {
  FlucScanner<double> scan(eps);
  double sum = 0.0;
  for (std::size_t n = 1; n <= sys.K(); ++n) {
    sum += sys.value(sys.wrap(static_cast<std::int64_t>(k + n)));
    scan.push(sum / static_cast<double>(n));
  }
  return scan.count();
}

double cyclic_value(const OscillationOperator& op, const CyclicSystem<double>& sys, std::size_t k) {
  if (op.kind() == OperatorKind::Fluc)
    return op.eps() * std::sqrt(static_cast<double>(cyclic_fluc(sys, k, op.eps())));
  const std::size_t K = sys.K();
  double sum = 0.0;
  double best = 0.0;
  for (std::size_t n = 1; n <= K; ++n) {
    sum += sys.value(sys.wrap(static_cast<std::int64_t>(k + n)));
    best = std::max(best, std::abs(sum / static_cast<double>(n)));
  }
  return best;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Per-trial rows for one sampled cyclic system.
void trial_rows(const OscillationOperator& op, const OscillationOperator& unit, std::size_t K, Family family,
                std::size_t trial, std::uint64_t seed, bool record_ok,
                std::vector<WeakTypeRow>& out) {
  Stream rng(seed, {name_key(to_string(family)), K, trial});
  const auto sys = sample_cyclic(family, K, rng);
  const auto values = serial::cyclic_operator_values(op, sys);
  const double abs_sum = sys.abs_sum();
  const std::string name = op.name();
  const std::string fam = to_string(family);
  for (double a : op.grid(K, max_abs(sys.values()))) {
    WeakTypeRow row;
    row.op = name;
    row.K = K;
    row.family = fam;
    row.trial = trial;
    row.a = a;
    for (double v : values)
      if (op.value_at_least(v, a)) ++row.lhs;
    row.rhs = (record_ok ? op : unit).bound_shape(a) * abs_sum;
    if (row.rhs > 0)
      row.ratio = static_cast<double>(row.lhs) / row.rhs;
    else
      row.ratio = row.lhs == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    row.ok = record_ok ? at_most(static_cast<double>(row.lhs), row.rhs) : true;
    out.push_back(std::move(row));
  }
}

std::vector<WeakTypeRow> sample_rows(const OscillationOperator& op, std::span<const std::size_t> K_list, Family family,
                                     std::size_t trials, std::uint64_t seed, bool parallel, bool record_ok) {
  if (K_list.empty()) throw InvalidParameter("K list is empty");
  if (trials < 1) throw InvalidParameter("trials must be >= 1");
  for (auto K : K_list)
    if (K < 1) throw InvalidParameter("K values must be positive");
  const auto unit = op.with_constant(1.0);
  const std::size_t jobs = K_list.size() * trials;
  std::vector<std::vector<WeakTypeRow>> per_job(jobs);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs); ++j) {
      const auto job = static_cast<std::size_t>(j);
      trial_rows(op, unit, K_list[job / trials], family, job % trials, seed, record_ok, per_job[job]);
    }
  } else {
    for (std::size_t job = 0; job < jobs; ++job)
      trial_rows(op, unit, K_list[job / trials], family, job % trials, seed, record_ok, per_job[job]);
  }
  std::vector<WeakTypeRow> rows;
  for (auto& r : per_job) std::move(r.begin(), r.end(), std::back_inserter(rows));
  return rows;
}

ConstantEstimate summarize(std::vector<WeakTypeRow> rows, std::uint64_t seed) {
  ConstantEstimate out;
  out.seed = seed;
  bool first = true;
  for (const auto& r : rows) {
    if (first || r.ratio > out.c_hat) {
      out.c_hat = r.ratio;
      out.argmax = r;
      first = false;
    }
  }
  out.rows = std::move(rows);
  return out;
}

}  // namespace

namespace serial {

std::vector<double> cyclic_operator_values(const OscillationOperator& op, const CyclicSystem<double>& sys) {
  std::vector<double> out(sys.period());
  for (std::size_t k = 1; k <= sys.period(); ++k) out[k - 1] = cyclic_value(op, sys, k);
  return out;
}

ConstantEstimate estimate_constant(const OscillationOperator& op, std::span<const std::size_t> K_list, Family family,
                                   std::size_t trials, std::uint64_t seed) {
  return summarize(sample_rows(op.with_constant(1.0), K_list, family, trials, seed, false, false), seed);
}

}  // namespace serial

std::vector<double> cyclic_operator_values(const OscillationOperator& op, const CyclicSystem<double>& sys) {
  std::vector<double> out(sys.period());
  const auto period = static_cast<std::int64_t>(sys.period());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 1; k <= period; ++k)
    out[static_cast<std::size_t>(k - 1)] = cyclic_value(op, sys, static_cast<std::size_t>(k));
  return out;
}

WeakTypeCheck discrete_weak_type_check(const OscillationOperator& op, std::span<const double> values, double abs_sum,
                                       double a) {
  if (!(a > 0)) throw InvalidParameter("threshold a must be positive");
  WeakTypeCheck out;
  for (double v : values)
    if (op.value_at_least(v, a)) ++out.lhs_count;
  out.rhs_bound = op.bound_shape(a) * abs_sum;
  out.ok = at_most(static_cast<double>(out.lhs_count), out.rhs_bound);
  return out;
}

ConstantEstimate estimate_constant(const OscillationOperator& op, std::span<const std::size_t> K_list, Family family,
                                   std::size_t trials, std::uint64_t seed) {
  return summarize(sample_rows(op.with_constant(1.0), K_list, family, trials, seed, true, false), seed);
}

std::vector<WeakTypeRow> weak_type_sweep(const OscillationOperator& op, std::span<const std::size_t> K_list, Family family,
                                         std::size_t trials, std::uint64_t seed) {
  return sample_rows(op, K_list, family, trials, seed, true, true);
}

std::vector<FlucReportRow> fluc_weak_type_report(const CyclicSystem<double>& sys, double eps, std::span<const double> a_grid,
                                                 double c_hat) {
  if (!(eps > 0 && eps < 1)) throw InvalidParameter("eps must lie in (0,1)");
  if (a_grid.empty()) throw InvalidParameter("a grid is empty");
  for (double a : a_grid)
    if (!(a > 0)) throw InvalidParameter("a grid values must be positive");
  std::vector<std::size_t> counts(sys.period());
  const auto period = static_cast<std::int64_t>(sys.period());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 1; k <= period; ++k)
    counts[static_cast<std::size_t>(k - 1)] = cyclic_fluc(sys, static_cast<std::size_t>(k), eps);
  const Rational atom_weight(1, static_cast<unsigned long>(sys.period()));
  const double norm1 = sys.abs_sum() / static_cast<double>(sys.period());
  std::vector<FlucReportRow> rows;
  for (double a : a_grid) {
    FlucReportRow row;
    row.a = a;
    std::size_t hits = 0;
    for (auto c : counts)
      if (static_cast<double>(c) >= a) ++hits;
    row.mu_value = atom_weight * Rational(static_cast<unsigned long>(hits));
    row.mu_value.canonicalize();
    row.bound = c_hat * norm1 / (eps * std::sqrt(a));
    row.ok = at_most(to_double(row.mu_value), row.bound);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ergo
