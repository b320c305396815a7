#include "ergo/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <variant>

#include "ergo/density.hpp"
#include "ergo/fluctuations.hpp"
#include "ergo/measure.hpp"
#include "ergo/random.hpp"
#include "ergo/rates.hpp"
#include "ergo/transference.hpp"
#include "ergo/validators.hpp"

namespace ergo {

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string Table::render(char sep) const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += sep;
      out += cells[i];
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"E0-smoke",        "E1-constant",   "E2-transference", "E3-weak-type",
                                              "E4-metastability", "E5-learnable", "E6-density"};
  return names;
}

namespace {

// ---- config fields ----

double opt_double(const json& n, const std::string& p, const char* k, double fallback) {
  const auto it = n.find(k);
  return it == n.end() ? fallback : get_double(*it, join_path(p, k));
}

std::uint64_t opt_u64(const json& n, const std::string& p, const char* k, std::uint64_t fallback) {
  const auto it = n.find(k);
  return it == n.end() ? fallback : get_u64(*it, join_path(p, k));
}

std::int64_t get_i64(const json& node, const std::string& path) {
  if (!node.is_number_integer()) throw ConfigError(path, "expected an integer");
  if (node.is_number_unsigned() && node.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ConfigError(path, "integer out of range");
  return node.get<std::int64_t>();
}

std::int64_t opt_i64(const json& n, const std::string& p, const char* k, std::int64_t fallback) {
  const auto it = n.find(k);
  return it == n.end() ? fallback : get_i64(*it, join_path(p, k));
}

std::vector<double> opt_doubles(const json& n, const std::string& p, const char* k, std::vector<double> fallback) {
  const auto it = n.find(k);
  if (it == n.end()) return fallback;
  auto v = get_double_list(*it, join_path(p, k));
  if (v.empty()) throw ConfigError(join_path(p, k), "expected a nonempty array");
  return v;
}

std::vector<std::size_t> opt_sizes(const json& n, const std::string& p, const char* k, std::vector<std::size_t> fallback) {
  const auto it = n.find(k);
  if (it == n.end()) return fallback;
  const auto v = get_u64_list(*it, join_path(p, k));
  if (v.empty()) throw ConfigError(join_path(p, k), "expected a nonempty array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1) throw ConfigError(join_path(join_path(p, k), i), "must be positive");
    out.push_back(static_cast<std::size_t>(v[i]));
  }
  return out;
}

std::vector<Family> opt_families(const json& n, const std::string& p, std::vector<Family> fallback) {
  const auto it = n.find("families");
  if (it == n.end()) return fallback;
  const auto path = join_path(p, "families");
  if (!it->is_array() || it->empty()) throw ConfigError(path, "expected a nonempty array");
  std::vector<Family> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto ip = join_path(path, i);
    try {
      out.push_back(parse_family(get_string((*it)[i], ip)));
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidParameter& e) {
      throw ConfigError(ip, e.what());
    }
  }
  return out;
}

void require_open_unit(const std::vector<double>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0 && v[i] < 1)) throw ConfigError(join_path(path, i), "must lie in (0,1)");
}

void require_positive(std::uint64_t v, const std::string& path) {
  if (v < 1) throw ConfigError(path, "must be positive");
}

// "c_hat": a number, or "E1" for the FLUC estimate of experiment E1.
std::optional<double> opt_c_hat(const json& n, const std::string& p, std::optional<double> fallback) {
  const auto it = n.find("c_hat");
  if (it == n.end()) return fallback;
  const auto path = join_path(p, "c_hat");
  if (it->is_string()) {
    if (it->get<std::string>() != "E1") throw ConfigError(path, "expected a number or \"E1\"");
    return std::nullopt;
  }
  const double c = get_double(*it, path);
  if (c < 0) throw ConfigError(path, "must be nonnegative");
  return c;
}

// ---- experiment parameters ----

struct SmokeParams {};

struct ConstantParams {
  std::vector<std::string> operators{"fluc", "max"};
  std::vector<double> eps{0.25, 0.5};
  std::vector<Family> families{Family::RandomIndicator, Family::UnitSpike, Family::Gaussian};
  std::vector<std::size_t> K{16, 64, 256, 1024};
  std::size_t trials = 200;
};

struct TransferenceParams {
  std::size_t systems = 200, max_atoms = 16, K_max = 8, grid_points = 3;
  double eps = 0.25;
  std::vector<PermutationSystem<Rational>> fixtures;  // checked at every K <= K_max
};

struct WeakTypeParams {
  std::vector<double> eps{0.25, 0.5};
  std::vector<Family> families{Family::RandomIndicator, Family::UnitSpike, Family::Gaussian};
  std::vector<std::size_t> K{16, 64, 256, 1024};
  std::size_t trials = 200;
  std::optional<double> c_hat;  // nullopt: take E1's
  double slack = 0.05, envelope_slack = 0.10;
  std::size_t envelope_from_K = 64;
};

struct MetastabilityParams {
  std::size_t systems = 200, max_atoms = 10, horizon = 10000;
  std::vector<double> eps{0.25, 0.5}, lambda{0.25, 0.5};
  std::optional<double> c_hat;
  std::uint64_t N_max = 4000, k_budget = 2000, settle = 25;
};

struct LearnableParams {
  std::size_t systems = 20, max_atoms = 10, chains = 100, horizon = 4000;
  std::vector<double> eps{0.25, 0.5}, lambda{0.25, 0.5};
};

struct DensityParams {
  std::uint64_t beta = 4, gamma = 2;
  std::size_t m_max = 10;
  std::int64_t omega_min = -50, omega_max = 50, n_max = 10000;
  double eps0 = 0.1;
  std::vector<std::int64_t> witness_omegas{0, 5, -3};
  std::int64_t N = 64, budget = 16384;
};

using Params = std::variant<SmokeParams, ConstantParams, TransferenceParams, WeakTypeParams, MetastabilityParams,
                            LearnableParams, DensityParams>;

struct Planned {
  std::string name;
  Params params;
};

Params parse_params(const std::string& name, const json& n, const std::string& p, std::optional<double> top_c_hat) {
  if (name == "E0-smoke") return SmokeParams{};
  if (name == "E1-constant") {
    ConstantParams c;
    if (const auto it = n.find("operators"); it != n.end()) {
      const auto path = join_path(p, "operators");
      if (!it->is_array() || it->empty()) throw ConfigError(path, "expected a nonempty array");
      c.operators.clear();
      for (std::size_t i = 0; i < it->size(); ++i) {
        auto s = get_string((*it)[i], join_path(path, i));
        if (s != "fluc" && s != "max") throw ConfigError(join_path(path, i), "expected \"fluc\" or \"max\"");
        c.operators.push_back(std::move(s));
      }
    }
    c.eps = opt_doubles(n, p, "eps", c.eps);
    require_open_unit(c.eps, join_path(p, "eps"));
    c.families = opt_families(n, p, c.families);
    c.K = opt_sizes(n, p, "K", c.K);
    c.trials = opt_u64(n, p, "trials", c.trials);
    require_positive(c.trials, join_path(p, "trials"));
    return c;
  }
  if (name == "E2-transference") {
    TransferenceParams c;
    c.systems = opt_u64(n, p, "systems", c.systems);
    c.max_atoms = opt_u64(n, p, "max_atoms", c.max_atoms);
    require_positive(c.max_atoms, join_path(p, "max_atoms"));
    c.K_max = opt_u64(n, p, "K_max", c.K_max);
    require_positive(c.K_max, join_path(p, "K_max"));
    c.grid_points = opt_u64(n, p, "grid_points", c.grid_points);
    require_positive(c.grid_points, join_path(p, "grid_points"));
    c.eps = opt_double(n, p, "eps", c.eps);
    if (!(c.eps > 0)) throw ConfigError(join_path(p, "eps"), "must be positive");
    if (const auto it = n.find("fixtures"); it != n.end()) {
      const auto fp = join_path(p, "fixtures");
      if (!it->is_array()) throw ConfigError(fp, "expected an array");
      for (std::size_t i = 0; i < it->size(); ++i) c.fixtures.push_back(parse_system((*it)[i], join_path(fp, i)));
    }
    return c;
  }
  if (name == "E3-weak-type") {
    WeakTypeParams c;
    c.eps = opt_doubles(n, p, "eps", c.eps);
    require_open_unit(c.eps, join_path(p, "eps"));
    c.families = opt_families(n, p, c.families);
    c.K = opt_sizes(n, p, "K", c.K);
    c.trials = opt_u64(n, p, "trials", c.trials);
    require_positive(c.trials, join_path(p, "trials"));
    c.c_hat = opt_c_hat(n, p, top_c_hat);
    c.slack = opt_double(n, p, "slack", c.slack);
    c.envelope_slack = opt_double(n, p, "envelope_slack", c.envelope_slack);
    if (c.slack < 0) throw ConfigError(join_path(p, "slack"), "must be nonnegative");
    if (c.envelope_slack < 0) throw ConfigError(join_path(p, "envelope_slack"), "must be nonnegative");
    c.envelope_from_K = opt_u64(n, p, "envelope_from_K", c.envelope_from_K);
    return c;
  }
  if (name == "E4-metastability") {
    MetastabilityParams c;
    c.systems = opt_u64(n, p, "systems", c.systems);
    c.max_atoms = opt_u64(n, p, "max_atoms", c.max_atoms);
    require_positive(c.max_atoms, join_path(p, "max_atoms"));
    c.horizon = opt_u64(n, p, "horizon", c.horizon);
    c.eps = opt_doubles(n, p, "eps", c.eps);
    require_open_unit(c.eps, join_path(p, "eps"));
    c.lambda = opt_doubles(n, p, "lambda", c.lambda);
    require_open_unit(c.lambda, join_path(p, "lambda"));
    c.c_hat = opt_c_hat(n, p, top_c_hat);
    if (const auto it = n.find("adversarial"); it != n.end()) {
      const auto ap = join_path(p, "adversarial");
      if (!it->is_object()) throw ConfigError(ap, "expected an object");
      c.N_max = opt_u64(*it, ap, "N_max", c.N_max);
      c.k_budget = opt_u64(*it, ap, "k_budget", c.k_budget);
      c.settle = opt_u64(*it, ap, "settle", c.settle);
    }
    if (c.N_max + c.k_budget >= c.horizon)
      throw ConfigError(join_path(p, "horizon"), "must exceed adversarial.N_max + adversarial.k_budget");
    return c;
  }
  if (name == "E5-learnable") {
    LearnableParams c;
    c.systems = opt_u64(n, p, "systems", c.systems);
    c.max_atoms = opt_u64(n, p, "max_atoms", c.max_atoms);
    require_positive(c.max_atoms, join_path(p, "max_atoms"));
    c.chains = opt_u64(n, p, "chains", c.chains);
    c.horizon = opt_u64(n, p, "horizon", c.horizon);
    if (c.horizon < 4) throw ConfigError(join_path(p, "horizon"), "must be at least 4");
    c.eps = opt_doubles(n, p, "eps", c.eps);
    require_open_unit(c.eps, join_path(p, "eps"));
    c.lambda = opt_doubles(n, p, "lambda", c.lambda);
    require_open_unit(c.lambda, join_path(p, "lambda"));
    return c;
  }
  if (name == "E6-density") {
    DensityParams c;
    if (const auto it = n.find("block"); it != n.end()) {
      const auto A = parse_block_rule(*it, join_path(p, "block"));
      c.beta = A.beta();
      c.gamma = A.gamma();
    }
    c.m_max = opt_u64(n, p, "m_max", c.m_max);
    require_positive(c.m_max, join_path(p, "m_max"));
    c.omega_min = opt_i64(n, p, "omega_min", c.omega_min);
    c.omega_max = opt_i64(n, p, "omega_max", c.omega_max);
    if (c.omega_min > c.omega_max) throw ConfigError(join_path(p, "omega_max"), "must be at least omega_min");
    c.n_max = opt_i64(n, p, "n_max", c.n_max);
    c.eps0 = opt_double(n, p, "eps0", c.eps0);
    if (!(c.eps0 > 0)) throw ConfigError(join_path(p, "eps0"), "must be positive");
    if (const auto it = n.find("witness_omegas"); it != n.end()) {
      const auto wp = join_path(p, "witness_omegas");
      if (!it->is_array()) throw ConfigError(wp, "expected an array");
      c.witness_omegas.clear();
      for (std::size_t i = 0; i < it->size(); ++i) c.witness_omegas.push_back(get_i64((*it)[i], join_path(wp, i)));
    }
    c.N = opt_i64(n, p, "N", c.N);
    c.budget = opt_i64(n, p, "budget", c.budget);
    if (c.budget < 0) throw ConfigError(join_path(p, "budget"), "must be nonnegative");
    const auto A = BlockSet::geometric(c.beta, c.gamma);
    if (c.m_max + 1 >= A.block_count()) throw ConfigError(join_path(p, "m_max"), "exceeds the 64-bit block range");
    return c;
  }
  throw ConfigError(join_path(p, "name"), "unknown experiment '" + name + "'");
}

// ---- running ----

struct Context {
  std::uint64_t seed = 0;
  ConstantParams e1_params;  // used when E1 is needed but not selected
  std::optional<ExperimentReport> e1;
};

std::uint64_t experiment_seed(const Context& ctx, const std::string& name) { return mix64(ctx.seed ^ name_key(name)); }

std::string b(bool x) { return x ? "true" : "false"; }

void fail_row(ExperimentReport& r, const std::string& what) {
  if (r.passed) r.failure = "row " + std::to_string(r.csv.rows.size()) + ": " + what;
  r.passed = false;
}

ExperimentReport run_smoke(const Context&) {
  ExperimentReport r;
  r.csv.columns = {"check", "value", "expected", "ok"};
  auto add = [&](const std::string& check, const std::string& value, const std::string& expected) {
    r.csv.rows.push_back({check, value, expected, b(value == expected)});
    if (value != expected) fail_row(r, check);
  };
  const FiniteProbSpace half(std::vector<Rational>{make_rational(1, 2), make_rational(1, 2)});
  const Automorphism swap(std::vector<std::size_t>{1, 0});
  const PermutationSystem<Rational> sys(half, swap, SimpleFunction<Rational>(std::vector<Rational>{1, -1}));

  const std::vector<Rational> x{0, 1, 0, 1};
  add("fluc_count(0,1,0,1; 1/2)", std::to_string(fluc_count(std::span<const Rational>(x), make_rational(1, 2)).count),
      "3");
  add("integral of f o tau", integrate(half, compose(sys.f(), swap)).get_str(), integrate(half, sys.f()).get_str());
  add("transference identity, swap, K=2",
      b(transference_identity_check(sys, OscillationOperator::fluc(0.5), 2, 0.5).ok), "true");
  add("density d_1 (beta=4, gamma=2)", density_prefix(BlockSet::geometric(4, 2), 1).value.get_str(), "1/3");
  const RateParams<Rational> rp{1, 1};
  add("delta(lambda=1/2, eps=1/2)", delta(rp, make_rational(1, 2), make_rational(1, 2)).get_str(), "256");
  const PermutationSystem<Rational> indicator(half, swap, SimpleFunction<Rational>(std::vector<Rational>{1, 0}));
  const AverageTable<Rational> table(indicator, 64);
  add("metastability, swap indicator, g=4, Phi=1",
      b(validate_uniform_metastability(table, std::uint64_t{1}, 0.5, 0.3, GrowthFunction::constant(4)).verdict), "true");

  r.tsv.columns = {"check_index", "ok"};
  for (std::size_t i = 0; i < r.csv.rows.size(); ++i) r.tsv.rows.push_back({std::to_string(i), r.csv.rows[i][3]});
  r.summary = {{"checks", r.csv.rows.size()}};
  return r;
}

std::string op_label(const OscillationOperator& op) {
  return op.kind() == OperatorKind::Fluc ? "fluc(" + format_double(op.eps()) + ")" : "max";
}

ExperimentReport run_constant(const ConstantParams& c, const Context& ctx) {
  ExperimentReport r;
  const auto seed = experiment_seed(ctx, "E1-constant");
  r.csv.columns = {"operator", "K", "family", "trial", "a", "lhs", "rhs", "ratio", "ok"};
  std::vector<OscillationOperator> ops;
  for (const auto& name : c.operators) {
    if (name == "fluc")
      for (double e : c.eps) ops.push_back(OscillationOperator::fluc(e));
    else
      ops.push_back(OscillationOperator::maximal());
  }
  std::optional<double> fluc_c, max_c;
  json per_op = json::array();
  std::map<std::pair<std::string, std::size_t>, double> envelope;
  for (const auto& op : ops) {
    double c_op = 0.0;
    std::optional<WeakTypeRow> argmax;
    json grid = json::object();
    for (auto fam : c.families) {
      const auto est = estimate_constant(op, c.K, fam, c.trials, seed);
      if (!argmax || est.c_hat > c_op) {
        argmax = est.argmax;
        c_op = est.c_hat;
      }
      for (const auto& row : est.rows) {
        r.csv.rows.push_back({op_label(op), std::to_string(row.K), row.family, std::to_string(row.trial),
                              format_double(row.a), std::to_string(row.lhs), format_double(row.rhs),
                              format_double(row.ratio), b(row.ok)});
        auto& e = envelope[{op_label(op), row.K}];
        e = std::max(e, row.ratio);
      }
    }
    for (auto K : c.K) grid[std::to_string(K)] = op.grid(K, op.kind() == OperatorKind::Fluc ? 0.0 : 1.0);
    json argmax_config = nullptr;
    if (argmax && c_op > 0)
      argmax_config = {{"K", argmax->K}, {"family", argmax->family}, {"trial", argmax->trial}, {"a", argmax->a}};
    per_op.push_back({{"operator", op_label(op)}, {"c_hat", c_op}, {"argmax_config", argmax_config}, {"grid", grid},
                      {"seed", seed}});
    auto& slot = op.kind() == OperatorKind::Fluc ? fluc_c : max_c;
    slot = std::max(slot.value_or(0.0), c_op);
  }
  r.tsv.columns = {"operator", "K", "envelope"};
  for (const auto& op : ops)
    for (auto K : c.K) {
      const auto key = std::make_pair(op_label(op), K);
      r.tsv.rows.push_back({key.first, std::to_string(K), format_double(envelope[key])});
    }
  r.summary = {{"c_hat", fluc_c ? json(*fluc_c) : json(nullptr)},
               {"c_hat_max", max_c ? json(*max_c) : json(nullptr)},
               {"operators", per_op},
               {"seed", seed}};
  return r;
}

double e1_fluc_constant(Context& ctx) {
  if (!ctx.e1) ctx.e1 = run_constant(ctx.e1_params, ctx);
  const auto& c = ctx.e1->summary["c_hat"];
  if (c.is_null()) throw ConfigError("experiments.E1-constant.operators", "E1 must include \"fluc\" to supply c_hat");
  return c.get<double>();
}

ExperimentReport run_transference(const TransferenceParams& c, const Context& ctx) {
  ExperimentReport r;
  const auto seed = experiment_seed(ctx, "E2-transference");
  r.csv.columns = {"system", "atoms", "operator", "K", "a", "mu_E0", "average", "cyclic_agrees", "ok"};
  struct Row {
    std::vector<std::string> cells;
    bool ok;
  };
  auto check = [&](const std::string& label, const PermutationSystem<Rational>& sys, std::size_t K,
                   std::vector<Row>& out) {
    double max_abs = 0.0;
    for (const auto& v : sys.f().values()) max_abs = std::max(max_abs, std::abs(to_double(v)));
    for (const auto& op : {OscillationOperator::fluc(c.eps), OscillationOperator::maximal()}) {
      auto grid = op.grid(K, max_abs);
      if (grid.empty()) grid = {0.5, 1.0, 2.0};
      std::vector<double> picks;
      for (std::size_t i = 0; i < c.grid_points; ++i)
        picks.push_back(grid[c.grid_points == 1 ? 0 : i * (grid.size() - 1) / (c.grid_points - 1)]);
      for (double a : picks) {
        const auto rep = transference_identity_check(sys, op, K, a);
        out.push_back({{label, std::to_string(sys.size()), op_label(op), std::to_string(K), format_double(a),
                        rep.mu[0].get_str(), rep.average.get_str(), b(rep.cyclic_form_agrees), b(rep.ok)},
                       rep.ok});
      }
    }
  };
  // random systems first, then every fixture at K = 1..K_max
  const std::size_t jobs = c.systems + c.fixtures.size() * c.K_max;
  std::vector<std::vector<Row>> per(jobs);
  const auto n = static_cast<std::int64_t>(jobs);
  std::vector<std::exception_ptr> errors(jobs);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t si = 0; si < n; ++si) {
    const auto s = static_cast<std::size_t>(si);
    try {
      if (s < c.systems) {
        Stream rng(seed, {s});
        const auto sys = random_rational_system(rng, 1, c.max_atoms);
        check(std::to_string(s), sys, 1 + rng.below(c.K_max), per[s]);
      } else {
        const std::size_t j = (s - c.systems) / c.K_max;
        check("fixture" + std::to_string(j), c.fixtures[j], 1 + (s - c.systems) % c.K_max, per[s]);
      }
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_K;  // K -> (checks, failures)
  for (auto& rows : per)
    for (auto& row : rows) {
      const auto K = static_cast<std::size_t>(std::stoul(row.cells[3]));
      r.csv.rows.push_back(std::move(row.cells));
      ++by_K[K].first;
      if (!row.ok) {
        ++by_K[K].second;
        fail_row(r, "identity fails for system " + r.csv.rows.back()[0]);
      }
    }
  r.tsv.columns = {"K", "checks", "failures"};
  std::size_t failures = 0;
  for (const auto& [K, cf] : by_K) {
    r.tsv.rows.push_back({std::to_string(K), std::to_string(cf.first), std::to_string(cf.second)});
    failures += cf.second;
  }
  r.summary = {{"checks", r.csv.rows.size()}, {"failures", failures}, {"seed", seed}};
  return r;
}

ExperimentReport run_weak_type(const WeakTypeParams& c, Context& ctx) {
  ExperimentReport r;
  const double c_hat = c.c_hat ? *c.c_hat : e1_fluc_constant(ctx);
  const double held = c_hat * (1.0 + c.slack);
  const auto seed = experiment_seed(ctx, "E3-weak-type");
  r.csv.columns = {"eps", "K", "family", "trial", "a", "lhs", "rhs", "count_threshold", "mu", "bound", "ok"};
  std::map<std::size_t, double> envelope;
  for (double eps : c.eps) {
    const auto op = OscillationOperator::fluc(eps, held);
    for (auto fam : c.families)
      for (auto K : c.K) {
        const auto grid = op.grid(K, 0.0);
        std::vector<double> counts;
        for (double a : grid) counts.push_back((a / eps) * (a / eps));
        for (std::size_t t = 0; t < c.trials; ++t) {
          Stream rng(seed, {name_key(to_string(fam)), K, t});
          const auto sys = sample_cyclic(fam, K, rng);
          const auto values = cyclic_operator_values(op, sys);
          const double abs_sum = sys.abs_sum();
          const auto report = fluc_weak_type_report(sys, eps, counts, held);
          for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto check = discrete_weak_type_check(op, values, abs_sum, grid[i]);
            const bool ok = check.ok && report[i].ok;
            r.csv.rows.push_back({format_double(eps), std::to_string(K), to_string(fam), std::to_string(t),
                                  format_double(grid[i]), std::to_string(check.lhs_count), format_double(check.rhs_bound),
                                  format_double(counts[i]), report[i].mu_value.get_str(), format_double(report[i].bound),
                                  b(ok)});
            if (!ok) fail_row(r, "weak-type bound fails");
            if (abs_sum > 0) {
              auto& e = envelope[K];
              e = std::max(e, static_cast<double>(check.lhs_count) * grid[i] / abs_sum);
            }
          }
        }
      }
  }
  r.tsv.columns = {"K", "envelope"};
  bool envelope_ok = true;
  std::optional<std::size_t> prev;
  for (auto K : c.K) {
    r.tsv.rows.push_back({std::to_string(K), format_double(envelope[K])});
    if (prev && *prev >= c.envelope_from_K && envelope[K] > envelope[*prev] * (1.0 + c.envelope_slack)) {
      envelope_ok = false;
      if (r.passed) r.failure = "envelope grows from K=" + std::to_string(*prev) + " to K=" + std::to_string(K);
      r.passed = false;
    }
    prev = K;
  }
  r.summary = {{"c_hat", c_hat}, {"c_hat_checked", held}, {"rows", r.csv.rows.size()}, {"envelope_ok", envelope_ok},
               {"seed", seed}};
  return r;
}

ExperimentReport run_metastability(const MetastabilityParams& c, Context& ctx) {
  ExperimentReport r;
  const double c_hat = c.c_hat ? *c.c_hat : e1_fluc_constant(ctx);
  const auto seed = experiment_seed(ctx, "E4-metastability");
  r.csv.columns = {"system", "g", "eps", "lambda", "delta", "Phi", "verdict", "witness", "horizon"};
  std::vector<std::vector<std::vector<std::string>>> per(c.systems);
  const auto n = static_cast<std::int64_t>(c.systems);
  std::vector<std::exception_ptr> errors(c.systems);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t si = 0; si < n; ++si) {
    const auto s = static_cast<std::size_t>(si);
    try {
      Stream rng(seed, {s});
      const auto sys_q = random_rational_system(rng, 1, c.max_atoms);
      const PermutationSystem<double> sys(sys_q.space(), sys_q.tau(), to_f64(sys_q.f()));
      const AverageTable<double> table(sys, c.horizon);
      const RateParams<double> params{c_hat, to_double(l1_norm(sys_q.space(), sys_q.f()))};
      const RateFunction<double> rate = [&](double lambda, double eps) {
        return params.c_hat > 0 ? delta(params, lambda, eps) : 0.0;
      };
      std::optional<GrowthFunction> fixed_g;
      switch (s % 4) {
        case 0: fixed_g = GrowthFunction::constant(1 + rng.below(20)); break;
        case 1: fixed_g = GrowthFunction::affine(1 + rng.below(2), rng.below(10)); break;
        case 2: {
          std::vector<std::uint64_t> v(rng.below(50));
          for (auto& x : v) x = rng.below(30);
          fixed_g = GrowthFunction::table(std::move(v));
          break;
        }
        default: break;
      }
      for (double eps : c.eps)
        for (double lambda : c.lambda) {
          const auto g = fixed_g ? *fixed_g : adversarial_growth(table, eps, lambda, c.N_max, c.k_budget, c.settle);
          const double d = rate(lambda, eps);
          const auto Phi = try_metastability_bound(rate, lambda, eps, g);
          std::string verdict, witness;
          try {
            const auto v = validate_uniform_metastability(table, Phi, lambda, eps, g);
            verdict = b(v.verdict);
            witness = v.witness ? std::to_string(*v.witness) : "";
          } catch (const BudgetError&) {
            verdict = "budget";
          }
          const std::string g_text = fixed_g ? g.describe() : "adversarial";
          per[s].push_back({std::to_string(s), g_text, format_double(eps), format_double(lambda), format_double(d),
                            Phi ? std::to_string(*Phi) : "overflow", verdict, witness, std::to_string(c.horizon)});
        }
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::map<std::pair<std::string, std::string>, std::array<std::size_t, 3>> agg;  // runs, failures, overflow
  for (auto& rows : per)
    for (auto& row : rows) {
      auto& a = agg[{row[2], row[3]}];
      ++a[0];
      if (row[5] == "overflow") ++a[2];
      const bool ok = row[6] == "true";
      const std::string what = "system " + row[0] + " g=" + row[1] + " eps=" + row[2] + " lambda=" + row[3] +
                               " verdict=" + row[6];
      r.csv.rows.push_back(std::move(row));
      if (!ok) {
        ++a[1];
        fail_row(r, what);
      }
    }
  r.tsv.columns = {"eps", "lambda", "runs", "failures", "phi_overflow"};
  std::size_t failures = 0;
  for (const auto& [key, a] : agg) {
    r.tsv.rows.push_back({key.first, key.second, std::to_string(a[0]), std::to_string(a[1]), std::to_string(a[2])});
    failures += a[1];
  }
  r.summary = {{"c_hat", c_hat}, {"c", 8 * c_hat * c_hat}, {"runs", r.csv.rows.size()}, {"failures", failures},
               {"horizon", c.horizon}, {"seed", seed}};
  return r;
}

ExperimentReport run_learnable(const LearnableParams& c, const Context& ctx) {
  ExperimentReport r;
  const auto seed = experiment_seed(ctx, "E5-learnable");
  r.csv.columns = {"system", "eps", "lambda", "phi_half", "psi", "chain", "intervals", "verdict", "witness"};
  std::vector<std::vector<std::vector<std::string>>> per(c.systems);
  const auto n = static_cast<std::int64_t>(c.systems);
  std::vector<std::exception_ptr> errors(c.systems);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t si = 0; si < n; ++si) {
    const auto s = static_cast<std::size_t>(si);
    try {
      Stream rng(seed, {s});
      const auto sys_q = random_rational_system(rng, 1, c.max_atoms);
      const PermutationSystem<double> sys(sys_q.space(), sys_q.tau(), to_f64(sys_q.f()));
      const AverageTable<double> table(sys, c.horizon);
      const std::vector<std::size_t> Ns{c.horizon / 4, c.horizon / 2, c.horizon};
      const RateFunction<double> phi = [&](double lambda, double eps) {
        const auto m = certified_modulus(table, eps, lambda);
        if (!validate_modulus(table, static_cast<double>(m), eps, lambda, Ns).verdict)
          throw std::logic_error("certified modulus failed validation");
        return static_cast<double>(m);
      };
      for (double eps : c.eps)
        for (double lambda : c.lambda) {
          const double phi_half = phi(lambda / 2, eps);
          const double psi = learnable_from_modulus(phi, lambda, eps);
          const auto count = static_cast<std::uint64_t>(std::floor(psi)) + 1;
          const std::uint64_t per_interval = (c.horizon - 1) / count;
          for (std::size_t ch = 0; ch < c.chains; ++ch) {
            std::vector<std::string> row{std::to_string(s),       format_double(eps), format_double(lambda),
                                         format_double(phi_half), format_double(psi), std::to_string(ch),
                                         std::to_string(count)};
            if (per_interval < 1) {
              row.insert(row.end(), {"budget", ""});
            } else {
              std::vector<Interval> chain;
              std::uint64_t at = 0;
              for (std::uint64_t k = 0; k < count; ++k) {
                const std::uint64_t len = 1 + rng.below(per_interval);
                const std::uint64_t a = at + rng.below(per_interval - len + 1);
                chain.push_back({a, a + len});
                at = a + len;
              }
              const auto v = validate_learnable_rate(table, psi, eps, lambda, chain);
              row.insert(row.end(), {b(v.verdict), v.witness ? std::to_string(*v.witness) : ""});
            }
            per[s].push_back(std::move(row));
          }
        }
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> agg;
  for (auto& rows : per)
    for (auto& row : rows) {
      auto& a = agg[{row[1], row[2]}];
      ++a.first;
      const bool ok = row[7] == "true";
      const std::string what = "system " + row[0] + " chain " + row[5] + " eps=" + row[1] + " lambda=" + row[2];
      r.csv.rows.push_back(std::move(row));
      if (!ok) {
        ++a.second;
        fail_row(r, what);
      }
    }
  r.tsv.columns = {"eps", "lambda", "chains", "failures"};
  std::size_t failures = 0;
  for (const auto& [key, a] : agg) {
    r.tsv.rows.push_back({key.first, key.second, std::to_string(a.first), std::to_string(a.second)});
    failures += a.second;
  }
  r.summary = {{"chains", r.csv.rows.size()}, {"failures", failures}, {"horizon", c.horizon}, {"seed", seed}};
  return r;
}

ExperimentReport run_density(const DensityParams& c, const Context&) {
  ExperimentReport r;
  const auto A = BlockSet::geometric(c.beta, c.gamma);
  std::size_t checks = 0, failures = 0;
  std::string first_bad;
  for (std::int64_t w = c.omega_min; w <= c.omega_max; ++w)
    for (std::int64_t n = std::max<std::int64_t>(1, 1 - w); n <= c.n_max; ++n) {
      ++checks;
      if (!approx_identity_check(A, w, n).ok) {
        if (failures++ == 0) first_bad = "identity fails at omega=" + std::to_string(w) + " n=" + std::to_string(n);
      }
    }
  if (failures) {
    r.passed = false;
    r.failure = first_bad;
  }
  r.csv.columns = {"omega", "N", "i", "j", "abs_diff"};
  std::size_t found = 0;
  for (auto w : c.witness_omegas) {
    const auto wit = nonconvergence_witness(A, c.eps0, w, c.N, c.budget);
    if (wit) {
      ++found;
      r.csv.rows.push_back({std::to_string(w), std::to_string(c.N), std::to_string(wit->i), std::to_string(wit->j),
                            wit->delta.get_str()});
    } else {
      r.csv.rows.push_back({std::to_string(w), std::to_string(c.N), "", "", ""});
      fail_row(r, "no witness at omega=" + std::to_string(w));
    }
  }
  const auto osc = density_oscillation(A, c.m_max);
  r.tsv.columns = {"m", "N_upper", "upper", "N_lower", "lower", "gap"};
  for (std::size_t m = 0; m <= c.m_max; ++m)
    r.tsv.rows.push_back({std::to_string(m), std::to_string(A.block_end(m) - 1), format_double(to_double(osc.upper[m])),
                          std::to_string(A.block_start(m + 1) - 1), format_double(to_double(osc.lower[m])),
                          format_double(to_double(Rational(osc.upper[m] - osc.lower[m])))});
  r.summary = {{"block", block_rule_to_json(A)},
               {"identity_checks", checks},
               {"identity_failures", failures},
               {"min_gap", osc.gap.get_str()},
               {"witnesses_found", found},
               {"eps0", c.eps0}};
  return r;
}

ExperimentReport run_one(const Planned& plan, Context& ctx) {
  ExperimentReport r = std::visit(
      [&](const auto& p) -> ExperimentReport {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SmokeParams>) return run_smoke(ctx);
        else if constexpr (std::is_same_v<P, ConstantParams>) {
          if (!ctx.e1) ctx.e1 = run_constant(p, ctx);
          return *ctx.e1;
        } else if constexpr (std::is_same_v<P, TransferenceParams>) return run_transference(p, ctx);
        else if constexpr (std::is_same_v<P, WeakTypeParams>) return run_weak_type(p, ctx);
        else if constexpr (std::is_same_v<P, MetastabilityParams>) return run_metastability(p, ctx);
        else if constexpr (std::is_same_v<P, LearnableParams>) return run_learnable(p, ctx);
        else return run_density(p, ctx);
      },
      plan.params);
  r.name = plan.name;
  return r;
}

}  // namespace

RunResult run_experiments(const json& config, const RunOptions& options) {
  if (!config.is_object()) throw ConfigError("<root>", "expected an object");
  Context ctx;
  ctx.seed = options.seed ? *options.seed : opt_u64(config, "", "seed", 0);
  std::optional<double> top_c_hat;
  if (const auto it = config.find("c_hat"); it != config.end()) top_c_hat = opt_c_hat(config, "", std::nullopt);

  const json& list = require_field(config, "", "experiments");
  if (!list.is_array()) throw ConfigError("experiments", "expected an array");
  std::vector<Planned> plans;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto path = join_path("experiments", i);
    const auto name = get_string(require_field(list[i], path, "name"), join_path(path, "name"));
    for (const auto& p : plans)
      if (p.name == name) throw ConfigError(join_path(path, "name"), "duplicate experiment '" + name + "'");
    plans.push_back({name, parse_params(name, list[i], path, top_c_hat)});
    if (const auto* e1 = std::get_if<ConstantParams>(&plans.back().params)) ctx.e1_params = *e1;
  }
  for (std::size_t i = 0; i < options.only.size(); ++i) {
    const auto& want = options.only[i];
    const bool known = std::any_of(plans.begin(), plans.end(), [&](const Planned& p) { return p.name == want; });
    if (!known) throw ConfigError("--experiment[" + std::to_string(i) + "]", "'" + want + "' is not in the config");
  }

  RunResult result;
  json experiments = json::array();
  for (const auto& plan : plans) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), plan.name) == options.only.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    auto report = run_one(plan, ctx);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    experiments.push_back({{"name", report.name},
                           {"passed", report.passed},
                           {"failure", report.failure.empty() ? json(nullptr) : json(report.failure)},
                           {"seconds", secs},
                           {"summary", report.summary}});
    result.passed = result.passed && report.passed;
    result.reports.push_back(std::move(report));
  }
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  result.summary = {{"timestamp", stamp}, {"seed", ctx.seed}, {"passed", result.passed}, {"experiments", experiments}};
  return result;
}

void write_reports(const RunResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& file, const std::string& body) {
    std::ofstream out(out_dir / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (out_dir / file).string());
    out << body;
  };
  for (const auto& r : result.reports) {
    write(r.name + ".csv", r.csv.render(','));
    write(r.name + ".tsv", r.tsv.render('\t'));
    json j{{"name", r.name}, {"passed", r.passed}, {"summary", r.summary}};
    j["failure"] = r.failure.empty() ? json(nullptr) : json(r.failure);
    write(r.name + ".json", j.dump(2) + "\n");
  }
  write("summary.json", result.summary.dump(2) + "\n");
}

}  // namespace ergo
