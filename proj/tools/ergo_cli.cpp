// ergo: experiment runner and small report tools.
//
// Exit codes: 0 success, 1 an experiment assertion failed, 2 bad usage or config.

#include <omp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergo/density.hpp"
#include "ergo/experiments.hpp"
#include "ergo/fluctuations.hpp"
#include "ergo/json_io.hpp"
#include "ergo/rates.hpp"

using namespace ergo;

namespace {

constexpr int kAssertionFailed = 1;
constexpr int kUsageError = 2;

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::optional<std::uint64_t>& seed,
            const std::vector<std::string>& only) {
  json config;
  try {
    config = json::parse(read_all(config_path));
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  const auto result = run_experiments(config, RunOptions{seed, only});
  write_reports(result, out_dir);
  for (const auto& r : result.reports) {
    std::printf("%s %s", r.passed ? "PASS" : "FAIL", r.name.c_str());
    if (!r.passed) std::printf(": %s", r.failure.c_str());
    std::printf("\n");
  }
  return result.passed ? 0 : kAssertionFailed;
}

template <class T>
int fluc_report(const std::vector<std::string>& tokens, const std::string& eps_text) {
  std::vector<T> x;
  T eps;
  if constexpr (std::is_same_v<T, Rational>) {
    for (const auto& t : tokens) x.push_back(parse_rational(t));
    eps = parse_rational(eps_text);
  } else {
    auto num = [](const std::string& t) {
      double v = 0;
      const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
      if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw InvalidParameter("not a number: '" + t + "'");
      return v;
    };
    for (const auto& t : tokens) x.push_back(num(t));
    eps = num(eps_text);
  }
  const auto res = fluc_count(std::span<const T>(x), eps);
  std::printf("count,%zu\n", res.count);
  std::printf("i,j\n");
  for (const auto& [i, j] : res.witness) std::printf("%zu,%zu\n", i, j);
  return 0;
}

int cmd_fluc(const std::string& input, const std::string& eps, bool exact) {
  std::istringstream in(read_all(input));
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  return exact ? fluc_report<Rational>(tokens, eps) : fluc_report<double>(tokens, eps);
}

int cmd_density(std::uint64_t beta, std::uint64_t gamma, std::size_t m_max, const std::vector<std::int64_t>& omegas,
                std::int64_t N, std::int64_t budget, double eps0) {
  const auto A = BlockSet::geometric(beta, gamma);
  const auto osc = density_oscillation(A, m_max);
  std::printf("m\tN_upper\tupper\tN_lower\tlower\n");
  for (std::size_t m = 0; m <= m_max; ++m)
    std::printf("%zu\t%llu\t%s\t%llu\t%s\n", m, static_cast<unsigned long long>(A.block_end(m) - 1),
                osc.upper[m].get_str().c_str(), static_cast<unsigned long long>(A.block_start(m + 1) - 1),
                osc.lower[m].get_str().c_str());
  std::printf("min_gap\t%s\n", osc.gap.get_str().c_str());
  std::printf("omega,N,i,j,abs_diff\n");
  for (auto w : omegas) {
    const auto wit = nonconvergence_witness(A, eps0, w, N, budget);
    if (wit)
      std::printf("%lld,%lld,%lld,%lld,%s\n", static_cast<long long>(w), static_cast<long long>(N),
                  static_cast<long long>(wit->i), static_cast<long long>(wit->j), wit->delta.get_str().c_str());
    else
      std::printf("%lld,%lld,,,\n", static_cast<long long>(w), static_cast<long long>(N));
  }
  return 0;
}

template <class T>
std::string show(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) return v.get_str();
  else return format_double(v);
}

template <class T>
int rates_report(const T& c_hat, const T& norm1, const T& eps, const T& lambda, const std::optional<GrowthFunction>& g) {
  const RateParams<T> p{c_hat, norm1};
  const RateFunction<T> phi = [&](const T& l, const T& e) { return modulus_from_weak_type(p, e, l); };
  const RateFunction<T> dlt = [&](const T& l, const T& e) { return delta(p, l, e); };
  std::printf("phi,%s\n", show(phi(lambda, eps)).c_str());
  std::printf("psi,%s\n", show(learnable_from_modulus(phi, lambda, eps)).c_str());
  std::printf("delta,%s\n", show(dlt(lambda, eps)).c_str());
  if (g) {
    const auto Phi = try_metastability_bound(dlt, lambda, eps, *g);
    std::printf("Phi,%s\n", Phi ? std::to_string(*Phi).c_str() : "overflow");
  }
  return 0;
}

int cmd_rates(const std::string& c_hat, const std::string& norm1, const std::string& eps, const std::string& lambda,
              const std::string& growth, bool exact) {
  std::optional<GrowthFunction> g;
  if (!growth.empty()) {
    json j;
    try {
      j = json::parse(growth);
    } catch (const json::parse_error& e) {
      throw ConfigError("--growth", std::string("invalid JSON: ") + e.what());
    }
    g = parse_growth(j, "--growth");
  }
  const Rational c = parse_rational(c_hat), n = parse_rational(norm1), e = parse_rational(eps),
                 l = parse_rational(lambda);
  if (exact) return rates_report<Rational>(c, n, e, l, g);
  return rates_report<double>(to_double(c), to_double(n), to_double(e), to_double(l), g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative ergodic averages: experiments and reports"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "OpenMP threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);

  auto* run = app.add_subcommand("run", "Run the experiments listed in a config");
  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> only;
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--experiment", only, "Run only this experiment (repeatable)");
  run->add_option("--jobs", jobs, "OpenMP threads")->check(CLI::NonNegativeNumber);

  auto* fluc = app.add_subcommand("fluc", "Count eps-fluctuations of a whitespace-separated sequence");
  std::string input, fluc_eps;
  bool fluc_exact = false;
  fluc->add_option("--input", input, "Sequence file, '-' for stdin")->required();
  fluc->add_option("--eps", fluc_eps, "Threshold, e.g. 0.25 or 1/4")->required();
  fluc->add_flag("--exact", fluc_exact, "Exact rational arithmetic");

  auto* dens = app.add_subcommand("density", "Density oscillation and nonconvergence witnesses for a block set");
  std::uint64_t beta = 4, gamma = 2;
  std::size_t m_max = 10;
  std::vector<std::int64_t> omegas{0, 5, -3};
  std::int64_t N = 64, budget = 16384;
  double eps0 = 0.1;
  dens->add_option("--beta", beta, "Block ratio")->capture_default_str();
  dens->add_option("--gamma", gamma, "Block length factor")->capture_default_str();
  dens->add_option("--m-max", m_max, "Largest block index reported")->capture_default_str();
  dens->add_option("--omega", omegas, "Starting points for the witness search");
  dens->add_option("--N", N, "Witness search start")->capture_default_str();
  dens->add_option("--budget", budget, "Witness search length")->capture_default_str();
  dens->add_option("--eps0", eps0, "Witness gap")->capture_default_str();

  auto* rates = app.add_subcommand("rates", "Print phi, psi, delta and Phi");
  std::string c_hat = "1", norm1, eps, lambda, growth;
  bool rates_exact = false;
  rates->add_option("--c-hat", c_hat, "Weak-type constant")->capture_default_str();
  rates->add_option("--norm1", norm1, "||f||_1")->required();
  rates->add_option("--eps", eps)->required();
  rates->add_option("--lambda", lambda)->required();
  rates->add_option("--growth", growth, "Growth function JSON, e.g. {\"kind\":\"affine\",\"a\":1,\"b\":2}");
  rates->add_flag("--exact", rates_exact, "Exact rational arithmetic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }
  if (jobs > 0) omp_set_num_threads(jobs);

  try {
    if (*run) return cmd_run(config_path, out_dir, seed, only);
    if (*fluc) return cmd_fluc(input, fluc_eps, fluc_exact);
    if (*dens) return cmd_density(beta, gamma, m_max, omegas, N, budget, eps0);
    if (*rates) return cmd_rates(c_hat, norm1, eps, lambda, growth, rates_exact);
  } catch (const InvalidParameter& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  }
  return kUsageError;
}
