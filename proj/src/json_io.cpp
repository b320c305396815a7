#include "ergo/json_io.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>
#include <variant>

namespace ergo {

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string join_path(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

const json& require_field(const json& node, const std::string& path, const std::string& key) {
  if (!node.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) throw ConfigError(join_path(path, key), "missing field");
  return *it;
}

double get_double(const json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError(path, "expected a number");
  const double x = node.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

std::uint64_t get_u64(const json& node, const std::string& path) {
  if (node.is_number_unsigned()) return node.get<std::uint64_t>();
  if (node.is_number_integer()) {
    const auto v = node.get<std::int64_t>();
    if (v < 0) throw ConfigError(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  throw ConfigError(path, "expected a nonnegative integer");
}

std::string get_string(const json& node, const std::string& path) {
  if (!node.is_string()) throw ConfigError(path, "expected a string");
  return node.get<std::string>();
}

bool get_bool(const json& node, const std::string& path) {
  if (!node.is_boolean()) throw ConfigError(path, "expected true or false");
  return node.get<bool>();
}

Rational get_rational(const json& node, const std::string& path) {
  if (node.is_string()) {
    try {
      return parse_rational(node.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (node.is_number_integer()) {
    return Rational(mpz_class(node.dump()));
  }
  return decimal(get_double(node, path));
}

std::vector<double> get_double_list(const json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(get_double(node[i], join_path(path, i)));
  return out;
}

std::vector<std::uint64_t> get_u64_list(const json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError(path, "expected an array");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(get_u64(node[i], join_path(path, i)));
  return out;
}

PermutationSystem<Rational> parse_system(const json& node, const std::string& path) {
  const auto wpath = join_path(path, "weights");
  const json& w = require_field(node, path, "weights");
  if (!w.is_array() || w.empty()) throw ConfigError(wpath, "expected a nonempty array");
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < w.size(); ++i) weights.push_back(get_rational(w[i], join_path(wpath, i)));

  const auto tpath = join_path(path, "tau");
  std::vector<std::size_t> perm;
  if (node.contains("tau")) {
    for (auto v : get_u64_list(node["tau"], tpath)) perm.push_back(static_cast<std::size_t>(v));
  } else {
    for (std::size_t i = 0; i < weights.size(); ++i) perm.push_back((i + 1) % weights.size());
  }

  const auto fpath = join_path(path, "f");
  const json& fj = require_field(node, path, "f");
  if (!fj.is_array()) throw ConfigError(fpath, "expected an array");
  std::vector<Rational> f;
  for (std::size_t i = 0; i < fj.size(); ++i) f.push_back(get_rational(fj[i], join_path(fpath, i)));

  std::optional<FiniteProbSpace> space;
  try {
    space.emplace(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(wpath, e.what());
  }
  std::optional<Automorphism> tau;
  try {
    tau.emplace(std::move(perm));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(tpath, e.what());
  }
  if (f.size() != space->size()) throw ConfigError(fpath, "expected one value per atom");
  try {
    return PermutationSystem<Rational>(std::move(*space), std::move(*tau), SimpleFunction<Rational>(std::move(f)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(tpath, e.what());
  }
}

json system_to_json(const PermutationSystem<Rational>& sys) {
  json j;
  for (const auto& w : sys.space().weights()) j["weights"].push_back(to_string(w));
  for (std::size_t i = 0; i < sys.size(); ++i) j["tau"].push_back(sys.tau().forward(i));
  for (const auto& v : sys.f().values()) j["f"].push_back(to_string(v));
  return j;
}

GrowthFunction parse_growth(const json& node, const std::string& path) {
  const auto kind = get_string(require_field(node, path, "kind"), join_path(path, "kind"));
  if (kind == "constant") return GrowthFunction::constant(get_u64(require_field(node, path, "c"), join_path(path, "c")));
  if (kind == "affine")
    return GrowthFunction::affine(get_u64(require_field(node, path, "a"), join_path(path, "a")),
                                  get_u64(require_field(node, path, "b"), join_path(path, "b")));
  if (kind == "table") return GrowthFunction::table(get_u64_list(require_field(node, path, "values"), join_path(path, "values")));
  throw ConfigError(join_path(path, "kind"), "unknown growth kind '" + kind + "'");
}

json growth_to_json(const GrowthFunction& g) {
  return std::visit(
      [](const auto& r) -> json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, GrowthFunction::Constant>) return {{"kind", "constant"}, {"c", r.c}};
        else if constexpr (std::is_same_v<R, GrowthFunction::Affine>) return {{"kind", "affine"}, {"a", r.a}, {"b", r.b}};
        else return {{"kind", "table"}, {"values", r.values}};
      },
      g.rule());
}

CyclicSystem<double> parse_cyclic(const json& node, const std::string& path) {
  const auto K = get_u64(require_field(node, path, "K"), join_path(path, "K"));
  auto values = get_double_list(require_field(node, path, "values"), join_path(path, "values"));
  try {
    return CyclicSystem<double>(static_cast<std::size_t>(K), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join_path(path, "values"), e.what());
  }
}

BlockSet parse_block_rule(const json& node, const std::string& path) {
  const auto beta = get_u64(require_field(node, path, "beta"), join_path(path, "beta"));
  const auto gamma = get_u64(require_field(node, path, "gamma"), join_path(path, "gamma"));
  try {
    return BlockSet::geometric(beta, gamma);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

json block_rule_to_json(const BlockSet& A) { return {{"beta", A.beta()}, {"gamma", A.gamma()}}; }

}  // namespace ergo
