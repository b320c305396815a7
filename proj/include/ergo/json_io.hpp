#pragma once

// JSON forms of the serializable objects, with errors that name the offending
// field path (e.g. "system.weights").
//
//   system:      {"weights": ["1/3", "2/3"], "tau": [1, 0], "f": ["1", "-1/2"]}
//   growth:      {"kind": "constant", "c": 3} | {"kind": "affine", "a": 1, "b": 2}
//                | {"kind": "table", "values": [..]}
//   cyclic:      {"K": 4, "values": [..2K numbers..]}
//   block rule:  {"beta": 4, "gamma": 2}

#include <cstdint>
#include <string>
#include <vector>

#include "ergo/density.hpp"
#include "ergo/dynamics.hpp"
#include "ergo/errors.hpp"
#include "ergo/numeric.hpp"
#include "ergo/rates.hpp"
#include "json.hpp"

namespace ergo {

using json = nlohmann::json;

class ConfigError : public InvalidParameter {
 public:
  ConfigError(std::string field, const std::string& message)
      : InvalidParameter("config error at '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Field access; `path` is the path of `node`, used in error messages.
const json& require_field(const json& node, const std::string& path, const std::string& key);
std::string join_path(const std::string& path, const std::string& key);
std::string join_path(const std::string& path, std::size_t index);

double get_double(const json& node, const std::string& path);
std::uint64_t get_u64(const json& node, const std::string& path);
std::string get_string(const json& node, const std::string& path);
bool get_bool(const json& node, const std::string& path);
// Strings go through parse_rational; numbers are taken exactly.
Rational get_rational(const json& node, const std::string& path);
std::vector<double> get_double_list(const json& node, const std::string& path);
std::vector<std::uint64_t> get_u64_list(const json& node, const std::string& path);

PermutationSystem<Rational> parse_system(const json& node, const std::string& path);
json system_to_json(const PermutationSystem<Rational>& sys);

GrowthFunction parse_growth(const json& node, const std::string& path);
json growth_to_json(const GrowthFunction& g);

CyclicSystem<double> parse_cyclic(const json& node, const std::string& path);

BlockSet parse_block_rule(const json& node, const std::string& path);
json block_rule_to_json(const BlockSet& A);

}  // namespace ergo
