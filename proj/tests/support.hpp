#pragma once

#include <string>
#include <vector>

#include "ergo/numeric.hpp"

namespace testing_support {

inline ergo::Rational q(const char* text) { return ergo::parse_rational(text); }

inline std::vector<ergo::Rational> qs(std::initializer_list<const char*> items) {
  std::vector<ergo::Rational> out;
  for (auto s : items) out.push_back(ergo::parse_rational(s));
  return out;
}

}  // namespace testing_support
