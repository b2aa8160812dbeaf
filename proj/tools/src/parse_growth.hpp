#pragma once

#include <string>

#include "osgood/growth.hpp"
#include "osgood/lab/config.hpp"

namespace osgood::lab {

/// "logM" (M >= 1) names the iterated logarithm log_M.
inline GrowthFunction parse_growth(const std::string& name) {
  if (name.rfind("log", 0) == 0 && name.size() > 3) {
    const std::string digits = name.substr(3);
    if (digits.find_first_not_of("0123456789") == std::string::npos) {
      const int m = std::stoi(digits);
      require(m >= 1 && m <= 4, "theta: log order must be in [1, 4]");
      return GrowthFunction::iterated_log(m);
    }
  }
  throw ValidationError("theta: expected log1 .. log4, got '" + name + "'");
}

}  // namespace osgood::lab
