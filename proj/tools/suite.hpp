#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ik::suite {

struct Outcome {
  bool pass = false;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string detail;  // first failure, or a short summary
};

struct Property {
  std::string name;
  std::string summary;
  std::function<Outcome(std::uint64_t seed, double scale)> run;
};

/// The property suite. `scale` multiplies every trial count; 1.0 gives the
/// acceptance sizes.
const std::vector<Property>& properties();

}  // namespace ik::suite
