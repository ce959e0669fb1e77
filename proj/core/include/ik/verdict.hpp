#pragma once

#include <string>
#include <vector>

namespace ik {

/// Outcome of a check. `path` locates the failing node in a derivation
/// (premise indices from the root).
struct Verdict {
  bool ok = true;
  std::string reason;
  std::vector<std::size_t> path;

  static Verdict accept() { return {}; }
  static Verdict reject(std::string why) { return {false, std::move(why), {}}; }
  explicit operator bool() const { return ok; }
};

}  // namespace ik
