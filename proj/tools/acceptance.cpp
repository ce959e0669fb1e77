// One line per acceptance criterion. Every criterion is exact: zero
// failures allowed. The soundness run also has a wall-clock budget.

#include <chrono>
#include <cstdio>

#include "suite.hpp"

namespace {

constexpr std::uint64_t kSeed = 20260101;
constexpr double kScale = 1.0;
constexpr double kSoundnessBudgetSeconds = 300.0;

}  // namespace

int main() {
  int failed = 0;
  int index = 0;
  for (const auto& p : ik::suite::properties()) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    auto o = p.run(kSeed, kScale);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass;
    if (p.name == "soundness" && secs > kSoundnessBudgetSeconds) {
      pass = false;
      o.detail += "; over the time budget";
    }
    failed += !pass;
    std::printf("%s %d %-22s %s (%.1fs)\n", pass ? "PASS" : "FAIL", index, p.name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria pass\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
