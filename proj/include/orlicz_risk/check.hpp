#pragma once

#include <cstddef>
#include <string>

namespace orlicz_risk {

/// Result of one tolerance-checked identity or inequality.
///
/// `observed` is the worst deviation seen (same units as `allowed`);
/// `detail` names the first witness that exceeded the tolerance.
struct CheckResult {
  std::string name;
  bool pass = true;
  double observed = 0.0;
  double allowed = 0.0;
  std::size_t samples = 0;
  std::string detail;

  /// NaN deviations count as failures.
  void record(double deviation, const std::string& witness) {
    ++samples;
    if (!(deviation <= observed)) {
      observed = deviation;
    }
    if (!(deviation <= allowed) && pass) {
      pass = false;
      detail = witness;
    }
  }
};

} // namespace orlicz_risk
