#pragma once

#include <functional>
#include <string>
#include <vector>

namespace volterra {

enum class SelftestLevel { Fast, Full };

/// Accepts "fast" and "full".
SelftestLevel selftestLevelFromString(const std::string& name);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  double seconds = 0.0;
  bool passed() const;
};

/// Runs the invariant suite at the given level. Each check runs in isolation: an
/// exception fails that check with its message. onCheck, if set, sees each result
/// as soon as it is available.
SelftestReport runSelftest(SelftestLevel level, const std::function<void(const SelftestCheck&)>& onCheck = {});

}  // namespace volterra
