#pragma once

#include <string>
#include <vector>

namespace phnls {

struct SelftestCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
  double seconds = 0.0;
};

struct SelftestOptions {
  bool corrupt_quadrature = false;  // fault fixture: shifts one Hermite table entry
};

// Fast invariant suite: transforms, orthonormality, projector algebra, linear
// isometry and conservation over a one-second run at the default resolution.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& opts = {});

}  // namespace phnls
