#pragma once

#include "mctrack/tracker.hpp"

namespace fixtures {

/// Three tracks by three objects: the first two pairs are the cheapest
/// feasible choices, the third track and the third object are infeasible
/// everywhere.
inline mctrack::CostMatrix three_by_three_costs(double phi = 1e6) {
  mctrack::CostMatrix c(3, 3, phi);
  c.at(0, 0) = 1.882;
  c.at(0, 1) = 28.79;
  c.at(1, 0) = 19.43;
  c.at(1, 1) = 4.556;
  return c;
}

}  // namespace fixtures
