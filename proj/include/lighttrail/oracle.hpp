#pragma once

#include <vector>

#include "lighttrail/core.hpp"

namespace lighttrail {

struct OracleResult {
  int wavelengths = 0;
  Schedule witness;
};

// Exact minimum wavelength count for a non-splittable stationary instance,
// by backtracking over (wavelength, trail-group) assignments with pruning:
// the search starts at the congestion lower bound, opens wavelengths only
// in index order, and memoizes infeasible partial states. Intended for
// desk-scale instances; rejects more than 10 transmissions or more than
// 8 nodes, and throws std::runtime_error when max_wavelengths is exhausted.
OracleResult brute_force_min_wavelengths(
    const std::vector<Transmission>& instance, int node_count,
    int max_wavelengths = 16);

}  // namespace lighttrail
