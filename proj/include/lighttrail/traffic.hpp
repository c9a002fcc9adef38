#pragma once

#include <cstdint>
#include <string>

#include "lighttrail/core.hpp"
#include "lighttrail/rng.hpp"

namespace lighttrail {

enum class DestDistribution { kUniform, kUniformClass, kBimodal, kShortPreferred };

DestDistribution parse_dest_distribution(const std::string& name);
std::string dest_distribution_name(DestDistribution dist);

struct LoadParams {
  double lambda = 0.01;    // Poisson parameter for durations
  DestDistribution dest = DestDistribution::kUniform;
  double r_min = 0.01;     // minimum bandwidth fraction, in (0, 1]
  double alpha = 1.5;      // Pareto shape, > 1
  int horizon = 100;       // time steps of arrival generation
  std::uint64_t seed = 1;
};

// Poisson(lambda) clamped to a minimum of one step.
int sample_duration(double lambda, SplitMix64& rng);

// Pareto draw with scale 100*r_min interpreted as a percent of capacity,
// capped at the full wavelength. Result is in [r_min, 1] * kCapacity.
Bandwidth sample_bandwidth(double r_min, double alpha, SplitMix64& rng);

// Ring destination distributions. Distance classes follow the length
// classes, capped at the half-ring distance floor(n/2).
int sample_destination(DestDistribution dist, int src, int n, SplitMix64& rng);

// Per time step every non-busy node emits one transmission and stays busy
// for its sampled duration; departures are scheduled at arrival + duration.
// Deterministic given (n, params).
EventSequence generate_workload(int n, const LoadParams& params);

}  // namespace lighttrail
