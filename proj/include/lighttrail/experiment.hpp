#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lighttrail/online.hpp"
#include "lighttrail/traffic.hpp"

namespace lighttrail {

struct ExperimentConfig {
  int n_min = 5;
  int n_max = 20;
  std::vector<Policy> policies = {Policy::kSeparateClass, Policy::kAllClass,
                                  Policy::kBaseline};
  std::vector<DestDistribution> dests = {DestDistribution::kUniform,
                                         DestDistribution::kBimodal};
  std::vector<double> r_mins = {0.01, 0.5};
  double alpha = 1.5;
  double lambda = 0.01;
  int horizon = 100;
  int repetitions = 150;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

struct ResultRow {
  int n = 0;
  Policy policy;
  DestDistribution dest;
  double r_min = 0;
  double alpha = 0;
  double lambda = 0;
  std::uint64_t seed = 0;
  int peak_wavelengths = 0;
  int total_allocated = 0;
  Bandwidth congestion = 0;
};

// Runs every policy on byte-identical traces per (n, scenario, repetition).
// Grid cells run concurrently; rows come back sorted so the thread count
// never changes the output.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

struct SummaryRow {
  int n = 0;
  Policy policy;
  DestDistribution dest;
  double r_min = 0;
  double mean_peak = 0;
  double mean_congestion = 0;  // in capacity units
  int count = 0;
};

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows);

// CSV with a versioned header comment; stable ordering.
std::string format_rows_csv(const std::vector<ResultRow>& rows);
std::string format_summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace lighttrail
