#include "lighttrail/experiment.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include "lighttrail/rng.hpp"

namespace lighttrail {

namespace {

struct Cell {
  int n;
  DestDistribution dest;
  double r_min;
};

std::vector<ResultRow> run_cell(const Cell& cell, const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    LoadParams params;
    params.lambda = cfg.lambda;
    params.dest = cell.dest;
    params.r_min = cell.r_min;
    params.alpha = cfg.alpha;
    params.horizon = cfg.horizon;
    params.seed = mix_seed(cfg.seed, (static_cast<std::uint64_t>(cell.n) << 40) ^
                                         (static_cast<std::uint64_t>(cell.dest) << 32) ^
                                         (static_cast<std::uint64_t>(cell.r_min * 1000) << 16) ^
                                         static_cast<std::uint64_t>(rep));
    EventSequence trace = generate_workload(cell.n, params);
    for (Policy policy : cfg.policies) {
      OnlineResult result = run_online(trace, policy, Topology::kRing, cell.n);
      rows.push_back({cell.n, policy, cell.dest, cell.r_min, cfg.alpha,
                      cfg.lambda, params.seed, result.peak_wavelengths,
                      result.total_allocated, result.congestion});
    }
  }
  return rows;
}

int policy_order(Policy p) { return static_cast<int>(p); }
int dest_order(DestDistribution d) { return static_cast<int>(d); }

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.n != b.n) return a.n < b.n;
    if (policy_order(a.policy) != policy_order(b.policy))
      return policy_order(a.policy) < policy_order(b.policy);
    if (dest_order(a.dest) != dest_order(b.dest))
      return dest_order(a.dest) < dest_order(b.dest);
    if (a.r_min != b.r_min) return a.r_min < b.r_min;
    return a.seed < b.seed;
  });
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (int n = config.n_min; n <= config.n_max; ++n)
    for (DestDistribution dest : config.dests)
      for (double r_min : config.r_mins) cells.push_back({n, dest, r_min});

  unsigned workers = config.threads > 0
                         ? static_cast<unsigned>(config.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  std::vector<ResultRow> rows;
  std::size_t next = 0;
  while (next < cells.size()) {
    std::vector<std::future<std::vector<ResultRow>>> batch;
    for (unsigned i = 0; i < workers && next < cells.size(); ++i, ++next) {
      batch.push_back(std::async(std::launch::async, run_cell, cells[next],
                                 std::cref(config)));
    }
    for (auto& f : batch) {
      auto part = f.get();
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<int, int, int, double>, SummaryRow> cells;
  for (const auto& row : rows) {
    auto key = std::make_tuple(row.n, policy_order(row.policy),
                               dest_order(row.dest), row.r_min);
    SummaryRow& cell = cells[key];
    cell.n = row.n;
    cell.policy = row.policy;
    cell.dest = row.dest;
    cell.r_min = row.r_min;
    cell.mean_peak += row.peak_wavelengths;
    cell.mean_congestion += static_cast<double>(row.congestion) / kCapacity;
    cell.count += 1;
  }
  std::vector<SummaryRow> out;
  for (auto& [key, cell] : cells) {
    cell.mean_peak /= cell.count;
    cell.mean_congestion /= cell.count;
    out.push_back(cell);
  }
  return out;
}

std::string format_rows_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "# lighttrail-rows v1\n";
  out << "n,policy,dest,r_min,alpha,lambda,seed,peak_wavelengths,"
         "total_allocated,congestion_ppm\n";
  for (const auto& r : rows) {
    out << r.n << ',' << policy_name(r.policy) << ','
        << dest_distribution_name(r.dest) << ',' << r.r_min << ',' << r.alpha
        << ',' << r.lambda << ',' << r.seed << ',' << r.peak_wavelengths << ','
        << r.total_allocated << ',' << r.congestion << "\n";
  }
  return out.str();
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "# lighttrail-summary v1\n";
  out << "n,policy,dest,r_min,mean_peak_wavelengths,mean_congestion,count\n";
  for (const auto& r : rows) {
    out << r.n << ',' << policy_name(r.policy) << ','
        << dest_distribution_name(r.dest) << ',' << r.r_min << ','
        << r.mean_peak << ',' << r.mean_congestion << ',' << r.count << "\n";
  }
  return out.str();
}

}  // namespace lighttrail
