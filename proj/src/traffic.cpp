#include "lighttrail/traffic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lighttrail {

DestDistribution parse_dest_distribution(const std::string& name) {
  if (name == "uniform") return DestDistribution::kUniform;
  if (name == "uniformclass") return DestDistribution::kUniformClass;
  if (name == "bimodal") return DestDistribution::kBimodal;
  if (name == "shortpreferred") return DestDistribution::kShortPreferred;
  throw std::invalid_argument("unknown destination distribution: " + name);
}

std::string dest_distribution_name(DestDistribution dist) {
  switch (dist) {
    case DestDistribution::kUniform: return "uniform";
    case DestDistribution::kUniformClass: return "uniformclass";
    case DestDistribution::kBimodal: return "bimodal";
    case DestDistribution::kShortPreferred: return "shortpreferred";
  }
  return "?";
}

int sample_duration(double lambda, SplitMix64& rng) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (lambda > 700) throw std::invalid_argument("lambda too large for exp");
  // Knuth's product method; fine for the lambdas used here.
  double threshold = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.next_unit();
  } while (p > threshold);
  return std::max(1, k - 1);
}

Bandwidth sample_bandwidth(double r_min, double alpha, SplitMix64& rng) {
  if (r_min <= 0 || r_min > 1) throw std::invalid_argument("r_min outside (0, 1]");
  if (alpha <= 1) throw std::invalid_argument("alpha must exceed 1");
  double scale = 100.0 * r_min;  // percent of capacity
  double draw = scale / std::pow(rng.next_unit(), 1.0 / alpha);
  double fraction = std::min(1.0, draw / 100.0);
  Bandwidth ppm = std::llround(fraction * static_cast<double>(kCapacity));
  return std::clamp<Bandwidth>(ppm, 1, kCapacity);
}

namespace {

// Distance classes on the ring: class 0 is distance 1, class i covers
// (2^(i-1), 2^i], everything capped at the half-ring distance.
std::vector<int> class_destinations(int class_index, int src, int n) {
  int max_distance = n / 2;
  int lo = class_index == 0 ? 1 : (1 << (class_index - 1)) + 1;
  int hi = std::min(1 << class_index, max_distance);
  std::vector<int> nodes;
  for (int d = lo; d <= hi; ++d) {
    int a = (src + d) % n;
    int b = ((src - d) % n + n) % n;
    nodes.push_back(a);
    if (b != a) nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

int top_distance_class(int n) {
  // Smallest C with 2^(C+1) >= n, i.e. ceil(log2(n/2)).
  return std::bit_width(static_cast<unsigned>(n - 1)) - 1;
}

int pick_from_class(int class_index, int src, int n, SplitMix64& rng) {
  std::vector<int> nodes = class_destinations(class_index, src, n);
  while (nodes.empty() && class_index > 0)
    nodes = class_destinations(--class_index, src, n);
  return nodes[rng.next_below(nodes.size())];
}

}  // namespace

int sample_destination(DestDistribution dist, int src, int n, SplitMix64& rng) {
  if (n < 3) throw std::invalid_argument("need at least three nodes");
  switch (dist) {
    case DestDistribution::kUniform: {
      int idx = static_cast<int>(rng.next_below(n - 1));
      return idx < src ? idx : idx + 1;
    }
    case DestDistribution::kUniformClass: {
      int classes = top_distance_class(n) + 1;
      return pick_from_class(static_cast<int>(rng.next_below(classes)), src, n,
                             rng);
    }
    case DestDistribution::kBimodal: {
      int left = ((src - 1) % n + n) % n;
      int right = (src + 1) % n;
      bool local = rng.next_below(2) == 0;
      if (!local) {
        std::vector<int> nodes;
        for (int v = 0; v < n; ++v)
          if (v != src && v != left && v != right) nodes.push_back(v);
        if (!nodes.empty()) return nodes[rng.next_below(nodes.size())];
      }
      return rng.next_below(2) == 0 ? left : right;
    }
    case DestDistribution::kShortPreferred: {
      int top = top_distance_class(n);
      // Weights 2^-(i+1) renormalized: integer weights 2^(top - i).
      std::uint64_t total = (1ULL << (top + 1)) - 1;
      std::uint64_t r = rng.next_below(total);
      int cls = 0;
      std::uint64_t acc = 0;
      for (int i = 0; i <= top; ++i) {
        acc += 1ULL << (top - i);
        if (r < acc) {
          cls = i;
          break;
        }
      }
      return pick_from_class(cls, src, n, rng);
    }
  }
  throw std::logic_error("unreachable");
}

EventSequence generate_workload(int n, const LoadParams& params) {
  if (n < 3) throw std::invalid_argument("need at least three nodes");
  if (params.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  SplitMix64 rng(params.seed);
  std::vector<int> busy_until(n, 0);
  EventSequence events;
  int next_id = 0;
  for (int t = 0; t < params.horizon; ++t) {
    for (int j = 0; j < n; ++j) {
      if (busy_until[j] > t) continue;
      int dest = sample_destination(params.dest, j, n, rng);
      int duration = sample_duration(params.lambda, rng);
      Bandwidth bw = sample_bandwidth(params.r_min, params.alpha, rng);
      Transmission tr{next_id++, j, dest, bw, t, t + duration};
      events.push_back(Event::arrive(t, tr));
      events.push_back(Event::depart(t + duration, tr.id));
      busy_until[j] = t + duration;
    }
  }
  sort_events(events);
  return events;
}

}  // namespace lighttrail
