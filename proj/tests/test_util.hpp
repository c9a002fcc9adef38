#pragma once

#include <vector>

#include "lighttrail/core.hpp"
#include "lighttrail/rng.hpp"

namespace lighttrail::testutil {

// Random array instance grown until the peak link congestion reaches the
// target.
inline std::vector<Transmission> random_instance(SplitMix64& rng,
                                                 int node_count,
                                                 Bandwidth target_congestion,
                                                 Bandwidth max_bw = kCapacity) {
  std::vector<Transmission> ts;
  std::vector<Bandwidth> load(node_count - 1, 0);
  Bandwidth peak = 0;
  int id = 0;
  while (peak < target_congestion) {
    int lo = static_cast<int>(rng.next_below(node_count - 1));
    int hi = lo + 1 + static_cast<int>(rng.next_below(node_count - 1 - lo));
    Bandwidth bw = 1 + static_cast<Bandwidth>(rng.next_below(max_bw));
    ts.push_back({id++, lo, hi, bw, {}, {}});
    for (int l = lo; l < hi; ++l) {
      load[l] += bw;
      peak = std::max(peak, load[l]);
    }
  }
  return ts;
}

// Random set of transmissions all belonging to one length class.
inline std::vector<Transmission> random_class_set(SplitMix64& rng,
                                                  int node_count, int cls,
                                                  int count) {
  std::vector<Transmission> ts;
  int min_len = (1 << (cls - 1)) + 1;
  int max_len = std::min(1 << cls, node_count - 1);
  for (int id = 0; id < count; ++id) {
    int len = min_len + static_cast<int>(rng.next_below(max_len - min_len + 1));
    int src = static_cast<int>(rng.next_below(node_count - len));
    Bandwidth bw = 1 + static_cast<Bandwidth>(rng.next_below(kCapacity));
    ts.push_back({id, src, src + len, bw, {}, {}});
  }
  return ts;
}

inline std::vector<Interval> random_intervals(SplitMix64& rng, int node_count,
                                              int count) {
  std::vector<Interval> out;
  for (int i = 0; i < count; ++i) {
    int lo = static_cast<int>(rng.next_below(node_count - 1));
    int hi = lo + 1 + static_cast<int>(rng.next_below(node_count - 1 - lo));
    out.push_back({lo, hi});
  }
  return out;
}

inline std::vector<Transmission> three_node_instance() {
  return {{0, 0, 1, 600'000, {}, {}},
          {1, 1, 2, 600'000, {}, {}},
          {2, 0, 2, 400'000, {}, {}}};
}

}  // namespace lighttrail::testutil
