#pragma once

#include <map>
#include <vector>

#include "lighttrail/core.hpp"

namespace lighttrail {

// One light-trail candidate prior to wavelength assignment.
struct PooledTrail {
  Interval extent;
  int class_index = 0;
  int phase = 0;
  std::vector<TrailAssignment> assigned;

  Bandwidth load() const;
};

using TrailPool = std::vector<PooledTrail>;

struct SubclassPartition {
  int class_index = 0;
  std::vector<std::vector<Transmission>> subsets;
  // Per subset j, the per-link congestion of the remaining pool T_j at the
  // time subset j was carved out (the move-back condition references it).
  std::vector<std::vector<Bandwidth>> pool_congestion;
};

// Buckets transmissions by length class.
std::map<int, std::vector<Transmission>> partition_by_class(
    const std::vector<Transmission>& ts);

// Splits one class into subsets S_1..S_k, k <= ceil(c(R_i)/capacity), each
// with congestion below 4 * capacity. The pick phase sweeps links left to
// right, greedily adding crossing transmissions (ascending id) until at
// least one capacity unit is removed from the pool's load at the link or
// the link is exhausted; the move-back phase then returns transmissions in
// reverse insertion order whenever the pick condition stays intact.
SubclassPartition split_subclasses(const std::vector<Transmission>& class_set,
                                   int class_index, int node_count);

// Schedules one low-congestion subset of class >= 2 into phase-aligned
// trails [x, x + 2^(i+1)], packing per trail position with first-fit across
// parallel layers. Throws std::invalid_argument when c(subset) >= 4*capacity.
TrailPool schedule_subclass(const std::vector<Transmission>& subset,
                            int class_index, int node_count, Mode mode);

// Length-1 transmissions go to per-link unit trails; length-2 transmissions
// split by start parity into trails [x, x+2]. Wrong lengths throw.
TrailPool schedule_unit_classes(const std::vector<Transmission>& r0,
                                const std::vector<Transmission>& r1,
                                int node_count, Mode mode);

// Deletes empty trails and shrinks every survivor to the hull of its
// assigned transmissions.
TrailPool trim_trail_pool(const TrailPool& pool,
                          const std::vector<Transmission>& ts);

// Full pipeline: class partition, subclass split and scheduling, trim, and
// an interval-coloring merge of all pooled trails onto wavelengths.
Schedule schedule_stationary(const std::vector<Transmission>& instance,
                             int node_count, Mode mode);

// The dense hierarchical instance packs greedily: a full-span trail takes
// the longest classes until capacity, then a new wavelength opens with
// trails broken at the next class's grid, and so on. Only instances shaped
// like make_hierarchical_instance are accepted.
Schedule pack_hierarchical(const std::vector<Transmission>& instance,
                           int node_count);

}  // namespace lighttrail
