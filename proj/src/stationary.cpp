#include "lighttrail/stationary.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace lighttrail {

Bandwidth PooledTrail::load() const {
  Bandwidth sum = 0;
  for (const auto& a : assigned) sum += a.amount;
  return sum;
}

std::map<int, std::vector<Transmission>> partition_by_class(
    const std::vector<Transmission>& ts) {
  std::map<int, std::vector<Transmission>> classes;
  for (const auto& t : ts) classes[class_of_length(t.length())].push_back(t);
  return classes;
}

namespace {

std::vector<Bandwidth> congestion_vector(const std::vector<Transmission>& ts,
                                         int node_count) {
  std::vector<Bandwidth> load(node_count - 1, 0);
  for (const auto& t : ts)
    for (int l = t.src; l < t.dst; ++l) load[l] += t.bandwidth;
  return load;
}

}  // namespace

namespace {

// Splittable packing splits only when that saves a layer; otherwise both
// modes place whole transmissions identically, which keeps trail hulls
// narrow and never worse than the non-splittable layout.
std::vector<PackedBin> pack_layers(const std::vector<Bandwidth>& items,
                                   Mode mode) {
  auto whole = first_fit_pack(items, Mode::kNonSplittable);
  if (mode == Mode::kNonSplittable) return whole;
  Bandwidth total = 0;
  for (Bandwidth item : items) total += item;
  auto lower = static_cast<std::size_t>((total + kCapacity - 1) / kCapacity);
  if (whole.size() == lower) return whole;
  return first_fit_pack(items, Mode::kSplittable);
}

}  // namespace

SubclassPartition split_subclasses(const std::vector<Transmission>& class_set,
                                   int class_index, int node_count) {
  if (class_index < 2)
    throw std::invalid_argument("subclass split applies to classes >= 2");
  SubclassPartition partition;
  partition.class_index = class_index;

  std::vector<Transmission> pool = class_set;
  std::sort(pool.begin(), pool.end(),
            [](const Transmission& a, const Transmission& b) {
              return a.id < b.id;
            });

  while (!pool.empty()) {
    std::vector<Bandwidth> pool_load = congestion_vector(pool, node_count);
    std::vector<Bandwidth> subset_load(node_count - 1, 0);
    std::vector<std::size_t> picked;  // indices into pool, insertion order
    std::vector<bool> is_picked(pool.size(), false);

    for (int l = 0; l < node_count - 1; ++l) {
      if (subset_load[l] >= kCapacity) continue;
      for (std::size_t i = 0; i < pool.size() && subset_load[l] < kCapacity;
           ++i) {
        if (is_picked[i]) continue;
        const Transmission& t = pool[i];
        if (t.src <= l && l < t.dst) {
          is_picked[i] = true;
          picked.push_back(i);
          for (int m = t.src; m < t.dst; ++m) subset_load[m] += t.bandwidth;
        }
      }
    }

    // Move back in reverse insertion order while the pick condition holds:
    // at links where the pool load is at most one capacity the subset must
    // keep everything, elsewhere it must retain at least one capacity.
    for (auto it = picked.rbegin(); it != picked.rend(); ++it) {
      const Transmission& t = pool[*it];
      bool removable = true;
      for (int l = t.src; l < t.dst && removable; ++l) {
        if (pool_load[l] <= kCapacity ||
            subset_load[l] - t.bandwidth < kCapacity)
          removable = false;
      }
      if (removable) {
        is_picked[*it] = false;
        for (int m = t.src; m < t.dst; ++m) subset_load[m] -= t.bandwidth;
      }
    }

    std::vector<Transmission> subset;
    std::vector<Transmission> rest;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      (is_picked[i] ? subset : rest).push_back(pool[i]);
    }
    if (subset.empty())
      throw std::logic_error("subclass split made no progress");
    partition.subsets.push_back(std::move(subset));
    partition.pool_congestion.push_back(std::move(pool_load));
    pool = std::move(rest);
  }
  return partition;
}

TrailPool schedule_subclass(const std::vector<Transmission>& subset,
                            int class_index, int node_count, Mode mode) {
  if (class_index < 2)
    throw std::invalid_argument("subclass scheduling needs class >= 2");
  if (!subset.empty()) {
    Bandwidth c = link_congestion(subset, node_count).max_link;
    if (c >= 4 * kCapacity)
      throw std::invalid_argument("subset congestion must stay below 4");
  }
  const int base = 1 << (class_index - 1);
  const int layer_cap = mode == Mode::kSplittable ? 4 : 8;

  // position -> transmissions whose serving trail starts there.
  std::map<int, std::vector<Transmission>> by_position;
  for (const auto& t : subset) {
    TrailGeometry g = transmission_geometry(t);
    if (g.class_index != class_index)
      throw std::invalid_argument("transmission not of the scheduled class");
    by_position[g.trail_point].push_back(t);
  }

  TrailPool pool;
  for (auto& [x, ts] : by_position) {
    std::sort(ts.begin(), ts.end(),
              [](const Transmission& a, const Transmission& b) {
                return a.id < b.id;
              });
    std::vector<Bandwidth> items;
    for (const auto& t : ts) items.push_back(t.bandwidth);
    auto bins = pack_layers(items, mode);
    if (static_cast<int>(bins.size()) > layer_cap)
      throw std::logic_error("trail layer bound exceeded");
    int phase = (x / base) % 4;
    Interval extent{x, std::min(x + 4 * base, node_count - 1)};
    for (const auto& bin : bins) {
      PooledTrail trail{extent, class_index, phase, {}};
      for (const auto& [item, amount] : bin.parts)
        trail.assigned.push_back({ts[item].id, amount});
      pool.push_back(std::move(trail));
    }
  }
  return pool;
}

TrailPool schedule_unit_classes(const std::vector<Transmission>& r0,
                                const std::vector<Transmission>& r1,
                                int node_count, Mode mode) {
  for (const auto& t : r0)
    if (t.length() != 1)
      throw std::invalid_argument("class-0 set holds a longer transmission");
  for (const auto& t : r1)
    if (t.length() != 2)
      throw std::invalid_argument("class-1 set holds a wrong-length transmission");

  TrailPool pool;
  auto pack_positions = [&](const std::vector<Transmission>& ts, int length,
                            int class_index) {
    std::map<int, std::vector<Transmission>> by_start;
    for (const auto& t : ts) by_start[t.src].push_back(t);
    for (auto& [x, group] : by_start) {
      std::sort(group.begin(), group.end(),
                [](const Transmission& a, const Transmission& b) {
                  return a.id < b.id;
                });
      std::vector<Bandwidth> items;
      for (const auto& t : group) items.push_back(t.bandwidth);
      for (const auto& bin : pack_layers(items, mode)) {
        PooledTrail trail{Interval{x, x + length}, class_index,
                          class_index == 0 ? 0 : x % 2, {}};
        for (const auto& [item, amount] : bin.parts)
          trail.assigned.push_back({group[item].id, amount});
        pool.push_back(std::move(trail));
      }
    }
  };
  pack_positions(r0, 1, 0);
  pack_positions(r1, 2, 1);
  (void)node_count;
  return pool;
}

TrailPool trim_trail_pool(const TrailPool& pool,
                          const std::vector<Transmission>& ts) {
  std::unordered_map<int, Interval> extents;
  for (const auto& t : ts) extents[t.id] = t.extent();
  TrailPool trimmed;
  for (const auto& trail : pool) {
    if (trail.assigned.empty()) continue;
    Interval hull{trail.extent.hi, trail.extent.lo};
    for (const auto& part : trail.assigned) {
      const Interval& e = extents.at(part.id);
      hull.lo = std::min(hull.lo, e.lo);
      hull.hi = std::max(hull.hi, e.hi);
    }
    PooledTrail copy = trail;
    copy.extent = hull;
    trimmed.push_back(std::move(copy));
  }
  return trimmed;
}

Schedule schedule_stationary(const std::vector<Transmission>& instance,
                             int node_count, Mode mode) {
  std::vector<Transmission> ts;
  ts.reserve(instance.size());
  for (const auto& t : instance) ts.push_back(normalized(t));

  auto classes = partition_by_class(ts);
  TrailPool pool = schedule_unit_classes(
      classes.count(0) ? classes[0] : std::vector<Transmission>{},
      classes.count(1) ? classes[1] : std::vector<Transmission>{}, node_count,
      mode);
  for (const auto& [cls, members] : classes) {
    if (cls < 2) continue;
    SubclassPartition partition = split_subclasses(members, cls, node_count);
    for (const auto& subset : partition.subsets) {
      TrailPool sub = schedule_subclass(subset, cls, node_count, mode);
      pool.insert(pool.end(), sub.begin(), sub.end());
    }
  }
  pool = trim_trail_pool(pool, ts);

  std::vector<Interval> extents;
  extents.reserve(pool.size());
  for (const auto& trail : pool) extents.push_back(trail.extent);
  ColoringResult coloring = color_intervals(extents);

  Schedule schedule;
  schedule.node_count = node_count;
  schedule.wavelengths.assign(coloring.color_count, {});
  for (std::size_t i = 0; i < pool.size(); ++i) {
    schedule.wavelengths[coloring.colors[i]].push_back(
        LightTrail{pool[i].extent, pool[i].assigned, std::nullopt});
  }
  return schedule;
}

Schedule pack_hierarchical(const std::vector<Transmission>& instance,
                           int node_count) {
  const int n = node_count - 1;
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("hierarchical packing needs 2^k + 1 nodes");
  const int k = class_of_length(n);

  std::vector<Transmission> extras;
  // pattern[i][j] holds the class-i transmission [j*2^i, (j+1)*2^i].
  std::vector<std::vector<const Transmission*>> pattern(k + 1);
  for (int i = 0; i <= k; ++i) pattern[i].assign(n >> i, nullptr);
  Bandwidth b = -1;
  for (const auto& t : instance) {
    if (t.src == 0 && t.dst == n && t.bandwidth == kCapacity) {
      extras.push_back(t);
      continue;
    }
    int len = t.length();
    if ((len & (len - 1)) != 0 || t.src % len != 0)
      throw std::invalid_argument("instance is not a hierarchical pattern");
    int i = class_of_length(len);
    int j = t.src / len;
    if (pattern[i][j] != nullptr)
      throw std::invalid_argument("duplicate pattern slot");
    if (b == -1) b = t.bandwidth;
    if (t.bandwidth != b)
      throw std::invalid_argument("pattern bandwidths are not uniform");
    pattern[i][j] = &t;
  }
  for (int i = 0; i <= k; ++i)
    for (auto* slot : pattern[i])
      if (slot == nullptr)
        throw std::invalid_argument("incomplete hierarchical pattern");

  Schedule schedule;
  schedule.node_count = node_count;
  for (const auto& t : extras) {
    schedule.wavelengths.push_back(
        {LightTrail{Interval{0, n}, {{t.id, t.bandwidth}}, std::nullopt}});
  }

  int top = k;
  while (top >= 0) {
    const int span = 1 << top;
    std::vector<LightTrail> trails;
    for (int j = 0; j < n / span; ++j)
      trails.push_back(LightTrail{Interval{j * span, (j + 1) * span}, {}, {}});
    // Fill classes downward while a trail can still hold one transmission of
    // every class taken so far: after classes top..c each trail carries
    // 2^(top-c+1) - 1 of them.
    int c = top;
    while (c >= 0) {
      Bandwidth per_trail = ((2LL << (top - c)) - 1) * b;
      if (per_trail > kCapacity) break;
      for (int j = 0; j < (n >> c); ++j) {
        const Transmission* t = pattern[c][j];
        trails[t->src / span].assigned.push_back({t->id, t->bandwidth});
      }
      --c;
    }
    schedule.wavelengths.push_back(std::move(trails));
    top = c;
  }
  return schedule;
}

}  // namespace lighttrail
