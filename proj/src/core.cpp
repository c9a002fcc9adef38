#include "lighttrail/core.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace lighttrail {

bool links_overlap(const Interval& a, const Interval& b) {
  return std::max(a.lo, b.lo) < std::min(a.hi, b.hi);
}

bool contains(const Interval& outer, const Interval& inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

namespace {

// Rebase a onto the circular frame starting at ref: returns a.lo shifted into
// [ref, ref + n).
int rebase(int lo, int ref, int n) {
  int d = (lo - ref) % n;
  if (d < 0) d += n;
  return ref + d;
}

}  // namespace

bool arcs_overlap(const Interval& a, const Interval& b, int n) {
  if (a.length() <= 0 || b.length() <= 0) return false;
  if (a.length() >= n || b.length() >= n) return true;
  int blo = rebase(b.lo, a.lo, n);
  if (blo < a.lo + a.length() && a.lo < blo + b.length()) return true;
  int alo = rebase(a.lo, b.lo, n);
  return alo < b.lo + b.length() && b.lo < alo + a.length();
}

bool arc_contains(const Interval& outer, const Interval& inner, int n) {
  if (inner.length() > outer.length()) return false;
  // A full-length trail still has a break node: no shortcut for length n.
  int ilo = rebase(inner.lo, outer.lo, n);
  return ilo + inner.length() <= outer.lo + outer.length();
}

Transmission normalized(Transmission t) {
  if (t.src == t.dst) throw std::invalid_argument("transmission src == dst");
  if (t.src > t.dst) std::swap(t.src, t.dst);
  if (t.bandwidth <= 0 || t.bandwidth > kCapacity)
    throw std::invalid_argument("bandwidth outside (0, capacity]");
  if (t.arrival && t.departure && *t.arrival >= *t.departure)
    throw std::invalid_argument("arrival must precede departure");
  return t;
}

int class_of_length(int length) {
  if (length < 1) throw std::invalid_argument("length must be positive");
  return std::bit_width(static_cast<unsigned>(length - 1));
}

TrailGeometry transmission_geometry(const Transmission& t) {
  int cls = class_of_length(t.length());
  if (cls < 2)
    throw std::domain_error("geometry defined only for class >= 2");
  int base = 1 << (cls - 1);
  int anchor = (t.src / base + 1) * base;
  int trail_point = anchor - base;
  int phase = (trail_point / base) % 4;
  return {cls, anchor, trail_point, phase,
          Interval{trail_point, trail_point + 4 * base}};
}

CongestionProfile link_congestion(const std::vector<Transmission>& ts,
                                  int node_count) {
  if (node_count < 2) throw std::invalid_argument("need at least two nodes");
  CongestionProfile profile;
  profile.per_link.assign(node_count - 1, 0);
  for (const auto& t : ts) {
    if (t.src < 0 || t.dst > node_count - 1 || t.src >= t.dst)
      throw std::invalid_argument("transmission endpoints out of range");
    for (int l = t.src; l < t.dst; ++l) profile.per_link[l] += t.bandwidth;
  }
  for (Bandwidth v : profile.per_link)
    profile.max_link = std::max(profile.max_link, v);
  return profile;
}

void sort_events(EventSequence& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) {
                     if (a.time != b.time) return a.time < b.time;
                     return a.kind == Event::Kind::kArrive &&
                            b.kind == Event::Kind::kDepart;
                   });
}

Bandwidth dynamic_congestion(const EventSequence& events, int node_count) {
  std::vector<Bandwidth> load(node_count - 1, 0);
  std::unordered_map<int, Transmission> active;
  Bandwidth peak = 0;
  for (const auto& ev : events) {
    if (ev.kind == Event::Kind::kArrive) {
      Transmission t = normalized(ev.transmission());
      if (t.dst > node_count - 1)
        throw std::invalid_argument("arrival endpoint out of range");
      if (!active.emplace(t.id, t).second)
        throw std::runtime_error("arrival for already-active id");
      for (int l = t.src; l < t.dst; ++l) {
        load[l] += t.bandwidth;
        peak = std::max(peak, load[l]);
      }
    } else {
      auto it = active.find(ev.id);
      if (it == active.end())
        throw std::runtime_error("departure of unknown id");
      const Transmission& t = it->second;
      for (int l = t.src; l < t.dst; ++l) load[l] -= t.bandwidth;
      active.erase(it);
    }
  }
  return peak;
}

Bandwidth LightTrail::load() const {
  Bandwidth sum = 0;
  for (const auto& a : assigned) sum += a.amount;
  return sum;
}

bool ValidationReport::has(Violation::Kind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

namespace {

std::string trail_name(int w, const Interval& e) {
  return "wavelength " + std::to_string(w) + " trail [" +
         std::to_string(e.lo) + "," + std::to_string(e.hi) + "]";
}

}  // namespace

ValidationReport validate_schedule(const std::vector<Transmission>& instance,
                                   const Schedule& schedule, Mode mode) {
  ValidationReport report;
  auto flag = [&](Violation::Kind k, std::string d) {
    report.violations.push_back({k, std::move(d)});
  };

  std::unordered_map<int, const Transmission*> by_id;
  for (const auto& t : instance) by_id[t.id] = &t;
  std::unordered_map<int, Bandwidth> assigned_total;
  std::unordered_map<int, int> assigned_parts;

  for (int w = 0; w < schedule.wavelength_count(); ++w) {
    const auto& trails = schedule.wavelengths[w];
    for (std::size_t i = 0; i < trails.size(); ++i) {
      const auto& trail = trails[i];
      if (trail.extent.length() < 1 || trail.extent.lo < 0 ||
          trail.extent.hi > schedule.node_count - 1) {
        flag(Violation::Kind::kBadExtent, trail_name(w, trail.extent));
        continue;
      }
      if (trail.load() > kCapacity)
        flag(Violation::Kind::kCapacityExceeded, trail_name(w, trail.extent));
      for (std::size_t j = i + 1; j < trails.size(); ++j) {
        if (links_overlap(trail.extent, trails[j].extent))
          flag(Violation::Kind::kOverlappingTrails,
               trail_name(w, trail.extent) + " vs " +
                   trail_name(w, trails[j].extent));
      }
      for (const auto& part : trail.assigned) {
        auto it = by_id.find(part.id);
        if (it == by_id.end()) {
          flag(Violation::Kind::kUnknownTransmission,
               "id " + std::to_string(part.id));
          continue;
        }
        if (!contains(trail.extent, it->second->extent()))
          flag(Violation::Kind::kExtentNotContained,
               "id " + std::to_string(part.id) + " in " +
                   trail_name(w, trail.extent));
        assigned_total[part.id] += part.amount;
        assigned_parts[part.id] += 1;
      }
    }
  }

  for (const auto& t : instance) {
    auto it = assigned_total.find(t.id);
    if (it == assigned_total.end()) {
      flag(Violation::Kind::kUnassignedTransmission, "id " + std::to_string(t.id));
      continue;
    }
    if (it->second != t.bandwidth)
      flag(Violation::Kind::kSplitMismatch,
           "id " + std::to_string(t.id) + " assigned " +
               std::to_string(it->second) + " of " +
               std::to_string(t.bandwidth));
    else if (mode == Mode::kNonSplittable && assigned_parts[t.id] != 1)
      flag(Violation::Kind::kSplitMismatch,
           "id " + std::to_string(t.id) + " split across " +
               std::to_string(assigned_parts[t.id]) + " trails");
  }
  return report;
}

std::vector<PackedBin> first_fit_pack(const std::vector<Bandwidth>& items,
                                      Mode mode) {
  for (Bandwidth item : items) {
    if (item <= 0 || item > kCapacity)
      throw std::invalid_argument("item outside (0, capacity]");
  }
  std::vector<PackedBin> bins;
  if (mode == Mode::kNonSplittable) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      bool placed = false;
      for (auto& bin : bins) {
        if (bin.load + items[i] <= kCapacity) {
          bin.parts.emplace_back(i, items[i]);
          bin.load += items[i];
          placed = true;
          break;
        }
      }
      if (!placed) bins.push_back({{{i, items[i]}}, items[i]});
    }
  } else {
    // Whole placement when possible; an item splits only when no bin has
    // room for all of it, and then it tops off every open bin before
    // spilling into fresh ones. At most one bin is ever partial, so the
    // bin count is exactly ceil(total / capacity).
    for (std::size_t i = 0; i < items.size(); ++i) {
      bool placed = false;
      for (auto& bin : bins) {
        if (bin.load + items[i] <= kCapacity) {
          bin.parts.emplace_back(i, items[i]);
          bin.load += items[i];
          placed = true;
          break;
        }
      }
      if (placed) continue;
      Bandwidth remaining = items[i];
      for (auto& bin : bins) {
        if (remaining == 0) break;
        if (bin.load == kCapacity) continue;
        Bandwidth take = std::min(remaining, kCapacity - bin.load);
        bin.parts.emplace_back(i, take);
        bin.load += take;
        remaining -= take;
      }
      while (remaining > 0) {
        bins.push_back({});
        Bandwidth take = std::min(remaining, kCapacity);
        bins.back().parts.emplace_back(i, take);
        bins.back().load += take;
        remaining -= take;
      }
    }
  }
  return bins;
}

ColoringResult color_intervals(const std::vector<Interval>& intervals) {
  for (const auto& iv : intervals) {
    if (iv.length() < 1)
      throw std::invalid_argument("interval length must be >= 1");
  }
  std::vector<std::size_t> order(intervals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (intervals[a].lo != intervals[b].lo)
      return intervals[a].lo < intervals[b].lo;
    return a < b;
  });

  ColoringResult result;
  result.colors.assign(intervals.size(), -1);
  // (hi, color) of active intervals; colors freed once hi <= current lo.
  std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>,
                      std::greater<>>
      active;
  std::priority_queue<int, std::vector<int>, std::greater<>> free_colors;
  int next_color = 0;
  for (std::size_t idx : order) {
    const Interval& iv = intervals[idx];
    while (!active.empty() && active.top().first <= iv.lo) {
      free_colors.push(active.top().second);
      active.pop();
    }
    int color;
    if (!free_colors.empty()) {
      color = free_colors.top();
      free_colors.pop();
    } else {
      color = next_color++;
    }
    result.colors[idx] = color;
    active.emplace(iv.hi, color);
  }
  result.color_count = next_color;
  return result;
}

int max_link_load(const std::vector<Interval>& intervals) {
  int lo = 0, hi = 0;
  for (const auto& iv : intervals) {
    lo = std::min(lo, iv.lo);
    hi = std::max(hi, iv.hi);
  }
  int best = 0;
  for (int l = lo; l < hi; ++l) {
    int load = 0;
    for (const auto& iv : intervals)
      if (iv.lo <= l && l < iv.hi) ++load;
    best = std::max(best, load);
  }
  return best;
}

}  // namespace lighttrail
