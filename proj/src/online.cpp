#include "lighttrail/online.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lighttrail {

Policy parse_policy(const std::string& name) {
  if (name == "separate") return Policy::kSeparateClass;
  if (name == "all") return Policy::kAllClass;
  if (name == "baseline") return Policy::kBaseline;
  throw std::invalid_argument("unknown policy: " + name);
}

std::string policy_name(Policy policy) {
  switch (policy) {
    case Policy::kSeparateClass: return "separate";
    case Policy::kAllClass: return "all";
    case Policy::kBaseline: return "baseline";
  }
  return "?";
}

RingDirection ring_direction(int src, int dst, int n) {
  if (src == dst) throw std::invalid_argument("src == dst");
  int cw = ((dst - src) % n + n) % n;
  int ccw = n - cw;
  return cw <= ccw ? RingDirection::kClockwise
                   : RingDirection::kCounterClockwise;
}

std::vector<Interval> ring_trail_grid(int class_index, int phase, int n) {
  if (phase != 0 && phase != 2)
    throw std::invalid_argument("ring phases are 0 and 2");
  const std::int64_t half = 1LL << class_index;
  std::set<int> boundaries;
  for (std::int64_t j = 0; j < half; ++j) {
    std::int64_t num = 2 * j * n + (phase == 2 ? n : 0) + half;
    boundaries.insert(static_cast<int>((num / (2 * half)) % n));
  }
  std::vector<int> b(boundaries.begin(), boundaries.end());
  std::vector<Interval> grid;
  if (b.size() == 1) {
    grid.push_back({b[0], b[0] + n});
    return grid;
  }
  for (std::size_t i = 0; i + 1 < b.size(); ++i) grid.push_back({b[i], b[i + 1]});
  grid.push_back({b.back(), b.front() + n});
  return grid;
}

RingGeometry ring_geometry(const Interval& arc, int n) {
  int max_class = std::bit_width(static_cast<unsigned>(n)) - 1;
  for (int cls = max_class; cls >= 0; --cls) {
    for (int phase : {0, 2}) {
      for (const Interval& trail : ring_trail_grid(cls, phase, n)) {
        if (arc_contains(trail, arc, n)) return {cls, phase, trail};
      }
    }
  }
  throw std::logic_error("no ring trail accommodates the arc");
}

bool OnlineEngine::Wavelength::in_use() const {
  return label.has_value() || !trails.empty();
}

OnlineEngine::OnlineEngine(Policy policy, Topology topology, int node_count)
    : policy_(policy), topology_(topology), node_count_(node_count) {
  if (node_count < 2) throw std::invalid_argument("need at least two nodes");
  int fibers = topology == Topology::kRing ? 2 : 1;
  int links = topology == Topology::kRing ? node_count : node_count - 1;
  fibers_.resize(fibers);
  for (auto& f : fibers_) f.link_load.assign(links, 0);
}

std::pair<int, Interval> OnlineEngine::route(const Transmission& t) const {
  if (topology_ == Topology::kArray) {
    Transmission norm = normalized(t);
    if (norm.dst > node_count_ - 1)
      throw std::invalid_argument("endpoint out of range");
    return {0, norm.extent()};
  }
  if (t.src < 0 || t.src >= node_count_ || t.dst < 0 || t.dst >= node_count_ ||
      t.src == t.dst)
    throw std::invalid_argument("bad ring endpoints");
  int n = node_count_;
  if (policy_ == Policy::kBaseline) {
    // Lower to higher numbered nodes ride the clockwise ring.
    if (t.src < t.dst) return {0, Interval{t.src, t.dst}};
    return {1, Interval{t.dst, t.src}};
  }
  if (ring_direction(t.src, t.dst, n) == RingDirection::kClockwise) {
    int len = ((t.dst - t.src) % n + n) % n;
    return {0, Interval{t.src, t.src + len}};
  }
  int len = ((t.src - t.dst) % n + n) % n;
  return {1, Interval{t.dst, t.dst + len}};
}

OnlineEngine::Target OnlineEngine::target_for(const Interval& arc) const {
  if (topology_ == Topology::kRing) {
    RingGeometry g = ring_geometry(arc, node_count_);
    return {g.trail, g.class_index, g.phase};
  }
  int cls = class_of_length(arc.length());
  if (cls >= 2) {
    TrailGeometry g =
        transmission_geometry(Transmission{0, arc.lo, arc.hi, 1, {}, {}});
    Interval trail{g.trail_point,
                   std::min(g.trail.hi, node_count_ - 1)};
    return {trail, cls, g.phase};
  }
  if (cls == 1) return {Interval{arc.lo, arc.lo + 2}, 1, arc.lo % 2};
  return {Interval{arc.lo, arc.lo + 1}, 0, 0};
}

Interval allclass_target_extent(const Interval& arc, int node_count) {
  int cls = class_of_length(arc.length());
  if (cls < 2) return arc;
  TrailGeometry g =
      transmission_geometry(Transmission{0, arc.lo, arc.hi, 1, {}, {}});
  return Interval{g.trail_point, std::min(g.trail.hi, node_count - 1)};
}

namespace {

bool extents_overlap(const Interval& a, const Interval& b, Topology topo,
                     int n) {
  return topo == Topology::kRing ? arcs_overlap(a, b, n) : links_overlap(a, b);
}

}  // namespace

Placement OnlineEngine::place(Fiber& fiber, int fiber_id, int wavelength,
                              Trail& trail, const Transmission& t) {
  (void)fiber;
  trail.assigned.push_back({t.id, t.bandwidth});
  trail.load += t.bandwidth;
  return Placement{fiber_id, wavelength, trail.serial, trail.extent};
}

bool OnlineEngine::fits_unused(const Wavelength& wave,
                               const Interval& extent) const {
  for (const auto& trail : wave.trails) {
    if (extents_overlap(extent, trail.extent, topology_, node_count_))
      return false;
  }
  return true;
}

Placement OnlineEngine::assign_separate_class(Fiber& fiber, int fiber_id,
                                              const Transmission& t,
                                              const Interval& arc) {
  Target target = target_for(arc);
  auto label = std::make_pair(target.class_index, target.phase);
  for (int w = 0; w < static_cast<int>(fiber.waves.size()); ++w) {
    Wavelength& wave = fiber.waves[w];
    if (wave.label != label) continue;
    Trail* trail = nullptr;
    for (auto& tr : wave.trails)
      if (tr.extent == target.trail) trail = &tr;
    if (trail == nullptr) {
      wave.trails.push_back(Trail{next_serial_++, target.trail, {}, 0});
      trail = &wave.trails.back();
    }
    if (trail->load + t.bandwidth <= kCapacity)
      return place(fiber, fiber_id, w, *trail, t);
  }

  // Allocation audit record: congestion observed at the anchor link just
  // before the allocation, against the count of live same-label wavelengths.
  int prior = 0;
  for (const auto& wave : fiber.waves)
    if (wave.in_use() && wave.label == label) ++prior;
  int probe_link = arc.lo;
  if (topology_ == Topology::kArray && target.class_index >= 2)
    probe_link =
        transmission_geometry(Transmission{0, arc.lo, arc.hi, 1, {}, {}})
            .anchor;
  label_allocations_.push_back({target.class_index, target.phase, prior,
                                t.bandwidth,
                                fiber.link_load[probe_link % fiber.link_load.size()]});

  int w = -1;
  for (int i = 0; i < static_cast<int>(fiber.waves.size()); ++i) {
    if (!fiber.waves[i].in_use()) {
      w = i;
      break;
    }
  }
  if (w < 0) {
    fiber.waves.emplace_back();
    w = static_cast<int>(fiber.waves.size()) - 1;
  }
  Wavelength& wave = fiber.waves[w];
  wave.label = label;
  wave.trails.push_back(Trail{next_serial_++, target.trail, {}, 0});
  return place(fiber, fiber_id, w, wave.trails.back(), t);
}

Placement OnlineEngine::assign_all_class(Fiber& fiber, int fiber_id,
                                         const Transmission& t,
                                         const Interval& arc) {
  Target target = target_for(arc);
  for (int w = 0; w < static_cast<int>(fiber.waves.size()); ++w) {
    for (auto& trail : fiber.waves[w].trails) {
      if (trail.extent == target.trail && trail.load + t.bandwidth <= kCapacity)
        return place(fiber, fiber_id, w, trail, t);
    }
  }
  for (int w = 0; w < static_cast<int>(fiber.waves.size()); ++w) {
    if (fits_unused(fiber.waves[w], target.trail)) {
      fiber.waves[w].trails.push_back(Trail{next_serial_++, target.trail, {}, 0});
      return place(fiber, fiber_id, w, fiber.waves[w].trails.back(), t);
    }
  }
  fiber.waves.emplace_back();
  int w = static_cast<int>(fiber.waves.size()) - 1;
  fiber.waves[w].trails.push_back(Trail{next_serial_++, target.trail, {}, 0});
  return place(fiber, fiber_id, w, fiber.waves[w].trails.back(), t);
}

int OnlineEngine::peek_allclass_wavelength(const Transmission& t) const {
  auto [fiber_id, arc] = route(t);
  const Fiber& fiber = fibers_[fiber_id];
  Target target = target_for(arc);
  for (int w = 0; w < static_cast<int>(fiber.waves.size()); ++w) {
    for (const auto& trail : fiber.waves[w].trails) {
      if (trail.extent == target.trail && trail.load + t.bandwidth <= kCapacity)
        return w;
    }
  }
  for (int w = 0; w < static_cast<int>(fiber.waves.size()); ++w) {
    if (fits_unused(fiber.waves[w], target.trail)) return w;
  }
  return static_cast<int>(fiber.waves.size());
}

Placement OnlineEngine::assign_baseline(Fiber& fiber, int fiber_id,
                                        const Transmission& t,
                                        const Interval& arc) {
  (void)arc;
  Interval full = topology_ == Topology::kRing ? Interval{0, node_count_}
                                               : Interval{0, node_count_ - 1};
  int idle = -1;
  for (int w = 0; w < static_cast<int>(fiber.waves.size()); ++w) {
    if (fiber.waves[w].trails.empty()) {
      if (idle < 0) idle = w;
      continue;
    }
    for (auto& trail : fiber.waves[w].trails) {
      if (trail.load + t.bandwidth <= kCapacity)
        return place(fiber, fiber_id, w, trail, t);
    }
  }
  int w = idle;
  if (w < 0) {
    fiber.waves.emplace_back();
    w = static_cast<int>(fiber.waves.size()) - 1;
  }
  fiber.waves[w].trails.push_back(Trail{next_serial_++, full, {}, 0});
  return place(fiber, fiber_id, w, fiber.waves[w].trails.back(), t);
}

Placement OnlineEngine::on_arrive(const Transmission& t) {
  if (t.bandwidth <= 0 || t.bandwidth > kCapacity)
    throw std::invalid_argument("arrival bandwidth outside (0, capacity]");
  if (active_.count(t.id))
    throw std::runtime_error("arrival for already-active id");
  auto [fiber_id, arc] = route(t);
  Fiber& fiber = fibers_[fiber_id];

  Placement placement;
  switch (policy_) {
    case Policy::kSeparateClass:
      placement = assign_separate_class(fiber, fiber_id, t, arc);
      break;
    case Policy::kAllClass:
      placement = assign_all_class(fiber, fiber_id, t, arc);
      break;
    case Policy::kBaseline:
      placement = assign_baseline(fiber, fiber_id, t, arc);
      break;
  }

  int links = static_cast<int>(fiber.link_load.size());
  for (int j = 0; j < arc.length(); ++j) {
    int l = (arc.lo + j) % links;
    fiber.link_load[l] += t.bandwidth;
    peak_congestion_ = std::max(peak_congestion_, fiber.link_load[l]);
  }
  active_.emplace(t.id, ActiveRecord{t, arc, placement});
  note_usage();
  return placement;
}

void OnlineEngine::on_depart(int id) {
  auto it = active_.find(id);
  if (it == active_.end()) throw std::runtime_error("departure of unknown id");
  const ActiveRecord& rec = it->second;
  Fiber& fiber = fibers_[rec.placement.fiber];
  Wavelength& wave = fiber.waves[rec.placement.wavelength];

  auto trail_it = std::find_if(wave.trails.begin(), wave.trails.end(),
                               [&](const Trail& tr) {
                                 return tr.serial == rec.placement.trail_serial;
                               });
  if (trail_it == wave.trails.end())
    throw std::logic_error("active transmission's trail vanished");
  auto part = std::find_if(trail_it->assigned.begin(), trail_it->assigned.end(),
                           [&](const TrailAssignment& a) { return a.id == id; });
  if (part == trail_it->assigned.end())
    throw std::logic_error("transmission moved between trails");
  trail_it->load -= part->amount;
  trail_it->assigned.erase(part);
  if (trail_it->assigned.empty()) wave.trails.erase(trail_it);
  if (wave.trails.empty()) wave.label.reset();

  int links = static_cast<int>(fiber.link_load.size());
  for (int j = 0; j < rec.arc.length(); ++j)
    fiber.link_load[(rec.arc.lo + j) % links] -= rec.t.bandwidth;
  active_.erase(it);
  note_usage();
}

int OnlineEngine::in_use_wavelengths() const {
  int best = 0;
  for (const auto& fiber : fibers_) {
    int used = 0;
    for (const auto& wave : fiber.waves)
      if (wave.in_use()) ++used;
    best = std::max(best, used);
  }
  return best;
}

int OnlineEngine::total_allocated() const {
  std::size_t best = 0;
  for (const auto& fiber : fibers_) best = std::max(best, fiber.waves.size());
  return static_cast<int>(best);
}

void OnlineEngine::note_usage() {
  peak_ = std::max(peak_, in_use_wavelengths());
}

std::optional<Placement> OnlineEngine::placement_of(int id) const {
  auto it = active_.find(id);
  if (it == active_.end()) return std::nullopt;
  return it->second.placement;
}

std::vector<std::vector<Interval>> OnlineEngine::live_extents(int fiber) const {
  std::vector<std::vector<Interval>> out;
  for (const auto& wave : fibers_.at(fiber).waves) {
    std::vector<Interval> extents;
    for (const auto& trail : wave.trails) extents.push_back(trail.extent);
    out.push_back(std::move(extents));
  }
  return out;
}

std::optional<std::pair<int, int>> OnlineEngine::wavelength_label(
    int fiber, int wavelength) const {
  return fibers_.at(fiber).waves.at(wavelength).label;
}

Schedule OnlineEngine::snapshot() const {
  if (topology_ != Topology::kArray)
    throw std::logic_error("snapshot is array-only");
  Schedule schedule;
  schedule.node_count = node_count_;
  for (const auto& wave : fibers_[0].waves) {
    std::vector<LightTrail> trails;
    for (const auto& trail : wave.trails)
      trails.push_back(LightTrail{trail.extent, trail.assigned, wave.label});
    schedule.wavelengths.push_back(std::move(trails));
  }
  return schedule;
}

namespace {

bool in_separate_class_grid(const Interval& extent, int class_index, int phase,
                            Topology topo, int n) {
  if (topo == Topology::kRing) {
    auto grid = ring_trail_grid(class_index, phase, n);
    return std::find(grid.begin(), grid.end(), extent) != grid.end();
  }
  if (class_index == 0) return extent.length() == 1;
  if (class_index == 1)
    return extent.length() == 2 && extent.lo % 2 == phase;
  int base = 1 << (class_index - 1);
  if (extent.lo % base != 0 || (extent.lo / base) % 4 != phase) return false;
  return extent.hi == std::min(extent.lo + 4 * base, n - 1);
}

}  // namespace

void OnlineEngine::audit() const {
  for (const auto& fiber : fibers_) {
    for (const auto& wave : fiber.waves) {
      if (policy_ == Policy::kSeparateClass && !wave.label && !wave.trails.empty())
        throw std::logic_error("unlabeled wavelength holds trails");
      for (std::size_t i = 0; i < wave.trails.size(); ++i) {
        const Trail& trail = wave.trails[i];
        Bandwidth sum = 0;
        for (const auto& part : trail.assigned) sum += part.amount;
        if (sum != trail.load || trail.load > kCapacity)
          throw std::logic_error("trail load out of bounds");
        if (trail.assigned.empty())
          throw std::logic_error("empty trail kept alive");
        if (wave.label &&
            !in_separate_class_grid(trail.extent, wave.label->first,
                                    wave.label->second, topology_, node_count_))
          throw std::logic_error("trail outside its wavelength's labeled grid");
        for (std::size_t j = i + 1; j < wave.trails.size(); ++j) {
          if (extents_overlap(trail.extent, wave.trails[j].extent, topology_,
                              node_count_))
            throw std::logic_error("overlapping trails on one wavelength");
        }
      }
    }
  }
}

OnlineResult run_online(const EventSequence& events, Policy policy,
                        Topology topology, int node_count, bool audit) {
  EventSequence ordered = events;
  sort_events(ordered);
  OnlineEngine engine(policy, topology, node_count);
  OnlineResult result;
  result.policy = policy;
  result.topology = topology;
  result.node_count = node_count;

  std::unordered_map<int, Placement> recorded;
  for (const auto& ev : ordered) {
    if (ev.kind == Event::Kind::kArrive) {
      Placement p = engine.on_arrive(ev.transmission());
      recorded[ev.id] = p;
      result.assignments.emplace_back(ev.id, p);
    } else {
      auto current = engine.placement_of(ev.id);
      if (!current)
        throw std::runtime_error("departure of unknown id");
      auto rec = recorded.find(ev.id);
      if (rec == recorded.end() ||
          rec->second.trail_serial != current->trail_serial)
        throw std::logic_error("never-move contract broken");
      engine.on_depart(ev.id);
      recorded.erase(rec);
    }
    if (audit) engine.audit();
  }

  result.peak_wavelengths = engine.peak_wavelengths();
  result.final_wavelengths = engine.in_use_wavelengths();
  result.total_allocated = engine.total_allocated();
  result.congestion = engine.peak_congestion();
  return result;
}

std::string format_online_result(const OnlineResult& result) {
  std::ostringstream out;
  out << policy_name(result.policy) << ',' << result.node_count << ','
      << (result.topology == Topology::kRing ? "ring" : "array") << ','
      << result.peak_wavelengths << ',' << result.total_allocated << ','
      << result.congestion;
  return out.str();
}

}  // namespace lighttrail
