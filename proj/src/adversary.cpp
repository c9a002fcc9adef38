#include "lighttrail/adversary.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace lighttrail {

namespace {

bool power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

}  // namespace

std::vector<Transmission> make_hierarchical_instance(int n, int extra_c) {
  if (!power_of_two(n) || n < 2)
    throw std::invalid_argument("hierarchical instance needs n = 2^k");
  if (extra_c < 0) throw std::invalid_argument("extra_c must be >= 0");
  const int k = std::bit_width(static_cast<unsigned>(n)) - 1;
  const Bandwidth b = kCapacity / (k + 1);
  std::vector<Transmission> ts;
  int id = 0;
  for (int i = 0; i <= k; ++i) {
    int span = 1 << i;
    for (int j = 0; j < n / span; ++j)
      ts.push_back({id++, j * span, (j + 1) * span, b, {}, {}});
  }
  for (int c = 0; c < extra_c; ++c) ts.push_back({id++, 0, n, kCapacity, {}, {}});
  return ts;
}

EventSequence make_class_ladder(int k) {
  if (k < 1) throw std::invalid_argument("ladder needs k >= 1");
  const Bandwidth b = kCapacity / (k + 1);
  EventSequence events;
  for (int t = 0; t <= k; ++t)
    events.push_back(Event::arrive(t, {t, 0, 1 << t, b, t, k + 1}));
  for (int t = 0; t <= k; ++t) events.push_back(Event::depart(k + 1, t));
  sort_events(events);
  return events;
}

namespace {

// Candidate class-c transmission through link x whose serving trail starts
// at tp; endpoints chosen greedily (largest s, then largest d). Returns
// false when the geometry does not work out.
bool candidate_for_trail_point(int c, int x, int tp, int last_node, int& s_out,
                               int& d_out) {
  const int base = 1 << (c - 1);
  for (int s = std::min(x, tp + base - 1); s >= tp; --s) {
    int d = std::min({last_node, tp + 4 * base, s + (1 << c)});
    if (d > x && d - s > base && d > tp + base) {
      s_out = s;
      d_out = d;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Transmission> make_hill(int h, int x, int k, Bandwidth bandwidth) {
  const int n = 1 << k;
  if (h < 1 || h > k) throw std::invalid_argument("hill needs 1 <= h <= k");
  if (x < 0 || x >= n) throw std::invalid_argument("hill link out of range");
  std::vector<Transmission> hill;
  for (int m = 0; m < h; ++m) {
    int c = k - 1 - m;
    if (c == 0) {
      hill.push_back({m, x, x + 1, bandwidth, {}, {}});
      continue;
    }
    if (c == 1) {
      int s = std::min(x, n - 2);
      hill.push_back({m, s, s + 2, bandwidth, {}, {}});
      continue;
    }
    const int base = 1 << (c - 1);
    // Lowest feasible phase, then the largest trail point within it.
    int best_tp = -1, best_phase = 4, best_s = 0, best_d = 0;
    for (int tp = (x / base) * base; tp >= 0; tp -= base) {
      int s, d;
      if (!candidate_for_trail_point(c, x, tp, n, s, d)) continue;
      int phase = (tp / base) % 4;
      if (phase < best_phase || (phase == best_phase && tp > best_tp)) {
        best_phase = phase;
        best_tp = tp;
        best_s = s;
        best_d = d;
      }
    }
    if (best_tp < 0)
      throw std::runtime_error("no class-" + std::to_string(c) +
                               " transmission reaches link " + std::to_string(x));
    hill.push_back({m, best_s, best_d, bandwidth, {}, {}});
  }
  return hill;
}

int killer_row_total(int n) {
  int total = 0;
  int q = n;
  while (true) {
    int k = q >= 1 ? std::bit_width(static_cast<unsigned>(q)) - 1 : 0;
    if (k < 2) break;
    total += k;
    q = q / k;
  }
  return total;
}

namespace {

// Everything the killer generator needs to steer a simulated AllClass run.
class KillerBuilder {
 public:
  explicit KillerBuilder(int n)
      : n_(n),
        node_count_(n + 1),
        height_(std::max<Bandwidth>(1, kCapacity / (static_cast<Bandwidth>(n) * n))),
        engine_(Policy::kAllClass, Topology::kArray, n + 1) {}

  KillerSequence build() {
    KillerSequence out;
    out.node_count = node_count_;
    int q = n_;
    int unit = 1;
    while (true) {
      int k = std::bit_width(static_cast<unsigned>(q)) - 1;
      if (k < 2) break;
      out.stages.push_back(run_stage(q, k, unit));
      // Later stages lay their units on a power-of-two grid: the largest
      // 2^m <= unit * k keeps same-row trails disjoint (2U <= U*k) while
      // the trails still blanket every lower row's gaps (2U >= old pitch).
      q = q / k;
      int next_unit = 1 << (std::bit_width(static_cast<unsigned>(unit * k)) - 1);
      if (std::bit_width(static_cast<unsigned>(q)) - 1 >= 2 && next_unit < 4)
        throw std::runtime_error(
            "killer stage geometry infeasible at this scale");
      unit = next_unit;
    }
    out.events = std::move(events_);
    return out;
  }

 private:
  KillerStage run_stage(int q, int k, int scale) {
    KillerStage stage{scale, q, k, {}};
    const int base_wave = base_waves_;
    // Boundary aligned to a whole row period: the first slots right of it
    // then belong to the low rows, which need few or no blockers, and the
    // high rows keep alignment room from the lower rows' left halves.
    const int half = (q / 2) / k * k;

    // Guard batch at the last slot keeps the stage's lower rows alive while
    // the left half is laid down.
    std::vector<int> guard;
    Interval guard_links{scale * (q - 1), scale * q};
    Interval guard_region{scale * half, node_count_ - 1};
    for (int m = 0; m + 1 < k; ++m)
      guard.push_back(emit_blocker(base_wave + m, guard_links, guard_region,
                                   std::nullopt));

    for (int pass = 0; pass < 2; ++pass) {
      for (int i = k - 1; i >= 0; --i) {
        for (int j = 0; j < q / k; ++j) {
          int x = j * k + i;
          // A slot belongs to the guarded left pass only when its whole
          // serving trail stays clear of the guard's half.
          Interval trail = allclass_target_extent(
              Interval{scale * x, scale * (x + 1)}, node_count_);
          bool left = trail.hi <= scale * half;
          if ((pass == 0) != left) continue;
          lay_pattern_slot(stage, base_wave, i, x, scale);
        }
      }
      if (pass == 0)
        for (int id : guard) emit_depart(id);
    }
    base_waves_ += k;
    stage.events_end = events_.size();
    return stage;
  }

  void lay_pattern_slot(KillerStage& stage, int base_wave, int row, int x,
                        int scale) {
    Transmission pattern{0, scale * x, scale * (x + 1), height_, {}, {}};
    Interval pattern_trail = allclass_target_extent(pattern.extent(), node_count_);
    Interval full_region{0, node_count_ - 1};

    std::vector<int> blockers;
    for (int w = base_wave; w < base_wave + row; ++w) {
      if (wavelength_blocked(w, pattern_trail)) continue;
      blockers.push_back(
          emit_blocker(w, pattern_trail, full_region, pattern_trail));
    }
    int landed = engine_.peek_allclass_wavelength(pattern);
    if (landed != base_wave + row)
      throw std::logic_error("killer pattern row mismatch at slot " +
                             std::to_string(x));
    stage.pattern_ids.push_back(emit_arrive(pattern));
    for (int id : blockers) emit_depart(id);
  }

  bool wavelength_blocked(int w, const Interval& extent) const {
    auto waves = engine_.live_extents(0);
    if (w >= static_cast<int>(waves.size())) return false;
    for (const Interval& live : waves[w])
      if (links_overlap(live, extent)) return true;
    return false;
  }

  // Deterministic search for a transmission whose AllClass placement lands
  // exactly on wavelength w and whose trail stays inside region.
  int emit_blocker(int w, const Interval& links, const Interval& region,
                   std::optional<Interval> forbidden_extent) {
    std::set<Interval, bool (*)(const Interval&, const Interval&)> live(
        [](const Interval& a, const Interval& b) {
          return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
        });
    for (const auto& wave : engine_.live_extents(0))
      for (const Interval& e : wave) live.insert(e);

    const int last_node = node_count_ - 1;
    int max_class = class_of_length(last_node);
    for (int lambda = links.lo; lambda < links.hi; ++lambda) {
      for (int c = max_class; c >= 1; --c) {
        if (c == 1) {
          for (int s : {lambda, lambda - 1}) {
            if (s < 0 || s + 2 > last_node) continue;
            Transmission t{0, s, s + 2, height_, {}, {}};
            if (blocker_ok(t, w, region, live, forbidden_extent))
              return emit_arrive(t);
          }
          continue;
        }
        const int base = 1 << (c - 1);
        for (int tp = (lambda / base) * base; tp >= 0; tp -= base) {
          int s, d;
          if (!candidate_for_trail_point(c, lambda, tp, last_node, s, d))
            continue;
          Transmission t{0, s, d, height_, {}, {}};
          if (blocker_ok(t, w, region, live, forbidden_extent))
            return emit_arrive(t);
        }
      }
    }
    throw std::logic_error("no blocker reaches wavelength " + std::to_string(w) +
                           " for links [" + std::to_string(links.lo) + "," +
                           std::to_string(links.hi) + ") region [" +
                           std::to_string(region.lo) + "," +
                           std::to_string(region.hi) + "]");
  }

  template <typename LiveSet>
  bool blocker_ok(const Transmission& t, int w, const Interval& region,
                  const LiveSet& live,
                  const std::optional<Interval>& forbidden_extent) const {
    Interval trail = allclass_target_extent(t.extent(), node_count_);
    if (trail.lo < region.lo || trail.hi > region.hi) return false;
    if (live.count(trail)) return false;
    if (forbidden_extent && trail == *forbidden_extent) return false;
    return engine_.peek_allclass_wavelength(t) == w;
  }

  int emit_arrive(Transmission t) {
    t.id = next_id_++;
    t.arrival = next_time_;
    events_.push_back(Event::arrive(next_time_++, t));
    engine_.on_arrive(t);
    return t.id;
  }

  void emit_depart(int id) {
    events_.push_back(Event::depart(next_time_++, id));
    engine_.on_depart(id);
  }

  int n_;
  int node_count_;
  Bandwidth height_;
  OnlineEngine engine_;
  EventSequence events_;
  int next_id_ = 0;
  int next_time_ = 0;
  int base_waves_ = 0;
};

}  // namespace

KillerSequence make_killer_sequence(int n) {
  if (n < 4) throw std::invalid_argument("killer sequence needs n >= 4");
  return KillerBuilder(n).build();
}

std::vector<int> max_bipartite_matching(const BipartiteGraph& graph) {
  std::vector<int> match_left(graph.left_count, -1);
  std::vector<int> match_right(graph.right_count, -1);
  std::vector<char> visited;

  std::function<bool(int)> augment = [&](int u) -> bool {
    for (int v : graph.edges[u]) {
      if (visited[v]) continue;
      visited[v] = 1;
      if (match_right[v] == -1 || augment(match_right[v])) {
        match_left[u] = v;
        match_right[v] = u;
        return true;
      }
    }
    return false;
  };

  for (int u = 0; u < graph.left_count; ++u) {
    visited.assign(graph.right_count, 0);
    augment(u);
  }
  return match_left;
}

namespace {

// Built-in policies probed through the generic target surface.
class EngineTarget : public AdversaryTarget {
 public:
  EngineTarget(Policy policy, int node_count)
      : engine_(policy, Topology::kArray, node_count) {}
  std::int64_t place(const Transmission& t) override {
    return engine_.on_arrive(t).trail_serial;
  }
  void release(int id) override { engine_.on_depart(id); }
  int wavelengths_in_use() override { return engine_.in_use_wavelengths(); }
  int peak_wavelengths() override { return engine_.peak_wavelengths(); }

 private:
  OnlineEngine engine_;
};

}  // namespace

AdversaryOutcome run_adaptive_adversary(AdversaryTarget& target, int n) {
  if (!power_of_two(n) || n < 4)
    throw std::invalid_argument("adversary needs n = 2^k with k >= 2");
  const int k = std::bit_width(static_cast<unsigned>(n)) - 1;
  const Bandwidth height = kCapacity / k;
  const int node_count = n + 1;

  AdversaryOutcome out;
  out.node_count = node_count;
  out.k = k;
  out.height = height;

  int next_id = 0;
  for (int stage = 0; stage < k; ++stage) {
    const int len = 1 << stage;
    const int intervals = n / len;
    StageRecord record;
    record.stage = stage;

    struct Arrival {
      int id;
      int interval;
      std::int64_t serial;
    };
    std::vector<Arrival> arrivals;
    for (int q = 0; q < intervals; ++q) {
      record.intervals.push_back({q * len, (q + 1) * len});
      for (int copy = 0; copy < k * k; ++copy) {
        Transmission t{next_id++, q * len, (q + 1) * len, height, 2 * stage, {}};
        std::int64_t serial = target.place(t);
        out.events.push_back(Event::arrive(2 * stage, t));
        arrivals.push_back({t.id, q, serial});
        record.arrivals.push_back(t.id);
        record.trail_of.push_back(serial);
      }
    }

    // Groups of k by arrival order within each interval; trails get dense
    // right-vertex ids in order of first appearance.
    BipartiteGraph graph;
    graph.left_count = intervals * k;
    std::unordered_map<std::int64_t, int> trail_vertex;
    graph.edges.assign(graph.left_count, {});
    record.group_of.resize(arrivals.size());
    for (std::size_t idx = 0; idx < arrivals.size(); ++idx) {
      const Arrival& a = arrivals[idx];
      int within = static_cast<int>(idx) % (k * k);
      int group = a.interval * k + within / k;
      record.group_of[idx] = group;
      auto it = trail_vertex.emplace(a.serial, static_cast<int>(trail_vertex.size()))
                    .first;
      graph.edges[group].push_back(it->second);
    }
    graph.right_count = static_cast<int>(trail_vertex.size());

    std::vector<int> match = max_bipartite_matching(graph);
    std::vector<char> keep(arrivals.size(), 0);
    for (int u = 0; u < graph.left_count; ++u) {
      if (match[u] == -1)
        throw std::logic_error("stage matching failed to saturate the groups");
      // Keep the lowest-id member of group u placed in the matched trail.
      for (std::size_t idx = 0; idx < arrivals.size(); ++idx) {
        if (record.group_of[idx] != u) continue;
        if (trail_vertex.at(arrivals[idx].serial) == match[u]) {
          keep[idx] = 1;
          break;
        }
      }
    }

    for (std::size_t idx = 0; idx < arrivals.size(); ++idx) {
      if (keep[idx]) {
        record.kept.push_back(arrivals[idx].id);
      } else {
        record.departed.push_back(arrivals[idx].id);
        out.events.push_back(Event::depart(2 * stage + 1, arrivals[idx].id));
        target.release(arrivals[idx].id);
      }
    }
    out.stages.push_back(std::move(record));
  }

  out.alg_final_wavelengths = target.wavelengths_in_use();
  out.alg_peak_wavelengths = target.peak_wavelengths();
  sort_events(out.events);
  return out;
}

AdversaryOutcome run_adaptive_adversary(Policy policy, int n) {
  EngineTarget target(policy, n + 1);
  return run_adaptive_adversary(target, n);
}

OptStagePlan build_opt_stage_plan(const std::vector<StageRecord>& stages,
                                  const EventSequence& events, int n) {
  std::unordered_map<int, Transmission> by_id;
  for (const auto& ev : events)
    if (ev.kind == Event::Kind::kArrive) by_id[ev.id] = ev.transmission();
  const int k = static_cast<int>(stages.size());

  OptStagePlan plan;
  for (int stage = 0; stage < k; ++stage) {
    Schedule schedule;
    schedule.node_count = n + 1;
    std::vector<Transmission> active;

    // Dedicated wavelengths for every earlier stage's kept set.
    for (int j = 0; j < stage; ++j) {
      std::vector<LightTrail> trails;
      for (const Interval& iv : stages[j].intervals)
        trails.push_back(LightTrail{iv, {}, {}});
      for (int id : stages[j].kept) {
        const Transmission& t = by_id.at(id);
        trails[t.src / stages[j].intervals[0].length()].assigned.push_back(
            {id, t.bandwidth});
        active.push_back(t);
      }
      schedule.wavelengths.push_back(std::move(trails));
    }

    // Current stage: the kept set on one wavelength, departures-to-be on
    // k-1 transient wavelengths, all partitioned by the stage's intervals.
    const auto& rec = stages[stage];
    const int len = rec.intervals[0].length();
    std::vector<std::vector<LightTrail>> current(k);
    for (auto& wave : current)
      for (const Interval& iv : rec.intervals)
        wave.push_back(LightTrail{iv, {}, {}});
    for (int id : rec.kept) {
      const Transmission& t = by_id.at(id);
      current[0][t.src / len].assigned.push_back({id, t.bandwidth});
      active.push_back(t);
    }
    std::vector<int> fill(rec.intervals.size(), 0);
    for (int id : rec.departed) {
      const Transmission& t = by_id.at(id);
      int interval = t.src / len;
      int wave = 1 + fill[interval] / k;
      ++fill[interval];
      if (wave >= k) throw std::logic_error("transient wavelengths overflow");
      current[wave][interval].assigned.push_back({id, t.bandwidth});
      active.push_back(t);
    }
    for (auto& wave : current) {
      std::erase_if(wave, [](const LightTrail& tr) { return tr.assigned.empty(); });
      schedule.wavelengths.push_back(std::move(wave));
    }
    std::erase_if(schedule.wavelengths,
                  [](const std::vector<LightTrail>& w) { return w.empty(); });

    plan.peak_wavelengths =
        std::max(plan.peak_wavelengths, schedule.wavelength_count());
    plan.stage_schedules.push_back(std::move(schedule));
    plan.stage_active.push_back(std::move(active));
  }
  return plan;
}

}  // namespace lighttrail
