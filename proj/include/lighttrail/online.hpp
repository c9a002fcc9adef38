#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lighttrail/core.hpp"

namespace lighttrail {

enum class Policy { kSeparateClass, kAllClass, kBaseline };

Policy parse_policy(const std::string& name);
std::string policy_name(Policy policy);

// Shortest arc wins; a tie (distance exactly n/2) goes clockwise.
enum class RingDirection { kClockwise, kCounterClockwise };
RingDirection ring_direction(int src, int dst, int n);

struct RingGeometry {
  int class_index = 0;
  int phase = 0;  // 0 or 2
  Interval trail;  // arc, lo in [0, n), hi <= lo + n
};

// Ring trail grids use boundaries floor(j*n/2^i + 0.5) (phase 0) and the
// same offset by n/2^(i+1) (phase 2); class 0 is the full ring broken at
// node 0 or at round(n/2). A transmission takes the maximum class and
// minimum phase whose trail fully contains its arc.
RingGeometry ring_geometry(const Interval& arc, int n);
std::vector<Interval> ring_trail_grid(int class_index, int phase, int n);

// Trail extent AllClass would request for an array arc: [x, x + 2^(i+1)]
// clamped to the last node for class >= 2, the arc itself for classes 0/1.
Interval allclass_target_extent(const Interval& arc, int node_count);

struct Placement {
  int fiber = 0;  // 0 = clockwise / array, 1 = counterclockwise
  int wavelength = 0;
  std::int64_t trail_serial = 0;
  Interval trail_extent;
};

// One online scheduling engine instance. Wavelengths stay in allocation
// order once allocated; an emptied wavelength is unlabeled and reusable but
// keeps its index. A transmission's trail never changes while it is active.
class OnlineEngine {
 public:
  OnlineEngine(Policy policy, Topology topology, int node_count);

  Placement on_arrive(const Transmission& t);
  void on_depart(int id);

  // Wavelength index an AllClass arrival would take, without mutating.
  int peek_allclass_wavelength(const Transmission& t) const;

  int in_use_wavelengths() const;     // max over fibers, current
  int peak_wavelengths() const { return peak_; }
  int total_allocated() const;        // max over fibers, ever
  Bandwidth peak_congestion() const { return peak_congestion_; }
  int active_count() const { return static_cast<int>(active_.size()); }

  std::optional<Placement> placement_of(int id) const;
  // Live trail extents on one fiber, per wavelength (empty slots included).
  std::vector<std::vector<Interval>> live_extents(int fiber = 0) const;
  std::optional<std::pair<int, int>> wavelength_label(int fiber,
                                                      int wavelength) const;

  // Array-topology snapshot of the active assignment as a Schedule.
  Schedule snapshot() const;
  // Throws std::logic_error when an internal invariant is broken: trail
  // overlap inside a wavelength, capacity overflow, or a labeled wavelength
  // holding a foreign trail.
  void audit() const;

  Policy policy() const { return policy_; }
  Topology topology() const { return topology_; }
  int node_count() const { return node_count_; }

  // SeparateClass wavelength allocations: x = number of same-label
  // wavelengths already in use when the new one was taken, and the anchor
  // link congestion observed at that moment.
  struct LabelAllocation {
    int class_index;
    int phase;
    int prior_same_label;
    Bandwidth trigger_bandwidth;
    Bandwidth anchor_congestion;
  };
  const std::vector<LabelAllocation>& label_allocations() const {
    return label_allocations_;
  }

 private:
  struct Trail {
    std::int64_t serial = 0;
    Interval extent;
    std::vector<TrailAssignment> assigned;
    Bandwidth load = 0;
  };
  struct Wavelength {
    std::optional<std::pair<int, int>> label;
    std::vector<Trail> trails;
    bool in_use() const;
  };
  struct Fiber {
    std::vector<Wavelength> waves;
    std::vector<Bandwidth> link_load;
  };
  struct ActiveRecord {
    Transmission t;
    Interval arc;
    Placement placement;
  };

  // Resolved routing for one arrival: fiber plus occupied arc.
  std::pair<int, Interval> route(const Transmission& t) const;
  // Target trail extent and, for SeparateClass, the (class, phase) label.
  struct Target {
    Interval trail;
    int class_index;
    int phase;
  };
  Target target_for(const Interval& arc) const;

  Placement assign_separate_class(Fiber& fiber, int fiber_id,
                                  const Transmission& t, const Interval& arc);
  Placement assign_all_class(Fiber& fiber, int fiber_id, const Transmission& t,
                             const Interval& arc);
  Placement assign_baseline(Fiber& fiber, int fiber_id, const Transmission& t,
                            const Interval& arc);
  Placement place(Fiber& fiber, int fiber_id, int wavelength, Trail& trail,
                  const Transmission& t);
  bool fits_unused(const Wavelength& wave, const Interval& extent) const;
  void note_usage();

  Policy policy_;
  Topology topology_;
  int node_count_;
  std::vector<Fiber> fibers_;
  std::unordered_map<int, ActiveRecord> active_;
  std::int64_t next_serial_ = 1;
  int peak_ = 0;
  Bandwidth peak_congestion_ = 0;
  std::vector<LabelAllocation> label_allocations_;
};

struct OnlineResult {
  Policy policy;
  Topology topology;
  int node_count = 0;
  int peak_wavelengths = 0;
  int final_wavelengths = 0;
  int total_allocated = 0;
  Bandwidth congestion = 0;
  // id -> placement, recorded at arrival and audited at departure.
  std::vector<std::pair<int, Placement>> assignments;
};

// Replays an event sequence through the policy. The never-move contract is
// always checked at departures; audit = true additionally verifies engine
// invariants after every event.
OnlineResult run_online(const EventSequence& events, Policy policy,
                        Topology topology, int node_count, bool audit = false);

std::string format_online_result(const OnlineResult& result);

}  // namespace lighttrail
