#pragma once

#include <cstdint>
#include <vector>

#include "lighttrail/core.hpp"
#include "lighttrail/online.hpp"

namespace lighttrail {

// Dense multi-scale instance on nodes 0..n (n a power of two): for every
// class i <= log2 n, the transmissions [j*2^i, (j+1)*2^i] at bandwidth
// capacity / (log2 n + 1), plus extra_c full-span transmissions at full
// capacity. Link congestion is uniform.
std::vector<Transmission> make_hierarchical_instance(int n, int extra_c);

// Arrivals [0, 2^t] at t = 0..k on nodes 0..2^k, bandwidth capacity/(k+1),
// all departing together at t = k+1.
EventSequence make_class_ladder(int k);

// Ordered batch of h transmissions through link [x, x+1] with classes
// k-1, k-2, ..., k-h on nodes 0..2^k. Per class the phase is the lowest
// feasible one and the trail point the largest keeping the transmission on
// the array. Throws std::runtime_error when some class cannot reach the
// link.
std::vector<Transmission> make_hill(int h, int x, int k, Bandwidth bandwidth);

struct KillerStage {
  int scale = 0;        // links per slot
  int q = 0;            // slots
  int k = 0;            // rows (floor(log2 q))
  std::vector<int> pattern_ids;
  std::size_t events_end = 0;  // events[0..events_end) completes the stage
};

struct KillerSequence {
  EventSequence events;
  std::vector<KillerStage> stages;
  int node_count = 0;
};

// Multi-stage sequence that drives AllClass to one fresh wavelength per
// pattern row while the active set always fits a single full-span trail.
// Stage 1 lays unit trails at positions j*k+i; later stages rescale by the
// previous row count and stack on top. Stops once floor(log2 q) < 2. All
// heights are capacity / n^2. Temporary blocker batches are chosen against
// a simulated AllClass engine so each pattern arrival lands exactly on its
// row's wavelength.
KillerSequence make_killer_sequence(int n);

// Total pattern rows the killer recurrence yields:
// T(q) = floor(log2 q) + T(floor(q / floor(log2 q))), zero below the cutoff.
int killer_row_total(int n);

struct BipartiteGraph {
  int left_count = 0;
  int right_count = 0;
  std::vector<std::vector<int>> edges;  // adjacency: left -> right vertices
};

// Maximum bipartite matching via augmenting paths; deterministic given
// input order. Returns, per left vertex, the matched right vertex or -1.
std::vector<int> max_bipartite_matching(const BipartiteGraph& graph);

struct StageRecord {
  int stage = 0;
  std::vector<Interval> intervals;
  std::vector<int> arrivals;
  std::vector<int> kept;      // S_i, exactly k per interval
  std::vector<int> departed;  // D_i
  std::vector<int> group_of;          // per arrival (by index), its group
  std::vector<std::int64_t> trail_of; // per arrival (by index), trail serial
};

struct AdversaryOutcome {
  EventSequence events;
  std::vector<StageRecord> stages;
  int alg_final_wavelengths = 0;
  int alg_peak_wavelengths = 0;
  int node_count = 0;
  int k = 0;
  Bandwidth height = 0;
};

// Any online policy the adversary can probe: it only needs the trail
// identity chosen per arrival and the current wavelength usage.
class AdversaryTarget {
 public:
  virtual ~AdversaryTarget() = default;
  virtual std::int64_t place(const Transmission& t) = 0;  // trail identity
  virtual void release(int id) = 0;
  virtual int wavelengths_in_use() = 0;
  virtual int peak_wavelengths() = 0;
};

// Adaptive lower-bound adversary on nodes 0..n (n = 2^k, k >= 2): per stage
// it sends k^2 copies of every aligned interval of length 2^i at height
// capacity/k, reads the target's trail assignments back, keeps a matched
// set of k per interval in distinct trails, and departs the rest. Throws
// std::logic_error if some stage matching fails to saturate the groups.
AdversaryOutcome run_adaptive_adversary(AdversaryTarget& target, int n);
// Convenience wrapper driving one of the built-in policies.
AdversaryOutcome run_adaptive_adversary(Policy policy, int n);

struct OptStagePlan {
  int peak_wavelengths = 0;
  // Per stage, the schedule in force while the stage's arrivals are live.
  std::vector<Schedule> stage_schedules;
  std::vector<std::vector<Transmission>> stage_active;
};

// Reference offline schedule for the adversary sequence: one dedicated
// wavelength per kept set plus k-1 transient wavelengths per stage,
// peaking at 2k-1.
OptStagePlan build_opt_stage_plan(const std::vector<StageRecord>& stages,
                                  const EventSequence& events, int n);

}  // namespace lighttrail
