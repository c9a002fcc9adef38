#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lighttrail {

// All bandwidths are integer micro-units of a wavelength's capacity.
// Capacity comparisons are exact integer arithmetic throughout.
using Bandwidth = std::int64_t;
inline constexpr Bandwidth kCapacity = 1'000'000;

enum class Mode { kNonSplittable, kSplittable };
enum class Topology { kArray, kRing };

// Node interval. On an array: 0 <= lo < hi <= n-1, covering links lo..hi-1.
// On a ring of n nodes hi may exceed n to encode wrap; links are
// (lo + j) mod n for j in [0, hi-lo).
struct Interval {
  int lo = 0;
  int hi = 0;

  int length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// True iff the two intervals share at least one link (a shared endpoint
// node is not a conflict). Array semantics, no wrap.
bool links_overlap(const Interval& a, const Interval& b);
// True iff inner's links are a subset of outer's links. Array semantics.
bool contains(const Interval& outer, const Interval& inner);

// Ring-aware versions; n is the node count of the ring.
bool arcs_overlap(const Interval& a, const Interval& b, int n);
bool arc_contains(const Interval& outer, const Interval& inner, int n);

struct Transmission {
  int id = 0;
  int src = 0;
  int dst = 0;
  Bandwidth bandwidth = 0;
  std::optional<int> arrival;
  std::optional<int> departure;

  int length() const { return dst - src; }
  Interval extent() const { return {src, dst}; }
};

// Swaps endpoints so src < dst; throws std::invalid_argument on src == dst
// or bandwidth outside (0, kCapacity].
Transmission normalized(Transmission t);

// Length class: class 0 iff length == 1, otherwise the smallest i with
// 2^(i-1) < length <= 2^i. Throws std::invalid_argument for length < 1.
int class_of_length(int length);

struct TrailGeometry {
  int class_index = 0;
  int anchor = 0;       // smallest multiple of 2^(i-1) strictly inside (src,dst)
  int trail_point = 0;  // anchor - 2^(i-1)
  int phase = 0;        // (trail_point / 2^(i-1)) mod 4
  Interval trail;       // [trail_point, trail_point + 2^(i+1)], unclamped
};

// Array geometry for a class >= 2 transmission (src < dst required).
// Throws std::domain_error when the class is below 2.
TrailGeometry transmission_geometry(const Transmission& t);

struct CongestionProfile {
  std::vector<Bandwidth> per_link;
  Bandwidth max_link = 0;
};

// Per-link totals on an array of node_count nodes: link l carries every
// transmission with src <= l < dst.
CongestionProfile link_congestion(const std::vector<Transmission>& ts,
                                  int node_count);

struct Event {
  enum class Kind { kArrive, kDepart };
  Kind kind = Kind::kArrive;
  int time = 0;
  int id = 0;
  // Valid for arrivals only.
  int src = 0;
  int dst = 0;
  Bandwidth bandwidth = 0;

  static Event arrive(int time, const Transmission& t) {
    return {Kind::kArrive, time, t.id, t.src, t.dst, t.bandwidth};
  }
  static Event depart(int time, int id) {
    return {Kind::kDepart, time, id, 0, 0, 0};
  }
  Transmission transmission() const { return {id, src, dst, bandwidth, time, {}}; }
};

// Time-ordered events, arrivals before departures at equal times.
using EventSequence = std::vector<Event>;

// Stable-sorts by (time, arrivals before departures). Well-formedness is
// checked by the consumers while replaying.
void sort_events(EventSequence& events);

// Max over events of the active-set congestion on an array. Departures of
// unknown or inactive ids throw std::runtime_error.
Bandwidth dynamic_congestion(const EventSequence& events, int node_count);

struct TrailAssignment {
  int id = 0;
  Bandwidth amount = 0;
};

struct LightTrail {
  Interval extent;
  std::vector<TrailAssignment> assigned;
  // (class, phase) of the owning wavelength; used by SeparateClass only.
  std::optional<std::pair<int, int>> label;

  Bandwidth load() const;
};

struct Schedule {
  int node_count = 0;
  std::vector<std::vector<LightTrail>> wavelengths;

  int wavelength_count() const { return static_cast<int>(wavelengths.size()); }
};

struct Violation {
  enum class Kind {
    kCapacityExceeded,
    kExtentNotContained,
    kOverlappingTrails,
    kUnassignedTransmission,
    kSplitMismatch,
    kUnknownTransmission,
    kBadExtent,
  };
  Kind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind k) const;
};

// Violations are data, not errors: capacity overflow, trail extent outside
// the array, extent not containing an assigned transmission, overlapping
// trails on one wavelength, unassigned or unknown transmissions, and split
// sums that do not match the demanded bandwidth.
ValidationReport validate_schedule(const std::vector<Transmission>& instance,
                                   const Schedule& schedule, Mode mode);

struct PackedBin {
  std::vector<std::pair<std::size_t, Bandwidth>> parts;  // (item index, amount)
  Bandwidth load = 0;
};

// First-fit bin packing into unit-capacity bins. Non-splittable: each item
// goes whole into the first bin with room. Splittable: items are poured
// sequentially, splitting at bin boundaries, so the bin count is exactly
// ceil(total / capacity). Items above capacity throw std::invalid_argument.
std::vector<PackedBin> first_fit_pack(const std::vector<Bandwidth>& items,
                                      Mode mode);

struct ColoringResult {
  std::vector<int> colors;
  int color_count = 0;
};

// Left-to-right sweep over sorted left endpoints, smallest free color first,
// ties broken by input index. Two intervals conflict iff they share a link.
// Uses exactly max-link-load colors.
ColoringResult color_intervals(const std::vector<Interval>& intervals);

// Max over links of the number of intervals covering the link.
int max_link_load(const std::vector<Interval>& intervals);

}  // namespace lighttrail
