#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "lighttrail/adversary.hpp"
#include "lighttrail/core.hpp"
#include "lighttrail/oracle.hpp"
#include "lighttrail/stationary.hpp"
#include "test_util.hpp"

using namespace lighttrail;
using testutil::three_node_instance;

namespace {

std::vector<Bandwidth> congestion_of(const std::vector<Transmission>& ts,
                                     int n) {
  if (ts.empty()) return std::vector<Bandwidth>(n - 1, 0);
  return link_congestion(ts, n).per_link;
}

// Pick condition from the subclass split: equality below one capacity unit,
// at least one capacity unit elsewhere.
void check_pick_condition(const std::vector<Transmission>& subset,
                          const std::vector<Bandwidth>& pool_load, int n) {
  auto subset_load = congestion_of(subset, n);
  for (int l = 0; l < n - 1; ++l) {
    if (pool_load[l] <= kCapacity) {
      CHECK(subset_load[l] == pool_load[l]);
    } else {
      CHECK(subset_load[l] >= kCapacity);
    }
  }
}

}  // namespace

TEST_CASE("class partition") {
  SUBCASE("hierarchical pattern class sizes") {
    auto classes = partition_by_class(make_hierarchical_instance(16, 0));
    REQUIRE(classes.size() == 5);
    CHECK(classes[0].size() == 16);
    CHECK(classes[1].size() == 8);
    CHECK(classes[2].size() == 4);
    CHECK(classes[3].size() == 2);
    CHECK(classes[4].size() == 1);
  }
  SUBCASE("singleton") {
    auto classes = partition_by_class({{0, 0, 3, 1, {}, {}}});
    REQUIRE(classes.size() == 1);
    CHECK(classes.count(2) == 1);
  }
  SUBCASE("empty") { CHECK(partition_by_class({}).empty()); }
}

TEST_CASE("subclass split") {
  SUBCASE("three full-bandwidth copies split one per subset") {
    std::vector<Transmission> ts{{0, 0, 4, kCapacity, {}, {}},
                                 {1, 0, 4, kCapacity, {}, {}},
                                 {2, 0, 4, kCapacity, {}, {}}};
    auto partition = split_subclasses(ts, 2, 9);
    REQUIRE(partition.subsets.size() == 3);
    for (const auto& s : partition.subsets) CHECK(s.size() == 1);
  }
  SUBCASE("single transmission") {
    auto partition = split_subclasses({{0, 2, 6, 700'000, {}, {}}}, 2, 9);
    REQUIRE(partition.subsets.size() == 1);
    CHECK(partition.subsets[0].size() == 1);
  }
  SUBCASE("random class sets satisfy the split guarantees") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
      int n = 33;
      int cls = 2 + static_cast<int>(rng.next_below(4));
      auto ts = testutil::random_class_set(rng, n, cls,
                                           3 + rng.next_below(40));
      Bandwidth c = link_congestion(ts, n).max_link;
      auto partition = split_subclasses(ts, cls, n);

      int k = static_cast<int>(partition.subsets.size());
      CHECK(k <= static_cast<int>((c + kCapacity - 1) / kCapacity));

      std::size_t total = 0;
      for (std::size_t j = 0; j < partition.subsets.size(); ++j) {
        const auto& subset = partition.subsets[j];
        total += subset.size();
        CHECK(link_congestion(subset, n).max_link < 4 * kCapacity);
        check_pick_condition(subset, partition.pool_congestion[j], n);
        // Link-use witness: a subset-j transmission on link l certifies
        // ceil(c_l / capacity) >= j+1.
        auto full_load = congestion_of(ts, n);
        for (const auto& t : subset)
          for (int l = t.src; l < t.dst; ++l)
            CHECK((full_load[l] + kCapacity - 1) / kCapacity >=
                  static_cast<Bandwidth>(j + 1));
      }
      CHECK(total == ts.size());
    }
  }
}

TEST_CASE("subclass scheduling") {
  SUBCASE("one transmission, one trail") {
    auto pool =
        schedule_subclass({{0, 0, 4, kCapacity, {}, {}}}, 2, 9, Mode::kSplittable);
    REQUIRE(pool.size() == 1);
    CHECK(pool[0].extent == Interval{0, 8});
    CHECK(pool[0].phase == 0);
  }
  SUBCASE("congestion four is rejected") {
    std::vector<Transmission> ts;
    for (int i = 0; i < 4; ++i) ts.push_back({i, 0, 4, kCapacity, {}, {}});
    CHECK_THROWS_AS(schedule_subclass(ts, 2, 9, Mode::kSplittable),
                    std::invalid_argument);
  }
  SUBCASE("mixed phases all land in containing trails") {
    std::vector<Transmission> ts{{0, 0, 4, 900'000, {}, {}},
                                 {1, 2, 6, 900'000, {}, {}},
                                 {2, 5, 8, 900'000, {}, {}}};
    for (Mode mode : {Mode::kSplittable, Mode::kNonSplittable}) {
      auto pool = schedule_subclass(ts, 2, 9, mode);
      CHECK(pool.size() <= 16);
      for (const auto& t : ts) {
        Bandwidth placed = 0;
        for (const auto& trail : pool)
          for (const auto& part : trail.assigned)
            if (part.id == t.id) {
              placed += part.amount;
              CHECK(contains(trail.extent, t.extent()));
            }
        CHECK(placed == t.bandwidth);
      }
    }
  }
}

TEST_CASE("unit classes") {
  SUBCASE("first-fit per link") {
    std::vector<Transmission> r0{{0, 0, 1, 700'000, {}, {}},
                                 {1, 0, 1, 700'000, {}, {}},
                                 {2, 1, 2, 300'000, {}, {}}};
    auto pool = schedule_unit_classes(r0, {}, 3, Mode::kNonSplittable);
    int zero_trails = 0, one_trails = 0;
    for (const auto& trail : pool) {
      if (trail.extent == Interval{0, 1}) ++zero_trails;
      if (trail.extent == Interval{1, 2}) ++one_trails;
    }
    CHECK(zero_trails == 2);
    CHECK(one_trails == 1);
  }
  SUBCASE("parity split for length two") {
    std::vector<Transmission> r1{{0, 0, 2, 500'000, {}, {}},
                                 {1, 1, 3, 500'000, {}, {}}};
    auto pool = schedule_unit_classes({}, r1, 4, Mode::kNonSplittable);
    REQUIRE(pool.size() == 2);
    CHECK(pool[0].extent == Interval{0, 2});
    CHECK(pool[0].phase == 0);
    CHECK(pool[1].extent == Interval{1, 3});
    CHECK(pool[1].phase == 1);
  }
  SUBCASE("empty input") {
    CHECK(schedule_unit_classes({}, {}, 4, Mode::kSplittable).empty());
  }
  SUBCASE("wrong lengths rejected") {
    CHECK_THROWS_AS(
        schedule_unit_classes({{0, 0, 2, 1, {}, {}}}, {}, 4, Mode::kSplittable),
        std::invalid_argument);
  }
}

TEST_CASE("trail trimming") {
  std::vector<Transmission> ts{{0, 0, 4, 500'000, {}, {}}};
  TrailPool pool{{Interval{0, 8}, 2, 0, {{0, 500'000}}},
                 {Interval{8, 16}, 2, 0, {}}};
  auto trimmed = trim_trail_pool(pool, ts);
  REQUIRE(trimmed.size() == 1);
  CHECK(trimmed[0].extent == Interval{0, 4});

  SUBCASE("hierarchical pools stay near the per-link bound") {
    auto instance = make_hierarchical_instance(16, 0);
    auto classes = partition_by_class(instance);
    TrailPool all = schedule_unit_classes(classes[0], classes[1], 17,
                                          Mode::kNonSplittable);
    for (int cls = 2; cls <= 4; ++cls) {
      auto partition = split_subclasses(classes[cls], cls, 17);
      for (const auto& subset : partition.subsets) {
        auto pool = schedule_subclass(subset, cls, 17, Mode::kNonSplittable);
        all.insert(all.end(), pool.begin(), pool.end());
      }
    }
    all = trim_trail_pool(all, instance);
    auto load = congestion_of(instance, 17);
    for (int l = 0; l < 16; ++l) {
      int count = 0;
      for (const auto& trail : all)
        if (trail.extent.lo <= l && l < trail.extent.hi) ++count;
      double bound = 3.0 * (static_cast<double>(load[l]) / kCapacity +
                            std::log2(16.0));
      CHECK(count <= bound);
    }
  }
}

TEST_CASE("stationary pipeline") {
  SUBCASE("three-node instance") {
    for (Mode mode : {Mode::kSplittable, Mode::kNonSplittable}) {
      Schedule s = schedule_stationary(three_node_instance(), 3, mode);
      CHECK(validate_schedule(three_node_instance(), s, mode).ok());
      CHECK(s.wavelength_count() >= 2);
    }
  }
  SUBCASE("hierarchical instance validates") {
    auto instance = make_hierarchical_instance(16, 0);
    Schedule s = schedule_stationary(instance, 17, Mode::kNonSplittable);
    CHECK(validate_schedule(instance, s, Mode::kNonSplittable).ok());
    CHECK(s.wavelength_count() >= 1);
    double bound = 6.0 * (1.0 + std::log2(16.0));
    CHECK(s.wavelength_count() <= bound);
  }
  SUBCASE("empty instance uses no wavelengths") {
    Schedule s = schedule_stationary({}, 8, Mode::kSplittable);
    CHECK(s.wavelength_count() == 0);
  }
  SUBCASE("random instances validate in both modes") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      int n = 8 << rng.next_below(3);
      auto ts = testutil::random_instance(
          rng, n, (1 + rng.next_below(6)) * kCapacity);
      Schedule split = schedule_stationary(ts, n, Mode::kSplittable);
      Schedule whole = schedule_stationary(ts, n, Mode::kNonSplittable);
      CHECK(validate_schedule(ts, split, Mode::kSplittable).ok());
      CHECK(validate_schedule(ts, whole, Mode::kNonSplittable).ok());
      CHECK(split.wavelength_count() <= whole.wavelength_count());
      Bandwidth c = link_congestion(ts, n).max_link;
      CHECK(split.wavelength_count() >=
            static_cast<int>((c + kCapacity - 1) / kCapacity));
    }
  }
}

TEST_CASE("hierarchical packing") {
  SUBCASE("sixteen nodes use three wavelengths split {3,4}/{1,2}/{0}") {
    auto instance = make_hierarchical_instance(16, 0);
    Schedule s = pack_hierarchical(instance, 17);
    CHECK(validate_schedule(instance, s, Mode::kNonSplittable).ok());
    REQUIRE(s.wavelength_count() == 3);
    auto classes_on = [&](int w) {
      std::set<int> out;
      std::map<int, int> len_of;
      for (const auto& t : instance) len_of[t.id] = t.length();
      for (const auto& trail : s.wavelengths[w])
        for (const auto& part : trail.assigned)
          out.insert(class_of_length(len_of[part.id]));
      return out;
    };
    CHECK(classes_on(0) == std::set<int>{3, 4});
    CHECK(classes_on(1) == std::set<int>{1, 2});
    CHECK(classes_on(2) == std::set<int>{0});
  }
  SUBCASE("four nodes need two wavelengths") {
    auto instance = make_hierarchical_instance(4, 0);
    Schedule s = pack_hierarchical(instance, 5);
    CHECK(validate_schedule(instance, s, Mode::kNonSplittable).ok());
    CHECK(s.wavelength_count() == 2);
  }
  SUBCASE("two nodes match the exact optimum") {
    // The full-span transmission pins a full-length trail, and the three
    // half-capacity transmissions cannot share it, so two wavelengths are
    // unavoidable; the oracle agrees.
    auto instance = make_hierarchical_instance(2, 0);
    Schedule s = pack_hierarchical(instance, 3);
    CHECK(validate_schedule(instance, s, Mode::kNonSplittable).ok());
    CHECK(s.wavelength_count() == 2);
    CHECK(brute_force_min_wavelengths(instance, 3).wavelengths == 2);
  }
  SUBCASE("extra full-span load raises congestion uniformly") {
    auto instance = make_hierarchical_instance(16, 2);
    auto p = link_congestion(instance, 17);
    for (Bandwidth v : p.per_link) CHECK(v == 3 * kCapacity);
    Schedule s = pack_hierarchical(instance, 17);
    CHECK(validate_schedule(instance, s, Mode::kNonSplittable).ok());
    CHECK(s.wavelength_count() == 5);
  }
  SUBCASE("foreign instances are rejected") {
    CHECK_THROWS_AS(pack_hierarchical({{0, 1, 3, 1000, {}, {}}}, 5),
                    std::invalid_argument);
  }
}
