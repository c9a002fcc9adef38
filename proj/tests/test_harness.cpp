#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lighttrail/experiment.hpp"
#include "lighttrail/io.hpp"
#include "lighttrail/oracle.hpp"
#include "lighttrail/stationary.hpp"
#include "test_util.hpp"

using namespace lighttrail;
using testutil::three_node_instance;

TEST_CASE("brute force oracle") {
  SUBCASE("three-node instance needs two wavelengths") {
    OracleResult r = brute_force_min_wavelengths(three_node_instance(), 3);
    CHECK(r.wavelengths == 2);
    CHECK(validate_schedule(three_node_instance(), r.witness, Mode::kNonSplittable)
              .ok());
  }
  SUBCASE("single transmission") {
    OracleResult r =
        brute_force_min_wavelengths({{0, 1, 5, 400'000, {}, {}}}, 8);
    CHECK(r.wavelengths == 1);
  }
  SUBCASE("nested snapshot of five fifth-capacity transmissions fits one trail") {
    std::vector<Transmission> ts;
    int ends[] = {1, 2, 4, 6, 7};
    for (int t = 0; t < 5; ++t) ts.push_back({t, 0, ends[t], 200'000, {}, {}});
    OracleResult r = brute_force_min_wavelengths(ts, 8);
    CHECK(r.wavelengths == 1);
  }
  SUBCASE("oracle consistency on random desk-scale instances") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      int n = 4 + static_cast<int>(rng.next_below(5));
      auto ts = testutil::random_instance(rng, n, kCapacity, 500'000);
      if (ts.size() > 10) continue;
      OracleResult r = brute_force_min_wavelengths(ts, n);
      Bandwidth c = link_congestion(ts, n).max_link;
      CHECK(r.wavelengths >= static_cast<int>((c + kCapacity - 1) / kCapacity));
      CHECK(validate_schedule(ts, r.witness, Mode::kNonSplittable).ok());
      Schedule s = schedule_stationary(ts, n, Mode::kNonSplittable);
      CHECK(s.wavelength_count() >= r.wavelengths);
    }
  }
  SUBCASE("envelope is enforced") {
    std::vector<Transmission> many;
    for (int i = 0; i < 11; ++i) many.push_back({i, 0, 1, 1000, {}, {}});
    CHECK_THROWS_AS(brute_force_min_wavelengths(many, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(brute_force_min_wavelengths({{0, 0, 9, 1000, {}, {}}}, 10),
                    std::invalid_argument);
  }
}

TEST_CASE("experiment harness") {
  SUBCASE("tiny grid produces one row per policy and repetition") {
    ExperimentConfig cfg;
    cfg.n_min = 6;
    cfg.n_max = 7;
    cfg.dests = {DestDistribution::kUniform};
    cfg.r_mins = {0.5};
    cfg.repetitions = 2;
    cfg.horizon = 10;
    cfg.threads = 2;
    auto rows = run_experiment(cfg);
    CHECK(rows.size() == 2u * 1u * 1u * 2u * 3u);
    for (const auto& row : rows)
      CHECK(row.peak_wavelengths >=
            static_cast<int>((row.congestion + kCapacity - 1) / kCapacity));
  }
  SUBCASE("identical seeds give identical rows, thread count irrelevant") {
    ExperimentConfig cfg;
    cfg.n_min = 5;
    cfg.n_max = 8;
    cfg.repetitions = 3;
    cfg.horizon = 15;
    cfg.threads = 1;
    auto a = run_experiment(cfg);
    cfg.threads = 4;
    auto b = run_experiment(cfg);
    CHECK(format_rows_csv(a) == format_rows_csv(b));
  }
  SUBCASE("aggregation averages per cell and is permutation invariant") {
    std::vector<ResultRow> rows;
    rows.push_back({10, Policy::kAllClass, DestDistribution::kUniform, 0.5,
                    1.5, 0.01, 1, 3, 3, kCapacity});
    rows.push_back({10, Policy::kAllClass, DestDistribution::kUniform, 0.5,
                    1.5, 0.01, 2, 5, 5, kCapacity});
    auto summary = aggregate(rows);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].mean_peak == doctest::Approx(4.0));
    std::swap(rows[0], rows[1]);
    auto swapped = aggregate(rows);
    CHECK(format_summary_csv(summary) == format_summary_csv(swapped));
  }
}

TEST_CASE("file formats") {
  SUBCASE("instance round trip") {
    Instance inst{3, three_node_instance()};
    std::string text = format_instance(inst);
    std::istringstream in(text);
    Instance parsed = parse_instance(in);
    CHECK(parsed.node_count == 3);
    CHECK(format_instance(parsed) == text);
  }
  SUBCASE("missing header is rejected") {
    std::istringstream in("0 0 1 1000\n");
    CHECK_THROWS_AS(parse_instance(in), std::runtime_error);
  }
  SUBCASE("malformed trace lines are rejected") {
    std::istringstream bad_kind("appear 0 0 1 1000 0\n");
    CHECK_THROWS_AS(parse_trace(bad_kind), std::runtime_error);
    std::istringstream short_line("arrive 0 0 1\n");
    CHECK_THROWS_AS(parse_trace(short_line), std::runtime_error);
    std::istringstream endpoint_out("# stationary n=3\n0 0 9 1000\n");
    CHECK_THROWS_AS(parse_instance(endpoint_out), std::runtime_error);
  }
  SUBCASE("schedule text carries trails and the summary line") {
    Schedule s = schedule_stationary(three_node_instance(), 3,
                                     Mode::kNonSplittable);
    std::string text =
        format_schedule(s, link_congestion(three_node_instance(), 3).max_link);
    CHECK(text.find("wavelengths=") != std::string::npos);
    CHECK(text.find("congestion_ppm=1000000") != std::string::npos);
  }
}
