#include "lighttrail/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace lighttrail {

namespace {

struct Group {
  Interval hull;
  Bandwidth load = 0;
  std::vector<std::size_t> members;
};

struct SearchState {
  std::vector<Transmission> ts;       // sorted, longest first
  std::vector<std::vector<Group>> waves;
  int wave_limit = 0;
  std::unordered_set<std::string> dead_ends;

  std::string signature(std::size_t next) const {
    std::ostringstream sig;
    sig << next << '|';
    std::vector<std::string> wave_keys;
    for (const auto& wave : waves) {
      std::vector<std::string> group_keys;
      for (const auto& g : wave) {
        std::ostringstream gk;
        for (std::size_t m : g.members) gk << m << ',';
        group_keys.push_back(gk.str());
      }
      std::sort(group_keys.begin(), group_keys.end());
      std::string key;
      for (auto& g : group_keys) key += g + ';';
      wave_keys.push_back(key);
    }
    std::sort(wave_keys.begin(), wave_keys.end());
    for (auto& w : wave_keys) sig << w << '/';
    return sig.str();
  }

  bool place(std::size_t next) {
    if (next == ts.size()) return true;
    std::string sig = signature(next);
    if (dead_ends.count(sig)) return false;

    const Transmission& t = ts[next];
    bool opened_empty = false;
    // Index-based access throughout: recursion grows the group vectors.
    for (std::size_t wi = 0; wi < waves.size(); ++wi) {
      if (waves[wi].empty()) {
        // Nonempty wavelengths form a prefix, so one empty slot covers all.
        if (opened_empty) break;
        opened_empty = true;
      }
      // Join an existing group whose grown hull stays disjoint.
      for (std::size_t gi = 0; gi < waves[wi].size(); ++gi) {
        Group saved = waves[wi][gi];
        if (saved.load + t.bandwidth > kCapacity) continue;
        Interval hull{std::min(saved.hull.lo, t.src),
                      std::max(saved.hull.hi, t.dst)};
        bool disjoint = true;
        for (std::size_t gj = 0; gj < waves[wi].size() && disjoint; ++gj)
          if (gj != gi && links_overlap(hull, waves[wi][gj].hull))
            disjoint = false;
        if (!disjoint) continue;
        waves[wi][gi].hull = hull;
        waves[wi][gi].load += t.bandwidth;
        waves[wi][gi].members.push_back(next);
        if (place(next + 1)) return true;
        waves[wi][gi] = saved;
      }
      // Open a fresh group on this wavelength.
      bool disjoint = true;
      for (const auto& g : waves[wi])
        if (links_overlap(t.extent(), g.hull)) disjoint = false;
      if (disjoint) {
        waves[wi].push_back({t.extent(), t.bandwidth, {next}});
        if (place(next + 1)) return true;
        waves[wi].pop_back();
      }
    }
    dead_ends.insert(std::move(sig));
    return false;
  }
};

}  // namespace

OracleResult brute_force_min_wavelengths(
    const std::vector<Transmission>& instance, int node_count,
    int max_wavelengths) {
  if (instance.size() > 10 || node_count > 8)
    throw std::invalid_argument(
        "oracle envelope is at most 10 transmissions on at most 8 nodes");

  std::vector<Transmission> ts;
  for (const auto& t : instance) ts.push_back(normalized(t));
  if (ts.empty()) return {0, Schedule{node_count, {}}};

  Bandwidth c = link_congestion(ts, node_count).max_link;
  int lower = static_cast<int>((c + kCapacity - 1) / kCapacity);
  std::sort(ts.begin(), ts.end(), [](const Transmission& a, const Transmission& b) {
    if (a.length() != b.length()) return a.length() > b.length();
    return a.id < b.id;
  });

  for (int w = std::max(1, lower); w <= max_wavelengths; ++w) {
    SearchState state;
    state.ts = ts;
    state.waves.assign(w, {});
    state.wave_limit = w;
    if (state.place(0)) {
      Schedule witness;
      witness.node_count = node_count;
      for (const auto& wave : state.waves) {
        std::vector<LightTrail> trails;
        for (const auto& g : wave) {
          LightTrail trail{g.hull, {}, {}};
          for (std::size_t m : g.members)
            trail.assigned.push_back({state.ts[m].id, state.ts[m].bandwidth});
          trails.push_back(std::move(trail));
        }
        witness.wavelengths.push_back(std::move(trails));
      }
      while (!witness.wavelengths.empty() && witness.wavelengths.back().empty())
        witness.wavelengths.pop_back();
      return {witness.wavelength_count(), std::move(witness)};
    }
  }
  throw std::runtime_error("oracle search exhausted max_wavelengths");
}

}  // namespace lighttrail
