#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lighttrail/core.hpp"

namespace lighttrail {

struct Instance {
  int node_count = 0;
  std::vector<Transmission> transmissions;
};

// Instance file: header line "# stationary n=<N>", then one line per
// transmission "id src dst bandwidth_ppm".
Instance parse_instance(std::istream& in);
Instance load_instance(const std::string& path);
std::string format_instance(const Instance& instance);

// Event trace: "arrive id src dst bandwidth_ppm t" / "depart id t",
// sorted by t.
EventSequence parse_trace(std::istream& in);
EventSequence load_trace(const std::string& path);
std::string format_trace(const EventSequence& events);

// Schedule text: one line per trail "wavelength lo hi [ids...]" followed by
// a summary line "wavelengths=<w> congestion_ppm=<c>".
std::string format_schedule(const Schedule& schedule, Bandwidth congestion);

void write_file(const std::string& path, const std::string& content);

}  // namespace lighttrail
