#include "lighttrail/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lighttrail {

namespace {

[[noreturn]] void bad_line(const std::string& what, const std::string& line) {
  throw std::runtime_error(what + ": '" + line + "'");
}

}  // namespace

Instance parse_instance(std::istream& in) {
  Instance instance;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("n=");
      if (pos == std::string::npos) bad_line("missing n= in header", line);
      instance.node_count = std::stoi(line.substr(pos + 2));
      have_header = true;
      continue;
    }
    std::istringstream fields(line);
    Transmission t;
    if (!(fields >> t.id >> t.src >> t.dst >> t.bandwidth))
      bad_line("malformed transmission line", line);
    instance.transmissions.push_back(normalized(t));
  }
  if (!have_header) throw std::runtime_error("instance file missing header");
  if (instance.node_count < 2)
    throw std::runtime_error("instance needs at least two nodes");
  for (const auto& t : instance.transmissions) {
    if (t.dst > instance.node_count - 1)
      throw std::runtime_error("transmission endpoint beyond node count");
  }
  return instance;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return parse_instance(in);
}

std::string format_instance(const Instance& instance) {
  std::ostringstream out;
  out << "# stationary n=" << instance.node_count << "\n";
  for (const auto& t : instance.transmissions) {
    out << t.id << ' ' << t.src << ' ' << t.dst << ' ' << t.bandwidth << "\n";
  }
  return out.str();
}

EventSequence parse_trace(std::istream& in) {
  EventSequence events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "arrive") {
      Event ev;
      ev.kind = Event::Kind::kArrive;
      if (!(fields >> ev.id >> ev.src >> ev.dst >> ev.bandwidth >> ev.time))
        bad_line("malformed arrive line", line);
      events.push_back(ev);
    } else if (kind == "depart") {
      Event ev;
      ev.kind = Event::Kind::kDepart;
      if (!(fields >> ev.id >> ev.time)) bad_line("malformed depart line", line);
      events.push_back(ev);
    } else {
      bad_line("unknown event kind", line);
    }
  }
  sort_events(events);
  return events;
}

EventSequence load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return parse_trace(in);
}

std::string format_trace(const EventSequence& events) {
  std::ostringstream out;
  for (const auto& ev : events) {
    if (ev.kind == Event::Kind::kArrive) {
      out << "arrive " << ev.id << ' ' << ev.src << ' ' << ev.dst << ' '
          << ev.bandwidth << ' ' << ev.time << "\n";
    } else {
      out << "depart " << ev.id << ' ' << ev.time << "\n";
    }
  }
  return out.str();
}

std::string format_schedule(const Schedule& schedule, Bandwidth congestion) {
  std::ostringstream out;
  for (int w = 0; w < schedule.wavelength_count(); ++w) {
    for (const auto& trail : schedule.wavelengths[w]) {
      out << w << ' ' << trail.extent.lo << ' ' << trail.extent.hi;
      for (const auto& part : trail.assigned) out << ' ' << part.id;
      out << "\n";
    }
  }
  out << "wavelengths=" << schedule.wavelength_count()
      << " congestion_ppm=" << congestion << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace lighttrail
