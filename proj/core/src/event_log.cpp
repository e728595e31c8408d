#include "paoi/event_log.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace paoi {

namespace {
constexpr const char* kHeader = "class_id,gen_time,service_start,departure";
}

void write_event_log_csv(std::ostream& out, const EventLog& log) {
  const auto old_precision = out.precision(17);
  out << kHeader << '\n';
  for (const auto& r : log.delivered) {
    out << r.class_id << ',' << r.gen_time << ',' << r.service_start << ',' << r.departure << '\n';
  }
  out.precision(old_precision);
}

EventLog read_event_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("event log: missing or wrong header");
  EventLog log;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    PacketRecord rec{};
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> rec.class_id >> c1 >> rec.gen_time >> c2 >> rec.service_start >> c3 >> rec.departure) ||
        c1 != ',' || c2 != ',' || c3 != ',') {
      throw std::runtime_error("event log: malformed row " + std::to_string(row));
    }
    log.delivered.push_back(rec);
  }
  if (!log.delivered.empty()) log.horizon = log.delivered.back().departure;
  return log;
}

}  // namespace paoi
