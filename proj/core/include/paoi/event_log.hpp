#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace paoi {

struct PacketRecord {
  std::size_t class_id;  // 1-based
  double gen_time;
  double service_start;
  double departure;

  friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

struct DropRecord {
  std::size_t class_id;
  double arrival;
};

/// Delivered packets in departure order, plus dropped arrivals (M/G/1/1).
struct EventLog {
  std::vector<PacketRecord> delivered;
  std::vector<DropRecord> dropped;
  double warmup_end = 0.0;
  double horizon = 0.0;
};

/// Writes `class_id,gen_time,service_start,departure` with a header row.
void write_event_log_csv(std::ostream& out, const EventLog& log);

/// Reads the delivered rows back. Throws std::runtime_error on malformed input.
EventLog read_event_log_csv(std::istream& in);

}  // namespace paoi
