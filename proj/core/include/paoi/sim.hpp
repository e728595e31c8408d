#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "paoi/analytic.hpp"
#include "paoi/event_log.hpp"
#include "paoi/model.hpp"

namespace paoi {

enum class ArrivalProcess {
  Poisson,
  Periodic,  // constant interarrival 1/lambda_n with a random phase; validation only
};

struct SimConfig {
  double horizon = 1e5;
  double warmup_fraction = 0.1;
  std::size_t replications = 10;
  std::uint64_t seed = 1;
  ArrivalProcess arrivals = ArrivalProcess::Poisson;

  /// Throws std::invalid_argument.
  void validate() const;
  double warmup_end() const { return horizon * warmup_fraction; }
};

/// Horizon long enough for `deliveries` post-warmup deliveries of the slowest class
/// in expectation.
double horizon_for_deliveries(const SystemModel& model, const RateVector& rates, double deliveries,
                              double warmup_fraction);

struct ClassEstimate {
  double paoi_mean = 0.0;
  double paoi_halfwidth = 0.0;
  double aoi_mean = 0.0;
  double aoi_halfwidth = 0.0;
  double interarrival_mean = 0.0;           // between consecutive delivered packets
  double interarrival_second_moment = 0.0;
  double sojourn_mean = 0.0;
  double sojourn_halfwidth = 0.0;
  std::size_t delivered = 0;  // peak samples, summed over replications
  std::size_t dropped = 0;
};

struct SimEstimate {
  std::vector<ClassEstimate> classes;
  std::size_t replications = 0;
  double horizon = 0.0;
};

/// Independent replications of the queue; deterministic in (model, rates, cfg).
/// Throws UnstableQueueError for M/G/1 with rho >= 1 - kStabilityMargin and
/// InsufficientDataError when a class records no peak in some replication.
SimEstimate simulate(const SystemModel& model, const RateVector& rates, const SimConfig& cfg);

/// Re-runs one replication of `simulate` and records every packet.
EventLog capture_log(const SystemModel& model, const RateVector& rates, const SimConfig& cfg,
                     std::size_t replication = 0);

struct PeakIdentity {
  double lhs = 0.0;  // mean peak age from the age path
  double rhs = 0.0;  // mean interarrival + mean sojourn
  std::size_t samples = 0;
};

/// Empirical check of A_p = E[I] + E[T] for one class over a log.
PeakIdentity estimate_peak_identity(const EventLog& log, std::size_t class_id);

struct AoiBoundCheck {
  double lower = 0.0;
  double aoi = 0.0;
  double upper = 0.0;
  double paoi = 0.0;
  GG1Stats stats;

  bool ordered() const { return lower <= aoi && aoi <= upper; }
};

/// Empirical average age bracketed by the peak-age bounds built from the
/// log's own interarrival moments.
AoiBoundCheck estimate_aoi_bounds(const EventLog& log, std::size_t class_id);

}  // namespace paoi
