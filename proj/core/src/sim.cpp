#include "paoi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "paoi/errors.hpp"
#include "paoi/stats.hpp"

namespace paoi {
namespace {

enum class Purpose : std::uint64_t { Arrival = 1, Service = 2 };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One stream per (replication, class, purpose) so adding a class leaves the
// other classes' draws untouched.
Rng make_stream(std::uint64_t seed, std::size_t replication, std::size_t class_index, Purpose purpose) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(replication));
  s = splitmix64(s ^ static_cast<std::uint64_t>(class_index));
  s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
  return Rng(s);
}

class ArrivalStream {
 public:
  ArrivalStream(Rng rng, double rate, ArrivalProcess kind) : rng_(std::move(rng)), rate_(rate), kind_(kind) {
    if (kind_ == ArrivalProcess::Periodic) {
      phase_ = std::uniform_real_distribution<double>(0.0, 1.0 / rate_)(rng_);
      next_ = phase_;
    } else {
      next_ = draw();
    }
  }

  double next() const { return next_; }

  void advance() {
    if (kind_ == ArrivalProcess::Periodic) {
      ++count_;
      next_ = phase_ + static_cast<double>(count_) / rate_;
    } else {
      next_ += draw();
    }
  }

 private:
  double draw() { return std::exponential_distribution<double>(rate_)(rng_); }

  Rng rng_;
  double rate_;
  ArrivalProcess kind_;
  double next_ = 0.0;
  double phase_ = 0.0;
  std::uint64_t count_ = 0;
};

// Follows the age path of one class. A peak is the age just before a delivery;
// the first delivery after warmup only anchors the path.
class AgeTracker {
 public:
  explicit AgeTracker(double warmup_end) : warmup_end_(warmup_end) {}

  void deliver(double gen, double dep) {
    if (has_prev_ && prev_dep_ >= warmup_end_) {
      const double peak = dep - prev_gen_;
      const double interarrival = gen - prev_gen_;
      ++peaks_;
      peak_sum_ += peak;
      interarrival_sum_ += interarrival;
      interarrival_sq_sum_ += static_cast<long double>(interarrival) * interarrival;
      sojourn_sum_ += dep - gen;
      // Trapezoid under the age line from prev_dep to dep.
      area_ += 0.5L * (dep - prev_dep_) * ((dep - prev_gen_) + (prev_dep_ - prev_gen_));
      span_ += dep - prev_dep_;
    }
    has_prev_ = true;
    prev_gen_ = gen;
    prev_dep_ = dep;
  }

  std::size_t peaks() const { return peaks_; }
  double mean_peak() const { return static_cast<double>(peak_sum_ / peaks_); }
  double mean_interarrival() const { return static_cast<double>(interarrival_sum_ / peaks_); }
  double interarrival_second_moment() const { return static_cast<double>(interarrival_sq_sum_ / peaks_); }
  double mean_sojourn() const { return static_cast<double>(sojourn_sum_ / peaks_); }
  double average_age() const { return static_cast<double>(area_ / span_); }

 private:
  double warmup_end_;
  bool has_prev_ = false;
  double prev_gen_ = 0.0;
  double prev_dep_ = 0.0;
  std::size_t peaks_ = 0;
  long double peak_sum_ = 0.0L;
  long double interarrival_sum_ = 0.0L;
  long double interarrival_sq_sum_ = 0.0L;
  long double sojourn_sum_ = 0.0L;
  long double area_ = 0.0L;
  long double span_ = 0.0L;
};

struct ReplicationOutput {
  std::vector<AgeTracker> trackers;
  std::vector<std::size_t> dropped;
};

ReplicationOutput run_replication(const SystemModel& model, const RateVector& rates, const SimConfig& cfg,
                                  std::size_t replication, EventLog* log) {
  const std::size_t count = model.size();
  const double horizon = cfg.horizon;
  const double warmup_end = cfg.warmup_end();
  const bool buffered = model.discipline() == Discipline::MG1;

  std::vector<ArrivalStream> arrivals;
  std::vector<Rng> service_rngs;
  arrivals.reserve(count);
  service_rngs.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    arrivals.emplace_back(make_stream(cfg.seed, replication, n, Purpose::Arrival), rates[n], cfg.arrivals);
    service_rngs.push_back(make_stream(cfg.seed, replication, n, Purpose::Service));
  }

  ReplicationOutput out{std::vector<AgeTracker>(count, AgeTracker(warmup_end)), std::vector<std::size_t>(count, 0)};
  if (log != nullptr) {
    log->warmup_end = warmup_end;
    log->horizon = horizon;
  }

  double server_free = 0.0;
  for (;;) {
    std::size_t n = 0;
    for (std::size_t k = 1; k < count; ++k) {
      if (arrivals[k].next() < arrivals[n].next()) n = k;
    }
    const double arrival = arrivals[n].next();
    if (arrival > horizon) break;
    arrivals[n].advance();
    // Drawn for every arrival so service streams stay aligned by packet index.
    const double service = model.entity(n).service.sample(service_rngs[n]);

    double start = arrival;
    if (buffered) {
      start = std::max(arrival, server_free);
    } else if (arrival < server_free) {
      if (arrival >= warmup_end) ++out.dropped[n];
      if (log != nullptr) log->dropped.push_back({n + 1, arrival});
      continue;
    }
    const double departure = start + service;
    server_free = departure;
    // Departures are increasing in arrival order under both disciplines.
    if (departure > horizon) break;
    out.trackers[n].deliver(arrival, departure);
    if (log != nullptr) log->delivered.push_back({n + 1, arrival, start, departure});
  }
  return out;
}

void check_inputs(const SystemModel& model, const RateVector& rates, const SimConfig& cfg) {
  cfg.validate();
  if (rates.size() != model.size()) throw std::invalid_argument("rate vector length does not match the model");
  if (model.discipline() == Discipline::MG1) stable_utilization(model, rates);
}

AgeTracker replay(const EventLog& log, std::size_t class_id) {
  AgeTracker tracker(log.warmup_end);
  for (const auto& rec : log.delivered) {
    if (rec.class_id == class_id) tracker.deliver(rec.gen_time, rec.departure);
  }
  if (tracker.peaks() < 1) throw InsufficientDataError(class_id, "needs at least two deliveries in the log");
  return tracker;
}

}  // namespace

void SimConfig::validate() const {
  if (!(std::isfinite(horizon) && horizon > 0.0)) throw std::invalid_argument("sim horizon must be > 0");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw std::invalid_argument("warmup_fraction must be in [0, 1)");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
}

double horizon_for_deliveries(const SystemModel& model, const RateVector& rates, double deliveries,
                              double warmup_fraction) {
  const auto profile = utilization(model, rates);
  const double accept = model.discipline() == Discipline::MG11 ? 1.0 / (1.0 + profile.rho) : 1.0;
  const double slowest = *std::min_element(rates.begin(), rates.end()) * accept;
  return deliveries / slowest / (1.0 - warmup_fraction);
}

SimEstimate simulate(const SystemModel& model, const RateVector& rates, const SimConfig& cfg) {
  check_inputs(model, rates, cfg);
  const std::size_t count = model.size();
  const std::size_t reps = cfg.replications;

  std::vector<std::vector<double>> paoi(count), aoi(count), sojourn(count);
  SimEstimate est;
  est.classes.resize(count);
  est.replications = reps;
  est.horizon = cfg.horizon;

  for (std::size_t r = 0; r < reps; ++r) {
    const auto out = run_replication(model, rates, cfg, r, nullptr);
    for (std::size_t n = 0; n < count; ++n) {
      const auto& t = out.trackers[n];
      if (t.peaks() == 0)
        throw InsufficientDataError(n + 1, "no peaks recorded in replication " + std::to_string(r) +
                                               "; increase the horizon");
      paoi[n].push_back(t.mean_peak());
      aoi[n].push_back(t.average_age());
      sojourn[n].push_back(t.mean_sojourn());
      auto& c = est.classes[n];
      c.interarrival_mean += t.mean_interarrival() / static_cast<double>(reps);
      c.interarrival_second_moment += t.interarrival_second_moment() / static_cast<double>(reps);
      c.delivered += t.peaks();
      c.dropped += out.dropped[n];
    }
  }

  for (std::size_t n = 0; n < count; ++n) {
    auto& c = est.classes[n];
    const auto p = summarize(paoi[n]);
    const auto a = summarize(aoi[n]);
    const auto s = summarize(sojourn[n]);
    c.paoi_mean = p.mean;
    c.paoi_halfwidth = p.halfwidth;
    c.aoi_mean = a.mean;
    c.aoi_halfwidth = a.halfwidth;
    c.sojourn_mean = s.mean;
    c.sojourn_halfwidth = s.halfwidth;
  }
  return est;
}

EventLog capture_log(const SystemModel& model, const RateVector& rates, const SimConfig& cfg,
                     std::size_t replication) {
  check_inputs(model, rates, cfg);
  EventLog log;
  run_replication(model, rates, cfg, replication, &log);
  return log;
}

PeakIdentity estimate_peak_identity(const EventLog& log, std::size_t class_id) {
  const auto t = replay(log, class_id);
  return {t.mean_peak(), t.mean_interarrival() + t.mean_sojourn(), t.peaks()};
}

AoiBoundCheck estimate_aoi_bounds(const EventLog& log, std::size_t class_id) {
  const auto t = replay(log, class_id);
  AoiBoundCheck out;
  out.stats.mean_interarrival = t.mean_interarrival();
  out.stats.second_moment_interarrival = t.interarrival_second_moment();
  out.stats.rate = 1.0 / out.stats.mean_interarrival;
  out.paoi = t.mean_peak();
  out.aoi = t.average_age();
  const auto bounds = aoi_bounds(out.stats, out.paoi);
  out.lower = bounds.lower;
  out.upper = bounds.upper;
  return out;
}

}  // namespace paoi
