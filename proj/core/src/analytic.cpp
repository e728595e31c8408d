#include "paoi/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "paoi/errors.hpp"

namespace paoi {
namespace {

void require_size(const SystemModel& model, std::size_t n) {
  if (n != model.size()) throw std::invalid_argument("vector length does not match the number of classes");
}

}  // namespace

UtilizationProfile utilization(const SystemModel& model, const RateVector& rates) {
  require_size(model, rates.size());
  const auto x = model.means();
  const auto y = model.second_moments();
  // Accumulate in extended precision before any division.
  long double rho = 0.0L;
  long double load = 0.0L;
  for (std::size_t j = 0; j < rates.size(); ++j) {
    rho += static_cast<long double>(rates[j]) * x[j];
    load += static_cast<long double>(rates[j]) * y[j];
  }
  UtilizationProfile out;
  out.rho = static_cast<double>(rho);
  out.load_second_moment = static_cast<double>(load);
  out.stable = rho < 1.0L - kStabilityMargin;
  out.waiting = out.stable ? static_cast<double>(load / (2.0L * (1.0L - rho)))
                           : std::numeric_limits<double>::quiet_NaN();
  return out;
}

UtilizationProfile stable_utilization(const SystemModel& model, const RateVector& rates) {
  auto profile = utilization(model, rates);
  if (!profile.stable) throw UnstableQueueError(profile.rho);
  return profile;
}

PaoiVector paoi_mg1(const SystemModel& model, const RateVector& rates) {
  const auto profile = stable_utilization(model, rates);
  const auto x = model.means();
  std::vector<double> ages(rates.size());
  for (std::size_t n = 0; n < rates.size(); ++n) ages[n] = 1.0 / rates[n] + x[n] + profile.waiting;
  return PaoiVector(std::move(ages));
}

PaoiVector paoi_mg11(const SystemModel& model, const RateVector& rates) {
  const auto profile = utilization(model, rates);
  const auto x = model.means();
  const long double numerator = 1.0L + profile.rho;
  std::vector<double> ages(rates.size());
  for (std::size_t n = 0; n < rates.size(); ++n) ages[n] = static_cast<double>(x[n] + numerator / rates[n]);
  return PaoiVector(std::move(ages));
}

PaoiVector paoi_mg11_recursive(const SystemModel& model, const RateVector& rates) {
  require_size(model, rates.size());
  const auto x = model.means();
  const std::size_t count = rates.size();

  long double total_rate = 0.0L;
  long double work = 0.0L;  // sum_k lambda_k x_k
  for (std::size_t k = 0; k < count; ++k) {
    total_rate += rates[k];
    work += static_cast<long double>(rates[k]) * x[k];
  }

  // completion[j][n]: expected time from the start of a class-j service until
  // the next class-n completion. A class-n service completes itself.
  std::vector<std::vector<long double>> completion(count, std::vector<long double>(count));
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t n = 0; n < count; ++n) {
      completion[j][n] = j == n ? static_cast<long double>(x[n]) : x[j] + (1.0L + work) / rates[n];
    }
  }

  std::vector<double> ages(count);
  for (std::size_t n = 0; n < count; ++n) {
    long double next = 0.0L;
    for (std::size_t j = 0; j < count; ++j) next += rates[j] / total_rate * completion[j][n];
    ages[n] = static_cast<double>(x[n] + 1.0L / total_rate + next);
  }
  return PaoiVector(std::move(ages));
}

PaoiVector paoi(const SystemModel& model, const RateVector& rates) {
  return model.discipline() == Discipline::MG1 ? paoi_mg1(model, rates) : paoi_mg11(model, rates);
}

double paoi_mm1(double rate, double service_rate) {
  if (!(rate > 0.0 && service_rate > 0.0)) throw std::invalid_argument("M/M/1 rates must be > 0");
  const double rho = rate / service_rate;
  if (rho >= 1.0 - kStabilityMargin) throw UnstableQueueError(rho);
  return (1.0 + 1.0 / rho + rho / (1.0 - rho)) / service_rate;
}

double aoi_mm1(double rate, double service_rate) {
  if (!(rate > 0.0 && service_rate > 0.0)) throw std::invalid_argument("M/M/1 rates must be > 0");
  const double rho = rate / service_rate;
  if (rho >= 1.0 - kStabilityMargin) throw UnstableQueueError(rho);
  return (1.0 + 1.0 / rho + rho * rho / (1.0 - rho)) / service_rate;
}

ConservationResidual conservation_residual(const SystemModel& model, const RateVector& rates,
                                           const PaoiVector& ages) {
  require_size(model, ages.size());
  const auto profile = utilization(model, rates);
  const long double classes = static_cast<long double>(model.size());
  long double weighted = 0.0L;
  long double total_rate = 0.0L;
  for (std::size_t n = 0; n < rates.size(); ++n) {
    weighted += static_cast<long double>(rates[n]) * ages[n];
    total_rate += rates[n];
  }
  ConservationResidual r;
  r.mg11 = static_cast<double>(weighted - (classes + (classes + 1.0L) * profile.rho));
  r.mg1 = profile.stable
              ? static_cast<double>(weighted - (classes + profile.rho + total_rate * profile.waiting))
              : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::vector<std::vector<double>> pairwise_relation_residual(const SystemModel& model, const RateVector& rates,
                                                            const PaoiVector& ages) {
  require_size(model, rates.size());
  require_size(model, ages.size());
  const auto x = model.means();
  const std::size_t count = rates.size();
  std::vector<std::vector<double>> residual(count, std::vector<double>(count, 0.0));
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t m = 0; m < count; ++m) {
      if (model.discipline() == Discipline::MG1) {
        residual[n][m] = (1.0 / rates[n] - 1.0 / rates[m]) - ((ages[n] - x[n]) - (ages[m] - x[m]));
      } else {
        residual[n][m] = (rates[n] * ages[n] - rates[n] * x[n]) - (rates[m] * ages[m] - rates[m] * x[m]);
      }
    }
  }
  return residual;
}

std::vector<double> paoi_gap(const SystemModel& model, const RateVector& rates) {
  const auto profile = stable_utilization(model, rates);
  std::vector<double> gap(rates.size());
  for (std::size_t n = 0; n < rates.size(); ++n) gap[n] = profile.rho / rates[n] - profile.waiting;
  return gap;
}

PaoiVector surrogate_paoi(const SystemModel& model, const RateVector& rates) {
  const auto profile = stable_utilization(model, rates);
  const auto x = model.means();
  std::vector<double> b(rates.size());
  for (std::size_t n = 0; n < rates.size(); ++n) b[n] = 2.0 * std::max(1.0 / rates[n] + x[n], profile.waiting);
  return PaoiVector(std::move(b));
}

Interval aoi_bounds(const GG1Stats& stats, double paoi) {
  const double lambda = stats.rate;
  return {paoi - 1.5 * lambda * stats.second_moment_interarrival -
              lambda * stats.mean_interarrival * stats.mean_interarrival,
          paoi + 0.5 * lambda * stats.second_moment_interarrival};
}

}  // namespace paoi
