#pragma once

#include <vector>

#include "paoi/model.hpp"

namespace paoi {

/// M/G/1 evaluations reject rho >= 1 - kStabilityMargin.
inline constexpr double kStabilityMargin = 1e-9;

struct UtilizationProfile {
  double rho = 0.0;                 // sum_j lambda_j x_j
  double load_second_moment = 0.0;  // sum_j lambda_j y_j
  double waiting = 0.0;             // Pollaczek-Khinchine mean wait; NaN when unstable
  bool stable = false;
};

UtilizationProfile utilization(const SystemModel& model, const RateVector& rates);

/// Throws UnstableQueueError unless rho < 1 - kStabilityMargin.
UtilizationProfile stable_utilization(const SystemModel& model, const RateVector& rates);

// Peak age per class.
//   M/G/1:   A_n = 1/lambda_n + x_n + W
//   M/G/1/1: A_n = x_n + (1 + rho) / lambda_n   (valid for any rho)
PaoiVector paoi_mg1(const SystemModel& model, const RateVector& rates);
PaoiVector paoi_mg11(const SystemModel& model, const RateVector& rates);

/// M/G/1/1 peak age assembled from the expected completion times Z_jn
/// (time until the next class-n completion, starting when a class-j packet
/// enters service). Independent evaluation path for paoi_mg11.
PaoiVector paoi_mg11_recursive(const SystemModel& model, const RateVector& rates);

/// Dispatches on model.discipline().
PaoiVector paoi(const SystemModel& model, const RateVector& rates);

// Single-class M/M/1 closed forms. Throw UnstableQueueError when rate >= service_rate.
double paoi_mm1(double rate, double service_rate);
double aoi_mm1(double rate, double service_rate);

struct ConservationResidual {
  double mg1 = 0.0;   // sum lambda_n A_n - (N + rho + W sum lambda_n); NaN if unstable
  double mg11 = 0.0;  // sum lambda_n A_n - (N + (N+1) rho)
};

ConservationResidual conservation_residual(const SystemModel& model, const RateVector& rates,
                                           const PaoiVector& ages);

/// residual[n][m] of the pairwise identity for the model's discipline.
///   M/G/1:   (1/lambda_n - 1/lambda_m) - ((A_n - x_n) - (A_m - x_m))
///   M/G/1/1: (lambda_n A_n - lambda_n x_n) - (lambda_m A_m - lambda_m x_m)
std::vector<std::vector<double>> pairwise_relation_residual(const SystemModel& model, const RateVector& rates,
                                                            const PaoiVector& ages);

/// paoi_mg11 - paoi_mg1 per class, from the symbolic difference.
std::vector<double> paoi_gap(const SystemModel& model, const RateVector& rates);

/// B_n = 2 max(1/lambda_n + x_n, W). Quasiconvex upper surrogate, A_n <= B_n <= 2 A_n.
PaoiVector surrogate_paoi(const SystemModel& model, const RateVector& rates);

struct GG1Stats {
  double mean_interarrival = 0.0;
  double second_moment_interarrival = 0.0;
  double rate = 0.0;

  static GG1Stats poisson(double rate) { return {1.0 / rate, 2.0 / (rate * rate), rate}; }
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const { return v >= lower && v <= upper; }
  double width() const { return upper - lower; }
};

/// Bracket on the single-class average age given its peak age:
///   [A_p - 3 lambda E[I^2]/2 - lambda E[I]^2,  A_p + lambda E[I^2]/2]
Interval aoi_bounds(const GG1Stats& stats, double paoi);

}  // namespace paoi
