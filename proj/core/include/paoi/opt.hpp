#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "paoi/model.hpp"

namespace paoi {

struct BisectionSettings {
  double epsilon = 0.0;  // <= 0: stop once the bracket is within 1e-6 of the upper level
  std::size_t max_iterations = 500;
  double fixed_point_tol = 1e-10;  // relative
  std::size_t fixed_point_max_iters = 100000;

  void validate() const;
};

struct GridSettings {
  std::size_t points_per_dimension = 400;
  bool refine = true;
  std::size_t refine_window = 2;  // coarse cells either side of the best point

  void validate() const;
};

enum class OptStatus { Optimal, Infeasible };

struct OptimizeResult {
  RateVector rates;
  PaoiVector paoi;
  double sys_cost = std::numeric_limits<double>::infinity();
  double surrogate_cost = std::numeric_limits<double>::quiet_NaN();  // C_sys(B) for the surrogate solver
  std::size_t argmax = 0;                                               // 0-based class index
  std::size_t iterations = 0;
  OptStatus status = OptStatus::Infeasible;
  std::string diagnostic;

  bool optimal() const { return status == OptStatus::Optimal; }
};

struct SystemCost {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t argmax = 0;  // lowest index among ties
  bool unstable = false;
};

/// max_n C_n(A_n(rates)) under the model's discipline. Unstable M/G/1 points
/// return +inf with the flag set instead of throwing.
SystemCost system_cost(const SystemModel& model, const RateVector& rates);

/// max_n C_n(B_n(rates)) for the M/G/1 surrogate.
SystemCost surrogate_cost(const SystemModel& model, const RateVector& rates);

struct Feasibility {
  std::optional<RateVector> rates;
  std::size_t iterations = 0;
  std::string diagnostic;

  explicit operator bool() const { return rates.has_value(); }
};

using IterateObserver = std::function<void(const std::vector<double>&)>;

/// M/G/1/1 level-set test: least rates in the box with C_n(A_n) <= level for
/// all n, found by the monotone fixed point
///   lambda_n <- max(lambda_min, (1 + sum_k lambda_k x_k) / (a_n - x_n)).
Feasibility feasible_mg11(const SystemModel& model, double level, const BisectionSettings& settings = {},
                          const IterateObserver& observer = {});

/// M/G/1 surrogate level-set test: C_n(B_n) <= level for all n.
Feasibility feasible_surrogate(const SystemModel& model, double level, const BisectionSettings& settings = {});

/// Bisection on the cost level for the M/G/1/1 min-max problem. The returned
/// rates are scaled up proportionally until the largest equals lambda_max.
OptimizeResult optimize_mg11(const SystemModel& model, const BisectionSettings& settings = {});

/// Bisection on the surrogate level for M/G/1; reports the true C_sys at the
/// surrogate optimum in sys_cost and the surrogate value in surrogate_cost.
OptimizeResult optimize_mg1_surrogate(const SystemModel& model, const BisectionSettings& settings = {});

/// Discipline-appropriate solver.
OptimizeResult optimize(const SystemModel& model, const BisectionSettings& settings = {});

/// Exhaustive evaluation of system_cost on a uniform grid over the box, with an
/// optional 10x finer pass around the best cell. Oracle, intended for N <= 3.
OptimizeResult grid_search(const SystemModel& model, const GridSettings& grid = {});

struct ScalingReport {
  RateVector scaled;
  double scale = 1.0;
  double original_cost = 0.0;
  double scaled_cost = 0.0;
  bool saturated = false;  // max_n scaled_n == lambda_max
  bool passed = false;
};

/// Scales all rates by one factor until the largest reaches lambda_max and
/// checks the M/G/1/1 cost did not rise by more than `tolerance`.
ScalingReport check_saturation_scaling(const SystemModel& model, const RateVector& rates, double tolerance);

struct SurrogateGapReport {
  double exact_cost = 0.0;
  double approx_cost = 0.0;
  double bound = 0.0;  // exact + max_n beta_n A*_n
  double age_max = 0.0;
  std::vector<double> betas;
  bool all_linear = false;
  double ratio = 0.0;  // approx / exact
  bool lower_holds = false;
  bool upper_holds = false;
  bool factor_two_holds = true;  // only meaningful when all_linear

  bool passed() const { return lower_holds && upper_holds && (!all_linear || factor_two_holds); }
};

/// C(exact) <= C(approx) <= C(exact) + max beta_n A*_n, and the factor-2 bound
/// for all-linear costs. `slack` is a relative allowance for grid error in `exact`.
SurrogateGapReport check_surrogate_gap(const SystemModel& model, const OptimizeResult& exact,
                                       const OptimizeResult& approx, double slack = 0.0);

/// Largest analytic peak age over the stable corners of the rate box.
double corner_age_max(const SystemModel& model);

}  // namespace paoi
