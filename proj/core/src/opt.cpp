#include "paoi/opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "paoi/analytic.hpp"

namespace paoi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCapSlack = 1e-9;  // relative, for post-hoc cap checks

// Allocation-free evaluation of the peak ages for the grid oracle.
class AgeEvaluator {
 public:
  explicit AgeEvaluator(const SystemModel& model)
      : model_(model), x_(model.means().begin(), model.means().end()),
        y_(model.second_moments().begin(), model.second_moments().end()), ages_(model.size()) {}

  // False when an M/G/1 point is at or past the stability margin.
  bool ages(std::span<const double> rates, bool surrogate = false) {
    long double rho = 0.0L;
    long double load = 0.0L;
    for (std::size_t j = 0; j < rates.size(); ++j) {
      rho += static_cast<long double>(rates[j]) * x_[j];
      load += static_cast<long double>(rates[j]) * y_[j];
    }
    if (model_.discipline() == Discipline::MG11 && !surrogate) {
      for (std::size_t n = 0; n < rates.size(); ++n) ages_[n] = static_cast<double>(x_[n] + (1.0L + rho) / rates[n]);
      return true;
    }
    if (!(rho < 1.0L - kStabilityMargin)) return false;
    const double wait = static_cast<double>(load / (2.0L * (1.0L - rho)));
    for (std::size_t n = 0; n < rates.size(); ++n) {
      const double own = 1.0 / rates[n] + x_[n];
      ages_[n] = surrogate ? 2.0 * std::max(own, wait) : own + wait;
    }
    return true;
  }

  SystemCost cost(std::span<const double> rates, bool surrogate = false) {
    SystemCost out;
    if (!ages(rates, surrogate)) {
      out.unstable = true;
      return out;
    }
    out.cost = -kInf;
    for (std::size_t n = 0; n < ages_.size(); ++n) {
      const double c = model_.entity(n).cost.eval(ages_[n]);
      if (c > out.cost) {
        out.cost = c;
        out.argmax = n;
      }
    }
    return out;
  }

 private:
  const SystemModel& model_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> ages_;
};

std::vector<double> caps_for(const SystemModel& model, double level) {
  std::vector<double> caps(model.size());
  for (std::size_t n = 0; n < model.size(); ++n) caps[n] = model.entity(n).cost.inverse(level);
  return caps;
}

void require_discipline(const SystemModel& model, Discipline d, const char* who) {
  if (model.discipline() != d)
    throw std::invalid_argument(std::string(who) + " requires discipline " + std::string(to_string(d)));
}

Feasibility infeasible(std::string why, std::size_t iterations = 0) {
  Feasibility f;
  f.iterations = iterations;
  f.diagnostic = std::move(why);
  return f;
}

// Proportional scale-up until the largest rate hits lambda_max. Components
// already at the maximum are pinned to lambda_max exactly.
std::pair<RateVector, double> saturate(const RateBox& box, const RateVector& rates) {
  const double top = *std::max_element(rates.begin(), rates.end());
  const double scale = box.max() / top;
  std::vector<double> scaled(rates.size());
  for (std::size_t n = 0; n < rates.size(); ++n) {
    scaled[n] = rates[n] == top ? box.max() : std::min(box.max(), rates[n] * scale);
  }
  return {RateVector(std::move(scaled)), scale};
}

template <class FeasibleFn, class AchievedFn>
OptimizeResult bisect(double upper, const BisectionSettings& settings, FeasibleFn&& feasible, AchievedFn&& achieved) {
  OptimizeResult result;
  auto best = feasible(upper);
  if (!best) {
    result.diagnostic = "initial upper level infeasible: " + best.diagnostic;
    return result;
  }
  // default tolerance is relative to the current upper level
  const bool relative = !(settings.epsilon > 0.0);
  double lo = 0.0;
  double hi = std::min(upper, achieved(*best.rates));
  std::size_t iter = 0;
  const auto open = [&] {
    const double eps = relative ? 1e-6 * hi : settings.epsilon;
    return hi - lo > eps;
  };
  while (open() && iter < settings.max_iterations) {
    const double level = 0.5 * (lo + hi);
    auto f = feasible(level);
    if (f) {
      hi = std::min(level, achieved(*f.rates));
      best = std::move(f);
    } else {
      lo = level;
    }
    ++iter;
  }
  result.rates = *best.rates;
  result.iterations = iter;
  result.status = OptStatus::Optimal;
  return result;
}

void fill_costs(const SystemModel& model, OptimizeResult& result) {
  const auto sc = system_cost(model, result.rates);
  result.sys_cost = sc.cost;
  result.argmax = sc.argmax;
  result.paoi = paoi(model, result.rates);
}

}  // namespace

void BisectionSettings::validate() const {
  if (std::isnan(epsilon) || max_iterations == 0 || !(fixed_point_tol > 0.0) || fixed_point_max_iters == 0)
    throw std::invalid_argument("bisection settings must be positive");
}

void GridSettings::validate() const {
  if (points_per_dimension < 2) throw std::invalid_argument("grid needs at least 2 points per dimension");
}

SystemCost system_cost(const SystemModel& model, const RateVector& rates) {
  if (rates.size() != model.size()) throw std::invalid_argument("rate vector length does not match the model");
  return AgeEvaluator(model).cost(rates.values());
}

SystemCost surrogate_cost(const SystemModel& model, const RateVector& rates) {
  if (rates.size() != model.size()) throw std::invalid_argument("rate vector length does not match the model");
  return AgeEvaluator(model).cost(rates.values(), true);
}

Feasibility feasible_mg11(const SystemModel& model, double level, const BisectionSettings& settings,
                          const IterateObserver& observer) {
  settings.validate();
  if (std::isnan(level) || level < 0.0) throw std::invalid_argument("cost level must be >= 0");
  const auto x = model.means();
  const auto& box = model.box();
  const auto caps = caps_for(model, level);
  for (std::size_t n = 0; n < caps.size(); ++n) {
    if (!(caps[n] > x[n]))
      return infeasible("age cap of class " + std::to_string(n + 1) + " is below its service time");
  }

  std::vector<double> rates(model.size(), box.min());
  if (observer) observer(rates);
  std::vector<double> next(rates.size());
  bool converged = false;
  std::size_t iter = 0;
  while (iter < settings.fixed_point_max_iters) {
    ++iter;
    long double work = 1.0L;
    for (std::size_t k = 0; k < rates.size(); ++k) work += static_cast<long double>(rates[k]) * x[k];
    double change = 0.0;
    for (std::size_t n = 0; n < rates.size(); ++n) {
      next[n] = std::max(box.min(), static_cast<double>(work / (caps[n] - x[n])));
      if (next[n] > box.max())
        return infeasible("class " + std::to_string(n + 1) + " needs a rate above lambda_max", iter);
      change = std::max(change, (next[n] - rates[n]) / next[n]);
    }
    rates.swap(next);
    if (observer) observer(rates);
    if (change <= settings.fixed_point_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) return infeasible("fixed point did not converge", iter);

  RateVector result(rates);
  const auto ages = paoi_mg11(model, result);
  for (std::size_t n = 0; n < ages.size(); ++n) {
    if (ages[n] > caps[n] * (1.0 + kCapSlack))
      return infeasible("post-check failed for class " + std::to_string(n + 1), iter);
  }
  Feasibility f;
  f.rates = std::move(result);
  f.iterations = iter;
  return f;
}

Feasibility feasible_surrogate(const SystemModel& model, double level, const BisectionSettings& settings) {
  settings.validate();
  if (std::isnan(level) || level < 0.0) throw std::invalid_argument("cost level must be >= 0");
  const auto x = model.means();
  const auto y = model.second_moments();
  const auto& box = model.box();
  const auto caps = caps_for(model, level);

  std::vector<double> rates(model.size());
  for (std::size_t n = 0; n < caps.size(); ++n) {
    const double half = 0.5 * caps[n];
    if (!(half > x[n])) return infeasible("half age cap of class " + std::to_string(n + 1) + " is below its service time");
    rates[n] = std::max(box.min(), 1.0 / (half - x[n]));
    if (rates[n] > box.max())
      return infeasible("class " + std::to_string(n + 1) + " needs a rate above lambda_max");
  }

  long double rho = 0.0L;
  for (std::size_t j = 0; j < rates.size(); ++j) rho += static_cast<long double>(rates[j]) * x[j];
  if (!(rho < 1.0L - kStabilityMargin)) return infeasible("lower-bound rates are unstable");

  // W <= a*/2  <=>  sum_j lambda_j (y_j + a* x_j) <= a*
  const double tightest = *std::min_element(caps.begin(), caps.end());
  if (std::isfinite(tightest)) {
    long double lhs = 0.0L;
    for (std::size_t j = 0; j < rates.size(); ++j) lhs += static_cast<long double>(rates[j]) * (y[j] + tightest * x[j]);
    if (lhs > tightest) return infeasible("waiting-time constraint violated");
  }

  RateVector result(rates);
  const auto b = surrogate_paoi(model, result);
  for (std::size_t n = 0; n < b.size(); ++n) {
    if (b[n] > caps[n] * (1.0 + kCapSlack))
      return infeasible("post-check failed for class " + std::to_string(n + 1));
  }
  Feasibility f;
  f.rates = std::move(result);
  return f;
}

OptimizeResult optimize_mg11(const SystemModel& model, const BisectionSettings& settings) {
  require_discipline(model, Discipline::MG11, "optimize_mg11");
  settings.validate();
  const auto& box = model.box();
  const double x_max = model.max_mean();
  const double n = static_cast<double>(model.size());
  const double worst_age = x_max + (1.0 + n * box.max() * x_max) / box.min();
  double upper = 0.0;
  for (const auto& cls : model.classes()) upper = std::max(upper, cls.cost.eval(worst_age));

  auto result = bisect(upper, settings, [&](double level) { return feasible_mg11(model, level, settings); },
                       [&](const RateVector& r) { return system_cost(model, r).cost; });
  if (!result.optimal()) return result;
  result.rates = saturate(box, result.rates).first;
  fill_costs(model, result);
  return result;
}

OptimizeResult optimize_mg1_surrogate(const SystemModel& model, const BisectionSettings& settings) {
  require_discipline(model, Discipline::MG1, "optimize_mg1_surrogate");
  settings.validate();
  const RateVector floor(std::vector<double>(model.size(), model.box().min()));
  const auto start = surrogate_cost(model, floor);
  if (start.unstable) {
    OptimizeResult r;
    r.diagnostic = "no stable point in the rate box (rho at lambda_min >= 1)";
    return r;
  }
  // Rounding in the caps can reject the exact floor level; nudge upward.
  double upper = start.cost;
  for (int i = 0; i < 64 && !feasible_surrogate(model, upper, settings); ++i) upper *= 1.0 + 1e-12 * (1 << std::min(i, 30));

  auto result = bisect(upper, settings, [&](double level) { return feasible_surrogate(model, level, settings); },
                       [&](const RateVector& r) { return surrogate_cost(model, r).cost; });
  if (!result.optimal()) return result;
  fill_costs(model, result);
  result.surrogate_cost = surrogate_cost(model, result.rates).cost;
  return result;
}

OptimizeResult optimize(const SystemModel& model, const BisectionSettings& settings) {
  return model.discipline() == Discipline::MG11 ? optimize_mg11(model, settings)
                                                : optimize_mg1_surrogate(model, settings);
}

OptimizeResult grid_search(const SystemModel& model, const GridSettings& grid) {
  grid.validate();
  const std::size_t dims = model.size();
  const auto& box = model.box();
  const std::size_t points = grid.points_per_dimension;
  const double step = (box.max() - box.min()) / static_cast<double>(points - 1);

  std::vector<double> axis(points);
  for (std::size_t i = 0; i < points; ++i) axis[i] = box.min() + step * static_cast<double>(i);
  axis.back() = box.max();

  AgeEvaluator eval(model);
  std::vector<double> rates(dims);
  std::vector<double> best_rates;
  double best = kInf;
  std::size_t evaluated = 0;

  // Lexicographic sweep with strict improvement, so ties keep the
  // lexicographically smallest rate vector.
  auto sweep = [&](const std::vector<std::vector<double>>& axes) {
    std::vector<std::size_t> idx(dims, 0);
    for (;;) {
      for (std::size_t d = 0; d < dims; ++d) rates[d] = axes[d][idx[d]];
      const auto c = eval.cost(rates);
      ++evaluated;
      if (c.cost < best) {
        best = c.cost;
        best_rates = rates;
      }
      std::size_t d = dims;
      while (d > 0) {
        --d;
        if (++idx[d] < axes[d].size()) break;
        idx[d] = 0;
        if (d == 0) return;
      }
    }
  };

  sweep(std::vector<std::vector<double>>(dims, axis));

  OptimizeResult result;
  if (!std::isfinite(best)) {
    result.diagnostic = "every grid point is unstable";
    result.iterations = evaluated;
    return result;
  }

  if (grid.refine) {
    const double fine = step / 10.0;
    const auto reach = static_cast<long>(10 * grid.refine_window);
    std::vector<std::vector<double>> local(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      for (long k = -reach; k <= reach; ++k) {
        const double v = k == 0 ? best_rates[d] : best_rates[d] + fine * static_cast<double>(k);
        if (v >= box.min() && v <= box.max()) local[d].push_back(v);
      }
    }
    sweep(local);
  }

  result.rates = RateVector(best_rates);
  result.iterations = evaluated;
  result.status = OptStatus::Optimal;
  fill_costs(model, result);
  return result;
}

ScalingReport check_saturation_scaling(const SystemModel& model, const RateVector& rates, double tolerance) {
  const auto bufferless = model.with_discipline(Discipline::MG11);
  auto [scaled, scale] = saturate(model.box(), rates);
  ScalingReport report;
  report.scale = scale;
  report.original_cost = system_cost(bufferless, rates).cost;
  report.scaled_cost = system_cost(bufferless, scaled).cost;
  report.saturated = *std::max_element(scaled.begin(), scaled.end()) == model.box().max();
  report.passed = report.saturated && report.scaled_cost <= report.original_cost + tolerance;
  report.scaled = std::move(scaled);
  return report;
}

double corner_age_max(const SystemModel& model) {
  const std::size_t dims = model.size();
  if (dims >= 63) throw std::invalid_argument("too many classes for corner enumeration");
  AgeEvaluator eval(model);
  std::vector<double> rates(dims);
  double age_max = -kInf;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dims); ++mask) {
    for (std::size_t d = 0; d < dims; ++d) rates[d] = (mask >> d) & 1U ? model.box().max() : model.box().min();
    if (!eval.ages(rates)) continue;
    const auto ages = paoi(model, RateVector(rates));
    age_max = std::max(age_max, *std::max_element(ages.begin(), ages.end()));
  }
  return std::isfinite(age_max) ? age_max : kInf;
}

SurrogateGapReport check_surrogate_gap(const SystemModel& model, const OptimizeResult& exact,
                                       const OptimizeResult& approx, double slack) {
  if (!exact.optimal() || !approx.optimal()) throw std::invalid_argument("surrogate gap needs two optimal results");
  SurrogateGapReport r;
  r.exact_cost = exact.sys_cost;
  r.approx_cost = approx.sys_cost;
  const double top_age = *std::max_element(exact.paoi.begin(), exact.paoi.end());
  r.age_max = std::max(corner_age_max(model), 2.0 * top_age);

  double gap = 0.0;
  r.all_linear = true;
  for (std::size_t n = 0; n < model.size(); ++n) {
    const auto& cost = model.entity(n).cost;
    r.betas.push_back(cost.beta(r.age_max));
    gap = std::max(gap, r.betas.back() * exact.paoi[n]);
    r.all_linear = r.all_linear && cost.is_linear();
  }
  r.bound = r.exact_cost + gap;
  r.ratio = r.approx_cost / r.exact_cost;
  r.lower_holds = r.exact_cost <= r.approx_cost * (1.0 + slack);
  r.upper_holds = r.approx_cost <= r.bound * (1.0 + slack);
  r.factor_two_holds = r.approx_cost <= 2.0 * r.exact_cost * (1.0 + slack);
  return r;
}

}  // namespace paoi
