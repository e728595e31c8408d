#include "paoi/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace paoi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPiecewiseInverseTol = 1e-10;

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double eval_piecewise(const CostFunction::PiecewiseLinear& pw, double age) {
  double value = 0.0;
  for (std::size_t i = 0; i < pw.slopes.size(); ++i) {
    const double lo = pw.breakpoints[i];
    if (age <= lo) break;
    const double hi = i + 1 < pw.breakpoints.size() ? pw.breakpoints[i + 1] : kInf;
    value += pw.slopes[i] * (std::min(age, hi) - lo);
  }
  return value;
}

}  // namespace

CostFunction::CostFunction(Params params) : params_(std::move(params)) {
  if (const auto* l = std::get_if<Linear>(&params_)) {
    if (!positive(l->weight)) throw std::invalid_argument("linear cost weight must be > 0");
  } else if (const auto* p = std::get_if<Power>(&params_)) {
    if (!positive(p->weight)) throw std::invalid_argument("power cost weight must be > 0");
    if (!std::isfinite(p->exponent) || p->exponent < 1.0)
      throw std::invalid_argument("power cost exponent must be >= 1");
  } else {
    const auto& pw = std::get<PiecewiseLinear>(params_);
    if (pw.slopes.empty() || pw.slopes.size() != pw.breakpoints.size())
      throw std::invalid_argument("piecewise cost needs one slope per breakpoint");
    if (pw.breakpoints.front() != 0.0) throw std::invalid_argument("piecewise cost must start at age 0");
    for (std::size_t i = 0; i < pw.slopes.size(); ++i) {
      if (!positive(pw.slopes[i])) throw std::invalid_argument("piecewise cost slopes must be > 0");
      if (i > 0) {
        if (!(pw.breakpoints[i] > pw.breakpoints[i - 1]) || !std::isfinite(pw.breakpoints[i]))
          throw std::invalid_argument("piecewise cost breakpoints must be strictly increasing");
        if (pw.slopes[i] < pw.slopes[i - 1])
          throw std::invalid_argument("piecewise cost slopes must be nondecreasing");
      }
    }
  }
}

double CostFunction::eval(double age) const {
  if (std::isnan(age) || age < 0.0) throw std::domain_error("cost evaluated at a negative age");
  if (std::isinf(age)) return kInf;
  if (const auto* l = std::get_if<Linear>(&params_)) return l->weight * age;
  if (const auto* p = std::get_if<Power>(&params_)) return p->weight * std::pow(age, p->exponent);
  return eval_piecewise(std::get<PiecewiseLinear>(params_), age);
}

double CostFunction::inverse(double level) const {
  if (std::isnan(level) || level < 0.0) throw std::domain_error("cost inverse of a negative level");
  if (std::isinf(level)) return kInf;
  if (level == 0.0) return 0.0;
  if (const auto* l = std::get_if<Linear>(&params_)) return largest_within(level / l->weight, level);
  if (const auto* p = std::get_if<Power>(&params_))
    return largest_within(std::pow(level / p->weight, 1.0 / p->exponent), level);
  // Monotone bisection. The last slope is the largest, so level / first slope
  // bounds the answer from above.
  const auto& pw = std::get<PiecewiseLinear>(params_);
  double lo = 0.0;
  double hi = level / pw.slopes.front() + pw.breakpoints.back();
  while (hi - lo > kPiecewiseInverseTol) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) <= level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double CostFunction::beta(double age_max) const {
  if (!(age_max > 0.0)) throw std::domain_error("beta needs a positive age range");
  if (const auto* l = std::get_if<Linear>(&params_)) return l->weight;
  if (const auto* p = std::get_if<Power>(&params_)) {
    if (std::isinf(age_max)) return p->exponent == 1.0 ? p->weight : kInf;
    return p->weight * p->exponent * std::pow(age_max, p->exponent - 1.0);
  }
  const auto& pw = std::get<PiecewiseLinear>(params_);
  const auto it = std::lower_bound(pw.breakpoints.begin(), pw.breakpoints.end(), age_max);
  const auto segment = static_cast<std::size_t>(it - pw.breakpoints.begin()) - 1;
  return pw.slopes[std::min(segment, pw.slopes.size() - 1)];
}

// The closed forms can be off by an ulp either way; settle on the largest
// double whose cost stays within the level.
double CostFunction::largest_within(double guess, double level) const {
  double a = guess;
  while (a > 0.0 && eval(a) > level) a = std::nextafter(a, 0.0);
  for (double up = std::nextafter(a, kInf); std::isfinite(up) && eval(up) <= level; up = std::nextafter(a, kInf)) a = up;
  return a;
}

std::string CostFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* l = std::get_if<Linear>(&params_)) {
    os << "linear(w=" << l->weight << ")";
  } else if (const auto* p = std::get_if<Power>(&params_)) {
    os << "power(w=" << p->weight << ",p=" << p->exponent << ")";
  } else {
    os << "piecewise_linear(" << std::get<PiecewiseLinear>(params_).slopes.size() << " segments)";
  }
  return os.str();
}

}  // namespace paoi
