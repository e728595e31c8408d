#pragma once

#include <string>
#include <variant>
#include <vector>

namespace paoi {

/// Nondecreasing per-class cost of a peak age, with C(0) = 0.
class CostFunction {
 public:
  struct Linear {
    double weight;
  };
  // weight * A^exponent
  struct Power {
    double weight;
    double exponent;
  };
  // slopes[i] applies on [breakpoints[i], breakpoints[i+1]); the last slope
  // extends to infinity. breakpoints[0] must be 0.
  struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> slopes;
  };
  using Params = std::variant<Linear, Power, PiecewiseLinear>;

  explicit CostFunction(Params params);

  static CostFunction linear(double weight) { return CostFunction(Linear{weight}); }
  static CostFunction power(double weight, double exponent) { return CostFunction(Power{weight, exponent}); }
  static CostFunction piecewise_linear(std::vector<double> breakpoints, std::vector<double> slopes) {
    return CostFunction(PiecewiseLinear{std::move(breakpoints), std::move(slopes)});
  }

  const Params& params() const { return params_; }
  bool is_linear() const { return std::holds_alternative<Linear>(params_); }

  /// C(age). Throws std::domain_error for negative ages; +inf maps to +inf.
  double eval(double age) const;
  double operator()(double age) const { return eval(age); }

  /// sup{A >= 0 : C(A) <= level}. +inf only for level = +inf.
  double inverse(double level) const;

  /// Lipschitz constant of C on [0, age_max].
  double beta(double age_max) const;

  std::string describe() const;

 private:
  double largest_within(double guess, double level) const;

  Params params_;
};

}  // namespace paoi
