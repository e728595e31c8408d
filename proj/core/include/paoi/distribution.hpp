#pragma once

#include <random>
#include <string>
#include <variant>
#include <vector>

namespace paoi {

using Rng = std::mt19937_64;

struct Moments {
  double mean = 0.0;
  double second = 0.0;

  double variance() const { return second - mean * mean; }
};

/// Service-time law of one update class. Immutable; moments are exact closed
/// forms computed at construction.
class ServiceDistribution {
 public:
  struct Exponential {
    double rate;
  };
  struct Deterministic {
    double value;
  };
  struct Uniform {
    double low;
    double high;
  };
  struct Gamma {
    double shape;
    double scale;
  };
  struct Hyperexponential {
    std::vector<double> weights;
    std::vector<double> rates;
  };
  using Params = std::variant<Exponential, Deterministic, Uniform, Gamma, Hyperexponential>;

  /// Throws std::invalid_argument on nonpositive rates/scales, low >= high,
  /// negative low, or hyperexponential weights that do not sum to one.
  explicit ServiceDistribution(Params params);

  static ServiceDistribution exponential(double rate) { return ServiceDistribution(Exponential{rate}); }
  static ServiceDistribution deterministic(double value) { return ServiceDistribution(Deterministic{value}); }
  static ServiceDistribution uniform(double low, double high) { return ServiceDistribution(Uniform{low, high}); }
  static ServiceDistribution gamma(double shape, double scale) { return ServiceDistribution(Gamma{shape, scale}); }
  static ServiceDistribution hyperexponential(std::vector<double> weights, std::vector<double> rates) {
    return ServiceDistribution(Hyperexponential{std::move(weights), std::move(rates)});
  }

  const Params& params() const { return params_; }
  const Moments& moments() const { return moments_; }
  double mean() const { return moments_.mean; }
  double second_moment() const { return moments_.second; }

  double sample(Rng& rng) const;

  std::string describe() const;

 private:
  Params params_;
  Moments moments_;
  std::vector<double> cumulative_;  // hyperexponential branch selection
};

inline Moments moments(const ServiceDistribution& dist) { return dist.moments(); }

}  // namespace paoi
