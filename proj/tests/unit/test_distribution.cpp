#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "paoi/distribution.hpp"

using paoi::Rng;
using paoi::ServiceDistribution;
using Catch::Approx;

namespace {

struct SampleMoments {
  double mean;
  double second;
  double mean_se;
  double min;
};

SampleMoments sample_moments(const ServiceDistribution& d, std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  long double s1 = 0, s2 = 0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = d.sample(rng);
    s1 += v;
    s2 += static_cast<long double>(v) * v;
    lo = std::min(lo, v);
  }
  const double mean = static_cast<double>(s1 / draws);
  const double second = static_cast<double>(s2 / draws);
  const double var = second - mean * mean;
  return {mean, second, std::sqrt(std::max(var, 0.0) / static_cast<double>(draws)), lo};
}

}  // namespace

TEST_CASE("deterministic moments are (d, d^2)", "[distribution]") {
  const auto d = ServiceDistribution::deterministic(3.0);
  CHECK(d.mean() == 3.0);
  CHECK(d.second_moment() == 9.0);
  CHECK(d.moments().variance() == 0.0);
}

TEST_CASE("exponential moments match a large sample", "[distribution]") {
  const auto d = ServiceDistribution::exponential(1.0);
  CHECK(d.mean() == 1.0);
  CHECK(d.second_moment() == 2.0);
  const auto s = sample_moments(d, 1'000'000, 11);
  CHECK(std::abs(s.mean - 1.0) <= 3.0 * s.mean_se);
  CHECK(s.second == Approx(2.0).epsilon(0.01));
}

TEST_CASE("uniform moments agree with quadrature of the density", "[distribution]") {
  const auto d = ServiceDistribution::uniform(0.0, 2.0);
  const double mean = paoi::testing::simpson([](double t) { return t * 0.5; }, 0.0, 2.0);
  const double second = paoi::testing::simpson([](double t) { return t * t * 0.5; }, 0.0, 2.0);
  CHECK(mean == Approx(1.0).margin(1e-12));
  CHECK(second == Approx(4.0 / 3.0).margin(1e-12));
  CHECK(d.mean() == Approx(mean).margin(1e-12));
  CHECK(d.second_moment() == Approx(second).margin(1e-12));
  const auto s = sample_moments(d, 1'000'000, 5);
  CHECK(std::abs(s.mean - 1.0) <= 3.0 * s.mean_se);
}

TEST_CASE("gamma and hyperexponential moments agree with quadrature", "[distribution]") {
  const auto g = ServiceDistribution::gamma(2.0, 0.5);
  // density of Gamma(2, 0.5): t e^{-t/0.5} / 0.25
  auto pdf = [](double t) { return t * std::exp(-t / 0.5) / 0.25; };
  CHECK(g.mean() == Approx(paoi::testing::simpson([&](double t) { return t * pdf(t); }, 0.0, 40.0, 20000)).epsilon(1e-9));
  CHECK(g.second_moment() ==
        Approx(paoi::testing::simpson([&](double t) { return t * t * pdf(t); }, 0.0, 40.0, 20000)).epsilon(1e-9));

  const auto h = ServiceDistribution::hyperexponential({0.25, 0.75}, {0.5, 3.0});
  auto hpdf = [](double t) { return 0.25 * 0.5 * std::exp(-0.5 * t) + 0.75 * 3.0 * std::exp(-3.0 * t); };
  CHECK(h.mean() == Approx(paoi::testing::simpson([&](double t) { return t * hpdf(t); }, 0.0, 120.0, 40000)).epsilon(1e-8));
  CHECK(h.second_moment() ==
        Approx(paoi::testing::simpson([&](double t) { return t * t * hpdf(t); }, 0.0, 120.0, 40000)).epsilon(1e-8));
}

TEST_CASE("invalid parameters are rejected", "[distribution]") {
  CHECK_THROWS_AS(ServiceDistribution::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::exponential(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::deterministic(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::uniform(2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::uniform(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::gamma(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::gamma(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::hyperexponential({0.5, 0.4}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::hyperexponential({0.5, 0.5}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDistribution::hyperexponential({}, {}), std::invalid_argument);
}

TEST_CASE("variance is nonnegative and sample means sit within 3 standard errors", "[distribution][property]") {
  Rng gen(20240611);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = u(gen), b = u(gen);
    const double w = std::uniform_real_distribution<double>(0.05, 0.95)(gen);
    const std::vector<ServiceDistribution> dists = {
        ServiceDistribution::exponential(a),
        ServiceDistribution::deterministic(a),
        ServiceDistribution::uniform(std::min(a, b) * 0.5, std::max(a, b) + 0.1),
        ServiceDistribution::gamma(a, b),
        ServiceDistribution::hyperexponential({w, 1.0 - w}, {a, b}),
    };
    for (std::size_t k = 0; k < dists.size(); ++k) {
      const auto& d = dists[k];
      INFO("trial " << trial << " " << d.describe());
      CHECK(d.mean() > 0.0);
      CHECK(d.moments().variance() >= 0.0);
      if (k == 1) {
        CHECK(d.moments().variance() == 0.0);
      } else {
        CHECK(d.moments().variance() > 0.0);
      }
      const auto s = sample_moments(d, 200'000, 1000 + trial * 10 + k);
      CHECK(s.min >= 0.0);
      CHECK(std::abs(s.mean - d.mean()) <= 3.0 * s.mean_se + 1e-12);
    }
  }
}
