#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "paoi/analytic.hpp"
#include "paoi/opt.hpp"

using namespace paoi;
using Catch::Approx;

namespace {

SystemModel two_class(Discipline d) {
  return SystemModel::make({ServiceDistribution::deterministic(1.0), ServiceDistribution::deterministic(3.0)},
                           {CostFunction::power(4, 2), CostFunction::power(1, 2)}, RateBox(0.01, 10), d);
}

// Independent bufferless cost for the two-class example: max(4 A1^2, A2^2).
double bufferless_example_cost(double l1, double l2) {
  const double s = 1.0 + l1 + 3.0 * l2;
  const double a1 = 1.0 + s / l1, a2 = 3.0 + s / l2;
  return std::max(4.0 * a1 * a1, a2 * a2);
}

double buffered_example_cost(double l1, double l2) {
  const double rho = l1 + 3.0 * l2;
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  const double w = (l1 + 9.0 * l2) / (2.0 * (1.0 - rho));
  const double a1 = 1.0 / l1 + 1.0 + w, a2 = 1.0 / l2 + 3.0 + w;
  return std::max(4.0 * a1 * a1, a2 * a2);
}

SystemModel random_model(std::mt19937_64& gen, std::size_t n, Discipline d, bool linear) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  std::vector<ServiceDistribution> svc;
  std::vector<CostFunction> cost;
  for (std::size_t k = 0; k < n; ++k) {
    const double mean = std::uniform_real_distribution<double>(0.05, 0.6)(gen);
    switch (gen() % 3) {
      case 0: svc.push_back(ServiceDistribution::exponential(1.0 / mean)); break;
      case 1: svc.push_back(ServiceDistribution::deterministic(mean)); break;
      default: svc.push_back(ServiceDistribution::gamma(2.0, mean / 2.0)); break;
    }
    if (linear || gen() % 2 == 0) {
      cost.push_back(CostFunction::linear(u(gen)));
    } else {
      cost.push_back(CostFunction::power(u(gen), 1.0 + u(gen) / 3.0));
    }
  }
  return SystemModel::make(std::move(svc), std::move(cost), RateBox(0.05, 5.0), d);
}

}  // namespace

TEST_CASE("system cost", "[opt]") {
  const auto c11 = system_cost(two_class(Discipline::MG11), RateVector({10, 6}));
  CHECK(c11.cost == Approx(61.36).epsilon(1e-4));
  CHECK(c11.argmax == 1);
  const auto c1 = system_cost(two_class(Discipline::MG1), RateVector({0.29, 0.125}));
  CHECK(c1.cost == Approx(172.15).epsilon(1e-4));
  CHECK(c1.argmax == 0);
  const auto one = SystemModel::make({ServiceDistribution::deterministic(1)}, {CostFunction::linear(1)},
                                     RateBox(0.5, 2), Discipline::MG11);
  CHECK(system_cost(one, RateVector({1.0})).cost == Approx(3.0));
  const auto unstable = system_cost(two_class(Discipline::MG1), RateVector({1, 1}));
  CHECK(unstable.unstable);
  CHECK(std::isinf(unstable.cost));
  // ties go to the lowest index
  const auto tie = SystemModel::make({ServiceDistribution::deterministic(1), ServiceDistribution::deterministic(1)},
                                     {CostFunction::linear(1), CostFunction::linear(1)}, RateBox(0.5, 2),
                                     Discipline::MG11);
  CHECK(system_cost(tie, RateVector({1, 1})).argmax == 0);
}

TEST_CASE("bufferless feasibility subproblem", "[opt]") {
  const auto m = two_class(Discipline::MG11);
  const auto ok = feasible_mg11(m, 61.36);
  REQUIRE(ok);
  const auto ages = paoi_mg11(m, *ok.rates);
  CHECK(ages[0] <= std::sqrt(61.36 / 4.0) * (1 + 1e-9));
  CHECK(ages[1] <= std::sqrt(61.36) * (1 + 1e-9));
  CHECK(ok.rates->within(m.box()));

  // an independent scan never gets below ~61.2 anywhere in the box
  const auto scan = paoi::testing::scan_2d(bufferless_example_cost, 0.01, 10.0, 200);
  CHECK(scan.first > 61.0);
  CHECK(scan.first < 62.0);
  CHECK_FALSE(feasible_mg11(m, 30.0));
  const auto zero = feasible_mg11(m, 0.0);
  CHECK_FALSE(zero);
  CHECK_FALSE(zero.diagnostic.empty());
}

TEST_CASE("fixed-point iterates increase monotonically", "[opt][property]") {
  std::mt19937_64 gen(71);
  for (int i = 0; i < 50; ++i) {
    const auto m = random_model(gen, 1 + gen() % 4, Discipline::MG11, false);
    const double level = std::uniform_real_distribution<double>(0.5, 40.0)(gen);
    std::vector<std::vector<double>> trace;
    const auto f = feasible_mg11(m, level, {}, [&](const std::vector<double>& r) { trace.push_back(r); });
    REQUIRE_FALSE(trace.empty());
    for (std::size_t k = 1; k < trace.size(); ++k)
      for (std::size_t n = 0; n < trace[k].size(); ++n) CHECK(trace[k][n] >= trace[k - 1][n]);
    if (f) {
      // soundness, recomputed from scratch
      const auto x = m.means();
      double work = 1.0;
      for (std::size_t k = 0; k < x.size(); ++k) work += (*f.rates)[k] * x[k];
      for (std::size_t n = 0; n < x.size(); ++n) {
        const double age = x[n] + work / (*f.rates)[n];
        CHECK(m.entity(n).cost.eval(age) <= level * (1 + 1e-8));
      }
    }
  }
}

TEST_CASE("feasibility is monotone in the level", "[opt][property]") {
  std::mt19937_64 gen(72);
  for (int i = 0; i < 30; ++i) {
    const auto m11 = random_model(gen, 1 + gen() % 3, Discipline::MG11, false);
    const auto m1 = m11.with_discipline(Discipline::MG1);
    std::vector<double> ladder(40);
    for (auto& t : ladder) t = std::exp(std::uniform_real_distribution<double>(-2.0, 6.0)(gen));
    std::sort(ladder.begin(), ladder.end());
    bool seen11 = false, seen1 = false;
    for (double t : ladder) {
      const bool f11 = static_cast<bool>(feasible_mg11(m11, t));
      const bool f1 = static_cast<bool>(feasible_surrogate(m1, t));
      if (seen11) CHECK(f11);
      if (seen1) CHECK(f1);
      seen11 = seen11 || f11;
      seen1 = seen1 || f1;
    }
  }
}

TEST_CASE("bufferless bisection on the two-class example", "[opt]") {
  const auto m = two_class(Discipline::MG11);
  const auto r = optimize_mg11(m);
  REQUIRE(r.optimal());
  CHECK(r.rates[0] == 10.0);
  CHECK(r.rates[1] == Approx(6.0).margin(0.05));
  CHECK(r.paoi[0] == Approx(3.9).margin(0.02));
  CHECK(r.paoi[1] == Approx(7.83).margin(0.02));
  CHECK(r.sys_cost == Approx(61.36).epsilon(0.01));
  CHECK(r.sys_cost == Approx(system_cost(m, r.rates).cost).epsilon(1e-9));
  // exact optimum on the lambda_1 = lambda_max face: 0.6 l^2 - 1.8 l - 11 = 0
  CHECK(r.rates[1] == Approx((1.8 + std::sqrt(1.8 * 1.8 + 4 * 0.6 * 11)) / 1.2).epsilon(1e-5));
  const auto grid = grid_search(m);
  REQUIRE(grid.optimal());
  CHECK(r.sys_cost <= grid.sys_cost * (1 + 1e-6));
  CHECK(grid.sys_cost == Approx(r.sys_cost).epsilon(2e-3));
}

TEST_CASE("identical entities and single class saturate the box", "[opt]") {
  std::mt19937_64 gen(73);
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = 1 + gen() % 4;
    const double mean = std::uniform_real_distribution<double>(0.1, 2.0)(gen);
    const auto cost = gen() % 2 ? CostFunction::linear(1.7) : CostFunction::power(0.5, 2.5);
    const auto m = SystemModel::make(std::vector<ServiceDistribution>(n, ServiceDistribution::deterministic(mean)),
                                     std::vector<CostFunction>(n, cost), RateBox(0.05, 3.0), Discipline::MG11);
    const auto r = optimize_mg11(m);
    REQUIRE(r.optimal());
    for (double rate : r.rates) CHECK(rate == 3.0);
  }
  const auto one = SystemModel::make({ServiceDistribution::exponential(1.3)}, {CostFunction::power(2, 3)},
                                     RateBox(0.1, 4.0), Discipline::MG11);
  const auto r1 = optimize_mg11(one);
  CHECK(r1.rates[0] == 4.0);
  CHECK(grid_search(one, {50, false}).rates[0] == 4.0);
}

TEST_CASE("proportional scale-up never hurts the bufferless cost", "[opt]") {
  const auto m = two_class(Discipline::MG11);
  const auto r = optimize_mg11(m);
  const auto rep = check_saturation_scaling(m, r.rates, 1e-9 * r.sys_cost);
  CHECK(rep.passed);
  CHECK(rep.scale == 1.0);
  CHECK(*std::max_element(rep.scaled.begin(), rep.scaled.end()) == 10.0);

  // un-saturated optimum: halve the rates and scale back up
  const RateVector halved({r.rates[0] / 2, r.rates[1] / 2});
  const auto back = check_saturation_scaling(m, halved, 1e-9);
  CHECK(back.passed);
  CHECK(back.scale == Approx(2.0));
  CHECK(back.scaled_cost <= back.original_cost);

  std::mt19937_64 gen(74);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 200; ++i) {
    const RateVector any({u(gen), u(gen)});
    const auto rr = check_saturation_scaling(m, any, 1e-9);
    CHECK(rr.passed);
    CHECK(rr.scaled_cost <= rr.original_cost + 1e-9);
  }
}

TEST_CASE("surrogate feasibility subproblem", "[opt]") {
  const auto m = two_class(Discipline::MG1);
  const auto near = feasible_surrogate(m, 319.7);
  REQUIRE(near);
  CHECK((*near.rates)[0] == Approx(0.285).margin(0.01));
  CHECK((*near.rates)[1] == Approx(0.17).margin(0.01));
  CHECK_FALSE(feasible_surrogate(m, 0.0));
  const auto loose = feasible_surrogate(m, 1e6);
  REQUIRE(loose);
  CHECK((*loose.rates)[0] == 0.01);
  CHECK((*loose.rates)[1] == 0.01);
  CHECK_FALSE(feasible_surrogate(m, 300.0));
}

TEST_CASE("surrogate bisection on the two-class example", "[opt]") {
  const auto m = two_class(Discipline::MG1);
  const auto r = optimize_mg1_surrogate(m);
  REQUIRE(r.optimal());
  CHECK(r.rates[0] == Approx(0.285).margin(0.01));
  CHECK(r.rates[1] == Approx(0.17).margin(0.01));
  CHECK(r.sys_cost == Approx(319.69).epsilon(0.01));
  // the surrogate optimum is where the lower-bound rates meet the waiting constraint
  CHECK(r.surrogate_cost == Approx(317.7259).epsilon(1e-5));
  CHECK(r.sys_cost == Approx(system_cost(m, r.rates).cost).epsilon(1e-12));
  // nothing on an independent scan of the surrogate beats the bisection by more than epsilon
  const auto scan = paoi::testing::scan_2d(
      [&](double a, double b) { return surrogate_cost(m, RateVector({a, b})).cost; }, 0.2, 0.4, 300);
  CHECK(scan.first >= r.surrogate_cost * (1 - 1e-6));
}

TEST_CASE("surrogate bisection edge cases", "[opt]") {
  const auto sym = SystemModel::make({ServiceDistribution::exponential(2.0), ServiceDistribution::exponential(2.0)},
                                     {CostFunction::linear(2), CostFunction::linear(2)}, RateBox(0.01, 10),
                                     Discipline::MG1);
  const auto r = optimize_mg1_surrogate(sym);
  REQUIRE(r.optimal());
  CHECK(r.rates[0] == r.rates[1]);
  const auto grid = grid_search(sym, {200, true});
  CHECK(grid.rates[0] == Approx(grid.rates[1]).margin(0.06));

  const auto heavy = SystemModel::make({ServiceDistribution::deterministic(100), ServiceDistribution::deterministic(100)},
                                       {CostFunction::linear(1), CostFunction::linear(1)}, RateBox(0.01, 10),
                                       Discipline::MG1);
  const auto inf = optimize_mg1_surrogate(heavy);
  CHECK_FALSE(inf.optimal());
  CHECK_FALSE(inf.diagnostic.empty());
  CHECK_FALSE(grid_search(heavy, {20, false}).optimal());
  CHECK_THROWS_AS(optimize_mg11(heavy), std::invalid_argument);
  CHECK_THROWS_AS(optimize_mg1_surrogate(heavy.with_discipline(Discipline::MG11)), std::invalid_argument);
}

TEST_CASE("grid oracle on the buffered example", "[opt]") {
  const auto m = two_class(Discipline::MG1);
  const auto g = grid_search(m);
  REQUIRE(g.optimal());
  // fine independent scan near the optimum
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 600; ++i)
    for (int j = 0; j <= 600; ++j)
      best = std::min(best, buffered_example_cost(0.25 + 0.06 * i / 600.0, 0.11 + 0.03 * j / 600.0));
  CHECK(best == Approx(171.6496).epsilon(1e-5));
  CHECK(g.sys_cost >= best * (1 - 1e-12));
  CHECK(g.sys_cost == Approx(best).epsilon(1e-3));
  CHECK(g.sys_cost == Approx(172.15).epsilon(0.01));
  CHECK(g.rates[1] == Approx(0.125).margin(0.01));

  // the unrefined coarse grid is strictly worse
  const auto coarse = grid_search(m, {400, false});
  CHECK(coarse.sys_cost > g.sys_cost);
  CHECK(coarse.iterations == 400 * 400);
}

TEST_CASE("surrogate gap report", "[opt]") {
  const auto m = two_class(Discipline::MG1);
  const auto exact = grid_search(m);
  const auto approx = optimize_mg1_surrogate(m);
  const auto rep = check_surrogate_gap(m, exact, approx);
  CHECK(rep.lower_holds);
  CHECK(rep.upper_holds);
  CHECK(rep.approx_cost <= 2.0 * rep.exact_cost);
  CHECK_FALSE(rep.all_linear);
  CHECK(rep.passed());
  CHECK(rep.age_max >= 2.0 * exact.paoi[1]);
  CHECK(rep.betas[0] == Approx(8.0 * rep.age_max));

  const auto same = check_surrogate_gap(m, approx, approx);
  CHECK(same.exact_cost == same.approx_cost);
  CHECK(same.passed());

  std::mt19937_64 gen(75);
  for (int i = 0; i < 10; ++i) {
    const auto lm = random_model(gen, 2, Discipline::MG1, true);
    const auto e = grid_search(lm, {120, true});
    const auto a = optimize_mg1_surrogate(lm);
    REQUIRE(e.optimal());
    REQUIRE(a.optimal());
    const auto rr = check_surrogate_gap(lm, e, a, 0.01);
    CHECK(rr.all_linear);
    CHECK(rr.passed());
    CHECK(rr.ratio <= 2.0 * 1.01);
  }
}

TEST_CASE("approximation chain through the surrogate", "[opt][property]") {
  std::mt19937_64 gen(76);
  for (int i = 0; i < 10; ++i) {
    const auto m = random_model(gen, 2, Discipline::MG1, false);
    const auto star = grid_search(m, {120, true});
    const auto b = optimize_mg1_surrogate(m);
    REQUIRE(star.optimal());
    REQUIRE(b.optimal());
    const double c_a_b = system_cost(m, b.rates).cost;
    const double c_b_b = surrogate_cost(m, b.rates).cost;
    const double c_b_star = surrogate_cost(m, star.rates).cost;
    double c_2a_star = 0.0;
    for (std::size_t n = 0; n < 2; ++n) c_2a_star = std::max(c_2a_star, m.entity(n).cost.eval(2.0 * star.paoi[n]));
    CHECK(c_a_b <= c_b_b * (1 + 1e-12));
    CHECK(c_b_b <= c_b_star * (1 + 1e-5));
    CHECK(c_b_star <= c_2a_star * (1 + 1e-12));
  }
}

TEST_CASE("settings validation", "[opt]") {
  BisectionSettings s;
  s.max_iterations = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  GridSettings g;
  g.points_per_dimension = 1;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  CHECK_THROWS_AS(feasible_mg11(two_class(Discipline::MG11), -1.0), std::invalid_argument);
}
