#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "paoi/model.hpp"

using namespace paoi;

TEST_CASE("rate box validation", "[model]") {
  CHECK_NOTHROW(RateBox(0.01, 10.0));
  CHECK_NOTHROW(RateBox(1.0, 1.0));
  CHECK_THROWS_AS(RateBox(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RateBox(2.0, 1.0), std::invalid_argument);
  RateBox box(0.5, 2.0);
  CHECK(box.contains(0.5));
  CHECK(box.contains(2.0));
  CHECK_FALSE(box.contains(2.0000001));
}

TEST_CASE("rate vectors are positive", "[model]") {
  CHECK_THROWS_AS(RateVector({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(RateVector(std::vector<double>{}), std::invalid_argument);
  RateVector r({0.5, 1.5});
  CHECK(r.size() == 2);
  CHECK(r.within(RateBox(0.5, 1.5)));
  CHECK_FALSE(r.within(RateBox(0.6, 1.5)));
}

TEST_CASE("system model checks ids and caches moments", "[model]") {
  auto svc = ServiceDistribution::deterministic(1.0);
  auto cost = CostFunction::linear(1.0);
  CHECK_THROWS_AS(SystemModel({}, RateBox(1, 2), Discipline::MG1), std::invalid_argument);
  CHECK_THROWS_AS(SystemModel({EntityClass{2, svc, cost}}, RateBox(1, 2), Discipline::MG1), std::invalid_argument);
  CHECK_THROWS_AS(SystemModel({EntityClass{1, svc, cost}, EntityClass{1, svc, cost}}, RateBox(1, 2), Discipline::MG1),
                  std::invalid_argument);

  const auto m = SystemModel::make({ServiceDistribution::deterministic(1.0), ServiceDistribution::deterministic(3.0)},
                                   {CostFunction::power(4, 2), CostFunction::power(1, 2)}, RateBox(0.01, 10),
                                   Discipline::MG11);
  CHECK(m.size() == 2);
  CHECK(m.means()[1] == 3.0);
  CHECK(m.second_moments()[1] == 9.0);
  CHECK(m.max_mean() == 3.0);
  CHECK(m.with_discipline(Discipline::MG1).discipline() == Discipline::MG1);
  CHECK(discipline_from_string("mg1") == Discipline::MG1);
  CHECK(to_string(Discipline::MG11) == "mg11");
  CHECK_THROWS_AS(discipline_from_string("mm1"), std::invalid_argument);
}
