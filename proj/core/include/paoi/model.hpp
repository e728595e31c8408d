#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "paoi/cost.hpp"
#include "paoi/distribution.hpp"

namespace paoi {

enum class Discipline {
  MG1,   // infinite FCFS buffer
  MG11,  // no buffer, arrivals during service are dropped
};

std::string_view to_string(Discipline d);
Discipline discipline_from_string(std::string_view s);

/// One update stream. Ids are 1-based.
struct EntityClass {
  std::size_t id;
  ServiceDistribution service;
  CostFunction cost;
};

class RateBox {
 public:
  RateBox(double lambda_min, double lambda_max);

  double min() const { return min_; }
  double max() const { return max_; }
  bool contains(double rate) const { return rate >= min_ && rate <= max_; }

 private:
  double min_;
  double max_;
};

/// Fixed-size vector of per-class values. The tag keeps rates and ages apart.
template <class Tag>
class PerClass {
 public:
  PerClass() = default;
  explicit PerClass(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const PerClass&, const PerClass&) = default;

 protected:
  std::vector<double> values_;
};

/// Per-class update rates; every entry finite and > 0.
class RateVector : public PerClass<struct RateTag> {
 public:
  RateVector() = default;
  explicit RateVector(std::vector<double> rates);

  bool within(const RateBox& box) const;
};

/// Per-class peak ages.
using PaoiVector = PerClass<struct PaoiTag>;

class SystemModel {
 public:
  /// Classes must carry ids 1..N in order; N >= 1.
  SystemModel(std::vector<EntityClass> classes, RateBox box, Discipline discipline);

  /// Builds ids 1..N from parallel lists.
  static SystemModel make(std::vector<ServiceDistribution> services, std::vector<CostFunction> costs,
                          RateBox box, Discipline discipline);

  std::size_t size() const { return classes_.size(); }
  const std::vector<EntityClass>& classes() const { return classes_; }
  const EntityClass& entity(std::size_t index) const { return classes_.at(index); }
  const RateBox& box() const { return box_; }
  Discipline discipline() const { return discipline_; }

  std::span<const double> means() const { return means_; }
  std::span<const double> second_moments() const { return seconds_; }
  double max_mean() const;

  SystemModel with_discipline(Discipline d) const;

 private:
  std::vector<EntityClass> classes_;
  RateBox box_;
  Discipline discipline_;
  std::vector<double> means_;
  std::vector<double> seconds_;
};

}  // namespace paoi
