#include "paoi/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace paoi {

std::string_view to_string(Discipline d) { return d == Discipline::MG1 ? "mg1" : "mg11"; }

Discipline discipline_from_string(std::string_view s) {
  if (s == "mg1") return Discipline::MG1;
  if (s == "mg11") return Discipline::MG11;
  throw std::invalid_argument("unknown discipline '" + std::string(s) + "' (expected mg1 or mg11)");
}

RateBox::RateBox(double lambda_min, double lambda_max) : min_(lambda_min), max_(lambda_max) {
  if (!(std::isfinite(lambda_min) && lambda_min > 0.0))
    throw std::invalid_argument("rate box lower bound must be > 0");
  if (!(std::isfinite(lambda_max) && lambda_max >= lambda_min))
    throw std::invalid_argument("rate box upper bound must be >= lower bound");
}

RateVector::RateVector(std::vector<double> rates) : PerClass(std::move(rates)) {
  if (values_.empty()) throw std::invalid_argument("rate vector is empty");
  for (double r : values_) {
    if (!(std::isfinite(r) && r > 0.0)) throw std::invalid_argument("rates must be finite and > 0");
  }
}

bool RateVector::within(const RateBox& box) const {
  return std::all_of(values_.begin(), values_.end(), [&box](double r) { return box.contains(r); });
}

SystemModel::SystemModel(std::vector<EntityClass> classes, RateBox box, Discipline discipline)
    : classes_(std::move(classes)), box_(box), discipline_(discipline) {
  if (classes_.empty()) throw std::invalid_argument("system model needs at least one class");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].id != i + 1)
      throw std::invalid_argument("class ids must be 1..N in order; found " + std::to_string(classes_[i].id) +
                                  " at position " + std::to_string(i + 1));
    means_.push_back(classes_[i].service.mean());
    seconds_.push_back(classes_[i].service.second_moment());
  }
}

SystemModel SystemModel::make(std::vector<ServiceDistribution> services, std::vector<CostFunction> costs,
                              RateBox box, Discipline discipline) {
  if (services.size() != costs.size()) throw std::invalid_argument("services and costs differ in length");
  std::vector<EntityClass> classes;
  classes.reserve(services.size());
  for (std::size_t i = 0; i < services.size(); ++i) {
    classes.push_back(EntityClass{i + 1, std::move(services[i]), std::move(costs[i])});
  }
  return SystemModel(std::move(classes), box, discipline);
}

double SystemModel::max_mean() const { return *std::max_element(means_.begin(), means_.end()); }

SystemModel SystemModel::with_discipline(Discipline d) const {
  SystemModel copy = *this;
  copy.discipline_ = d;
  return copy;
}

}  // namespace paoi
