#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paoi {

/// Thrown when an M/G/1 quantity is requested at a utilization at or past the
/// stability margin. Carries the offending utilization.
class UnstableQueueError : public std::domain_error {
 public:
  explicit UnstableQueueError(double rho)
      : std::domain_error("queue is unstable: rho = " + std::to_string(rho)), rho_(rho) {}

  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

/// A class produced too few deliveries to form an estimate.
class InsufficientDataError : public std::runtime_error {
 public:
  InsufficientDataError(std::size_t class_id, const std::string& what)
      : std::runtime_error("class " + std::to_string(class_id) + ": " + what), class_id_(class_id) {}

  std::size_t class_id() const noexcept { return class_id_; }

 private:
  std::size_t class_id_;
};

}  // namespace paoi
