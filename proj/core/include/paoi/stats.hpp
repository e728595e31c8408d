#pragma once

#include <cstddef>
#include <span>

namespace paoi {

struct Summary {
  double mean = 0.0;
  double halfwidth = 0.0;  // Student-t; +inf with a single sample
  std::size_t count = 0;

  bool covers(double value) const;
};

/// Two-sided quantile, e.g. student_t_quantile(0.975, 9) ~ 2.262.
double student_t_quantile(double probability, double degrees_of_freedom);

/// Mean and confidence half-width of i.i.d. replication outputs.
Summary summarize(std::span<const double> samples, double confidence = 0.95);

}  // namespace paoi
