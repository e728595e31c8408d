#include "paoi/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace paoi {

bool Summary::covers(double value) const { return std::abs(value - mean) <= halfwidth; }

double student_t_quantile(double probability, double degrees_of_freedom) {
  if (!(probability > 0.0 && probability < 1.0)) throw std::invalid_argument("probability must be in (0,1)");
  if (!(degrees_of_freedom > 0.0)) throw std::invalid_argument("degrees of freedom must be > 0");
  return boost::math::quantile(boost::math::students_t(degrees_of_freedom), probability);
}

Summary summarize(std::span<const double> samples, double confidence) {
  if (samples.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  Summary s;
  s.count = samples.size();
  long double sum = 0.0L;
  for (double v : samples) sum += v;
  s.mean = static_cast<double>(sum / s.count);
  if (s.count < 2) {
    s.halfwidth = std::numeric_limits<double>::infinity();
    return s;
  }
  long double ss = 0.0L;
  for (double v : samples) ss += (v - s.mean) * static_cast<long double>(v - s.mean);
  const double sd = std::sqrt(static_cast<double>(ss / (s.count - 1)));
  const double t = student_t_quantile(0.5 + 0.5 * confidence, static_cast<double>(s.count - 1));
  s.halfwidth = t * sd / std::sqrt(static_cast<double>(s.count));
  return s;
}

}  // namespace paoi
