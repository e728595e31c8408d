#include "paoi/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace paoi {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

struct MomentVisitor {
  Moments operator()(const ServiceDistribution::Exponential& e) const {
    require(positive(e.rate), "exponential rate must be > 0");
    return {1.0 / e.rate, 2.0 / (e.rate * e.rate)};
  }
  Moments operator()(const ServiceDistribution::Deterministic& d) const {
    require(positive(d.value), "deterministic value must be > 0");
    return {d.value, d.value * d.value};
  }
  Moments operator()(const ServiceDistribution::Uniform& u) const {
    require(std::isfinite(u.low) && std::isfinite(u.high), "uniform bounds must be finite");
    require(u.low >= 0.0 && u.low < u.high, "uniform requires 0 <= low < high");
    return {0.5 * (u.low + u.high), (u.low * u.low + u.low * u.high + u.high * u.high) / 3.0};
  }
  Moments operator()(const ServiceDistribution::Gamma& g) const {
    require(positive(g.shape) && positive(g.scale), "gamma shape and scale must be > 0");
    return {g.shape * g.scale, g.shape * (g.shape + 1.0) * g.scale * g.scale};
  }
  Moments operator()(const ServiceDistribution::Hyperexponential& h) const {
    require(!h.weights.empty() && h.weights.size() == h.rates.size(),
            "hyperexponential needs matching nonempty weights and rates");
    double total = 0.0;
    Moments m;
    for (std::size_t i = 0; i < h.weights.size(); ++i) {
      require(std::isfinite(h.weights[i]) && h.weights[i] >= 0.0, "hyperexponential weights must be >= 0");
      require(positive(h.rates[i]), "hyperexponential rates must be > 0");
      total += h.weights[i];
      m.mean += h.weights[i] / h.rates[i];
      m.second += 2.0 * h.weights[i] / (h.rates[i] * h.rates[i]);
    }
    require(std::abs(total - 1.0) <= 1e-9, "hyperexponential weights must sum to 1");
    return m;
  }
};

}  // namespace

ServiceDistribution::ServiceDistribution(Params params) : params_(std::move(params)) {
  moments_ = std::visit(MomentVisitor{}, params_);
  if (const auto* h = std::get_if<Hyperexponential>(&params_)) {
    cumulative_.resize(h->weights.size());
    std::partial_sum(h->weights.begin(), h->weights.end(), cumulative_.begin());
    cumulative_.back() = 1.0;
  }
}

double ServiceDistribution::sample(Rng& rng) const {
  struct Sampler {
    Rng& rng;
    const std::vector<double>& cumulative;

    double operator()(const Exponential& e) const { return std::exponential_distribution<double>(e.rate)(rng); }
    double operator()(const Deterministic& d) const { return d.value; }
    double operator()(const Uniform& u) const { return std::uniform_real_distribution<double>(u.low, u.high)(rng); }
    double operator()(const Gamma& g) const { return std::gamma_distribution<double>(g.shape, g.scale)(rng); }
    double operator()(const Hyperexponential& h) const {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto branch = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                h.rates.size() - 1);
      return std::exponential_distribution<double>(h.rates[branch])(rng);
    }
  };
  return std::visit(Sampler{rng, cumulative_}, params_);
}

std::string ServiceDistribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          os << "exponential(rate=" << p.rate << ")";
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          os << "deterministic(" << p.value << ")";
        } else if constexpr (std::is_same_v<T, Uniform>) {
          os << "uniform(" << p.low << "," << p.high << ")";
        } else if constexpr (std::is_same_v<T, Gamma>) {
          os << "gamma(shape=" << p.shape << ",scale=" << p.scale << ")";
        } else {
          os << "hyperexponential(" << p.weights.size() << " branches)";
        }
      },
      params_);
  return os.str();
}

}  // namespace paoi
