#include "almostdom/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "almostdom/error.hpp"

namespace almostdom {

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::Lorenz: return "lorenz";
    case Family::InverseSD: return "isd";
    case Family::SD: return "sd";
  }
  return "unknown";
}

const char* to_string(Direction direction) noexcept {
  return direction == Direction::Upward ? "up" : "down";
}

void DominanceFamily::validate() const {
  switch (family) {
    case Family::Lorenz:
      if (degree < 1) throw Error(ErrorKind::InvalidFamilyDegree, "Lorenz degree must be >= 1");
      break;
    case Family::InverseSD:
      if (degree < 2) {
        throw Error(ErrorKind::InvalidFamilyDegree, "inverse SD degree must be >= 2");
      }
      if (degree == 2 && direction == Direction::Downward) {
        throw Error(ErrorKind::InvalidFamilyDegree,
                    "degree-2 inverse SD (generalized Lorenz) is upward only");
      }
      break;
    case Family::SD:
      if (degree < 1) throw Error(ErrorKind::InvalidFamilyDegree, "SD degree must be >= 1");
      break;
  }
}

std::string DominanceFamily::name() const {
  const std::string m = std::to_string(degree);
  const char w = direction == Direction::Upward ? 'U' : 'D';
  switch (family) {
    case Family::Lorenz: return degree == 1 ? std::string("LDC") : m + w + "LDC";
    case Family::InverseSD: return m + w + "ISDC";
    case Family::SD: return m + "SDC";
  }
  return "?";
}

GridSpec family_grid(const DominanceFamily& family, std::span<const double> first,
                     std::span<const double> second, std::size_t n_points, double domain_lo,
                     double domain_hi) {
  GridSpec spec{n_points, 0.0, 1.0};
  if (family.family == Family::SD) {
    if (domain_lo < domain_hi) {
      spec.lo = domain_lo;
      spec.hi = domain_hi;
    } else {
      if (first.empty() || second.empty()) {
        throw Error(ErrorKind::EmptySample, "both samples must be nonempty");
      }
      const auto [min1, max1] = std::minmax_element(first.begin(), first.end());
      const auto [min2, max2] = std::minmax_element(second.begin(), second.end());
      spec.lo = std::min(*min1, *min2);
      spec.hi = std::max(*max1, *max2);
      if (!(spec.lo < spec.hi)) {
        throw Error(ErrorKind::DegenerateCurves,
                    "all observations are equal; the SD domain is a single point");
      }
    }
  }
  spec.validate();
  return spec;
}

void base_curve(Family family, const EmpiricalDistribution& dist, const GridSpec& spec,
                std::span<double> out) {
  const std::size_t n_nodes = spec.n_points;
  switch (family) {
    case Family::Lorenz:
      if (!(dist.mean() > 0.0)) {
        throw Error(ErrorKind::ZeroMean, "Lorenz curve needs a positive sample mean");
      }
      for (std::size_t k = 0; k < n_nodes; ++k) out[k] = dist.lorenz(spec.node(k));
      break;
    case Family::InverseSD:
      for (std::size_t k = 0; k < n_nodes; ++k) out[k] = dist.integrated_quantile(spec.node(k));
      break;
    case Family::SD: {
      const auto sorted = dist.sorted_values();
      const double n = static_cast<double>(sorted.size());
      std::size_t below = 0;
      for (std::size_t k = 0; k < n_nodes; ++k) {
        const double x = spec.node(k);
        while (below < sorted.size() && sorted[below] <= x) ++below;
        out[k] = static_cast<double>(below) / n;
      }
      break;
    }
  }
}

namespace {

void check_grid_for_family(const DominanceFamily& family, const EmpiricalDistribution& d1,
                           const EmpiricalDistribution& d2, const GridSpec& spec) {
  spec.validate();
  if (family.family == Family::SD) {
    const double lo = std::min(d1.min(), d2.min());
    const double hi = std::max(d1.max(), d2.max());
    if (lo < spec.lo || hi > spec.hi) {
      throw Error(ErrorKind::InvalidConfig, "SD domain [" + std::to_string(spec.lo) + ", " +
                                                std::to_string(spec.hi) +
                                                "] does not cover both samples");
    }
  } else if (!spec.is_unit()) {
    throw Error(ErrorKind::InvalidConfig, "Lorenz and inverse SD curves live on [0, 1]");
  }
}

}  // namespace

GridFunction phi_curve(const DominanceFamily& family, const EmpiricalDistribution& d1,
                       const EmpiricalDistribution& d2, const GridSpec& spec) {
  family.validate();
  check_grid_for_family(family, d1, d2, spec);
  GridFunction phi(spec);
  std::vector<double> other(spec.n_points);
  // SD compares F1 - F2; the Lorenz and quantile families compare curve 2
  // minus curve 1, since a higher Lorenz curve is the dominating one.
  const bool sd = family.family == Family::SD;
  base_curve(family.family, sd ? d1 : d2, spec, phi.values());
  base_curve(family.family, sd ? d2 : d1, spec, other);
  auto values = phi.values();
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= other[k];
  apply_integration(values, spec.step(), family.operator_degree(), family.operator_direction());
  return phi;
}

CoefficientEstimate make_estimate(const DominanceFamily& family, GridFunction phi,
                                  std::size_t n1, std::size_t n2) {
  CoefficientEstimate est;
  est.pos_area = positive_area(phi);
  est.neg_area = negative_area(phi);
  est.c_hat = area_ratio(est.pos_area, est.neg_area);
  est.phi = std::move(phi);
  est.family = family;
  est.n1 = n1;
  est.n2 = n2;
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  est.T_n = a * b / (a + b);
  est.lambda_hat = a / (a + b);
  return est;
}

CoefficientEstimate coefficient(const DominanceFamily& family, const EmpiricalDistribution& d1,
                                const EmpiricalDistribution& d2, const GridSpec& spec) {
  return make_estimate(family, phi_curve(family, d1, d2, spec), d1.size(), d2.size());
}

PreferenceFunction PreferenceFunction::cubic() {
  return {[](double t) { return 3.0 * (1.0 - t) * (1.0 - t); }, "cubic"};
}

PreferenceFunction PreferenceFunction::uniform() {
  return {[](double) { return 1.0; }, "uniform"};
}

RankMeasures rank_measures(const EmpiricalDistribution& dist, const PreferenceFunction& pref,
                           const GridSpec& spec) {
  spec.validate();
  if (!(dist.mean() > 0.0)) {
    throw Error(ErrorKind::ZeroMean, "rank measures need a positive sample mean");
  }
  if (!spec.is_unit()) {
    throw Error(ErrorKind::InvalidConfig, "rank measures integrate over [0, 1]");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double p = spec.node(k);
    sum += pref.p_prime(p) * dist.quantile(p);
  }
  RankMeasures out;
  out.mean = dist.mean();
  out.welfare = sum * spec.step();
  out.inequality = 1.0 - out.welfare / out.mean;
  return out;
}

}  // namespace almostdom
