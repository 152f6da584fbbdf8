#pragma once

// Difference curves for the Lorenz, inverse stochastic and stochastic
// dominance families, the coefficient estimate, and rank-dependent
// inequality / welfare measures.

#include <functional>
#include <span>
#include <string>

#include "almostdom/calculus.hpp"
#include "almostdom/empirical.hpp"

namespace almostdom {

enum class Family { Lorenz, InverseSD, SD };

const char* to_string(Family family) noexcept;
const char* to_string(Direction direction) noexcept;

/// Which coefficient is being estimated.
///
/// Lorenz: degree >= 1; at degree 1 the two directions coincide.
/// InverseSD: degree >= 2; degree 2 (generalized Lorenz) is upward only.
/// SD: degree >= 1, always integrated upward from the domain's left end.
struct DominanceFamily {
  Family family = Family::Lorenz;
  int degree = 1;
  Direction direction = Direction::Upward;

  /// Throws InvalidFamilyDegree for combinations listed above as invalid.
  void validate() const;
  /// Short tag such as "LDC", "3UISDC", "2DLDC" or "1SDC".
  std::string name() const;

  /// Degree of the integration operator applied to the per-sample base
  /// curve (Lorenz curve, integrated quantile, or CDF) to reach the
  /// difference curve.
  int operator_degree() const noexcept {
    return family == Family::InverseSD ? degree - 1 : degree;
  }
  Direction operator_direction() const noexcept {
    return family == Family::SD ? Direction::Upward : direction;
  }
  /// Lorenz and InverseSD need nonnegative data.
  bool requires_nonnegative() const noexcept { return family != Family::SD; }
};

/// Grid for `family` given the user's request: Lorenz/InverseSD always
/// live on [0, 1]; SD uses `domain` when lo < hi and otherwise the hull of
/// the pooled samples.
GridSpec family_grid(const DominanceFamily& family, std::span<const double> first,
                     std::span<const double> second, std::size_t n_points,
                     double domain_lo = 0.0, double domain_hi = 0.0);

/// Per-sample curve whose difference (after integration) is phi:
/// Lorenz -> L(p), InverseSD -> integral of Q over [0, p], SD -> F(x).
/// Values are exact at each node.
void base_curve(Family family, const EmpiricalDistribution& dist, const GridSpec& spec,
                std::span<double> out);

/// Signed difference curve. Orientation: small coefficients always mean the
/// first distribution almost dominates the second. Throws ZeroMean,
/// InvalidFamilyDegree, or InvalidConfig (grid unsuitable for the family).
GridFunction phi_curve(const DominanceFamily& family, const EmpiricalDistribution& d1,
                       const EmpiricalDistribution& d2, const GridSpec& spec);

struct CoefficientEstimate {
  double c_hat = 0.0;
  double pos_area = 0.0;
  double neg_area = 0.0;
  GridFunction phi;
  DominanceFamily family;
  double T_n = 0.0;
  double lambda_hat = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  /// True when one of the areas vanishes (c_hat is exactly 0 or 1).
  bool boundary() const noexcept { return pos_area == 0.0 || neg_area == 0.0; }
};

/// Throws DegenerateCurves when phi vanishes on the grid.
CoefficientEstimate coefficient(const DominanceFamily& family, const EmpiricalDistribution& d1,
                                const EmpiricalDistribution& d2, const GridSpec& spec);

/// Builds the estimate around an already computed phi.
CoefficientEstimate make_estimate(const DominanceFamily& family, GridFunction phi,
                                  std::size_t n1, std::size_t n2);

/// P' of a rank-dependent preference function.
struct PreferenceFunction {
  std::function<double(double)> p_prime;
  std::string name;

  /// P(t) = t^3 - 3t^2 + 3t, so P'(t) = 3 (1 - t)^2.
  static PreferenceFunction cubic();
  /// P(t) = t (Lebesgue weight).
  static PreferenceFunction uniform();
};

struct RankMeasures {
  double inequality = 0.0;  // J_P
  double welfare = 0.0;     // W_P
  double mean = 0.0;
};

/// W_P = step * sum P'(p_k) Q(p_k) on the midpoint grid, J_P = 1 - W_P / mean.
/// Throws ZeroMean.
RankMeasures rank_measures(const EmpiricalDistribution& dist, const PreferenceFunction& pref,
                           const GridSpec& spec = {});

}  // namespace almostdom
