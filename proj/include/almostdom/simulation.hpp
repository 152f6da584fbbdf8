#pragma once

// Data-generating processes, population coefficients computed from their
// analytic quantiles and CDFs, and the Monte Carlo coverage harness.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "almostdom/calculus.hpp"
#include "almostdom/coefficients.hpp"
#include "almostdom/empirical.hpp"
#include "almostdom/inference.hpp"
#include "almostdom/rng.hpp"

namespace almostdom {

/// Double Pareto law dP(alpha, beta) with scale M:
///   F(x) = p0 (x/M)^beta                  for x < M
///   F(x) = 1 - (1 - p0) (M/x)^alpha       for x >= M
/// where p0 = alpha / (alpha + beta).
class DoublePareto {
 public:
  /// Throws DomainError unless alpha, beta, scale > 0. Writes a warning to
  /// stderr when alpha <= 2 (fourth moment condition fails).
  DoublePareto(double alpha, double beta, double scale = 1.0);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double scale() const noexcept { return scale_; }
  /// Mass below the scale point.
  double junction() const noexcept { return alpha_ / (alpha_ + beta_); }
  bool satisfies_moment_condition() const noexcept { return alpha_ > 2.0; }

  double pdf(double x) const noexcept;
  double cdf(double x) const noexcept;
  /// Throws DomainError for p outside (0, 1).
  double quantile(double p) const;
  /// Integral of the quantile over [0, p], p in [0, 1].
  double integrated_quantile(double p) const noexcept;
  /// Infinite when alpha <= 1.
  double mean() const noexcept;

 private:
  double alpha_;
  double beta_;
  double scale_;
};

double dp_quantile(const DoublePareto& dgp, double p);

/// Finite discrete law. Atoms are kept sorted by value.
class DiscreteLaw {
 public:
  /// Throws DomainError unless every probability is positive and the total
  /// is 1 within 1e-12.
  explicit DiscreteLaw(std::vector<std::pair<double, double>> atoms);

  const std::vector<std::pair<double, double>>& atoms() const noexcept { return atoms_; }
  double cdf(double x) const noexcept;
  /// Smallest atom whose cumulative probability reaches p.
  double quantile(double p) const;
  double integrated_quantile(double p) const noexcept;
  double mean() const noexcept;
  double min() const noexcept { return atoms_.front().first; }
  double max() const noexcept { return atoms_.back().first; }

 private:
  std::vector<std::pair<double, double>> atoms_;
  std::vector<double> cumulative_;
};

using Dgp = std::variant<DoublePareto, DiscreteLaw>;

double dgp_cdf(const Dgp& dgp, double x);
double dgp_quantile(const Dgp& dgp, double p);
double dgp_integrated_quantile(const Dgp& dgp, double p);
double dgp_mean(const Dgp& dgp);
std::string describe(const Dgp& dgp);

/// n draws by inverse-CDF sampling.
Sample sample_dgp(const Dgp& dgp, std::size_t n, Rng& rng);

/// Population coefficient from analytic curves on a `resolution`-node
/// midpoint grid. SD needs a domain (lo < hi); for two discrete laws it
/// defaults to the hull of the atoms, and at degree 1 the ratio is computed
/// exactly from the step CDFs. Throws DegenerateCurves, InvalidConfig.
double population_coefficient(const Dgp& dgp1, const Dgp& dgp2, const DominanceFamily& family,
                              std::size_t resolution = 100000, double domain_lo = 0.0,
                              double domain_hi = 0.0);

/// Population difference curve on `spec`.
GridFunction population_phi(const Dgp& dgp1, const Dgp& dgp2, const DominanceFamily& family,
                            const GridSpec& spec);

struct MonteCarloStudy {
  Dgp dgp1;
  Dgp dgp2;
  DominanceFamily family;
  SamplingScheme scheme = SamplingScheme::MatchedPairs;
  std::size_t n1 = 100;
  std::size_t n2 = 100;
  /// Grid used for estimation; SD studies set the domain here.
  GridSpec grid;
  InferenceConfig cfg;
  std::size_t n_reps = 100;
  double true_c = 0.0;

  /// Throws InvalidConfig (e.g. matched scheme with n1 != n2).
  void validate() const;
};

struct MonteCarloReport {
  double mean = 0.0;
  double bias = 0.0;
  double se = 0.0;    // standard deviation of the estimates (1/R)
  double rmse = 0.0;  // sqrt of the mean squared error
  double cr = 0.0;
  double t_n = 0.0;
  double true_c = 0.0;
  std::size_t n_reps = 0;
  std::size_t effective_reps = 0;
  std::vector<double> estimates;
  std::vector<double> widths;
  std::vector<bool> covered;
};

/// Repetition r draws its dataset from derive_seed(derive_seed(seed, r), 0)
/// and bootstraps with derive_seed(derive_seed(seed, r), 1), so a longer
/// study extends a shorter one with the same seed. Matched pairs are drawn
/// with independent coordinates. Repetitions whose dataset is degenerate
/// are dropped when cfg.skip_degenerate is set and raise otherwise.
MonteCarloReport monte_carlo(const MonteCarloStudy& study);

struct Preset {
  std::string name;
  Dgp dgp1;
  Dgp dgp2;
  DominanceFamily family;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
};

/// ldc-a..d, uisdc-a..d, sdc-a..d. Throws InvalidConfig for unknown names.
Preset find_preset(const std::string& name);
std::vector<std::string> preset_names();

/// Discrete law used by the SDC presets: first sample 0.25 with probability
/// 1/beta and 1 otherwise; second sample 0.5 w.p. 2/3 and 0.75 w.p. 1/3.
std::pair<DiscreteLaw, DiscreteLaw> sdc_laws(double beta);

}  // namespace almostdom
