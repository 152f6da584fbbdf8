#pragma once

// Contact-set estimation, the estimated directional derivative of the area
// ratio, the bootstrap confidence interval built on it, and calibration of
// the contact-set tuning parameter.

#include <cstdint>
#include <span>
#include <vector>

#include "almostdom/calculus.hpp"
#include "almostdom/coefficients.hpp"
#include "almostdom/empirical.hpp"
#include "almostdom/rng.hpp"

namespace almostdom {

struct InferenceConfig {
  double t_n = 0.0;        // contact-set threshold, required > 0
  double xi0 = 0.001;      // floor on the studentizing sigma
  std::size_t n_boot = 1000;
  double alpha = 0.05;
  bool clamp_to_unit = true;
  std::uint64_t seed = 0;
  /// Drop replicates whose resample has an undefined curve (e.g. a zero-mean
  /// Lorenz resample) instead of failing with NonFiniteDraw.
  bool skip_degenerate = false;
  /// Worker threads for the replicate loop; 0 = ALMOSTDOM_THREADS or all
  /// cores. Results do not depend on this value.
  unsigned threads = 1;

  /// Throws InvalidConfig when a field is out of range.
  void validate() const;
};

enum class Contact : std::uint8_t { Zero, Plus, Minus };

/// Partition of the grid into the estimated positive, negative and contact
/// (near-zero) regions of phi.
class ContactSets {
 public:
  ContactSets() = default;
  explicit ContactSets(std::vector<Contact> labels) : labels_(std::move(labels)) {}

  std::span<const Contact> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  Contact operator[](std::size_t k) const noexcept { return labels_[k]; }
  std::vector<bool> b_plus() const { return mask(Contact::Plus); }
  std::vector<bool> b_minus() const { return mask(Contact::Minus); }
  std::vector<bool> b_zero() const { return mask(Contact::Zero); }
  std::size_t count(Contact which) const noexcept;

 private:
  std::vector<bool> mask(Contact which) const;
  std::vector<Contact> labels_;
};

/// Node k is Plus when sqrt(T_n) phi(k) / max(xi0, sigma(k)) > t_n, Minus
/// when it is < -t_n, Zero otherwise. Throws GridMismatch.
ContactSets contact_sets(const GridFunction& phi_hat, const GridFunction& sigma_hat, double T_n,
                         double t_n, double xi0);
ContactSets contact_sets(const GridFunction& phi_hat, const GridFunction& sigma_hat, double T_n,
                         const InferenceConfig& cfg);

/// Estimated directional derivative of the area ratio at phi_hat, with the
/// contact sets held fixed.
class DirectionalDerivative {
 public:
  /// Throws DegenerateCurves when phi_hat has no area, GridMismatch when the
  /// sets do not match the grid.
  DirectionalDerivative(ContactSets sets, const GridFunction& phi_hat);

  double operator()(std::span<const double> h) const;
  double positive_area() const noexcept { return pos_; }
  double negative_area() const noexcept { return neg_; }
  const ContactSets& sets() const noexcept { return sets_; }

 private:
  ContactSets sets_;
  double pos_ = 0.0;
  double neg_ = 0.0;
  double step_ = 0.0;
};

double derivative(const GridFunction& h, const ContactSets& sets, const GridFunction& phi_hat);

/// Inf-type empirical quantile of `sorted` draws: the ceil(beta B)-th
/// smallest value.
double bootstrap_quantile(std::span<const double> sorted, double beta);

struct BootstrapResult {
  CoefficientEstimate estimate;
  GridFunction sigma;
  ContactSets sets;
  std::vector<double> draws;
  double q_lo = 0.0;
  double q_hi = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n_boot_effective = 0;
  std::uint64_t seed = 0;
  /// The estimate sits on the boundary (c_hat is 0 or 1), where the interval
  /// has no asymptotic guarantee.
  bool boundary = false;
};

/// Full bootstrap confidence interval for the coefficient. Replicate b uses
/// the stream derive_seed(cfg.seed, b), so results are identical for any
/// thread count. Throws DegenerateCurves, NonFiniteDraw, InvalidConfig.
BootstrapResult bootstrap_ci(const TwoSample& data, const DominanceFamily& family,
                             SamplingScheme scheme, const GridSpec& spec,
                             const InferenceConfig& cfg);

struct TuningReport {
  double selected = 0.0;
  double pseudo_true = 0.0;
  std::vector<double> candidates;
  std::vector<double> coverage;
  std::size_t effective_reps = 0;
};

/// Calibrates t_n by treating the empirical distributions as the truth:
/// n_cal_reps datasets are resampled at the original sizes, each gets an
/// n_cal_boot bootstrap interval for every candidate (sharing the same
/// resamples), and the candidate whose coverage of the pseudo-true
/// coefficient is closest to 1 - alpha wins; ties go to the smallest t_n.
/// Simulated datasets with a degenerate coefficient are skipped.
TuningReport select_tuning_report(const TwoSample& data, const DominanceFamily& family,
                                  SamplingScheme scheme, const GridSpec& spec,
                                  const InferenceConfig& cfg, std::span<const double> candidates,
                                  std::size_t n_cal_reps, std::size_t n_cal_boot);

double select_tuning(const TwoSample& data, const DominanceFamily& family, SamplingScheme scheme,
                     const GridSpec& spec, const InferenceConfig& cfg,
                     std::span<const double> candidates, std::size_t n_cal_reps,
                     std::size_t n_cal_boot);

/// Draws bootstrap resamples of a TwoSample, returning each coordinate
/// already sorted in O(n) via multiplicity counts. Matched data is
/// resampled by pair.
class Resampler {
 public:
  Resampler(const TwoSample& data, SamplingScheme scheme);

  struct Workspace {
    std::vector<std::uint32_t> counts1;
    std::vector<std::uint32_t> counts2;
  };

  void draw_sorted(Rng& rng, Workspace& ws, std::vector<double>& sorted1,
                   std::vector<double>& sorted2) const;

  /// A resampled dataset with the original pairing structure.
  TwoSample draw_dataset(Rng& rng) const;

 private:
  SamplingScheme scheme_;
  std::vector<double> first_;   // original order
  std::vector<double> second_;
  std::vector<double> sorted1_;
  std::vector<double> sorted2_;
  std::vector<std::uint32_t> order1_;  // pair index of the r-th smallest first coordinate
  std::vector<std::uint32_t> order2_;
};

}  // namespace almostdom
