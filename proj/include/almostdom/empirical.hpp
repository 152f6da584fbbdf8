#pragma once

// Exact empirical distribution objects: CDF, step quantile, piecewise-linear
// Lorenz curve and the matched-pairs joint CDF.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace almostdom {

struct Sample {
  std::vector<double> values;
  std::string label;
};

/// Matched pairs stored as two aligned coordinate vectors: pair i is
/// (first[i], second[i]).
struct PairedSample {
  std::vector<double> first;
  std::vector<double> second;

  std::size_t size() const noexcept { return first.size(); }
  /// Throws InvalidConfig when the coordinate vectors differ in length and
  /// EmptySample when there are no pairs.
  void validate() const;
};

enum class SamplingScheme { Independent, MatchedPairs };

const char* to_string(SamplingScheme scheme) noexcept;

/// Two samples plus the scheme they were drawn under. Matched data keeps
/// its pairing (first[i] and second[i] belong together); independent data
/// may have different sizes.
class TwoSample {
 public:
  static TwoSample independent(Sample first, Sample second);
  static TwoSample matched(PairedSample pairs);

  SamplingScheme scheme() const noexcept { return scheme_; }
  bool paired() const noexcept { return scheme_ == SamplingScheme::MatchedPairs; }
  std::span<const double> first() const noexcept { return first_; }
  std::span<const double> second() const noexcept { return second_; }
  std::size_t n1() const noexcept { return first_.size(); }
  std::size_t n2() const noexcept { return second_.size(); }

  /// Throws SchemeMismatch when matched analysis is requested on unpaired
  /// data. Paired data may always be analysed as independent samples.
  void require_scheme(SamplingScheme requested) const;

 private:
  TwoSample(SamplingScheme scheme, std::vector<double> first, std::vector<double> second);

  SamplingScheme scheme_;
  std::vector<double> first_;
  std::vector<double> second_;
};

class EmpiricalDistribution {
 public:
  /// Sorts a copy of `values`. Throws EmptySample on empty input.
  explicit EmpiricalDistribution(std::span<const double> values);

  /// Takes values already in ascending order (unchecked in release builds).
  static EmpiricalDistribution from_sorted(std::vector<double> sorted);

  std::span<const double> sorted_values() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }
  double mean() const noexcept { return mean_; }
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }

  /// Fraction of observations <= x.
  double cdf(double x) const noexcept;

  /// inf{x : F(x) >= p}: the ceil(n p)-th order statistic for p > 0 and the
  /// sample minimum at p = 0. Throws DomainError outside [0, 1].
  double quantile(double p) const;

  /// Integral of the step quantile over [0, p]: with k = floor(n p),
  /// (X_(1) + ... + X_(k) + (n p - k) X_(k+1)) / n.
  double integrated_quantile(double p) const;

  /// integrated_quantile(p) / mean. Throws ZeroMean when mean <= 0.
  double lorenz(double p) const;

 private:
  EmpiricalDistribution() = default;
  void finish();

  std::vector<double> sorted_;
  std::vector<double> prefix_;  // prefix_[k] = X_(1) + ... + X_(k)
  double mean_ = 0.0;
};

EmpiricalDistribution build_empirical(const Sample& sample);

/// Fraction of pairs with first <= x and second <= x2.
double joint_ecdf(const PairedSample& pairs, double x, double x2) noexcept;

}  // namespace almostdom
