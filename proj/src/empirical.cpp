#include "almostdom/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "almostdom/error.hpp"

namespace almostdom {

namespace {

// n * p with products that land within rounding noise of an integer snapped
// onto it, so p = k / n hits the k-th order statistic exactly.
double scaled_probability(std::size_t n, double p) {
  const double np = static_cast<double>(n) * p;
  const double nearest = std::round(np);
  if (std::abs(np - nearest) <= 1e-12 * std::max(1.0, np)) return nearest;
  return np;
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::DomainError, "probability " + std::to_string(p) + " outside [0, 1]");
  }
}

}  // namespace

const char* to_string(SamplingScheme scheme) noexcept {
  return scheme == SamplingScheme::Independent ? "independent" : "matched";
}

void PairedSample::validate() const {
  if (first.size() != second.size()) {
    throw Error(ErrorKind::InvalidConfig, "paired sample coordinates differ in length");
  }
  if (first.empty()) throw Error(ErrorKind::EmptySample, "paired sample has no pairs");
}

TwoSample::TwoSample(SamplingScheme scheme, std::vector<double> first, std::vector<double> second)
    : scheme_(scheme), first_(std::move(first)), second_(std::move(second)) {}

TwoSample TwoSample::independent(Sample first, Sample second) {
  if (first.values.empty() || second.values.empty()) {
    throw Error(ErrorKind::EmptySample, "both samples must be nonempty");
  }
  return TwoSample(SamplingScheme::Independent, std::move(first.values),
                   std::move(second.values));
}

TwoSample TwoSample::matched(PairedSample pairs) {
  pairs.validate();
  return TwoSample(SamplingScheme::MatchedPairs, std::move(pairs.first), std::move(pairs.second));
}

void TwoSample::require_scheme(SamplingScheme requested) const {
  if (requested == SamplingScheme::MatchedPairs && !paired()) {
    throw Error(ErrorKind::SchemeMismatch, "matched-pairs analysis needs paired data");
  }
}

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> values)
    : sorted_(values.begin(), values.end()) {
  if (sorted_.empty()) throw Error(ErrorKind::EmptySample, "sample is empty");
  std::sort(sorted_.begin(), sorted_.end());
  finish();
}

EmpiricalDistribution EmpiricalDistribution::from_sorted(std::vector<double> sorted) {
  if (sorted.empty()) throw Error(ErrorKind::EmptySample, "sample is empty");
  EmpiricalDistribution out;
  out.sorted_ = std::move(sorted);
  out.finish();
  return out;
}

void EmpiricalDistribution::finish() {
  prefix_.resize(sorted_.size() + 1);
  prefix_[0] = 0.0;
  long double running = 0.0L;
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    running += sorted_[i];
    prefix_[i + 1] = static_cast<double>(running);
  }
  mean_ = prefix_.back() / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  check_probability(p);
  if (p == 0.0) return sorted_.front();
  const double np = scaled_probability(sorted_.size(), p);
  const auto k = static_cast<std::size_t>(std::ceil(np));
  return sorted_[std::clamp<std::size_t>(k, 1, sorted_.size()) - 1];
}

double EmpiricalDistribution::integrated_quantile(double p) const {
  check_probability(p);
  const std::size_t n = sorted_.size();
  const double np = scaled_probability(n, p);
  const auto k = std::min(static_cast<std::size_t>(std::floor(np)), n);
  const double frac = np - static_cast<double>(k);
  double total = prefix_[k];
  if (k < n && frac > 0.0) total += frac * sorted_[k];
  return total / static_cast<double>(n);
}

double EmpiricalDistribution::lorenz(double p) const {
  if (!(mean_ > 0.0)) {
    throw Error(ErrorKind::ZeroMean, "Lorenz curve needs a positive sample mean");
  }
  return integrated_quantile(p) / mean_;
}

EmpiricalDistribution build_empirical(const Sample& sample) {
  return EmpiricalDistribution(sample.values);
}

double joint_ecdf(const PairedSample& pairs, double x, double x2) noexcept {
  if (pairs.first.empty()) return 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pairs.first.size(); ++i) {
    if (pairs.first[i] <= x && pairs.second[i] <= x2) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(pairs.first.size());
}

}  // namespace almostdom
