#pragma once

// Plug-in estimates of the covariance kernels of the limiting processes and
// the standard-deviation curves used to studentize contact sets.
//
// Every kernel is a combination of sample covariances of per-observation
// influence rows evaluated on the grid:
//   Lorenz     (L(p) X - min(Q(p), X)) / mean
//   InverseSD  min(Q(p), X)
//   SD         1(X <= x)
// Independent samples:  (1 - lambda) Cov_1 + lambda Cov_2.
// Matched pairs:        Cov of sqrt(lambda) a2_i - sqrt(1 - lambda) a1_i,
// which expands to the four-term formula with cross covariances.
// Covariances use the plug-in 1/n normalization.

#include <Eigen/Dense>

#include "almostdom/calculus.hpp"
#include "almostdom/coefficients.hpp"
#include "almostdom/empirical.hpp"

namespace almostdom {

struct CovKernel {
  GridSpec spec;
  Eigen::MatrixXd matrix;
  Family family = Family::Lorenz;
  SamplingScheme scheme = SamplingScheme::Independent;

  double operator()(std::size_t i, std::size_t j) const { return matrix(i, j); }
};

/// Kernel of the Lorenz-difference process. Throws SchemeMismatch, ZeroMean.
CovKernel lorenz_kernel(const TwoSample& data, SamplingScheme scheme, const GridSpec& spec = {});
/// Kernel of the integrated-quantile difference process.
CovKernel isd_kernel(const TwoSample& data, SamplingScheme scheme, const GridSpec& spec = {});
/// Kernel of the CDF difference process on spec's domain.
CovKernel sd_kernel(const TwoSample& data, SamplingScheme scheme, const GridSpec& spec);
CovKernel estimate_kernel(Family family, const TwoSample& data, SamplingScheme scheme,
                          const GridSpec& spec);

/// sqrt of the diagonal of T K T', where T is the family's integration
/// operator (Lorenz: degree m, InverseSD: degree m - 1, SD: degree m
/// upward). Tiny negative variances are clipped to zero. Throws
/// FamilyMismatch when the kernel belongs to another family.
GridFunction sigma_curve(const CovKernel& kernel, const DominanceFamily& family);

/// Same curve as sigma_curve(estimate_kernel(...), family) without forming
/// the N x N kernel: each influence row is integrated and the pointwise
/// variance accumulated. O(n N m) time, O(N) memory.
GridFunction sigma_from_data(const TwoSample& data, SamplingScheme scheme,
                             const DominanceFamily& family, const GridSpec& spec);

}  // namespace almostdom
