#include "almostdom/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "almostdom/error.hpp"

namespace almostdom {

namespace {

// Fills the influence row of one observation, using plug-in curves of the
// sample it came from.
class InfluenceRows {
 public:
  InfluenceRows(Family family, std::span<const double> observations, const GridSpec& spec)
      : family_(family), nodes_(spec.nodes()) {
    const EmpiricalDistribution dist(observations);
    const std::size_t n_nodes = nodes_.size();
    switch (family_) {
      case Family::Lorenz:
        if (!(dist.mean() > 0.0)) {
          throw Error(ErrorKind::ZeroMean, "Lorenz kernel needs a positive sample mean");
        }
        inv_mean_ = 1.0 / dist.mean();
        lorenz_.resize(n_nodes);
        quantile_.resize(n_nodes);
        for (std::size_t k = 0; k < n_nodes; ++k) {
          lorenz_[k] = dist.lorenz(nodes_[k]);
          quantile_[k] = dist.quantile(nodes_[k]);
        }
        break;
      case Family::InverseSD:
        quantile_.resize(n_nodes);
        for (std::size_t k = 0; k < n_nodes; ++k) quantile_[k] = dist.quantile(nodes_[k]);
        break;
      case Family::SD:
        break;
    }
  }

  void fill(double x, std::span<double> row) const noexcept {
    const std::size_t n_nodes = nodes_.size();
    switch (family_) {
      case Family::Lorenz:
        for (std::size_t k = 0; k < n_nodes; ++k) {
          row[k] = (lorenz_[k] * x - std::min(quantile_[k], x)) * inv_mean_;
        }
        break;
      case Family::InverseSD:
        for (std::size_t k = 0; k < n_nodes; ++k) row[k] = std::min(quantile_[k], x);
        break;
      case Family::SD:
        for (std::size_t k = 0; k < n_nodes; ++k) row[k] = x <= nodes_[k] ? 1.0 : 0.0;
        break;
    }
  }

 private:
  Family family_;
  std::vector<double> nodes_;
  std::vector<double> lorenz_;
  std::vector<double> quantile_;
  double inv_mean_ = 0.0;
};

struct Weights {
  double first;   // sqrt(1 - lambda)
  double second;  // sqrt(lambda)
  double lambda;
};

Weights weights_for(const TwoSample& data) {
  const double n1 = static_cast<double>(data.n1());
  const double n2 = static_cast<double>(data.n2());
  const double lambda = n1 / (n1 + n2);
  return {std::sqrt(1.0 - lambda), std::sqrt(lambda), lambda};
}

// Streams rows produced by `make_row(i, row)` for i in [0, count) and returns
// their 1/n covariance matrix.
template <typename MakeRow>
Eigen::MatrixXd row_covariance(std::size_t count, std::size_t n_nodes, MakeRow make_row) {
  constexpr std::size_t kBlock = 256;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_nodes));
  Eigen::MatrixXd block(kBlock, static_cast<Eigen::Index>(n_nodes));
  std::vector<double> row(n_nodes);
  for (std::size_t i = 0; i < count; ++i) {
    make_row(i, std::span<double>(row));
    mean += Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(n_nodes));
  }
  mean /= static_cast<double>(count);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_nodes),
                                              static_cast<Eigen::Index>(n_nodes));
  for (std::size_t start = 0; start < count; start += kBlock) {
    const std::size_t rows = std::min(kBlock, count - start);
    for (std::size_t r = 0; r < rows; ++r) {
      make_row(start + r, std::span<double>(row));
      block.row(static_cast<Eigen::Index>(r)) =
          Eigen::Map<const Eigen::RowVectorXd>(row.data(), static_cast<Eigen::Index>(n_nodes)) -
          mean.transpose();
    }
    const auto used = block.topRows(static_cast<Eigen::Index>(rows));
    cov.selfadjointView<Eigen::Lower>().rankUpdate(used.transpose());
  }
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  cov /= static_cast<double>(count);
  return cov;
}

CovKernel build_kernel(Family family, const TwoSample& data, SamplingScheme scheme,
                       const GridSpec& spec) {
  spec.validate();
  data.require_scheme(scheme);
  const std::size_t n_nodes = spec.n_points;
  const InfluenceRows rows1(family, data.first(), spec);
  const InfluenceRows rows2(family, data.second(), spec);
  const Weights w = weights_for(data);

  CovKernel kernel{spec, {}, family, scheme};
  if (scheme == SamplingScheme::MatchedPairs) {
    std::vector<double> tmp(n_nodes);
    kernel.matrix = row_covariance(data.n1(), n_nodes, [&](std::size_t i, std::span<double> row) {
      rows2.fill(data.second()[i], row);
      rows1.fill(data.first()[i], tmp);
      for (std::size_t k = 0; k < n_nodes; ++k) row[k] = w.second * row[k] - w.first * tmp[k];
    });
  } else {
    const Eigen::MatrixXd cov1 =
        row_covariance(data.n1(), n_nodes, [&](std::size_t i, std::span<double> row) {
          rows1.fill(data.first()[i], row);
        });
    const Eigen::MatrixXd cov2 =
        row_covariance(data.n2(), n_nodes, [&](std::size_t i, std::span<double> row) {
          rows2.fill(data.second()[i], row);
        });
    kernel.matrix = (1.0 - w.lambda) * cov1 + w.lambda * cov2;
  }
  for (Eigen::Index k = 0; k < kernel.matrix.rows(); ++k) {
    kernel.matrix(k, k) = std::max(kernel.matrix(k, k), 0.0);
  }
  return kernel;
}

// Pointwise mean / M2 accumulator (Welford) over grid rows.
class PointwiseVariance {
 public:
  explicit PointwiseVariance(std::size_t n_nodes) : mean_(n_nodes, 0.0), m2_(n_nodes, 0.0) {}

  void add(std::span<const double> row) noexcept {
    ++count_;
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t k = 0; k < mean_.size(); ++k) {
      const double delta = row[k] - mean_[k];
      mean_[k] += delta * inv;
      m2_[k] += delta * (row[k] - mean_[k]);
    }
  }

  // Plug-in (1/n) variance at node k.
  double variance(std::size_t k) const noexcept {
    return count_ == 0 ? 0.0 : m2_[k] / static_cast<double>(count_);
  }

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

}  // namespace

CovKernel lorenz_kernel(const TwoSample& data, SamplingScheme scheme, const GridSpec& spec) {
  return build_kernel(Family::Lorenz, data, scheme, spec);
}

CovKernel isd_kernel(const TwoSample& data, SamplingScheme scheme, const GridSpec& spec) {
  return build_kernel(Family::InverseSD, data, scheme, spec);
}

CovKernel sd_kernel(const TwoSample& data, SamplingScheme scheme, const GridSpec& spec) {
  return build_kernel(Family::SD, data, scheme, spec);
}

CovKernel estimate_kernel(Family family, const TwoSample& data, SamplingScheme scheme,
                          const GridSpec& spec) {
  return build_kernel(family, data, scheme, spec);
}

GridFunction sigma_curve(const CovKernel& kernel, const DominanceFamily& family) {
  family.validate();
  if (kernel.family != family.family) {
    throw Error(ErrorKind::FamilyMismatch, std::string("kernel estimated for family ") +
                                               to_string(kernel.family) + ", requested " +
                                               to_string(family.family));
  }
  const int degree = family.operator_degree();
  const Direction direction = family.operator_direction();
  const double step = kernel.spec.step();
  Eigen::MatrixXd transformed = kernel.matrix;
  if (degree > 1) {
    // Column-major storage: integrate each column, then each row (as the
    // columns of the transpose).
    for (Eigen::Index c = 0; c < transformed.cols(); ++c) {
      apply_integration({transformed.col(c).data(), static_cast<std::size_t>(transformed.rows())},
                        step, degree, direction);
    }
    transformed.transposeInPlace();
    for (Eigen::Index c = 0; c < transformed.cols(); ++c) {
      apply_integration({transformed.col(c).data(), static_cast<std::size_t>(transformed.rows())},
                        step, degree, direction);
    }
  }
  GridFunction sigma(kernel.spec);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const auto idx = static_cast<Eigen::Index>(k);
    sigma[k] = std::sqrt(std::max(transformed(idx, idx), 0.0));
  }
  return sigma;
}

GridFunction sigma_from_data(const TwoSample& data, SamplingScheme scheme,
                             const DominanceFamily& family, const GridSpec& spec) {
  family.validate();
  spec.validate();
  data.require_scheme(scheme);
  const std::size_t n_nodes = spec.n_points;
  const int degree = family.operator_degree();
  const Direction direction = family.operator_direction();
  const double step = spec.step();
  const InfluenceRows rows1(family.family, data.first(), spec);
  const InfluenceRows rows2(family.family, data.second(), spec);
  const Weights w = weights_for(data);

  std::vector<double> row(n_nodes);
  std::vector<double> tmp(n_nodes);
  GridFunction sigma(spec);
  if (scheme == SamplingScheme::MatchedPairs) {
    PointwiseVariance acc(n_nodes);
    for (std::size_t i = 0; i < data.n1(); ++i) {
      rows2.fill(data.second()[i], row);
      rows1.fill(data.first()[i], tmp);
      for (std::size_t k = 0; k < n_nodes; ++k) row[k] = w.second * row[k] - w.first * tmp[k];
      apply_integration(row, step, degree, direction);
      acc.add(row);
    }
    for (std::size_t k = 0; k < n_nodes; ++k) sigma[k] = std::sqrt(std::max(acc.variance(k), 0.0));
  } else {
    PointwiseVariance acc1(n_nodes);
    PointwiseVariance acc2(n_nodes);
    for (double x : data.first()) {
      rows1.fill(x, row);
      apply_integration(row, step, degree, direction);
      acc1.add(row);
    }
    for (double x : data.second()) {
      rows2.fill(x, row);
      apply_integration(row, step, degree, direction);
      acc2.add(row);
    }
    for (std::size_t k = 0; k < n_nodes; ++k) {
      const double var = (1.0 - w.lambda) * acc1.variance(k) + w.lambda * acc2.variance(k);
      sigma[k] = std::sqrt(std::max(var, 0.0));
    }
  }
  return sigma;
}

}  // namespace almostdom
