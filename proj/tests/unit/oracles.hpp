#pragma once

// Reference computations used by the tests. Each one is written from the
// defining formula and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

// Double Pareto density with M = 1.
inline double dp_pdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  const double c = a * b / (a + b);
  return x < 1.0 ? c * std::pow(x, b - 1.0) : c * std::pow(x, -a - 1.0);
}

// CDF by adaptive quadrature of the density, split at the kink x = 1.
inline double dp_cdf(double a, double b, double x) {
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double t) { return dp_pdf(a, b, t); };
  if (x <= 0.0) return 0.0;
  if (x <= 1.0) return gauss_kronrod<double, 61>::integrate(f, 0.0, x, 15, 1e-13);
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13) +
         gauss_kronrod<double, 61>::integrate(f, 1.0, x, 15, 1e-13);
}

// Quantile by bisection on the quadrature CDF.
inline double dp_quantile(double a, double b, double p) {
  double lo = 0.0;
  double hi = 1.0;
  while (dp_cdf(a, b, hi) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dp_cdf(a, b, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Closed-form quantile obtained by inverting the piecewise CDF by hand,
// used where the bisection oracle would be too slow.
inline double dp_quantile_closed(double a, double b, double p) {
  const double p0 = a / (a + b);
  return p <= p0 ? std::pow(p / p0, 1.0 / b) : std::pow((1.0 - p0) / (1.0 - p), 1.0 / a);
}

// Integral of the quantile over [0, p] by tanh-sinh quadrature, which copes
// with the integrable endpoint singularity at p -> 1.
inline double dp_integrated_quantile(double a, double b, double p) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double p0 = a / (a + b);
  const auto q = [&](double t) { return dp_quantile_closed(a, b, t); };
  if (p <= p0) return integrator.integrate(q, 0.0, p);
  return integrator.integrate(q, 0.0, p0) + integrator.integrate(q, p0, p);
}

// inf{x in sample : fraction <= x is >= p}, by scanning every candidate.
inline double brute_quantile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  if (p <= 0.0) return xs.front();
  for (double x : xs) {
    const double frac =
        static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](double v) { return v <= x; })) /
        static_cast<double>(xs.size());
    if (frac >= p) return x;
  }
  return xs.back();
}

// Integral over [0, p] of the step quantile, summing the overlap of each
// order statistic's interval ((i-1)/n, i/n] with [0, p].
inline double brute_integrated_quantile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double left = static_cast<double>(i) / n;
    const double right = static_cast<double>(i + 1) / n;
    sum += xs[i] * std::max(0.0, std::min(right, p) - left);
  }
  return sum;
}

// Area ratio of a curve sampled on an arbitrary increasing abscissa, by the
// trapezoid rule on max(f, 0) and max(-f, 0).
inline double trapezoid_ratio(const std::vector<double>& x, const std::vector<double>& f) {
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double w = 0.5 * (x[i + 1] - x[i]);
    pos += w * (std::max(f[i], 0.0) + std::max(f[i + 1], 0.0));
    neg += w * (std::max(-f[i], 0.0) + std::max(-f[i + 1], 0.0));
  }
  return pos / (pos + neg);
}

// Plug-in (1/n) variance.
inline double variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

}  // namespace oracle
