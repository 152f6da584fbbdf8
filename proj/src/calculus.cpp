#include "almostdom/calculus.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "almostdom/error.hpp"

namespace almostdom {

std::vector<double> GridSpec::nodes() const {
  std::vector<double> out(n_points);
  for (std::size_t k = 0; k < n_points; ++k) out[k] = node(k);
  return out;
}

void GridSpec::validate() const {
  if (n_points < 2) {
    throw Error(ErrorKind::InvalidConfig, "grid needs at least 2 points");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorKind::InvalidConfig,
                "grid domain must satisfy lo < hi, got [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
}

GridFunction::GridFunction(GridSpec spec) : spec_(spec), values_(spec.n_points, 0.0) {}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.n_points) {
    throw Error(ErrorKind::GridMismatch, "value count " + std::to_string(values_.size()) +
                                             " does not match grid size " +
                                             std::to_string(spec_.n_points));
  }
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, "grid functions live on different grids");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_grid(spec_, other.spec_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_grid(spec_, other.spec_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(double scale) noexcept {
  for (double& v : values_) v *= scale;
  return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
GridFunction operator*(double scale, GridFunction f) { return f *= scale; }
GridFunction operator-(GridFunction f) { return f *= -1.0; }

void cumulate_up(std::span<double> values, double step, int passes) noexcept {
  for (int pass = 0; pass < passes; ++pass) {
    double running = 0.0;
    for (double& v : values) {
      running += v;
      v = running * step;
    }
  }
}

void cumulate_down(std::span<double> values, double step, int passes) noexcept {
  for (int pass = 0; pass < passes; ++pass) {
    double running = 0.0;
    for (auto it = values.rbegin(); it != values.rend(); ++it) {
      running += *it;
      *it = running * step;
    }
  }
}

void apply_integration(std::span<double> values, double step, int degree,
                       Direction direction) noexcept {
  if (degree <= 1) return;
  if (direction == Direction::Upward) {
    cumulate_up(values, step, degree - 1);
  } else {
    cumulate_down(values, step, degree - 1);
  }
}

GridFunction integrate(const GridFunction& f, int m, Direction direction) {
  if (m < 1) {
    throw Error(ErrorKind::InvalidFamilyDegree, "integration degree must be >= 1");
  }
  GridFunction out = f;
  apply_integration(out.values(), f.spec().step(), m, direction);
  return out;
}

GridFunction integrate_up(const GridFunction& f, int m) {
  return integrate(f, m, Direction::Upward);
}

GridFunction integrate_down(const GridFunction& f, int m) {
  return integrate(f, m, Direction::Downward);
}

double positive_area(std::span<const double> values, double step) noexcept {
  double sum = 0.0;
  for (double v : values) sum += v > 0.0 ? v : 0.0;
  return sum * step;
}

double negative_area(std::span<const double> values, double step) noexcept {
  double sum = 0.0;
  for (double v : values) sum += v < 0.0 ? -v : 0.0;
  return sum * step;
}

double positive_area(const GridFunction& f) noexcept {
  return positive_area(f.values(), f.spec().step());
}

double negative_area(const GridFunction& f) noexcept {
  return negative_area(f.values(), f.spec().step());
}

double area_ratio(double positive, double negative) {
  const double total = positive + negative;
  if (!(total > 0.0)) {
    throw Error(ErrorKind::DegenerateCurves,
                "coefficient undefined: the two curves coincide on the grid");
  }
  return positive / total;
}

double area_ratio(const GridFunction& f) { return area_ratio(positive_area(f), negative_area(f)); }

}  // namespace almostdom
