#pragma once

// Uniform midpoint grids, iterated integration operators and the area maps
// whose ratio is every dominance coefficient.

#include <cstddef>
#include <span>
#include <vector>

namespace almostdom {

enum class Direction { Upward, Downward };

/// Midpoint grid on [lo, hi]: node k (0-based) sits at lo + (k + 0.5) * step.
struct GridSpec {
  std::size_t n_points = 1000;
  double lo = 0.0;
  double hi = 1.0;

  double step() const noexcept { return (hi - lo) / static_cast<double>(n_points); }
  double node(std::size_t k) const noexcept {
    return lo + (static_cast<double>(k) + 0.5) * step();
  }
  std::vector<double> nodes() const;
  bool is_unit() const noexcept { return lo == 0.0 && hi == 1.0; }

  /// Throws InvalidConfig unless n_points >= 2 and lo < hi (both finite).
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// A real function tabulated at the nodes of a GridSpec.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(GridSpec spec);  // zero-filled
  GridFunction(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double scale) noexcept;

 private:
  GridSpec spec_{};
  std::vector<double> values_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(double scale, GridFunction f);
GridFunction operator-(GridFunction f);

/// Throws GridMismatch when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b);

// In-place kernels used by the hot loops. `passes` cumulative sums are
// applied; each pass includes the current node (closed rectangle rule).
void cumulate_up(std::span<double> values, double step, int passes) noexcept;
void cumulate_down(std::span<double> values, double step, int passes) noexcept;

/// Applies the degree-m operator (m - 1 passes) in the given direction.
void apply_integration(std::span<double> values, double step, int degree,
                       Direction direction) noexcept;

/// Degree-m upward operator: identity for m == 1, otherwise m - 1 prefix
/// integrations from the left end of the grid. Throws InvalidFamilyDegree
/// for m < 1.
GridFunction integrate_up(const GridFunction& f, int m);
/// Mirror of integrate_up with suffix integrations toward the right end.
GridFunction integrate_down(const GridFunction& f, int m);
GridFunction integrate(const GridFunction& f, int m, Direction direction);

/// step * sum(max(f, 0)).
double positive_area(std::span<const double> values, double step) noexcept;
/// step * sum(max(-f, 0)).
double negative_area(std::span<const double> values, double step) noexcept;
double positive_area(const GridFunction& f) noexcept;
double negative_area(const GridFunction& f) noexcept;

/// positive / (positive + negative). Throws DegenerateCurves when both
/// areas vanish: the two curves coincide on the grid and the coefficient is
/// undefined.
double area_ratio(const GridFunction& f);
double area_ratio(double positive, double negative);

}  // namespace almostdom
