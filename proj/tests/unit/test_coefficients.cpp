#include <doctest.h>

#include <cmath>
#include <random>

#include "almostdom/coefficients.hpp"
#include "almostdom/error.hpp"
#include "oracles.hpp"

using namespace almostdom;

namespace {

// Frequency-matched sample: value v repeated round(prob * n) times.
std::vector<double> materialize(std::initializer_list<std::pair<double, double>> atoms,
                                std::size_t n) {
  std::vector<double> out;
  for (const auto& [v, p] : atoms) out.insert(out.end(), std::lround(p * n), v);
  return out;
}

std::vector<double> lognormal(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::lognormal_distribution<double> ln(0.0, sigma);
  std::vector<double> xs(n);
  for (double& x : xs) x = ln(gen);
  return xs;
}

const DominanceFamily kLdc{Family::Lorenz, 1, Direction::Upward};
const DominanceFamily kSdc{Family::SD, 1, Direction::Upward};

}  // namespace

TEST_CASE("family validation and names") {
  CHECK(kLdc.name() == "LDC");
  CHECK((DominanceFamily{Family::Lorenz, 2, Direction::Downward}.name()) == "2DLDC");
  CHECK((DominanceFamily{Family::InverseSD, 3, Direction::Upward}.name()) == "3UISDC");
  CHECK(kSdc.name() == "1SDC");
  CHECK_THROWS_AS((DominanceFamily{Family::Lorenz, 0, Direction::Upward}.validate()), Error);
  CHECK_THROWS_AS((DominanceFamily{Family::InverseSD, 1, Direction::Upward}.validate()), Error);
  CHECK_THROWS_AS((DominanceFamily{Family::InverseSD, 2, Direction::Downward}.validate()), Error);
  CHECK_NOTHROW((DominanceFamily{Family::InverseSD, 2, Direction::Upward}.validate()));
  CHECK_NOTHROW((DominanceFamily{Family::InverseSD, 3, Direction::Downward}.validate()));
}

TEST_CASE("identical samples give a zero curve and a degenerate coefficient") {
  const auto xs = lognormal(40, 0.8, 1);
  const EmpiricalDistribution d(xs);
  const auto phi = phi_curve(kLdc, d, d, GridSpec{});
  for (double v : phi.values()) CHECK(v == 0.0);
  try {
    coefficient(kLdc, d, d, GridSpec{});
    FAIL("expected DegenerateCurves");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateCurves);
  }
}

TEST_CASE("SD curve on frequency-matched discrete samples") {
  const auto x1 = materialize({{0.25, 0.5}, {1.0, 0.5}}, 24);
  const auto x2 = materialize({{0.5, 2.0 / 3.0}, {0.75, 1.0 / 3.0}}, 24);
  const GridSpec spec{1000, 0.0, 1.0};
  const auto phi = phi_curve(kSdc, EmpiricalDistribution(x1), EmpiricalDistribution(x2), spec);
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double x = spec.node(k);
    const double expected = x < 0.25 ? 0.0 : x < 0.5 ? 0.5 : x < 0.75 ? -1.0 / 6.0 : -0.5;
    CHECK(phi[k] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("SD coefficient on exact-population discrete samples") {
  // beta = 2 and beta = 8 laws materialized with 24 * beta observations.
  for (const auto& [beta, expected] : {std::pair{2.0, 3.0 / 7.0}, std::pair{8.0, 0.081081}}) {
    const std::size_t n = 24 * static_cast<std::size_t>(beta);
    const auto x1 = materialize({{0.25, 1.0 / beta}, {1.0, 1.0 - 1.0 / beta}}, n);
    const auto x2 = materialize({{0.5, 2.0 / 3.0}, {0.75, 1.0 / 3.0}}, n);
    const auto est = coefficient(kSdc, EmpiricalDistribution(x1), EmpiricalDistribution(x2),
                                 GridSpec{1000, 0.0, 1.0});
    CHECK(std::abs(est.c_hat - expected) < 1e-3);
  }
}

TEST_CASE("perfect equality against any sample gives a nonpositive degree-2 curve") {
  const std::vector<double> flat(30, 2.0);
  const auto xs = lognormal(30, 1.0, 4);
  const DominanceFamily f{Family::Lorenz, 2, Direction::Upward};
  const auto phi = phi_curve(f, EmpiricalDistribution(flat), EmpiricalDistribution(xs), GridSpec{});
  for (double v : phi.values()) CHECK(v <= 1e-15);
}

TEST_CASE("downward Lorenz curve equals the difference of integrated complements") {
  // phi_2^d = Ltilde_1 - Ltilde_2 with Ltilde_j(p) = int_p^1 (1 - L_j).
  const auto x1 = lognormal(25, 0.5, 7);
  const auto x2 = lognormal(31, 1.1, 8);
  const EmpiricalDistribution d1(x1);
  const EmpiricalDistribution d2(x2);
  const GridSpec spec{400, 0.0, 1.0};
  const auto phi = phi_curve({Family::Lorenz, 2, Direction::Downward}, d1, d2, spec);
  for (std::size_t k = 0; k < spec.n_points; k += 37) {
    double t1 = 0.0;
    double t2 = 0.0;
    for (std::size_t j = k; j < spec.n_points; ++j) {
      t1 += (1.0 - d1.lorenz(spec.node(j))) * spec.step();
      t2 += (1.0 - d2.lorenz(spec.node(j))) * spec.step();
    }
    CHECK(phi[k] == doctest::Approx(t1 - t2).epsilon(1e-10));
  }
}

TEST_CASE("inverse SD base curve is the integrated quantile") {
  const auto x1 = lognormal(20, 0.7, 9);
  const auto x2 = lognormal(20, 0.9, 10);
  const GridSpec spec{250, 0.0, 1.0};
  const auto phi = phi_curve({Family::InverseSD, 2, Direction::Upward}, EmpiricalDistribution(x1),
                             EmpiricalDistribution(x2), spec);
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double p = spec.node(k);
    const double expected =
        oracle::brute_integrated_quantile(x2, p) - oracle::brute_integrated_quantile(x1, p);
    CHECK(phi[k] == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("complement identity across families") {
  const auto x1 = lognormal(60, 0.6, 11);
  const auto x2 = lognormal(45, 0.9, 12);
  const EmpiricalDistribution d1(x1);
  const EmpiricalDistribution d2(x2);
  const DominanceFamily families[] = {
      kLdc,
      {Family::Lorenz, 3, Direction::Upward},
      {Family::Lorenz, 2, Direction::Downward},
      {Family::InverseSD, 2, Direction::Upward},
      {Family::InverseSD, 3, Direction::Downward},
      {Family::SD, 2, Direction::Upward},
  };
  for (const auto& f : families) {
    const GridSpec spec = family_grid(f, x1, x2, 1000);
    const double a = coefficient(f, d1, d2, spec).c_hat;
    const double b = coefficient(f, d2, d1, spec).c_hat;
    CHECK(std::abs(a + b - 1.0) < 1e-12);
  }
}

TEST_CASE("Lorenz coefficient is scale invariant") {
  const auto x1 = lognormal(80, 0.6, 13);
  const auto x2 = lognormal(70, 0.8, 14);
  auto y1 = x1;
  auto y2 = x2;
  for (double& v : y1) v *= 3.3;
  for (double& v : y2) v *= 0.01;
  for (int m = 1; m <= 3; ++m) {
    const DominanceFamily f{Family::Lorenz, m, Direction::Upward};
    const double a =
        coefficient(f, EmpiricalDistribution(x1), EmpiricalDistribution(x2), GridSpec{}).c_hat;
    const double b =
        coefficient(f, EmpiricalDistribution(y1), EmpiricalDistribution(y2), GridSpec{}).c_hat;
    CHECK(std::abs(a - b) < 1e-10);
  }
}

TEST_CASE("estimate carries sample-size quantities") {
  const auto x1 = lognormal(30, 0.6, 15);
  const auto x2 = lognormal(70, 0.8, 16);
  const auto est = coefficient(kLdc, EmpiricalDistribution(x1), EmpiricalDistribution(x2), {});
  CHECK(est.T_n == doctest::Approx(30.0 * 70.0 / 100.0));
  CHECK(est.lambda_hat == doctest::Approx(0.3));
  CHECK(est.c_hat == doctest::Approx(est.pos_area / (est.pos_area + est.neg_area)));
}

TEST_CASE("grid requirements") {
  const std::vector<double> x1{0.1, 0.5, 0.9};
  const std::vector<double> x2{0.2, 0.4, 2.0};
  const EmpiricalDistribution d1(x1);
  const EmpiricalDistribution d2(x2);
  CHECK_THROWS_AS(phi_curve(kSdc, d1, d2, GridSpec{100, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(phi_curve(kLdc, d1, d2, GridSpec{100, 0.0, 2.0}), Error);
  const GridSpec hull = family_grid(kSdc, x1, x2, 100);
  CHECK(hull.lo == 0.1);
  CHECK(hull.hi == 2.0);
  const GridSpec given = family_grid(kSdc, x1, x2, 100, -1.0, 3.0);
  CHECK(given.lo == -1.0);
  CHECK(family_grid(kLdc, x1, x2, 100).is_unit());
}

TEST_CASE("Lorenz needs a positive mean") {
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  const std::vector<double> xs{1.0, 2.0};
  try {
    phi_curve(kLdc, EmpiricalDistribution(zeros), EmpiricalDistribution(xs), {});
    FAIL("expected ZeroMean");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroMean);
  }
}

TEST_CASE("rank measures") {
  const auto cubic = PreferenceFunction::cubic();
  const std::vector<double> flat(10, 3.0);
  const auto m_flat = rank_measures(EmpiricalDistribution(flat), cubic);
  CHECK(m_flat.welfare == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(std::abs(m_flat.inequality) < 1e-6);

  const auto xs = lognormal(50, 1.0, 17);  // 50 divides the grid size
  const auto m_uniform = rank_measures(EmpiricalDistribution(xs), PreferenceFunction::uniform());
  CHECK(m_uniform.welfare == doctest::Approx(m_uniform.mean).epsilon(1e-12));
  CHECK(std::abs(m_uniform.inequality) < 1e-12);

  // 2 * int_{1/2}^1 3 (1 - t)^2 dt = 1/4.
  const std::vector<double> two_point{0.0, 2.0};
  const auto m_two = rank_measures(EmpiricalDistribution(two_point), cubic);
  CHECK(m_two.welfare == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(m_two.inequality == doctest::Approx(0.75).epsilon(1e-5));

  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const auto ys = lognormal(40, 0.9, seed);
    const auto m = rank_measures(EmpiricalDistribution(ys), cubic);
    CHECK(std::abs(m.welfare - m.mean * (1.0 - m.inequality)) < 1e-12);
  }
}
