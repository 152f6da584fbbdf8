#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "almostdom/error.hpp"
#include "almostdom/simulation.hpp"
#include "oracles.hpp"

using namespace almostdom;

TEST_CASE("double Pareto cdf matches quadrature of the density") {
  const DoublePareto d(3.0, 1.5);
  for (double x : {0.05, 0.3, 0.9, 1.0, 1.7, 4.0, 25.0}) {
    CHECK(d.cdf(x) == doctest::Approx(oracle::dp_cdf(3.0, 1.5, x)).epsilon(1e-10));
    CHECK(d.pdf(x) == doctest::Approx(oracle::dp_pdf(3.0, 1.5, x)).epsilon(1e-12));
  }
  CHECK(d.cdf(0.0) == 0.0);
  CHECK(d.cdf(-1.0) == 0.0);
}

TEST_CASE("double Pareto quantile") {
  const DoublePareto d(2.0, 1.0);
  CHECK(d.junction() == doctest::Approx(2.0 / 3.0));
  CHECK(d.quantile(2.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
  const DoublePareto e(2.1, 3.0);
  double prev = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double p = k / 200.0;
    const double q = e.quantile(p);
    CHECK(q > prev);
    prev = q;
    CHECK(e.cdf(q) == doctest::Approx(p).epsilon(1e-12));
  }
  for (double p : {0.1, 0.5, 0.9, 0.999}) {
    CHECK(e.quantile(p) == doctest::Approx(oracle::dp_quantile(2.1, 3.0, p)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(e.quantile(0.0), Error);
  CHECK_THROWS_AS(e.quantile(1.0), Error);
  CHECK(dp_quantile(e, 0.3) == e.quantile(0.3));
}

TEST_CASE("double Pareto moments and validation") {
  const DoublePareto d(3.0, 1.5);
  CHECK(d.satisfies_moment_condition());
  CHECK(d.mean() == doctest::Approx(oracle::dp_integrated_quantile(3.0, 1.5, 1.0)).epsilon(1e-8));
  for (double p : {0.2, 0.6667, 0.95}) {
    CHECK(d.integrated_quantile(p) ==
          doctest::Approx(oracle::dp_integrated_quantile(3.0, 1.5, p)).epsilon(1e-10));
  }
  CHECK(std::isinf(DoublePareto(1.0, 2.0).mean()));
  CHECK_THROWS_AS(DoublePareto(0.0, 1.0), Error);
  CHECK_THROWS_AS(DoublePareto(2.0, -1.0), Error);
}

TEST_CASE("discrete law") {
  const DiscreteLaw law({{1.0, 0.25}, {0.25, 0.75}});
  CHECK(law.min() == 0.25);
  CHECK(law.max() == 1.0);
  CHECK(law.cdf(0.5) == doctest::Approx(0.75));
  CHECK(law.quantile(0.75) == 0.25);
  CHECK(law.quantile(0.76) == 1.0);
  CHECK(law.mean() == doctest::Approx(0.4375));
  CHECK(law.integrated_quantile(1.0) == doctest::Approx(0.4375));
  CHECK_THROWS_AS(DiscreteLaw({{1.0, 0.5}, {2.0, 0.4}}), Error);
  CHECK_THROWS_AS(DiscreteLaw({{1.0, 1.2}, {2.0, -0.2}}), Error);

  Rng rng(1);
  const Dgp point = DiscreteLaw({{3.0, 1.0}});
  const auto s = sample_dgp(point, 100, rng);
  CHECK(std::all_of(s.values.begin(), s.values.end(), [](double v) { return v == 3.0; }));
}

TEST_CASE("sampling follows the law") {
  const Dgp d = DoublePareto(3.0, 1.5);
  Rng rng(123);
  auto s = sample_dgp(d, 1000000, rng).values;
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = dgp_cdf(d, s[i]);
    ks = std::max({ks, std::abs(f - (i + 1) / n), std::abs(f - i / n)});
  }
  CHECK(ks < 0.002);

  Rng a(9);
  Rng b(9);
  CHECK(sample_dgp(d, 50, a).values == sample_dgp(d, 50, b).values);
}

TEST_CASE("population coefficients") {
  const auto ldc = find_preset("ldc-b");
  const double c = population_coefficient(ldc.dgp1, ldc.dgp2, ldc.family);
  const double swapped = population_coefficient(ldc.dgp2, ldc.dgp1, ldc.family);
  CHECK(std::abs(c + swapped - 1.0) < 1e-6);

  // Independent oracle: trapezoid ratio of quadrature Lorenz curves.
  std::vector<double> p(2001);
  std::vector<double> f(p.size());
  const double mu1 = oracle::dp_integrated_quantile(3.0, 1.5, 1.0);
  const double mu2 = oracle::dp_integrated_quantile(2.1, 3.0, 1.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = k / 2000.0;
    f[k] = oracle::dp_integrated_quantile(2.1, 3.0, p[k]) / mu2 -
           oracle::dp_integrated_quantile(3.0, 1.5, p[k]) / mu1;
  }
  CHECK(std::abs(c - oracle::trapezoid_ratio(p, f)) < 1e-4);

  const Dgp same = DoublePareto(3.0, 1.5);
  CHECK_THROWS_AS(population_coefficient(same, same, ldc.family), Error);
}

TEST_CASE("exact stochastic dominance coefficients for the discrete laws") {
  const DominanceFamily sd{Family::SD, 1, Direction::Upward};
  // beta = 4: positive area 0.25 * (1/4) = 1/16, negative area
  // 0.25 * (2/3 - 1/4) + 0.25 * (1 - 1/4) = 7/24, ratio 3/17.
  {
    const auto [a, b] = sdc_laws(4.0);
    CHECK(std::abs(population_coefficient(a, b, sd) - 3.0 / 17.0) < 1e-6);
  }
  {
    const auto [a, b] = sdc_laws(2.0);
    CHECK(std::abs(population_coefficient(a, b, sd) - 3.0 / 7.0) < 1e-6);
  }
  const auto [a, b] = sdc_laws(8.0);
  const double c = population_coefficient(a, b, sd);
  CHECK(std::abs(population_coefficient(b, a, sd) + c - 1.0) < 1e-9);
  CHECK_THROWS_AS(sdc_laws(1.0), Error);
}

TEST_CASE("population curve on the grid") {
  const auto preset = find_preset("uisdc-a");
  const GridSpec spec{50, 0.0, 1.0};
  const auto phi = population_phi(preset.dgp1, preset.dgp2, preset.family, spec);
  CHECK(phi.size() == 50);
  CHECK(phi.spec() == spec);
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 12);
  for (const auto& name : preset_names()) CHECK(find_preset(name).name == name);
  CHECK_THROWS_AS(find_preset("ldc-e"), Error);
  CHECK_THROWS_AS(find_preset("xyz-a"), Error);
  CHECK_THROWS_AS(find_preset("ldc"), Error);
}

namespace {

MonteCarloStudy small_study(std::size_t reps) {
  const auto preset = find_preset("sdc-a");
  MonteCarloStudy study{.dgp1 = preset.dgp1,
                        .dgp2 = preset.dgp2,
                        .family = preset.family,
                        .scheme = SamplingScheme::MatchedPairs,
                        .n1 = 100,
                        .n2 = 100,
                        .grid = GridSpec{1000, 0.0, 1.0},
                        .cfg = {},
                        .n_reps = reps,
                        .true_c = 0.0};
  study.cfg.t_n = 0.001;
  study.cfg.n_boot = 50;
  study.cfg.seed = 31;
  study.true_c = population_coefficient(preset.dgp1, preset.dgp2, preset.family);
  return study;
}

}  // namespace

TEST_CASE("Monte Carlo summaries") {
  const auto one = monte_carlo(small_study(1));
  CHECK(one.se == 0.0);
  CHECK(one.effective_reps == 1);

  const auto short_run = monte_carlo(small_study(10));
  const auto long_run = monte_carlo(small_study(20));
  REQUIRE(long_run.estimates.size() == 20);
  for (std::size_t r = 0; r < 10; ++r) {
    CHECK(short_run.estimates[r] == long_run.estimates[r]);
    CHECK(short_run.widths[r] == long_run.widths[r]);
    CHECK(short_run.covered[r] == long_run.covered[r]);
  }
  CHECK(one.estimates[0] == long_run.estimates[0]);

  const auto& e = long_run.estimates;
  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= e.size();
  CHECK(long_run.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(long_run.bias == doctest::Approx(mean - long_run.true_c).epsilon(1e-12));
  CHECK(long_run.se == doctest::Approx(std::sqrt(oracle::variance(e))).epsilon(1e-10));
  double mse = 0.0;
  for (double v : e) mse += (v - long_run.true_c) * (v - long_run.true_c);
  CHECK(long_run.rmse == doctest::Approx(std::sqrt(mse / e.size())).epsilon(1e-10));
  const auto hits = std::count(long_run.covered.begin(), long_run.covered.end(), true);
  CHECK(long_run.cr == doctest::Approx(static_cast<double>(hits) / 20.0));

  auto bad = small_study(5);
  bad.n2 = 50;
  CHECK_THROWS_AS(monte_carlo(bad), Error);
}
