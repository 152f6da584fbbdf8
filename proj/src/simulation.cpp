#include "almostdom/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "almostdom/error.hpp"
#include "almostdom/parallel.hpp"

namespace almostdom {

// ---------------------------------------------------------------------------
// Double Pareto

DoublePareto::DoublePareto(double alpha, double beta, double scale)
    : alpha_(alpha), beta_(beta), scale_(scale) {
  if (!(alpha > 0.0 && beta > 0.0 && scale > 0.0)) {
    throw Error(ErrorKind::DomainError, "double Pareto parameters must be positive");
  }
  if (!satisfies_moment_condition()) {
    std::cerr << "warning: dP(" << alpha << ", " << beta
              << ") has alpha <= 2; the limiting theory needs alpha > 2\n";
  }
}

double DoublePareto::pdf(double x) const noexcept {
  if (!(x > 0.0)) return 0.0;
  const double c = alpha_ * beta_ / (alpha_ + beta_);
  const double u = x / scale_;
  return u < 1.0 ? c / scale_ * std::pow(u, beta_ - 1.0) : c / scale_ * std::pow(u, -alpha_ - 1.0);
}

double DoublePareto::cdf(double x) const noexcept {
  if (!(x > 0.0)) return 0.0;
  const double u = x / scale_;
  const double p0 = junction();
  return u < 1.0 ? p0 * std::pow(u, beta_) : 1.0 - (1.0 - p0) * std::pow(u, -alpha_);
}

double DoublePareto::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::DomainError, "quantile level must lie in (0, 1)");
  }
  const double p0 = junction();
  if (p <= p0) return scale_ * std::pow(p / p0, 1.0 / beta_);
  return scale_ * std::pow((1.0 - p0) / (1.0 - p), 1.0 / alpha_);
}

double DoublePareto::integrated_quantile(double p) const noexcept {
  p = std::clamp(p, 0.0, 1.0);
  const double p0 = junction();
  const double lower_power = (beta_ + 1.0) / beta_;
  if (p <= p0) {
    return scale_ * p0 * (beta_ / (beta_ + 1.0)) * std::pow(p / p0, lower_power);
  }
  const double below = scale_ * p0 * beta_ / (beta_ + 1.0);
  const double q = 1.0 - p0;
  const double e = 1.0 - 1.0 / alpha_;
  if (alpha_ <= 1.0 && p >= 1.0) return std::numeric_limits<double>::infinity();
  if (alpha_ == 1.0) return below + scale_ * q * std::log(q / (1.0 - p));
  return below + scale_ * std::pow(q, 1.0 / alpha_) * (std::pow(q, e) - std::pow(1.0 - p, e)) / e;
}

double DoublePareto::mean() const noexcept {
  if (alpha_ <= 1.0) return std::numeric_limits<double>::infinity();
  return integrated_quantile(1.0);
}

double dp_quantile(const DoublePareto& dgp, double p) { return dgp.quantile(p); }

// ---------------------------------------------------------------------------
// Discrete laws

DiscreteLaw::DiscreteLaw(std::vector<std::pair<double, double>> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::DomainError, "discrete law needs atoms");
  std::sort(atoms_.begin(), atoms_.end());
  double total = 0.0;
  for (const auto& [value, prob] : atoms_) {
    if (!std::isfinite(value)) throw Error(ErrorKind::DomainError, "atoms must be finite");
    if (!(prob > 0.0)) throw Error(ErrorKind::DomainError, "atom probabilities must be positive");
    total += prob;
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::DomainError, "atom probabilities must sum to 1");
  }
  cumulative_.back() = 1.0;
}

double DiscreteLaw::cdf(double x) const noexcept {
  double out = 0.0;
  for (std::size_t i = 0; i < atoms_.size() && atoms_[i].first <= x; ++i) out = cumulative_[i];
  return out;
}

double DiscreteLaw::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::DomainError, "quantile level must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (cumulative_[i] >= p - 1e-15) return atoms_[i].first;
  }
  return atoms_.back().first;
}

double DiscreteLaw::integrated_quantile(double p) const noexcept {
  p = std::clamp(p, 0.0, 1.0);
  double sum = 0.0;
  double before = 0.0;
  for (std::size_t i = 0; i < atoms_.size() && before < p; ++i) {
    sum += atoms_[i].first * std::min(atoms_[i].second, p - before);
    before = cumulative_[i];
  }
  return sum;
}

double DiscreteLaw::mean() const noexcept {
  double sum = 0.0;
  for (const auto& [value, prob] : atoms_) sum += value * prob;
  return sum;
}

// ---------------------------------------------------------------------------
// Variant helpers

double dgp_cdf(const Dgp& dgp, double x) {
  return std::visit([x](const auto& d) { return d.cdf(x); }, dgp);
}

double dgp_quantile(const Dgp& dgp, double p) {
  return std::visit([p](const auto& d) { return d.quantile(p); }, dgp);
}

double dgp_integrated_quantile(const Dgp& dgp, double p) {
  return std::visit([p](const auto& d) { return d.integrated_quantile(p); }, dgp);
}

double dgp_mean(const Dgp& dgp) {
  return std::visit([](const auto& d) { return d.mean(); }, dgp);
}

std::string describe(const Dgp& dgp) {
  std::ostringstream out;
  if (const auto* dp = std::get_if<DoublePareto>(&dgp)) {
    out << "dP(" << dp->alpha() << "," << dp->beta() << ")";
  } else {
    const auto& law = std::get<DiscreteLaw>(dgp);
    out << "discrete{";
    for (std::size_t i = 0; i < law.atoms().size(); ++i) {
      if (i) out << ";";
      out << law.atoms()[i].first << ":" << law.atoms()[i].second;
    }
    out << "}";
  }
  return out.str();
}

Sample sample_dgp(const Dgp& dgp, std::size_t n, Rng& rng) {
  Sample out;
  out.values.resize(n);
  for (double& v : out.values) v = dgp_quantile(dgp, rng.uniform_open());
  out.label = describe(dgp);
  return out;
}

// ---------------------------------------------------------------------------
// Population coefficients

namespace {

void population_base(const Dgp& dgp, Family family, const GridSpec& spec, std::span<double> out) {
  const double mean = family == Family::Lorenz ? dgp_mean(dgp) : 1.0;
  if (family == Family::Lorenz && !(mean > 0.0 && std::isfinite(mean))) {
    throw Error(ErrorKind::ZeroMean, "population Lorenz curve needs a finite positive mean");
  }
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double t = spec.node(k);
    switch (family) {
      case Family::Lorenz: out[k] = dgp_integrated_quantile(dgp, t) / mean; break;
      case Family::InverseSD: out[k] = dgp_integrated_quantile(dgp, t); break;
      case Family::SD: out[k] = dgp_cdf(dgp, t); break;
    }
  }
}

// Exact area ratio of F1 - F2 for two step CDFs on [lo, hi].
double exact_step_sd(const DiscreteLaw& a, const DiscreteLaw& b, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (const auto& atom : a.atoms()) cuts.push_back(atom.first);
  for (const auto& atom : b.atoms()) cuts.push_back(atom.first);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double left = std::max(cuts[i], lo);
    const double right = std::min(cuts[i + 1], hi);
    if (!(right > left)) continue;
    const double diff = a.cdf(left) - b.cdf(left);
    if (diff > 0.0) pos += diff * (right - left);
    if (diff < 0.0) neg -= diff * (right - left);
  }
  return area_ratio(pos, neg);
}

}  // namespace

GridFunction population_phi(const Dgp& dgp1, const Dgp& dgp2, const DominanceFamily& family,
                            const GridSpec& spec) {
  family.validate();
  spec.validate();
  if (family.family != Family::SD && !spec.is_unit()) {
    throw Error(ErrorKind::InvalidConfig, "Lorenz and inverse SD curves live on [0, 1]");
  }
  const bool sd = family.family == Family::SD;
  GridFunction phi(spec);
  std::vector<double> other(spec.n_points);
  population_base(sd ? dgp1 : dgp2, family.family, spec, phi.values());
  population_base(sd ? dgp2 : dgp1, family.family, spec, other);
  auto values = phi.values();
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= other[k];
  apply_integration(values, spec.step(), family.operator_degree(), family.operator_direction());
  return phi;
}

double population_coefficient(const Dgp& dgp1, const Dgp& dgp2, const DominanceFamily& family,
                              std::size_t resolution, double domain_lo, double domain_hi) {
  family.validate();
  GridSpec spec{resolution, 0.0, 1.0};
  if (family.family == Family::SD) {
    const auto* a = std::get_if<DiscreteLaw>(&dgp1);
    const auto* b = std::get_if<DiscreteLaw>(&dgp2);
    if (!(domain_lo < domain_hi)) {
      if (!(a && b)) {
        throw Error(ErrorKind::InvalidConfig, "SD population coefficient needs a domain");
      }
      domain_lo = std::min(a->min(), b->min());
      domain_hi = std::max(a->max(), b->max());
    }
    if (a && b && family.degree == 1) return exact_step_sd(*a, *b, domain_lo, domain_hi);
    spec.lo = domain_lo;
    spec.hi = domain_hi;
  }
  return area_ratio(population_phi(dgp1, dgp2, family, spec));
}

// ---------------------------------------------------------------------------
// Monte Carlo

void MonteCarloStudy::validate() const {
  family.validate();
  grid.validate();
  cfg.validate();
  if (n1 == 0 || n2 == 0) throw Error(ErrorKind::InvalidConfig, "sample sizes must be positive");
  if (n_reps == 0) throw Error(ErrorKind::InvalidConfig, "n_reps must be positive");
  if (scheme == SamplingScheme::MatchedPairs && n1 != n2) {
    throw Error(ErrorKind::InvalidConfig, "matched pairs need n1 == n2");
  }
}

MonteCarloReport monte_carlo(const MonteCarloStudy& study) {
  study.validate();
  struct Rep {
    bool used = false;
    double estimate = 0.0;
    double width = 0.0;
    bool covered = false;
  };
  std::vector<Rep> reps(study.n_reps);
  InferenceConfig inner = study.cfg;
  inner.threads = 1;

  parallel_for(study.n_reps, resolve_threads(study.cfg.threads), [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(study.cfg.seed, r);
    Rng rng(derive_seed(rep_seed, 0));
    Sample first = sample_dgp(study.dgp1, study.n1, rng);
    Sample second = sample_dgp(study.dgp2, study.n2, rng);
    const TwoSample data =
        study.scheme == SamplingScheme::MatchedPairs
            ? TwoSample::matched({std::move(first.values), std::move(second.values)})
            : TwoSample::independent(std::move(first), std::move(second));
    InferenceConfig cfg = inner;
    cfg.seed = derive_seed(rep_seed, 1);
    BootstrapResult result;
    try {
      result = bootstrap_ci(data, study.family, study.scheme, study.grid, cfg);
    } catch (const Error& e) {
      const bool degenerate =
          e.kind() == ErrorKind::DegenerateCurves || e.kind() == ErrorKind::ZeroMean;
      if (degenerate && study.cfg.skip_degenerate) return;
      throw;
    }
    Rep& rep = reps[r];
    rep.used = true;
    rep.estimate = result.estimate.c_hat;
    rep.width = result.ci_hi - result.ci_lo;
    rep.covered = result.ci_lo <= study.true_c && study.true_c <= result.ci_hi;
  });

  MonteCarloReport report;
  report.n_reps = study.n_reps;
  report.t_n = study.cfg.t_n;
  report.true_c = study.true_c;
  std::size_t hits = 0;
  for (const Rep& rep : reps) {
    if (!rep.used) continue;
    report.estimates.push_back(rep.estimate);
    report.widths.push_back(rep.width);
    report.covered.push_back(rep.covered);
    hits += rep.covered ? 1 : 0;
  }
  report.effective_reps = report.estimates.size();
  if (report.effective_reps == 0) {
    throw Error(ErrorKind::DegenerateCurves, "every Monte Carlo repetition was degenerate");
  }
  const double count = static_cast<double>(report.effective_reps);
  double sum = 0.0;
  for (double c : report.estimates) sum += c;
  report.mean = sum / count;
  report.bias = report.mean - study.true_c;
  double var = 0.0;
  for (double c : report.estimates) var += (c - report.mean) * (c - report.mean);
  report.se = std::sqrt(var / count);
  report.rmse = std::sqrt(report.bias * report.bias + report.se * report.se);
  report.cr = static_cast<double>(hits) / count;
  return report;
}

// ---------------------------------------------------------------------------
// Presets

std::pair<DiscreteLaw, DiscreteLaw> sdc_laws(double beta) {
  if (!(beta > 1.0)) throw Error(ErrorKind::DomainError, "sdc beta must exceed 1");
  return {DiscreteLaw({{0.25, 1.0 / beta}, {1.0, 1.0 - 1.0 / beta}}),
          DiscreteLaw({{0.5, 2.0 / 3.0}, {0.75, 1.0 / 3.0}})};
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const char* family : {"ldc", "uisdc", "sdc"}) {
    for (const char* tag : {"a", "b", "c", "d"}) out.push_back(std::string(family) + "-" + tag);
  }
  return out;
}

Preset find_preset(const std::string& name) {
  const auto dash = name.rfind('-');
  if (dash == std::string::npos || dash + 2 != name.size() || name[dash + 1] < 'a' ||
      name[dash + 1] > 'd') {
    throw Error(ErrorKind::InvalidConfig, "unknown preset '" + name + "'");
  }
  const std::string family = name.substr(0, dash);
  const int idx = name[dash + 1] - 'a';
  if (family == "ldc") {
    return {name, DoublePareto(3.0, 1.5), DoublePareto(2.1, 2.0 + idx),
            {Family::Lorenz, 1, Direction::Upward}, 0.0, 1.0};
  }
  if (family == "uisdc") {
    return {name, DoublePareto(2.1, 1.5), DoublePareto(200.0, 2.2 + 0.1 * idx),
            {Family::InverseSD, 3, Direction::Upward}, 0.0, 1.0};
  }
  if (family == "sdc") {
    const double betas[] = {8.0, 6.0, 4.0, 2.0};
    auto [a, b] = sdc_laws(betas[idx]);
    return {name, std::move(a), std::move(b), {Family::SD, 1, Direction::Upward}, 0.0, 1.0};
  }
  throw Error(ErrorKind::InvalidConfig, "unknown preset '" + name + "'");
}

}  // namespace almostdom
