#include "almostdom/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "almostdom/covariance.hpp"
#include "almostdom/error.hpp"
#include "almostdom/parallel.hpp"

namespace almostdom {

void InferenceConfig::validate() const {
  if (!(t_n > 0.0) || !std::isfinite(t_n)) {
    throw Error(ErrorKind::InvalidConfig, "t_n must be a positive finite number");
  }
  if (!(xi0 > 0.0)) throw Error(ErrorKind::InvalidConfig, "xi0 must be positive");
  if (n_boot == 0) throw Error(ErrorKind::InvalidConfig, "n_boot must be positive");
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, 0.5)");
  }
}

std::size_t ContactSets::count(Contact which) const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), which));
}

std::vector<bool> ContactSets::mask(Contact which) const {
  std::vector<bool> out(labels_.size());
  for (std::size_t k = 0; k < labels_.size(); ++k) out[k] = labels_[k] == which;
  return out;
}

ContactSets contact_sets(const GridFunction& phi_hat, const GridFunction& sigma_hat, double T_n,
                         double t_n, double xi0) {
  require_same_grid(phi_hat.spec(), sigma_hat.spec());
  if (!(T_n > 0.0)) throw Error(ErrorKind::InvalidConfig, "T_n must be positive");
  const double root_t = std::sqrt(T_n);
  std::vector<Contact> labels(phi_hat.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const double z = root_t * phi_hat[k] / std::max(xi0, sigma_hat[k]);
    labels[k] = z > t_n ? Contact::Plus : (z < -t_n ? Contact::Minus : Contact::Zero);
  }
  return ContactSets(std::move(labels));
}

ContactSets contact_sets(const GridFunction& phi_hat, const GridFunction& sigma_hat, double T_n,
                         const InferenceConfig& cfg) {
  return contact_sets(phi_hat, sigma_hat, T_n, cfg.t_n, cfg.xi0);
}

DirectionalDerivative::DirectionalDerivative(ContactSets sets, const GridFunction& phi_hat)
    : sets_(std::move(sets)),
      pos_(almostdom::positive_area(phi_hat)),
      neg_(almostdom::negative_area(phi_hat)),
      step_(phi_hat.spec().step()) {
  if (sets_.size() != phi_hat.size()) {
    throw Error(ErrorKind::GridMismatch, "contact sets and phi have different sizes");
  }
  if (!(pos_ + neg_ > 0.0)) {
    throw Error(ErrorKind::DegenerateCurves, "derivative undefined: phi has no area");
  }
}

double DirectionalDerivative::operator()(std::span<const double> h) const {
  double d_pos = 0.0;
  double d_neg = 0.0;
  const auto labels = sets_.labels();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const double v = h[k];
    switch (labels[k]) {
      case Contact::Plus: d_pos += v; break;
      case Contact::Minus: d_neg -= v; break;
      case Contact::Zero:
        if (v > 0.0) {
          d_pos += v;
        } else {
          d_neg -= v;
        }
        break;
    }
  }
  d_pos *= step_;
  d_neg *= step_;
  const double total = pos_ + neg_;
  return (d_pos * neg_ - pos_ * d_neg) / (total * total);
}

double derivative(const GridFunction& h, const ContactSets& sets, const GridFunction& phi_hat) {
  require_same_grid(h.spec(), phi_hat.spec());
  return DirectionalDerivative(sets, phi_hat)(h.values());
}

double bootstrap_quantile(std::span<const double> sorted, double beta) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidConfig, "no bootstrap draws");
  const double scaled = beta * static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

// ---------------------------------------------------------------------------
// Resampling

namespace {

std::vector<std::uint32_t> argsort(const std::vector<double>& values) {
  std::vector<std::uint32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  return order;
}

void expand_counts(const std::vector<double>& sorted, const std::vector<std::uint32_t>& counts,
                   std::vector<double>& out) {
  out.clear();
  for (std::size_t r = 0; r < sorted.size(); ++r) out.insert(out.end(), counts[r], sorted[r]);
}

void expand_counts(const std::vector<double>& values, const std::vector<std::uint32_t>& order,
                   const std::vector<std::uint32_t>& counts, std::vector<double>& out) {
  out.clear();
  for (const std::uint32_t i : order) out.insert(out.end(), counts[i], values[i]);
}

}  // namespace

Resampler::Resampler(const TwoSample& data, SamplingScheme scheme)
    : scheme_(scheme),
      first_(data.first().begin(), data.first().end()),
      second_(data.second().begin(), data.second().end()) {
  data.require_scheme(scheme);
  if (first_.size() > std::numeric_limits<std::uint32_t>::max() ||
      second_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidConfig, "sample too large for the resampler");
  }
  if (scheme_ == SamplingScheme::MatchedPairs) {
    order1_ = argsort(first_);
    order2_ = argsort(second_);
  } else {
    sorted1_ = first_;
    sorted2_ = second_;
    std::sort(sorted1_.begin(), sorted1_.end());
    std::sort(sorted2_.begin(), sorted2_.end());
  }
}

void Resampler::draw_sorted(Rng& rng, Workspace& ws, std::vector<double>& sorted1,
                            std::vector<double>& sorted2) const {
  const std::size_t n1 = first_.size();
  const std::size_t n2 = second_.size();
  if (scheme_ == SamplingScheme::MatchedPairs) {
    ws.counts1.assign(n1, 0);
    for (std::size_t i = 0; i < n1; ++i) ++ws.counts1[rng.below(n1)];
    expand_counts(first_, order1_, ws.counts1, sorted1);
    expand_counts(second_, order2_, ws.counts1, sorted2);
    return;
  }
  ws.counts1.assign(n1, 0);
  ws.counts2.assign(n2, 0);
  for (std::size_t i = 0; i < n1; ++i) ++ws.counts1[rng.below(n1)];
  for (std::size_t i = 0; i < n2; ++i) ++ws.counts2[rng.below(n2)];
  expand_counts(sorted1_, ws.counts1, sorted1);
  expand_counts(sorted2_, ws.counts2, sorted2);
}

TwoSample Resampler::draw_dataset(Rng& rng) const {
  const std::size_t n1 = first_.size();
  const std::size_t n2 = second_.size();
  if (scheme_ == SamplingScheme::MatchedPairs) {
    PairedSample pairs;
    pairs.first.resize(n1);
    pairs.second.resize(n1);
    for (std::size_t i = 0; i < n1; ++i) {
      const std::size_t j = rng.below(n1);
      pairs.first[i] = first_[j];
      pairs.second[i] = second_[j];
    }
    return TwoSample::matched(std::move(pairs));
  }
  Sample a;
  Sample b;
  a.values.resize(n1);
  b.values.resize(n2);
  for (double& v : a.values) v = first_[rng.below(n1)];
  for (double& v : b.values) v = second_[rng.below(n2)];
  return TwoSample::independent(std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// Bootstrap core

namespace {

constexpr double kSkipped = std::numeric_limits<double>::quiet_NaN();

// draws[c][b] = derivative_c(sqrt(T_n) (phi*_b - phi_hat)). Replicate b uses
// the stream derive_seed(seed, b). Degenerate replicates become NaN in skip
// mode and raise NonFiniteDraw otherwise.
std::vector<std::vector<double>> replicate_draws(const Resampler& resampler,
                                                 const DominanceFamily& family,
                                                 const GridSpec& spec,
                                                 const CoefficientEstimate& est,
                                                 std::span<const DirectionalDerivative> derivs,
                                                 std::size_t n_boot, std::uint64_t seed,
                                                 bool skip_degenerate, unsigned threads) {
  std::vector<std::vector<double>> draws(derivs.size(), std::vector<double>(n_boot, kSkipped));
  const double root_t = std::sqrt(est.T_n);
  parallel_for(n_boot, resolve_threads(threads), [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    Resampler::Workspace ws;
    std::vector<double> sorted1;
    std::vector<double> sorted2;
    resampler.draw_sorted(rng, ws, sorted1, sorted2);
    const auto fail = [&](const std::string& why) {
      if (skip_degenerate) return;
      throw Error(ErrorKind::NonFiniteDraw, "bootstrap replicate " + std::to_string(b) +
                                                " (seed " + std::to_string(seed) + "): " + why);
    };
    GridFunction h;
    try {
      const auto d1 = EmpiricalDistribution::from_sorted(std::move(sorted1));
      const auto d2 = EmpiricalDistribution::from_sorted(std::move(sorted2));
      h = phi_curve(family, d1, d2, spec);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroMean) throw;
      fail(e.what());
      return;
    }
    auto values = h.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      values[k] = root_t * (values[k] - est.phi[k]);
    }
    std::vector<double> row(derivs.size());
    for (std::size_t c = 0; c < derivs.size(); ++c) {
      row[c] = derivs[c](values);
      if (!std::isfinite(row[c])) {
        fail("non-finite draw");
        return;
      }
    }
    for (std::size_t c = 0; c < derivs.size(); ++c) draws[c][b] = row[c];
  });
  return draws;
}

struct Interval {
  double q_lo;
  double q_hi;
  double lo;
  double hi;
};

Interval interval_from_draws(std::vector<double> sorted, double c_hat, double T_n, double alpha,
                             bool clamp) {
  std::sort(sorted.begin(), sorted.end());
  Interval out{};
  out.q_lo = bootstrap_quantile(sorted, alpha / 2.0);
  out.q_hi = bootstrap_quantile(sorted, 1.0 - alpha / 2.0);
  const double scale = 1.0 / std::sqrt(T_n);
  out.lo = c_hat - scale * out.q_hi;
  out.hi = c_hat - scale * out.q_lo;
  if (clamp) {
    out.lo = std::clamp(out.lo, 0.0, 1.0);
    out.hi = std::clamp(out.hi, 0.0, 1.0);
  }
  return out;
}

std::vector<double> finite_only(const std::vector<double>& draws) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (double v : draws) {
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

}  // namespace

BootstrapResult bootstrap_ci(const TwoSample& data, const DominanceFamily& family,
                             SamplingScheme scheme, const GridSpec& spec,
                             const InferenceConfig& cfg) {
  cfg.validate();
  family.validate();
  data.require_scheme(scheme);

  const EmpiricalDistribution d1(data.first());
  const EmpiricalDistribution d2(data.second());
  BootstrapResult result;
  result.seed = cfg.seed;
  result.estimate = coefficient(family, d1, d2, spec);
  result.sigma = sigma_from_data(data, scheme, family, spec);
  result.sets = contact_sets(result.estimate.phi, result.sigma, result.estimate.T_n, cfg);
  result.boundary = result.estimate.boundary();

  const DirectionalDerivative deriv(result.sets, result.estimate.phi);
  const Resampler resampler(data, scheme);
  auto draws = replicate_draws(resampler, family, spec, result.estimate, {&deriv, 1}, cfg.n_boot,
                               cfg.seed, cfg.skip_degenerate, cfg.threads);
  result.draws = finite_only(draws.front());
  result.n_boot_effective = result.draws.size();
  if (result.draws.empty()) {
    throw Error(ErrorKind::NonFiniteDraw, "every bootstrap replicate was degenerate");
  }
  const Interval ci = interval_from_draws(result.draws, result.estimate.c_hat, result.estimate.T_n,
                                          cfg.alpha, cfg.clamp_to_unit);
  result.q_lo = ci.q_lo;
  result.q_hi = ci.q_hi;
  result.ci_lo = ci.lo;
  result.ci_hi = ci.hi;
  return result;
}

TuningReport select_tuning_report(const TwoSample& data, const DominanceFamily& family,
                                  SamplingScheme scheme, const GridSpec& spec,
                                  const InferenceConfig& cfg, std::span<const double> candidates,
                                  std::size_t n_cal_reps, std::size_t n_cal_boot) {
  if (candidates.empty()) throw Error(ErrorKind::InvalidConfig, "no t_n candidates");
  if (n_cal_reps == 0) throw Error(ErrorKind::InvalidConfig, "n_cal_reps must be positive");
  if (n_cal_boot == 0) throw Error(ErrorKind::InvalidConfig, "n_cal_boot must be positive");
  for (double t : candidates) {
    InferenceConfig probe = cfg;
    probe.t_n = t;
    probe.validate();
  }
  family.validate();
  data.require_scheme(scheme);

  TuningReport report;
  report.candidates.assign(candidates.begin(), candidates.end());
  if (candidates.size() == 1) {
    report.selected = candidates.front();
  }

  const EmpiricalDistribution d1(data.first());
  const EmpiricalDistribution d2(data.second());
  report.pseudo_true = coefficient(family, d1, d2, spec).c_hat;
  const Resampler population(data, scheme);

  // covered[r][c]: 1 covered, 0 missed, -1 skipped (degenerate dataset).
  std::vector<std::vector<int>> covered(n_cal_reps, std::vector<int>(candidates.size(), -1));
  parallel_for(n_cal_reps, resolve_threads(cfg.threads), [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, r);
    Rng rng(derive_seed(rep_seed, 0));
    const TwoSample sim = population.draw_dataset(rng);
    CoefficientEstimate est;
    try {
      est = coefficient(family, EmpiricalDistribution(sim.first()),
                        EmpiricalDistribution(sim.second()), spec);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateCurves || e.kind() == ErrorKind::ZeroMean) return;
      throw;
    }
    const GridFunction sigma = sigma_from_data(sim, scheme, family, spec);
    std::vector<DirectionalDerivative> derivs;
    derivs.reserve(candidates.size());
    for (double t : candidates) {
      derivs.emplace_back(contact_sets(est.phi, sigma, est.T_n, t, cfg.xi0), est.phi);
    }
    const Resampler resampler(sim, scheme);
    const auto draws = replicate_draws(resampler, family, spec, est, derivs, n_cal_boot,
                                       derive_seed(rep_seed, 1), cfg.skip_degenerate, 1);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto kept = finite_only(draws[c]);
      if (kept.empty()) return;
      const Interval ci =
          interval_from_draws(kept, est.c_hat, est.T_n, cfg.alpha, cfg.clamp_to_unit);
      covered[r][c] = (ci.lo <= report.pseudo_true && report.pseudo_true <= ci.hi) ? 1 : 0;
    }
  });

  std::vector<std::size_t> hits(candidates.size(), 0);
  for (const auto& row : covered) {
    if (row.front() < 0) continue;
    ++report.effective_reps;
    for (std::size_t c = 0; c < row.size(); ++c) hits[c] += static_cast<std::size_t>(row[c]);
  }
  if (report.effective_reps == 0) {
    throw Error(ErrorKind::DegenerateCurves, "every calibration dataset was degenerate");
  }
  report.coverage.resize(candidates.size());
  const double target = 1.0 - cfg.alpha;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    report.coverage[c] =
        static_cast<double>(hits[c]) / static_cast<double>(report.effective_reps);
    const double gap = std::abs(report.coverage[c] - target);
    const bool better = gap < best_gap - 1e-12;
    const bool tie_smaller = std::abs(gap - best_gap) <= 1e-12 && candidates[c] < report.selected;
    if (better || tie_smaller) {
      best_gap = gap;
      report.selected = candidates[c];
    }
  }
  return report;
}

double select_tuning(const TwoSample& data, const DominanceFamily& family, SamplingScheme scheme,
                     const GridSpec& spec, const InferenceConfig& cfg,
                     std::span<const double> candidates, std::size_t n_cal_reps,
                     std::size_t n_cal_boot) {
  return select_tuning_report(data, family, scheme, spec, cfg, candidates, n_cal_reps, n_cal_boot)
      .selected;
}

}  // namespace almostdom
