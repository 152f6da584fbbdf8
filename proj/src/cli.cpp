#include "almostdom/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "almostdom/covariance.hpp"
#include "almostdom/error.hpp"
#include "almostdom/inference.hpp"
#include "almostdom/simulation.hpp"

namespace almostdom {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string family = "lorenz";
  int m = 1;
  std::string dir = "up";
  std::string scheme = "ind";
  std::vector<std::string> inputs;
  std::size_t grid = 1000;
  std::vector<double> domain;
  std::string format = "json";
  std::string output;
  std::string curves;
  unsigned threads = 0;

  double tn = 0.0;
  bool tune = false;
  std::size_t boot = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool no_clamp = false;
  bool strict = false;
  double xi0 = 0.001;
  bool skip_degenerate = false;
  bool timing = false;
  std::vector<double> candidates{0.001, 0.01, 0.1, 1.0, 5.0, 10.0, 20.0};
  std::size_t cal_reps = 100;
  std::size_t cal_boot = 200;

  std::string preset;
  std::size_t n1 = 100;
  std::size_t n2 = 100;
  std::size_t reps = 100;

  std::string preference = "cubic";
};

// Signals exit code 3 after the report has been written.
struct StrictBoundary {};

DominanceFamily parse_family(const Options& o) {
  DominanceFamily f;
  if (o.family == "lorenz") f.family = Family::Lorenz;
  else if (o.family == "isd") f.family = Family::InverseSD;
  else if (o.family == "sd") f.family = Family::SD;
  else throw Error(ErrorKind::InvalidConfig, "unknown family '" + o.family + "'");
  f.degree = o.m;
  f.direction = o.dir == "down" ? Direction::Downward : Direction::Upward;
  f.validate();
  return f;
}

SamplingScheme parse_scheme(const std::string& s) {
  return s == "matched" ? SamplingScheme::MatchedPairs : SamplingScheme::Independent;
}

std::pair<double, double> domain_of(const Options& o) {
  if (o.domain.empty()) return {0.0, 0.0};
  if (o.domain.size() != 2 || !(o.domain[0] < o.domain[1])) {
    throw Error(ErrorKind::InvalidConfig, "--domain expects a,b with a < b");
  }
  return {o.domain[0], o.domain[1]};
}

TwoSample load_inputs(const Options& o, const DominanceFamily& family, SamplingScheme scheme) {
  const bool nonneg = family.requires_nonnegative();
  if (o.inputs.size() == 2) {
    if (scheme == SamplingScheme::MatchedPairs) {
      throw Error(ErrorKind::InvalidConfig, "matched pairs are read from one x1,x2 file");
    }
    return load_csv(o.inputs[0], o.inputs[1], nonneg);
  }
  if (o.inputs.size() != 1) throw Error(ErrorKind::InvalidConfig, "--input takes one or two files");
  return load_csv(o.inputs[0], scheme, nonneg);
}

InferenceConfig inference_config(const Options& o) {
  InferenceConfig cfg;
  cfg.t_n = o.tn;
  cfg.xi0 = o.xi0;
  cfg.n_boot = o.boot;
  cfg.alpha = o.alpha;
  cfg.clamp_to_unit = !o.no_clamp;
  cfg.seed = o.seed;
  cfg.skip_degenerate = o.skip_degenerate;
  cfg.threads = o.threads;
  return cfg;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output);
  if (!file) throw Error(ErrorKind::FileNotFound, "cannot write '" + o.output + "'");
  file << text;
}

void write_curves(const Options& o, const DominanceFamily& family, const TwoSample& data,
                  const GridSpec& spec, const GridFunction& phi, const GridFunction& sigma) {
  if (o.curves.empty()) return;
  std::ofstream file(o.curves);
  if (!file) throw Error(ErrorKind::FileNotFound, "cannot write '" + o.curves + "'");
  std::vector<double> base1(spec.n_points);
  std::vector<double> base2(spec.n_points);
  base_curve(family.family, EmpiricalDistribution(data.first()), spec, base1);
  base_curve(family.family, EmpiricalDistribution(data.second()), spec, base2);
  file << (family.family == Family::SD ? "x" : "p") << ",phi,sigma,base1,base2\n";
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    file << format_double(spec.node(k)) << ',' << format_double(phi[k]) << ','
         << format_double(sigma[k]) << ',' << format_double(base1[k]) << ','
         << format_double(base2[k]) << '\n';
  }
}

std::string render(const Options& o, const Json& j) {
  if (o.format == "json") return j.dump(2) + "\n";
  std::string header;
  std::string row;
  for (const auto& [key, value] : j.items()) {
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    if (value.is_number_float()) row += format_double(value.get<double>());
    else if (value.is_string()) row += value.get<std::string>();
    else row += value.dump();
  }
  return header + "\n" + row + "\n";
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const DominanceFamily family = parse_family(o);
  const SamplingScheme scheme = parse_scheme(o.scheme);
  const TwoSample data = load_inputs(o, family, scheme);
  const auto [lo, hi] = domain_of(o);
  const GridSpec spec = family_grid(family, data.first(), data.second(), o.grid, lo, hi);
  const auto est = coefficient(family, EmpiricalDistribution(data.first()),
                               EmpiricalDistribution(data.second()), spec);
  if (!o.curves.empty()) {
    write_curves(o, family, data, spec, est.phi, sigma_from_data(data, scheme, family, spec));
  }
  Json j;
  j["name"] = family.name();
  j["family"] = to_string(family.family);
  j["m"] = family.degree;
  j["direction"] = to_string(family.direction);
  j["scheme"] = to_string(scheme);
  j["n1"] = est.n1;
  j["n2"] = est.n2;
  j["c_hat"] = est.c_hat;
  j["pos_area"] = est.pos_area;
  j["neg_area"] = est.neg_area;
  j["T_n"] = est.T_n;
  j["lambda_hat"] = est.lambda_hat;
  j["boundary"] = est.boundary();
  emit(o, render(o, j), out);
  return 0;
}

int cmd_ci(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (o.tune == (o.tn > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "ci needs exactly one of --tn or --tune");
  }
  const DominanceFamily family = parse_family(o);
  const SamplingScheme scheme = parse_scheme(o.scheme);
  const TwoSample data = load_inputs(o, family, scheme);
  const auto [lo, hi] = domain_of(o);
  const GridSpec spec = family_grid(family, data.first(), data.second(), o.grid, lo, hi);
  InferenceConfig cfg = inference_config(o);
  if (o.tune) {
    cfg.t_n = o.candidates.empty() ? 1.0 : o.candidates.front();
    cfg.t_n = select_tuning(data, family, scheme, spec, cfg, o.candidates, o.cal_reps, o.cal_boot);
  }
  const BootstrapResult result = bootstrap_ci(data, family, scheme, spec, cfg);
  write_curves(o, family, data, spec, result.estimate.phi, result.sigma);

  ReportRecord r;
  r.family = to_string(family.family);
  r.m = family.degree;
  r.direction = to_string(family.direction);
  r.scheme = to_string(scheme);
  r.n1 = result.estimate.n1;
  r.n2 = result.estimate.n2;
  r.c_hat = result.estimate.c_hat;
  r.ci_lo = result.ci_lo;
  r.ci_hi = result.ci_hi;
  r.t_n = cfg.t_n;
  r.xi0 = cfg.xi0;
  r.alpha = cfg.alpha;
  r.n_boot = cfg.n_boot;
  r.seed = cfg.seed;
  r.boundary_flag = result.boundary;
  if (o.timing) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             start)
                       .count();
  }
  emit(o, o.format == "json" ? to_json(r) + "\n" : csv_header(r) + "\n" + to_csv(r) + "\n", out);
  if (o.strict && r.boundary_flag) throw StrictBoundary{};
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Preset preset = find_preset(o.preset);
  const bool sd = preset.family.family == Family::SD;
  MonteCarloStudy study{
      .dgp1 = preset.dgp1,
      .dgp2 = preset.dgp2,
      .family = preset.family,
      .scheme = parse_scheme(o.scheme),
      .n1 = o.n1,
      .n2 = o.n2,
      .grid = {o.grid, sd ? preset.domain_lo : 0.0, sd ? preset.domain_hi : 1.0},
      .cfg = inference_config(o),
      .n_reps = o.reps,
      .true_c = population_coefficient(preset.dgp1, preset.dgp2, preset.family, 100000,
                                       preset.domain_lo, preset.domain_hi),
  };
  const MonteCarloReport report = monte_carlo(study);
  Json j;
  j["preset"] = preset.name;
  j["name"] = preset.family.name();
  j["scheme"] = to_string(study.scheme);
  j["n1"] = study.n1;
  j["n2"] = study.n2;
  j["Mean"] = report.mean;
  j["Bias"] = report.bias;
  j["SE"] = report.se;
  j["RMSE"] = report.rmse;
  j["t_n"] = report.t_n;
  j["CR"] = report.cr;
  j["true_c"] = report.true_c;
  j["reps"] = report.n_reps;
  j["effective_reps"] = report.effective_reps;
  j["n_boot"] = study.cfg.n_boot;
  j["seed"] = study.cfg.seed;
  emit(o, render(o, j), out);
  return 0;
}

int cmd_tune(const Options& o, std::ostream& out) {
  const DominanceFamily family = parse_family(o);
  const SamplingScheme scheme = parse_scheme(o.scheme);
  const TwoSample data = load_inputs(o, family, scheme);
  const auto [lo, hi] = domain_of(o);
  const GridSpec spec = family_grid(family, data.first(), data.second(), o.grid, lo, hi);
  InferenceConfig cfg = inference_config(o);
  cfg.t_n = 1.0;
  const TuningReport report =
      select_tuning_report(data, family, scheme, spec, cfg, o.candidates, o.cal_reps, o.cal_boot);
  if (o.format == "json") {
    Json j;
    j["selected"] = report.selected;
    j["pseudo_true"] = report.pseudo_true;
    j["effective_reps"] = report.effective_reps;
    Json table = Json::array();
    for (std::size_t c = 0; c < report.candidates.size(); ++c) {
      table.push_back({{"t_n", report.candidates[c]}, {"coverage", report.coverage[c]}});
    }
    j["candidates"] = table;
    emit(o, j.dump(2) + "\n", out);
  } else {
    std::string text = "t_n,coverage,selected\n";
    for (std::size_t c = 0; c < report.candidates.size(); ++c) {
      text += format_double(report.candidates[c]) + "," + format_double(report.coverage[c]) +
              "," + (report.candidates[c] == report.selected ? "true" : "false") + "\n";
    }
    emit(o, text, out);
  }
  return 0;
}

int cmd_measures(const Options& o, std::ostream& out) {
  const PreferenceFunction pref = o.preference == "uniform" ? PreferenceFunction::uniform()
                                                            : PreferenceFunction::cubic();
  std::vector<Sample> samples;
  for (const auto& path : o.inputs) {
    try {
      samples.push_back(load_single(path, true, 0));
    } catch (const ParseError&) {
      samples.push_back(load_single(path, true, 1));
      samples.back().label = path + ":1";
      samples.push_back(load_single(path, true, 2));
      samples.back().label = path + ":2";
    }
  }
  if (samples.empty()) throw Error(ErrorKind::InvalidConfig, "measures needs --input");
  Json rows = Json::array();
  std::string text = "label,n,mean,W_P,J_P\n";
  for (const Sample& s : samples) {
    const RankMeasures m = rank_measures(EmpiricalDistribution(s.values), pref, {o.grid, 0, 1});
    rows.push_back({{"label", s.label},
                    {"n", s.values.size()},
                    {"mean", m.mean},
                    {"W_P", m.welfare},
                    {"J_P", m.inequality}});
    text += s.label + "," + std::to_string(s.values.size()) + "," + format_double(m.mean) + "," +
            format_double(m.welfare) + "," + format_double(m.inequality) + "\n";
  }
  Json j;
  j["preference"] = pref.name;
  j["samples"] = rows;
  emit(o, o.format == "json" ? j.dump(2) + "\n" : text, out);
  return 0;
}

void add_data_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family)->check(CLI::IsMember({"lorenz", "isd", "sd"}));
  cmd->add_option("--m", o.m, "degree")->check(CLI::PositiveNumber);
  cmd->add_option("--dir", o.dir)->check(CLI::IsMember({"up", "down"}));
  cmd->add_option("--scheme", o.scheme)->check(CLI::IsMember({"ind", "matched"}));
  cmd->add_option("--input", o.inputs, "one CSV, or two single-column CSVs")
      ->required()
      ->expected(1, 2);
  cmd->add_option("--domain", o.domain, "SD domain a,b")->delimiter(',');
}

void add_common_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid", o.grid, "grid nodes")->check(CLI::PositiveNumber);
  cmd->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", o.output, "write the report here instead of stdout");
  cmd->add_option("--threads", o.threads, "0 = ALMOSTDOM_THREADS or all cores");
}

void add_boot_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--boot", o.boot, "bootstrap draws")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", o.alpha);
  cmd->add_option("--seed", o.seed);
  cmd->add_option("--xi0", o.xi0);
  cmd->add_flag("--no-clamp", o.no_clamp, "do not clamp the interval to [0, 1]");
  cmd->add_flag("--skip-degenerate", o.skip_degenerate);
}

void add_tune_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--candidates", o.candidates)->delimiter(',');
  cmd->add_option("--cal-reps", o.cal_reps)->check(CLI::PositiveNumber);
  cmd->add_option("--cal-boot", o.cal_boot)->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Almost dominance coefficients with bootstrap confidence intervals"};
  app.require_subcommand(1);
  Options o;

  auto* estimate = app.add_subcommand("estimate", "point estimate of the coefficient");
  add_data_options(estimate, o);
  add_common_options(estimate, o);
  estimate->add_option("--emit-curves", o.curves, "CSV of phi, sigma and base curves");

  auto* ci = app.add_subcommand("ci", "bootstrap confidence interval");
  add_data_options(ci, o);
  add_common_options(ci, o);
  add_boot_options(ci, o);
  add_tune_options(ci, o);
  ci->add_option("--tn", o.tn, "contact-set threshold");
  ci->add_flag("--tune", o.tune, "pick t_n by calibration");
  ci->add_flag("--strict", o.strict, "exit 3 when the estimate is on the boundary");
  ci->add_flag("--timing", o.timing, "record runtime_ms");
  ci->add_option("--emit-curves", o.curves, "CSV of phi, sigma and base curves");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage study");
  simulate->add_option("--preset", o.preset)->required()->check(CLI::IsMember(preset_names()));
  simulate->add_option("--n1", o.n1)->check(CLI::PositiveNumber);
  simulate->add_option("--n2", o.n2)->check(CLI::PositiveNumber);
  simulate->add_option("--reps", o.reps)->check(CLI::PositiveNumber);
  simulate->add_option("--tn", o.tn)->required();
  simulate->add_option("--scheme", o.scheme)->check(CLI::IsMember({"ind", "matched"}));
  add_common_options(simulate, o);
  add_boot_options(simulate, o);

  auto* tune = app.add_subcommand("tune", "calibrate t_n");
  add_data_options(tune, o);
  add_common_options(tune, o);
  add_boot_options(tune, o);
  add_tune_options(tune, o);

  auto* measures = app.add_subcommand("measures", "rank-dependent welfare and inequality");
  measures->add_option("--input", o.inputs)->required()->expected(1, -1);
  measures->add_option("--preference", o.preference)->check(CLI::IsMember({"cubic", "uniform"}));
  add_common_options(measures, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(o, out);
    if (ci->parsed()) return cmd_ci(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (tune->parsed()) return cmd_tune(o, out);
    if (measures->parsed()) return cmd_measures(o, out);
  } catch (const StrictBoundary&) {
    err << "boundary estimate (--strict)\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::DegenerateCurves ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"almostdom"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace almostdom
