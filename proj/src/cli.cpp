#include "sqjcm/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <sstream>

#include "sqjcm/entanglement.hpp"
#include "sqjcm/errors.hpp"
#include "sqjcm/io.hpp"
#include "sqjcm/photon_stats.hpp"
#include "sqjcm/sweep.hpp"

namespace sqjcm {
namespace {


SqueezedField field_of(const RunConfig& cfg, double r) { return {{cfg.theta, cfg.theta_im}, r, cfg.squeeze_phase}; }
SqueezedField field_of(const RunConfig& cfg) { return field_of(cfg, cfg.r); }
ModelParams params_of(const RunConfig& cfg) { return {cfg.g, cfg.omega0}; }
TruncationPolicy policy_of(const RunConfig& cfg) { return {cfg.tail_eps, cfg.max_cutoff}; }

Provenance inputs_of(const RunConfig& cfg, std::string_view command) {
  Provenance p{{"version", kVersion},
               {"command", std::string(command)},
               {"theta_re", format_double(cfg.theta)},
               {"theta_im", format_double(cfg.theta_im)},
               {"r", format_double(cfg.r)},
               {"squeeze_phase", format_double(cfg.squeeze_phase)},
               {"lambda1", format_double(cfg.lambda1)},
               {"g", format_double(cfg.g)},
               {"omega0", format_double(cfg.omega0)},
               {"base", cfg.base},
               {"tail_eps", format_double(cfg.tail_eps)},
               {"max_cutoff", std::to_string(cfg.max_cutoff)}};
  return p;
}

void stamp(Provenance& p, const RunConfig& cfg) {
  if (cfg.deterministic) return;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  p.emplace_back("generated_at", buf);
  p.emplace_back("workers", std::to_string(cfg.workers));
}

std::string run_pn(const RunConfig& cfg) { return distribution_csv(photon_distribution(field_of(cfg), policy_of(cfg))); }

std::string run_ct(const RunConfig& cfg) {
  const auto dist = photon_distribution(field_of(cfg), policy_of(cfg));
  const auto times = uniform_times(cfg.t_max, cfg.steps);
  return transition_csv(transition_series(dist, params_of(cfg), times));
}

std::string run_dem(const RunConfig& cfg) {
  const auto mode = parse_mode_selection(cfg.mode.value_or("both"));
  const auto params = params_of(cfg);
  const auto base = parse_log_base(cfg.base);
  const auto atom = AtomMixture::from_excited_weight(cfg.lambda1);
  const double t = cfg.t.value_or(revival_time(std::abs(std::complex<double>(cfg.theta, cfg.theta_im)), cfg.g));
  const auto prepared = prepare_field(field_of(cfg), policy_of(cfg));

  std::vector<DemResult> results;
  if (mode != ModeSelection::exact) results.push_back(dem_paper(prepared.distribution, atom, params, t, base));
  if (mode != ModeSelection::paper) results.push_back(dem_exact(prepared, atom, params, t, base));
  auto inputs = inputs_of(cfg, "dem");
  inputs.emplace_back("t", format_double(t));
  inputs.emplace_back("tail_mass", format_double(prepared.distribution.tail_mass));
  inputs.emplace_back("cutoff", std::to_string(prepared.cutoff()));
  stamp(inputs, cfg);
  return dem_json(results, inputs);
}

std::string run_compare(const RunConfig& cfg) {
  const auto times = uniform_times(cfg.t_max, cfg.steps);
  const auto points = compare_series(field_of(cfg), AtomMixture::from_excited_weight(cfg.lambda1), params_of(cfg),
                                     times, parse_log_base(cfg.base), policy_of(cfg));
  return compare_csv(points);
}

SweepSpec sweep_spec_of(const RunConfig& cfg) {
  SweepSpec spec;
  spec.lambda1_grid = uniform_grid(0.0, 1.0, cfg.lambda_step);
  spec.r_grid = uniform_grid(0.0, cfg.r_max, cfg.r_step);
  if (cfg.t)
    spec.time = FixedTime{*cfg.t};
  else if (cfg.time_grid)
    spec.time = UniformTimeGrid{cfg.t_max, cfg.steps};
  else
    spec.time = RevivalTime{};
  spec.theta = {cfg.theta, cfg.theta_im};
  spec.squeeze_phase = cfg.squeeze_phase;
  spec.params = params_of(cfg);
  spec.mode = parse_mode_selection(cfg.mode.value_or("paper"));
  spec.truncation = policy_of(cfg);
  spec.base = parse_log_base(cfg.base);
  spec.workers = cfg.workers;
  return spec;
}

std::string run_sweep_command(const RunConfig& cfg) {
  const SweepSpec spec = sweep_spec_of(cfg);
  SweepResult result = run_sweep(spec);
  stamp(result.provenance, cfg);
  if (cfg.gnuplot) {
    return gnuplot_matrix(result, spec.mode == ModeSelection::exact ? DemMode::exact : DemMode::paper);
  }
  return cfg.format == "json" ? sweep_json(result) : sweep_csv(result);
}

std::string run_fig1(const RunConfig& cfg) {
  const auto times = uniform_times(cfg.t_max, cfg.steps);
  std::vector<std::vector<double>> columns{times};
  for (double r : {0.0, 1.0, 2.0}) {
    const auto dist = photon_distribution(field_of(cfg, r), policy_of(cfg));
    std::vector<double> c;
    c.reserve(times.size());
    for (double t : times) c.push_back(transition_c(dist, params_of(cfg), t));
    columns.push_back(std::move(c));
  }
  const std::vector<std::string> header{"t", "c_r0", "c_r1", "c_r2"};
  return columns_csv(header, columns);
}

std::string run_fig2(const RunConfig& cfg) {
  std::vector<std::vector<double>> columns(1);
  for (int n = 0; n <= cfg.n_max; ++n) columns[0].push_back(n);
  for (double r : {0.0, 1.0, 2.0}) {
    const auto dist = photon_distribution(field_of(cfg, r), policy_of(cfg));
    std::vector<double> p;
    for (int n = 0; n <= cfg.n_max; ++n) p.push_back(dist.at(n));
    columns.push_back(std::move(p));
  }
  const std::vector<std::string> header{"n", "p_r0", "p_r1", "p_r2"};
  return columns_csv(header, columns, true);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void RunConfig::validate() const {
  field_of(*this).validate();
  params_of(*this).validate();
  policy_of(*this).validate();
  AtomMixture::from_excited_weight(lambda1);
  if (mode) parse_mode_selection(*mode);
  parse_log_base(base);
  require(format == "csv" || format == "json", "--format must be csv or json");
  require(workers >= 0, "--workers must be >= 0");
  require(!t || (std::isfinite(*t) && *t >= 0.0), "--t must be >= 0");
  require(std::isfinite(t_max) && t_max >= 0.0, "--t-max must be >= 0");
  require(steps >= 1, "--steps must be >= 1");
  require(lambda_step > 0.0 && lambda_step <= 1.0, "--lambda-step must lie in (0, 1]");
  require(std::isfinite(r_max) && r_max >= 0.0, "--r-max must be >= 0");
  require(r_step > 0.0, "--r-step must be > 0");
  require(n_max >= 0, "--n-max must be >= 0");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string mode;
  double t_value = 0.0;

  CLI::App app{"Squeezed-field Jaynes-Cummings dynamics and atom-field mutual entropy", "sqjcm"};
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.fallthrough();
  app.require_subcommand(1, 1);

  app.add_option("--theta", cfg.theta, "Coherent amplitude (real part)")->capture_default_str();
  app.add_option("--theta-im", cfg.theta_im, "Coherent amplitude (imaginary part)")->capture_default_str();
  app.add_option("--r", cfg.r, "Squeeze magnitude")->capture_default_str();
  app.add_option("--squeeze-phase", cfg.squeeze_phase, "Squeeze phase in [0, 2pi)")->capture_default_str();
  app.add_option("--lambda1", cfg.lambda1, "Initial excited-state weight")->capture_default_str();
  app.add_option("--g", cfg.g, "Coupling constant")->capture_default_str();
  app.add_option("--omega0", cfg.omega0, "Atom/field frequency")->capture_default_str();
  auto* mode_opt = app.add_option("--mode", mode, "paper | exact | both");
  app.add_option("--base", cfg.base, "Logarithm base: e | 2")->capture_default_str();
  app.add_option("--tail-eps", cfg.tail_eps, "Photon-number tail tolerance")->capture_default_str();
  app.add_option("--max-cutoff", cfg.max_cutoff, "Largest Fock cutoff")->capture_default_str();
  app.add_option("--format", cfg.format, "csv | json (sweep, fig3)")->capture_default_str();
  app.add_option("-o,--output", cfg.output, "Output file (stdout when omitted)");
  app.add_option("--workers", cfg.workers, "Sweep worker threads, 0 = all cores")
      ->envname("SQJCM_WORKERS")
      ->capture_default_str();
  app.add_flag("--deterministic,!--no-deterministic", cfg.deterministic,
               "Keep outputs byte-stable (no timestamp or worker count in provenance)");
  auto* t_opt = app.add_option("--t", t_value, "Fixed evaluation time (default: revival time)");
  app.add_option("--t-max", cfg.t_max, "End of the time grid")->capture_default_str();
  app.add_option("--steps", cfg.steps, "Time grid steps")->capture_default_str();
  app.add_flag("--time-grid", cfg.time_grid, "Sweep over the time grid instead of one time");
  app.add_option("--lambda-step", cfg.lambda_step, "Sweep step in lambda1")->capture_default_str();
  app.add_option("--r-max", cfg.r_max, "Sweep upper bound in r")->capture_default_str();
  app.add_option("--r-step", cfg.r_step, "Sweep step in r")->capture_default_str();
  app.add_option("--n-max", cfg.n_max, "Largest photon number listed by fig2")->capture_default_str();
  app.add_flag("--gnuplot", cfg.gnuplot, "Emit the DEM surface as a gnuplot matrix");

  using Runner = std::string (*)(const RunConfig&);
  const std::vector<std::tuple<const char*, const char*, Runner>> commands{
      {"pn", "Photon-number distribution, CSV n,p", run_pn},
      {"ct", "Transition probabilities, CSV t,c,s", run_ct},
      {"dem", "DEM at one point, JSON", run_dem},
      {"compare", "Closed-form vs exact DEM over time, CSV t,dem_paper,dem_exact,gap", run_compare},
      {"sweep", "DEM over the (lambda1, r) grid", run_sweep_command},
      {"fig1", "c(t) for r = 0, 1, 2", run_fig1},
      {"fig2", "P(n) for r = 0, 1, 2", run_fig2},
      {"fig3", "DEM surface over lambda1 in [0,1], r in [0,3] at the revival time", run_sweep_command},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  std::vector<const char*> argv{"sqjcm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sqjcm: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }
  if (mode_opt->count() > 0) cfg.mode = mode;
  if (t_opt->count() > 0) cfg.t = t_value;

  Runner runner = nullptr;
  std::string name;
  for (const auto& [cmd, help, fn] : commands)
    if (app.got_subcommand(cmd)) {
      runner = fn;
      name = cmd;
    }

  try {
    cfg.validate();
  } catch (const DomainError& e) {
    err << "sqjcm: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const std::string text = runner(cfg);
    if (cfg.output.empty())
      out << text << std::flush;
    else
      write_atomic(cfg.output, text);
  } catch (const TruncationError& e) {
    err << "sqjcm " << name << ": truncation error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const DomainError& e) {
    err << "sqjcm " << name << ": numeric-domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "sqjcm " << name << ": " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace sqjcm
