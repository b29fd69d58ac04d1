// rmpp: command-line front end for the stochastic Rosenzweig-MacArthur toolkit.
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage error, 3 I/O or runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmpp/ensemble.hpp"
#include "rmpp/equilibrium.hpp"
#include "rmpp/errors.hpp"
#include "rmpp/io.hpp"
#include "rmpp/ode.hpp"
#include "rmpp/sde.hpp"
#include "rmpp/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double m = 3.0;
  double c = 1.0;
  double k = 3.0;
  std::vector<double> x0{1.0, 0.6};
  double t_end = 10.0;
  std::uint64_t m_steps = 4000;
  std::size_t runs = 2000;
  std::uint64_t seed = 42;
  double dt = 1e-3;
  double alpha = 3.0;
  std::vector<double> grid;  // empty: per-check default
  std::size_t res = 200;
  std::string out = "out";
  bool svg = false;
  std::uint64_t stride = 1;
  bool zero_noise = false;
  bool paths = false;
  unsigned threads = 0;
  std::vector<double> p_list{1.0, 2.0, 4.0};
  std::optional<double> c_override;
  double tail = 0.2;
  std::string config;
};

// Flag name -> JSON key, shared by the config loader and the manifest echo.
json echo(const Options& o) {
  json j{{"m", o.m},         {"c", o.c},       {"k", o.k},         {"x0", o.x0},
         {"T", o.t_end},     {"M", o.m_steps}, {"runs", o.runs},   {"seed", o.seed},
         {"dt", o.dt},       {"alpha", o.alpha}, {"res", o.res},   {"out", o.out},
         {"svg", o.svg},     {"stride", o.stride}, {"zero_noise", o.zero_noise},
         {"paths", o.paths}, {"threads", o.threads}, {"p", o.p_list}, {"tail", o.tail}};
  j["grid"] = o.grid;
  if (o.c_override) j["c_override"] = *o.c_override;
  return j;
}

bool given(const CLI::App& app, const char* flag) {
  const CLI::Option* opt = app.get_option_no_throw(flag);
  return opt != nullptr && opt->count() > 0;
}

// Keys for flags the subcommand lacks are still read; they are simply unused.
template <class T>
void take(const json& j, const char* key, const CLI::App& app, const char* flag, T& dst) {
  if (j.contains(key) && !given(app, flag)) dst = j.at(key).get<T>();
}

// Values from a config file (or a manifest's "config" block) fill every flag
// that was not given on the command line.
// Returns true when the file supplied the seed.
bool apply_config(Options& o, const CLI::App& app) {
  std::ifstream in(o.config);
  if (!in) throw UsageError("cannot open config file " + o.config);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed config file: ") + e.what());
  }
  if (j.contains("config") && j["config"].is_object()) j = j["config"];
  try {
    take(j, "m", app, "-m", o.m);
    take(j, "c", app, "-c", o.c);
    take(j, "k", app, "-k", o.k);
    take(j, "x0", app, "--x0", o.x0);
    take(j, "T", app, "-T", o.t_end);
    take(j, "M", app, "-M", o.m_steps);
    take(j, "runs", app, "--runs", o.runs);
    take(j, "seed", app, "--seed", o.seed);
    take(j, "dt", app, "--dt", o.dt);
    take(j, "alpha", app, "--alpha", o.alpha);
    take(j, "grid", app, "--grid", o.grid);
    take(j, "res", app, "--res", o.res);
    take(j, "out", app, "--out", o.out);
    take(j, "svg", app, "--svg", o.svg);
    take(j, "stride", app, "--stride", o.stride);
    take(j, "zero_noise", app, "--zero-noise", o.zero_noise);
    take(j, "paths", app, "--paths", o.paths);
    take(j, "threads", app, "--threads", o.threads);
    take(j, "p", app, "--p", o.p_list);
    take(j, "tail", app, "--tail", o.tail);
    if (j.contains("c_override") && !given(app, "--c-override")) {
      o.c_override = j["c_override"].get<double>();
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad value in config file: ") + e.what());
  }
  return j.contains("seed");
}

rmpp::ModelParams params_of(const Options& o) {
  rmpp::ModelParams p{o.m, o.c, o.k};
  try {
    p.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return p;
}

rmpp::State x0_of(const Options& o) {
  if (o.x0.size() != 2) throw UsageError("--x0 expects N,P");
  rmpp::State x{o.x0[0], o.x0[1]};
  if (!x.in_closed_quadrant()) throw UsageError("--x0 must be nonnegative");
  return x;
}

rmpp::SimConfig sim_of(const Options& o) {
  rmpp::SimConfig cfg;
  cfg.t_end = o.t_end;
  cfg.m_steps = o.m_steps;
  cfg.seed = o.seed;
  cfg.stride = o.stride;
  cfg.zero_noise = o.zero_noise;
  try {
    cfg.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

fs::path prepare_out(const Options& o) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw IoError("cannot create output directory " + o.out + ": " + ec.message());
  return fs::path(o.out);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed for " + path.string());
}

template <class Writer>
void write_csv(const fs::path& path, Writer&& writer) {
  std::ostringstream ss;
  writer(ss);
  write_file(path, ss.str());
}

void write_manifest(const fs::path& dir, const std::string& sub, const Options& o) {
  rmpp::RunManifest man;
  man.subcommand = sub;
  man.params = {o.m, o.c, o.k};
  man.config = echo(o);
  man.seed = o.seed;
  man.timestamp = rmpp::utc_timestamp();
  write_file(dir / "manifest.json", man.to_json().dump(2) + "\n");
}

// ---------------------------------------------------------------------------

json analyze_report(const rmpp::ModelParams& params) {
  json report;
  report["params"] = rmpp::to_json(params);
  json eqs = json::array();
  for (const auto& e : rmpp::find_equilibria(params)) eqs.push_back(rmpp::to_json(e));
  report["equilibria"] = eqs;
  if (rmpp::coexistence_exists(params)) {
    const auto ti = rmpp::trace_identity_check(params);
    report["trace_identity"] = {{"lhs", ti.lhs}, {"rhs", ti.rhs}, {"abs_diff", std::abs(ti.lhs - ti.rhs)}};
  } else {
    report["trace_identity"] = nullptr;
  }
  if (params.m > params.c) {
    report["hopf_k"] = rmpp::hopf_threshold(params.m, params.c);
  } else {
    report["hopf_k"] = nullptr;
  }
  const auto verdict = rmpp::extinction_check(params);
  report["extinction"] = {{"verdict", rmpp::to_string(verdict.verdict)}, {"rationale", verdict.rationale}};
  return report;
}

int cmd_analyze(const Options& o, const CLI::App& sub) {
  const auto params = params_of(o);
  const json report = analyze_report(params);
  std::cout << report.dump(2) << "\n";
  if (given(sub, "--out")) {
    const fs::path dir = prepare_out(o);
    write_file(dir / "analyze.json", report.dump(2) + "\n");
    write_manifest(dir, "analyze", o);
  }
  return kExitOk;
}

rmpp::Trajectory run_ode(const Options& o) {
  const auto params = params_of(o);
  if (!(o.dt > 0.0)) throw UsageError("--dt must be positive");
  if (!(o.t_end >= o.dt)) throw UsageError("-T must be at least --dt");
  return rmpp::integrate(params, x0_of(o), o.t_end, o.dt);
}

rmpp::Viewport portrait_view(const Options& o, const rmpp::ModelParams& params) {
  if (o.grid.empty()) return {0.0, std::max(3.5, params.k + 0.5), 0.0, 1.5};
  if (o.grid.size() != 4) throw UsageError("--grid expects NMIN,NMAX,PMIN,PMAX");
  return {o.grid[0], o.grid[1], o.grid[2], o.grid[3]};
}

int cmd_ode(const Options& o, bool portrait) {
  const auto params = params_of(o);
  const rmpp::Trajectory traj = run_ode(o);
  const fs::path dir = prepare_out(o);
  write_csv(dir / "trajectory.csv", [&](std::ostream& os) { rmpp::write_trajectory_csv(os, traj); });

  std::vector<rmpp::FieldSample> field;
  const rmpp::Viewport view = portrait_view(o, params);
  if (portrait || o.svg) {
    if (o.res < 2) throw UsageError("--res must be >= 2");
    field = rmpp::vector_field_grid(params, view.x_min, view.x_max, view.y_min, view.y_max,
                                    portrait ? o.res : std::min<std::size_t>(o.res, 20));
  }
  if (portrait) {
    write_csv(dir / "vector_field.csv", [&](std::ostream& os) { rmpp::write_vector_field_csv(os, field); });
  }
  if (o.svg) {
    const auto eqs = rmpp::find_equilibria(params);
    const std::vector<rmpp::Trajectory> trajs{traj};
    write_file(dir / "phase_portrait.svg", rmpp::phase_portrait_svg(params, field, trajs, eqs, view));
  }
  write_manifest(dir, portrait ? "phase-portrait" : "simulate-ode", o);

  json summary{{"params", rmpp::to_json(params)},
               {"final_state", rmpp::to_json(traj.states.back())},
               {"clamp_events", traj.clamp_events}};
  if (traj.states.size() >= 1000) {
    const auto verdict = rmpp::detect_asymptotics(traj, o.tail);
    summary["asymptotics"] = {{"kind", rmpp::to_string(verdict.kind)},
                              {"diagnostics", verdict.diagnostics}};
    if (verdict.kind == rmpp::AsymptoticVerdict::Kind::ConvergedToEquilibrium) {
      summary["asymptotics"]["point"] = rmpp::to_json(verdict.point);
    } else if (verdict.kind == rmpp::AsymptoticVerdict::Kind::LimitCycle) {
      summary["asymptotics"]["period"] = verdict.period;
      summary["asymptotics"]["box_min"] = rmpp::to_json(verdict.box_min);
      summary["asymptotics"]["box_max"] = rmpp::to_json(verdict.box_max);
    }
  }
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_sde(const Options& o) {
  const auto params = params_of(o);
  const auto cfg = sim_of(o);
  const rmpp::SamplePath path = rmpp::simulate_path(params, x0_of(o), cfg, 0);
  const fs::path dir = prepare_out(o);
  const std::vector<rmpp::SamplePath> one{path};
  write_csv(dir / "path.csv", [&](std::ostream& os) { rmpp::write_paths_csv(os, one); });
  write_manifest(dir, "simulate-sde", o);
  std::cout << json{{"final_state", rmpp::to_json(path.states.back())},
                    {"clamp_events", path.clamp_events}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_ensemble(const Options& o) {
  const auto params = params_of(o);
  const auto cfg = sim_of(o);
  if (o.runs < 2) throw UsageError("--runs must be >= 2");
  const rmpp::State x0 = x0_of(o);
  const fs::path dir = prepare_out(o);

  rmpp::EnsembleStats stats;
  if (o.paths) {
    const auto paths = rmpp::simulate_ensemble(params, x0, cfg, o.runs, o.threads);
    stats = rmpp::summarize_paths(paths);
    write_csv(dir / "paths.csv", [&](std::ostream& os) { rmpp::write_paths_csv(os, paths); });
  } else {
    stats = rmpp::run_ensemble(params, x0, cfg, o.runs, o.threads);
  }
  write_csv(dir / "ensemble.csv", [&](std::ostream& os) { rmpp::write_ensemble_csv(os, stats); });
  if (o.svg) {
    const double det_dt = std::min(1e-3, cfg.delta());
    const rmpp::Trajectory det = rmpp::integrate(params, x0, o.t_end, det_dt);
    write_file(dir / "ensemble.svg", rmpp::ensemble_svg(stats, &det));
  }
  write_manifest(dir, "ensemble", o);
  std::cout << json{{"runs", stats.runs},
                    {"recorded_times", stats.times.size()},
                    {"clamp_events", stats.clamp_events},
                    {"final_mean", {stats.mean_n.back(), stats.mean_p.back()}},
                    {"final_var", {stats.var_n.back(), stats.var_p.back()}}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o, const CLI::App& sub) {
  const auto params = params_of(o);
  if (!(o.alpha > 2.0)) throw UsageError("--alpha must exceed 2");
  if (o.runs < 2) throw UsageError("--runs must be >= 2");
  for (double p : o.p_list) {
    if (!(p > 0.0)) throw UsageError("--p entries must be positive");
  }
  rmpp::GridSpec gen_grid = rmpp::default_generator_grid();
  rmpp::GridSpec mono_grid = rmpp::default_monotonicity_grid();
  if (!o.grid.empty()) {
    if (o.grid.size() != 4) throw UsageError("--grid expects NMIN,NMAX,PMIN,PMAX");
    gen_grid = mono_grid = {o.grid[0], o.grid[1], o.grid[2], o.grid[3], o.res};
  }
  gen_grid.resolution = mono_grid.resolution = o.res;
  try {
    gen_grid.validate();
    if (!(gen_grid.n_min > 0.0 && gen_grid.p_min > 0.0)) {
      throw std::domain_error("generator check needs strictly positive grid bounds");
    }
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }

  json report;
  report["params"] = rmpp::to_json(params);
  report["alpha"] = o.alpha;
  report["constants"] = {{"c_lyap", rmpp::lyapunov_constant(params, o.alpha)},
                         {"c_mono", rmpp::monotonicity_constant(params)}};
  bool all_pass = true;
  json checks = json::array();
  const auto add = [&](const rmpp::VerificationReport& rep) {
    all_pass = all_pass && rep.pass;
    checks.push_back(rmpp::to_json(rep));
  };
  add(rmpp::check_generator_inequality(params, o.alpha, gen_grid, o.c_override));
  add(rmpp::check_monotonicity(params, mono_grid, o.c_override));

  // Moment and exponent checks against a fresh desk-scale ensemble.
  const auto cfg = sim_of(o);
  const rmpp::State x0 = x0_of(o);
  const auto paths = rmpp::simulate_ensemble(params, x0, cfg, o.runs, o.threads);
  for (double p : o.p_list) {
    add(rmpp::check_moment_bound(rmpp::moment_series(paths, p), params, x0, p));
  }
  const double c_mono = rmpp::monotonicity_constant(params);
  double worst_proxy = -std::numeric_limits<double>::infinity();
  std::size_t worst_stream = 0;
  std::size_t zero_samples = 0;
  const double t_min = std::min(1.0, 0.5 * o.t_end);
  for (const auto& path : paths) {
    const auto proxy = rmpp::lyapunov_exponent_proxy(path, t_min);
    zero_samples += proxy.zero_samples;
    if (proxy.exponent > worst_proxy) {
      worst_proxy = proxy.exponent;
      worst_stream = path.stream_index;
    }
  }
  const bool proxy_pass = worst_proxy <= c_mono;
  all_pass = all_pass && proxy_pass;
  checks.push_back({{"inequality", "lyapunov exponent proxy <= c_mono"},
                    {"worst_exponent", worst_proxy},
                    {"worst_stream", worst_stream},
                    {"zero_norm_samples", zero_samples},
                    {"bound", c_mono},
                    {"pass", proxy_pass}});
  report["checks"] = checks;
  report["pass"] = all_pass;

  std::cout << report.dump(2) << "\n";
  if (given(sub, "--out")) {
    const fs::path dir = prepare_out(o);
    write_file(dir / "verify.json", report.dump(2) + "\n");
    write_manifest(dir, "verify", o);
  }
  if (!all_pass) {
    for (const auto& c : checks) {
      if (!c["pass"].get<bool>()) {
        std::cerr << "FAILED: " << c["inequality"].get<std::string>();
        if (c.contains("worst_point")) std::cerr << " at " << c["worst_point"].dump();
        if (c.contains("worst_slack")) std::cerr << " slack " << c["worst_slack"].dump();
        std::cerr << "\n";
      }
    }
    return kExitVerifyFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_model_flags(CLI::App* sub, Options& o) {
  sub->add_option("-m", o.m, "scaled predation coefficient m");
  sub->add_option("-c", o.c, "scaled predator death rate c");
  sub->add_option("-k", o.k, "scaled carrying capacity k");
  sub->add_option("--config", o.config, "JSON config or manifest; flags win on conflict");
  sub->add_option("--out", o.out, "output directory");
}

void add_x0(CLI::App* sub, Options& o) {
  sub->add_option("--x0", o.x0, "initial state N,P")->delimiter(',')->expected(2);
}

void add_sim_flags(CLI::App* sub, Options& o) {
  add_x0(sub, o);
  sub->add_option("-T", o.t_end, "time horizon");
  sub->add_option("-M", o.m_steps, "number of Euler-Maruyama steps");
  sub->add_option("--seed", o.seed, "64-bit seed (falls back to $RM_SEED)");
  sub->add_option("--stride", o.stride, "record every n-th step (must divide M)");
  sub->add_flag("--zero-noise", o.zero_noise, "set every Brownian increment to 0");
  sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Stochastic Rosenzweig-MacArthur predator-prey toolkit"};
  app.set_version_flag("--version", rmpp::kToolVersion);
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "equilibria, stability, Hopf threshold, extinction verdict");
  add_model_flags(analyze, o);

  auto* ode = app.add_subcommand("simulate-ode", "RK4 trajectory of the deterministic system");
  add_model_flags(ode, o);
  add_x0(ode, o);
  ode->add_option("-T", o.t_end, "time horizon");
  ode->add_option("--dt", o.dt, "RK4 step");
  ode->add_option("--tail", o.tail, "tail fraction for the asymptotics verdict");
  ode->add_option("--res", o.res, "arrow grid resolution for the SVG");
  ode->add_option("--grid", o.grid, "viewport NMIN,NMAX,PMIN,PMAX")->delimiter(',')->expected(4);
  ode->add_flag("--svg", o.svg, "emit phase_portrait.svg");

  auto* portrait = app.add_subcommand("phase-portrait", "vector field grid plus trajectory");
  add_model_flags(portrait, o);
  add_x0(portrait, o);
  portrait->add_option("-T", o.t_end, "time horizon");
  portrait->add_option("--dt", o.dt, "RK4 step");
  portrait->add_option("--tail", o.tail, "tail fraction for the asymptotics verdict");
  portrait->add_option("--grid", o.grid, "NMIN,NMAX,PMIN,PMAX")->delimiter(',')->expected(4);
  portrait->add_option("--res", o.res, "grid resolution per axis");
  portrait->add_flag("--svg", o.svg, "emit phase_portrait.svg");

  auto* sde = app.add_subcommand("simulate-sde", "one Euler-Maruyama sample path");
  add_model_flags(sde, o);
  add_sim_flags(sde, o);

  auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo mean, variance and error bands");
  add_model_flags(ensemble, o);
  add_sim_flags(ensemble, o);
  ensemble->add_option("--runs", o.runs, "number of simulation runs (>= 2)");
  ensemble->add_flag("--paths", o.paths, "also write every path to paths.csv");
  ensemble->add_flag("--svg", o.svg, "emit ensemble.svg");

  auto* verify = app.add_subcommand("verify", "grid and Monte Carlo certification of the growth bounds");
  add_model_flags(verify, o);
  add_sim_flags(verify, o);
  verify->add_option("--alpha", o.alpha, "Lyapunov exponent parameter (> 2)");
  verify->add_option("--grid", o.grid, "NMIN,NMAX,PMIN,PMAX")->delimiter(',')->expected(4);
  verify->add_option("--res", o.res, "grid resolution per axis");
  verify->add_option("--p", o.p_list, "moment orders")->delimiter(',');
  verify->add_option("--runs", o.runs, "ensemble runs for the moment checks");
  verify->add_option("--c-override", o.c_override, "replace the certified constants (sanity harness)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    const bool seed_from_config = !o.config.empty() && apply_config(o, *active);
    // Seed precedence: flag, config file, $RM_SEED, built-in default.
    if (const char* env = std::getenv("RM_SEED");
        env != nullptr && !given(*active, "--seed") && !seed_from_config) {
      try {
        o.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw UsageError("RM_SEED must be an unsigned integer");
      }
    }

    if (active == analyze) return cmd_analyze(o, *active);
    if (active == ode) return cmd_ode(o, false);
    if (active == portrait) return cmd_ode(o, true);
    if (active == sde) return cmd_sde(o);
    if (active == ensemble) return cmd_ensemble(o);
    if (active == verify) return cmd_verify(o, *active);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
