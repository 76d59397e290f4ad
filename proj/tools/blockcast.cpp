// blockcast: reconstruction-threshold toolkit for the blocked 4-state
// broadcast channel. Subcommands: eig, exact, evolve, dynamics, scan, verify.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error,
// 3 enumeration-budget refusal.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blockcast/blockcast.hpp"
#include "blockcast/chart.hpp"

namespace {

using namespace blockcast;

struct OutputTarget {
  std::string path;  // empty = stdout
  std::ofstream file;

  std::ostream& stream() { return path.empty() ? std::cout : file; }

  void open() {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
  }
};

void emit_manifest(RunManifest m, const OutputTarget& out, const WallClock& clock) {
  m.wall_time_seconds = clock.seconds();
  if (!out.path.empty()) m.output_paths.push_back(out.path);
  if (out.path.empty()) {
    std::cerr << m.to_json() << "\n";
  } else {
    std::ofstream mf(out.path + ".manifest.json");
    mf << m.to_json() << "\n";
  }
}

ChannelParams resolve_channel(const std::string& channel_str, const std::string& spectrum_str) {
  if (!channel_str.empty() && !spectrum_str.empty())
    throw CLI::ValidationError("give either --channel or --spectrum, not both");
  if (!channel_str.empty()) {
    // accepts the 5-field channel record or the 4-field "d l1 l2 l3" record
    return parse_channel_record(channel_str).channel;
  }
  if (!spectrum_str.empty()) {
    const auto f = split_fields(spectrum_str);
    if (f.size() != 3)
      throw CLI::ValidationError("--spectrum needs lam1,lam2,lam3");
    return from_spectrum({f[0], f[1], f[2]});
  }
  throw CLI::ValidationError("a channel is required: --channel p0,p1,p2,pbar0,pbar1 or --spectrum l1,l2,l3");
}

std::string shape_str(const TreeShape& s) {
  return "d" + std::to_string(s.d) + "n" + std::to_string(s.n);
}

// --grid lam1=a:b:step,lam2=v1;v2,lam3=0.1
std::vector<double> parse_grid_axis(const std::string& body) {
  std::vector<double> vals;
  if (body.find(':') != std::string::npos) {
    double a, b, step;
    char c1, c2;
    std::istringstream is(body);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
      throw CLI::ValidationError("grid axis must be a:b:step or v1;v2;...");
    for (double v = a; v <= b + 1e-12; v += step) vals.push_back(v);
  } else {
    std::string item;
    std::istringstream is(body);
    while (std::getline(is, item, ';'))
      if (!item.empty()) vals.push_back(std::stod(item));
  }
  if (vals.empty()) throw CLI::ValidationError("empty grid axis");
  return vals;
}

struct GridSpec {
  std::vector<double> lam1{0}, lam2{0}, lam3{0};
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::string item;
  std::istringstream is(text);
  bool saw1 = false, saw2 = false, saw3 = false;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("grid item must be name=range");
    const std::string name = item.substr(0, eq);
    const auto vals = parse_grid_axis(item.substr(eq + 1));
    if (name == "lam1") {
      g.lam1 = vals;
      saw1 = true;
    } else if (name == "lam2") {
      g.lam2 = vals;
      saw2 = true;
    } else if (name == "lam3") {
      g.lam3 = vals;
      saw3 = true;
    } else {
      throw CLI::ValidationError("unknown grid axis: " + name);
    }
  }
  if (!saw1 && !saw2 && !saw3) throw CLI::ValidationError("--grid needs at least one axis");
  return g;
}

// ---------------------------------------------------------------------------

int cmd_eig(const std::string& channel_str, const std::string& spectrum_str,
            const std::vector<int>& ds, OutputTarget& out) {
  WallClock clock;
  const ChannelParams raw = resolve_channel(channel_str, spectrum_str);
  const auto norm = normalize_blocks(raw);
  const ChannelParams ch = norm.channel;
  const SpectrumT s = spectrum(ch);
  out.open();
  auto& os = out.stream();
  os << "# channel: " << format_channel(ch) << "\n";
  if (norm.swapped) os << "# blocks swapped so that |lam1| >= |lam3|\n";
  if (norm.tied) os << "# |lam1| == |lam3|: outside the Main Theorem hypothesis\n";
  CsvWriter csv(os);
  csv.header({"d", "p0", "p1", "p2", "pbar0", "pbar1", "lam1", "lam2", "lam3", "lambda_star",
              "ks_value", "ks_reconstructible"});
  for (int d : ds) {
    const KSReport ks = ks_parameter(s, d);
    csv.field(d).field(ch.p0).field(ch.p1).field(ch.p2).field(ch.pbar0).field(ch.pbar1);
    csv.field(s.lam1).field(s.lam2).field(s.lam3);
    csv.field(ks.lambda_star).field(ks.ks_value).field(ks.ks_reconstructible);
    csv.endrow();
  }
  RunManifest man;
  man.subcommand = "eig";
  man.parameters = {{"channel", format_channel(ch)},
                    {"swapped", norm.swapped ? "1" : "0"}};
  emit_manifest(std::move(man), out, clock);
  return 0;
}

int cmd_exact(const std::string& channel_str, const std::string& spectrum_str, int d, int n,
              const std::string& mode, int root, std::int64_t samples, std::uint64_t seed,
              int workers, OutputTarget& out) {
  WallClock clock;
  const ChannelParams ch = resolve_channel(channel_str, spectrum_str);
  out.open();
  auto& os = out.stream();
  RunManifest man;
  man.subcommand = "exact";
  man.seed = seed;
  man.parameters = {{"channel", format_channel(ch)}, {"d", std::to_string(d)},
                    {"n", std::to_string(n)},        {"mode", mode},
                    {"root", std::to_string(root)},  {"samples", std::to_string(samples)},
                    {"workers", std::to_string(workers)}};
  if (mode == "moments") {
    CsvWriter csv(os);
    csv.header({"n", "x", "y", "z", "u", "v", "w", "xbar", "ybar", "zbar", "ubar", "vbar",
                "wbar", "tv12", "tv13"});
    for (int level = 0; level <= n; ++level) {
      const auto full = exact_moments_full(ch, TreeShape{d, level}, workers);
      const MomentSet& m = full.moments;
      csv.field(level).field(m.x).field(m.y).field(m.z).field(m.u).field(m.v).field(m.w);
      csv.field(m.xbar).field(m.ybar).field(m.zbar).field(m.ubar).field(m.vbar).field(m.wbar);
      csv.field(full.tv12).field(full.tv13);
      csv.endrow();
    }
  } else if (mode == "dist") {
    CsvWriter csv(os);
    csv.header({"config", "probability"});
    const TreeShape shape{d, n};
    const auto leaves = shape.leaf_count();
    leaf_distribution(ch, shape, root, [&](std::int64_t idx, double p) {
      csv.field(LeafConfig::from_index(idx, leaves).to_string()).field(p);
      csv.endrow();
    });
  } else if (mode == "sample") {
    CsvWriter csv(os);
    csv.header({"sample", "config"});
    for (std::int64_t k = 0; k < samples; ++k) {
      const auto cfg = sample_broadcast(ch, TreeShape{d, n}, root, seed + static_cast<std::uint64_t>(k));
      csv.field(k).field(cfg.to_string());
      csv.endrow();
    }
  } else {
    throw CLI::ValidationError("--mode must be moments, dist or sample");
  }
  emit_manifest(std::move(man), out, clock);
  return 0;
}

int cmd_evolve(const std::string& channel_str, const std::string& spectrum_str, int d,
               const EvolveConfig& cfg, const std::string& chart_path, OutputTarget& out) {
  WallClock clock;
  const ChannelParams ch = resolve_channel(channel_str, spectrum_str);
  const RunResult res = run(ch, d, cfg);
  out.open();
  auto& os = out.stream();
  CsvWriter csv(os);
  csv.header({"n", "x_hat", "stderr_x", "xbar_hat", "stderr_xbar", "z_hat", "verdict"});
  for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
    const auto& t = res.trajectory[i];
    csv.field(t.n).field(t.x_hat).field(t.stderr_x).field(t.xbar_hat).field(t.stderr_xbar);
    csv.field(t.z_hat);
    csv.field(i + 1 == res.trajectory.size() ? std::string(to_string(res.verdict))
                                             : std::string("pending"));
    csv.endrow();
  }
  std::cerr << "verdict: " << to_string(res.verdict) << "  plateau_x: " << format_double17(res.plateau_x)
            << "  levels: " << res.levels_run
            << (res.monotonicity_violation ? "  [monotonicity violation > 5 sigma]" : "") << "\n";
  if (!chart_path.empty()) {
    ChartSeries sx{"x_hat", {}, false}, sxb{"xbar_hat", {}, false};
    for (const auto& t : res.trajectory) {
      sx.points.emplace_back(t.n, t.x_hat);
      sxb.points.emplace_back(t.n, t.xbar_hat);
    }
    write_svg_chart(chart_path, "density evolution trajectory", "level n", "moment estimate",
                    {sx, sxb});
  }
  RunManifest man;
  man.subcommand = "evolve";
  man.seed = cfg.seed;
  man.parameters = {{"channel", format_channel(ch)},
                    {"d", std::to_string(d)},
                    {"pop", std::to_string(cfg.population_size)},
                    {"depth", std::to_string(cfg.max_depth)},
                    {"plateau_window", std::to_string(cfg.plateau_window)},
                    {"plateau_rel_tol", format_double17(cfg.plateau_rel_tol)},
                    {"extinction_tol", format_double17(cfg.extinction_tol)},
                    {"workers", std::to_string(cfg.workers)},
                    {"chart", chart_path},
                    {"verdict", to_string(res.verdict)},
                    {"plateau_x", format_double17(res.plateau_x)}};
  emit_manifest(std::move(man), out, clock);
  return 0;
}

int cmd_dynamics(const std::string& spectrum_str, const std::string& channel_str, int d,
                 const std::string& init_str, int steps, double fp_tol,
                 const std::string& chart_path, OutputTarget& out) {
  WallClock clock;
  SpectrumT s;
  if (!spectrum_str.empty()) {
    const auto f = split_fields(spectrum_str);
    if (f.size() != 3) throw CLI::ValidationError("--spectrum needs lam1,lam2,lam3");
    s = {f[0], f[1], f[2]};
  } else {
    s = spectrum(resolve_channel(channel_str, ""));
  }
  const auto norm = normalize_dyn(DynParams{d, s.lam1, s.lam2, s.lam3});
  const DynParams p = norm.params;
  DynState init = physical_initial_state();
  if (!init_str.empty()) {
    const auto f = split_fields(init_str);
    if (f.size() != 3) throw CLI::ValidationError("--init needs X,Xbar,Z");
    init = {f[0], f[1], f[2]};
  }
  const Trajectory traj = iterate(init, p, steps);
  out.open();
  auto& os = out.stream();
  CsvWriter csv(os);
  csv.header({"k", "X", "Xbar", "Z"});
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    csv.field(static_cast<std::int64_t>(k)).field(traj.states[k].X).field(traj.states[k].Xbar);
    csv.field(traj.states[k].Z);
    csv.endrow();
  }
  if (!chart_path.empty()) {
    ChartSeries sX{"X", {}, false}, sXb{"Xbar", {}, false}, sZ{"Z", {}, false};
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      sX.points.emplace_back(static_cast<double>(k), traj.states[k].X);
      sXb.points.emplace_back(static_cast<double>(k), traj.states[k].Xbar);
      sZ.points.emplace_back(static_cast<double>(k), traj.states[k].Z);
    }
    write_svg_chart(chart_path, "truncated dynamics trajectory", "step", "state", {sX, sXb, sZ});
  }
  const auto origin_rep = find_fixed_point(p, DynState{0, 0, 0}, fp_tol);
  const auto fp_rep = find_fixed_point(p, init, fp_tol);
  std::cerr << "origin: spectral radius " << format_double17(origin_rep.jacobian_spectral_radius)
            << " (" << to_string(origin_rep.classification) << ")\n";
  std::cerr << "fixed point from init: (" << format_double17(fp_rep.location.X) << ", "
            << format_double17(fp_rep.location.Xbar) << ", " << format_double17(fp_rep.location.Z)
            << ") residual " << format_double17(fp_rep.residual) << " ("
            << to_string(fp_rep.classification) << ")\n";
  if (traj.diverged) std::cerr << "trajectory diverged (truncated)\n";
  if (traj.first_cone_exit >= 0)
    std::cerr << "trajectory left the nonnegative cone at step " << traj.first_cone_exit << "\n";
  RunManifest man;
  man.subcommand = "dynamics";
  man.parameters = {{"d", std::to_string(d)},
                    {"lam1", format_double17(p.lam1)},
                    {"lam2", format_double17(p.lam2)},
                    {"lam3", format_double17(p.lam3)},
                    {"swapped", norm.swapped ? "1" : "0"},
                    {"steps", std::to_string(steps)},
                    {"init", format_double17(init.X) + "," + format_double17(init.Xbar) + "," +
                                 format_double17(init.Z)}};
  emit_manifest(std::move(man), out, clock);
  return 0;
}

int cmd_scan(const std::vector<int>& ds, const std::string& grid_str, bool de_crosscheck,
             const EvolveConfig& de_cfg, int workers, const std::string& chart_path,
             OutputTarget& out) {
  WallClock clock;
  const GridSpec grid = parse_grid(grid_str);
  ScanOptions opt;
  opt.workers = workers;
  auto rows = nontightness_scan(ds, grid.lam1, grid.lam2, grid.lam3, opt);
  out.open();
  auto& os = out.stream();
  CsvWriter csv(os);
  csv.header({"d", "lam1", "lam2", "lam3", "ks_value", "origin_stable", "nonzero_attractor",
              "attr_X", "attr_Xbar", "attr_Z", "de_verdict", "hypothesis_ok", "swapped",
              "attr_residual", "growth_ok", "zx_ratio"});
  int infeasible = 0;
  for (auto& r : rows) {
    if (!r.feasible) {
      ++infeasible;
      std::cerr << "skipped: " << r.skip_reason << "\n";
      continue;
    }
    std::string de_verdict;
    if (de_crosscheck) {
      const auto ch = from_spectrum({r.params.lam1, r.params.lam2, r.params.lam3});
      de_verdict = to_string(run(ch, r.params.d, de_cfg).verdict);
    }
    csv.field(r.params.d).field(r.params.lam1).field(r.params.lam2).field(r.params.lam3);
    csv.field(r.ks_value).field(r.origin_stable).field(r.nonzero_attractor);
    if (r.attractor) {
      csv.field(r.attractor->X).field(r.attractor->Xbar).field(r.attractor->Z);
    } else {
      csv.field(std::string()).field(std::string()).field(std::string());
    }
    csv.field(de_verdict).field(r.hypothesis_ok).field(r.swapped).field(r.attractor_residual);
    csv.field(r.nonzero_attractor ? r.growth_ok : false).field(r.zx_ratio);
    csv.endrow();
  }
  std::cerr << rows.size() - static_cast<std::size_t>(infeasible) << " feasible points, "
            << infeasible << " infeasible skipped\n";
  if (!chart_path.empty()) {
    ChartSeries with{"nonzero attractor", {}, true}, without{"origin only", {}, true};
    for (const auto& r : rows) {
      if (!r.feasible) continue;
      (r.nonzero_attractor ? with : without)
          .points.emplace_back(r.params.lam1, r.params.lam2);
    }
    write_svg_chart(chart_path, "non-tightness scan", "lam1", "lam2", {with, without});
  }
  RunManifest man;
  man.subcommand = "scan";
  man.seed = de_cfg.seed;
  man.parameters = {{"grid", grid_str},
                    {"de_crosscheck", de_crosscheck ? "1" : "0"},
                    {"workers", std::to_string(workers)}};
  emit_manifest(std::move(man), out, clock);
  return 0;
}

int cmd_verify(int corpus, std::uint64_t seed, const std::vector<int>& ds, int max_n, double tol,
               int workers, bool monitor, const std::string& channel_str,
               const std::string& spectrum_str, int d_monitor, const EvolveConfig& de_cfg,
               OutputTarget& out) {
  WallClock clock;
  out.open();
  auto& os = out.stream();
  RunManifest man;
  man.seed = seed;
  if (monitor) {
    const ChannelParams ch = resolve_channel(channel_str, spectrum_str);
    const auto rows = monitor_concentration(ch, d_monitor, de_cfg);
    CsvWriter csv(os);
    csv.header({"n", "x_hat", "u_ratio", "w_ratio", "wbar_ratio"});
    for (const auto& r : rows) {
      csv.field(r.n).field(r.x_hat).field(r.u_ratio).field(r.w_ratio).field(r.wbar_ratio);
      csv.endrow();
    }
    man.subcommand = "verify-monitor";
    man.parameters = {{"channel", format_channel(ch)}, {"d", std::to_string(d_monitor)}};
    emit_manifest(std::move(man), out, clock);
    return 0;
  }
  const SuiteResult res = run_verification_suite(corpus, seed, ds, max_n, tol, workers);
  CsvWriter csv(os);
  csv.header({"check_id", "channel", "shape", "residual", "tolerance", "pass"});
  for (const auto& r : res.reports) {
    csv.field(r.check_id).field(format_channel(r.channel)).field(shape_str(r.shape));
    csv.field(r.inequality ? r.signed_slack : r.max_abs_residual);
    csv.field(r.tolerance).field(r.pass);
    csv.endrow();
  }
  std::cerr << (res.all_pass ? "all checks pass" : "CHECK FAILURES present") << " ("
            << res.reports.size() << " reports)\n";
  man.subcommand = "verify";
  man.parameters = {{"corpus", std::to_string(corpus)},
                    {"max_n", std::to_string(max_n)},
                    {"tol", format_double17(tol)},
                    {"workers", std::to_string(workers)}};
  emit_manifest(std::move(man), out, clock);
  return res.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blockcast: reconstruction thresholds for the blocked 4-state broadcast channel"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags (--workers, --config) are accepted after a subcommand
  app.set_config("--config", "", "config file with key = value lines, # comments, [subcommand] sections");
  int workers = default_workers();
  app.add_option("--workers", workers, "worker threads (default: machine parallelism)")
      ->capture_default_str();

  std::string channel_str, spectrum_str, out_path, mode = "moments", init_str, grid_str;
  std::string chart_path;
  std::vector<int> ds{2};
  int d = 2, n = 2, root = 1, steps = 100;
  std::int64_t samples = 10;
  std::uint64_t seed = 0;
  double fp_tol = 1e-12, tol = 1e-10;
  int corpus = 20, max_n = 3;
  bool de_crosscheck = false, monitor = false;
  EvolveConfig cfg;

  auto add_channel_opts = [&](CLI::App* sub) {
    sub->add_option("--channel", channel_str, "channel record p0,p1,p2,pbar0,pbar1 (or d,l1,l2,l3)");
    sub->add_option("--spectrum", spectrum_str, "spectral record lam1,lam2,lam3");
    sub->add_option("--out", out_path, "output CSV path (default stdout)");
  };

  auto* eig = app.add_subcommand("eig", "channel entries, spectrum and KS report");
  add_channel_opts(eig);
  eig->add_option("--d", ds, "offspring counts to report")->capture_default_str();

  auto* exact = app.add_subcommand("exact", "exact oracle: moments, leaf distribution, sampling");
  add_channel_opts(exact);
  exact->add_option("--d", d, "offspring count")->capture_default_str();
  exact->add_option("--n", n, "depth")->capture_default_str();
  exact->add_option("--mode", mode, "moments | dist | sample")->capture_default_str();
  exact->add_option("--root", root, "conditioning root state 1..4")->capture_default_str();
  exact->add_option("--samples", samples, "sample count (mode=sample)")->capture_default_str();
  exact->add_option("--seed", seed, "RNG seed")->capture_default_str();

  auto* evolve = app.add_subcommand("evolve", "density evolution to depth");
  add_channel_opts(evolve);
  evolve->add_option("--d", d, "offspring count")->capture_default_str();
  evolve->add_option("--pop", cfg.population_size, "samples per root state")->capture_default_str();
  evolve->add_option("--depth", cfg.max_depth, "maximum depth")->capture_default_str();
  evolve->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  evolve->add_option("--plateau-window", cfg.plateau_window)->capture_default_str();
  evolve->add_option("--plateau-rel-tol", cfg.plateau_rel_tol)->capture_default_str();
  evolve->add_option("--extinction-tol", cfg.extinction_tol)->capture_default_str();
  evolve->add_option("--chart", chart_path, "write a self-contained SVG trajectory chart");

  auto* dynamics = app.add_subcommand("dynamics", "iterate the truncated system / locate fixed points");
  add_channel_opts(dynamics);
  dynamics->add_option("--d", d, "offspring count")->capture_default_str();
  dynamics->add_option("--init", init_str, "initial state X,Xbar,Z (default 0.5,0.5,0.25)");
  dynamics->add_option("--steps", steps, "iteration steps")->capture_default_str();
  dynamics->add_option("--fp-tol", fp_tol, "fixed-point residual tolerance")->capture_default_str();
  dynamics->add_option("--chart", chart_path, "write a self-contained SVG trajectory chart");

  auto* scan = app.add_subcommand("scan", "grid scan for the non-tightness mechanism");
  scan->add_option("--d", ds, "offspring counts")->capture_default_str();
  scan->add_option("--grid", grid_str, "lam1=a:b:step,lam2=v1;v2,lam3=...")->required();
  scan->add_option("--out", out_path, "output CSV path (default stdout)");
  scan->add_flag("--de-crosscheck", de_crosscheck, "cross-check flagged points with density evolution");
  scan->add_option("--pop", cfg.population_size, "cross-check population")->capture_default_str();
  scan->add_option("--depth", cfg.max_depth, "cross-check depth")->capture_default_str();
  scan->add_option("--seed", cfg.seed, "cross-check seed")->capture_default_str();
  scan->add_option("--chart", chart_path, "write a self-contained SVG scatter of the grid");

  auto* verify = app.add_subcommand("verify", "lemma identity suite (or --monitor concentration ratios)");
  add_channel_opts(verify);
  verify->add_option("--corpus", corpus, "random channel corpus size")->capture_default_str();
  verify->add_option("--seed", seed, "corpus seed")->capture_default_str();
  verify->add_option("--d", ds, "offspring counts")->capture_default_str();
  verify->add_option("--n", max_n, "maximum depth (clipped by the enumeration budget)")
      ->capture_default_str();
  verify->add_option("--tol", tol, "identity residual tolerance")->capture_default_str();
  verify->add_flag("--monitor", monitor, "emit concentration ratio time series instead");
  verify->add_option("--pop", cfg.population_size, "monitor population")->capture_default_str();
  verify->add_option("--depth", cfg.max_depth, "monitor depth")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0; every other parse problem is usage
  }

  OutputTarget out;
  out.path = out_path;
  cfg.workers = workers;
  try {
    if (app.got_subcommand(eig)) return cmd_eig(channel_str, spectrum_str, ds, out);
    if (app.got_subcommand(exact))
      return cmd_exact(channel_str, spectrum_str, d, n, mode, root, samples, seed, workers, out);
    if (app.got_subcommand(evolve))
      return cmd_evolve(channel_str, spectrum_str, d, cfg, chart_path, out);
    if (app.got_subcommand(dynamics))
      return cmd_dynamics(spectrum_str, channel_str, d, init_str, steps, fp_tol, chart_path, out);
    if (app.got_subcommand(scan))
      return cmd_scan(ds, grid_str, de_crosscheck, cfg, workers, chart_path, out);
    if (app.got_subcommand(verify))
      return cmd_verify(corpus, seed, ds, max_n, tol, workers, monitor, channel_str, spectrum_str,
                        d, cfg, out);
  } catch (const BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
