#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "tpa/config.hpp"
#include "tpa/csv.hpp"
#include "tpa/drift.hpp"
#include "tpa/dynamics.hpp"
#include "tpa/engine.hpp"
#include "tpa/ensemble.hpp"
#include "tpa/rng.hpp"
#include "tpa/rules.hpp"

#ifndef TPA_VERSION
#define TPA_VERSION "0.0.0"
#endif

namespace tpa::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output file that only appears under its final name once committed.
class StagedFile {
 public:
  explicit StagedFile(fs::path target)
      : target_(std::move(target)), staging_(target_.string() + ".partial"), stream_(staging_) {
    if (!stream_) throw UsageError("cannot write " + staging_.string());
  }
  StagedFile(const StagedFile&) = delete;
  StagedFile& operator=(const StagedFile&) = delete;
  ~StagedFile() {
    if (!committed_) {
      stream_.close();
      std::error_code ec;
      fs::remove(staging_, ec);
    }
  }

  std::ostream& stream() { return stream_; }
  const fs::path& path() const { return target_; }

  void commit() {
    stream_.close();
    if (!stream_) throw std::runtime_error("failed writing " + target_.string());
    fs::rename(staging_, target_);
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path staging_;
  std::ofstream stream_;
  bool committed_ = false;
};

// Replay record written next to every output.
struct RunManifest {
  std::string command;
  json config;
  double seconds = 0.0;
  std::vector<fs::path> outputs;

  void write(const fs::path& dir) const {
    json doc{{"tool", "tpa"},
             {"version", TPA_VERSION},
             {"command", command},
             {"config", config},
             {"wall_clock_seconds", seconds},
             {"outputs", json::array()}};
    for (const auto& p : outputs) doc["outputs"].push_back(p.filename().string());
    StagedFile f(dir / (command + ".manifest.json"));
    f.stream() << doc.dump(2) << '\n';
    f.commit();
  }
};

struct ModelOptions {
  std::string config_path;
  std::string rule;
  double h = 0.05;
  int m = 2;
  std::string table;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::string mode;
  std::uint64_t record_interval = 0;
  CLI::Option* h_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* interval_opt = nullptr;
};

void add_model_options(CLI::App* app, ModelOptions& o) {
  app->add_option("--config", o.config_path, "JSON model config (or a manifest to replay)");
  app->add_option("--rule", o.rule, "linear | rps | perturbed_rps | tournament4 | custom");
  o.h_opt = app->add_option("--h", o.h, "perturbation probability for perturbed_rps");
  o.m_opt = app->add_option("--m", o.m, "neighbours per vertex for the linear rule");
  app->add_option("--table", o.table, "custom rule table (JSON)");
  o.steps_opt = app->add_option("--steps", o.steps, "vertices to add");
  o.seed_opt = app->add_option("--seed", o.seed, "64-bit RNG seed");
  app->add_option("--mode", o.mode, "aggregate | graph");
  o.interval_opt = app->add_option("--record-interval", o.record_interval, "steps between records");
}

ModelConfig resolve_config(const ModelOptions& o) {
  ModelConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw UsageError("cannot open config " + o.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
      doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
    cfg = parse_config(doc.dump());
  }
  if (!o.rule.empty()) {
    auto name = parse_rule_name(o.rule);
    if (!name) throw UsageError("unknown rule \"" + o.rule + "\"");
    cfg.rule.name = *name;
  }
  if (o.h_opt->count()) cfg.rule.h = o.h;
  if (o.m_opt->count()) cfg.rule.m = o.m;
  if (!o.table.empty()) cfg.rule.table_path = o.table;
  if (o.steps_opt->count()) cfg.steps = o.steps;
  if (o.seed_opt->count()) cfg.seed = o.seed;
  if (!o.mode.empty()) {
    auto mode = parse_engine_mode(o.mode);
    if (!mode) throw UsageError("unknown mode \"" + o.mode + "\"");
    cfg.mode = *mode;
  }
  if (o.interval_opt->count()) cfg.record_interval = o.record_interval;
  validate_config(cfg);
  return cfg;
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path("out") : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Model parse_model(const std::string& s) {
  if (s == "perturbed") return Model::kPerturbed;
  if (s == "tournament") return Model::kTournament;
  throw UsageError("unknown model \"" + s + "\" (expected perturbed or tournament)");
}

FieldSpec field_for(Model model, double h) {
  if (model == Model::kPerturbed) return PerturbedField{h};
  return TournamentField{};
}

// Uniform point of the open simplex (Dirichlet(1,1,1)).
SimplexPoint random_simplex_point(Rng& rng) {
  double e[3];
  for (double& v : e) v = -std::log1p(-rng.uniform01());
  return simplex_from_weights(e[0], e[1], e[2]);
}

void warn_config(const ModelConfig& cfg, std::ostream& err) {
  for (const auto& w : config_warnings(cfg)) err << "warning: " << w << '\n';
}

int cmd_simulate(const ModelOptions& o, const std::string& out_dir, bool export_graph,
                 std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const ModelConfig cfg = resolve_config(o);
  warn_config(cfg, err);
  if (export_graph && cfg.mode != EngineMode::kGraph) throw UsageError("--export-graph needs --mode graph");
  const RuleTable rule = make_rule(cfg.rule);
  const fs::path dir = prepare_out_dir(out_dir);

  RunHooks hooks;
  hooks.progress = [&](std::uint64_t done) { err << "progress: " << done << " / " << cfg.steps << '\n'; };
  const RunResult result = run_model(cfg, rule, hooks);

  RunManifest manifest{"simulate", json::parse(config_to_json(cfg)), 0.0, {}};
  StagedFile csv(dir / "trajectory.csv");
  write_trajectory_csv(csv.stream(), result.records);
  csv.commit();
  manifest.outputs.push_back(csv.path());

  if (export_graph) {
    StagedFile edges(dir / "edges.txt");
    write_edge_list(result.final_state, edges.stream());
    edges.commit();
    StagedFile types(dir / "vertex_types.txt");
    write_vertex_types(result.final_state, types.stream());
    types.commit();
    manifest.outputs.push_back(edges.path());
    manifest.outputs.push_back(types.path());
  }
  manifest.seconds = seconds_since(start);
  manifest.write(dir);

  const auto& last = result.records.back();
  out << "final step=" << last.step << " X=" << format_real(last.degree.x())
      << " Y=" << format_real(last.degree.y()) << " Z=" << format_real(last.degree.z())
      << " product27=" << format_real(last.product27) << '\n';
  return kExitOk;
}

int cmd_ensemble(const ModelOptions& o, const std::string& out_dir, std::uint64_t runs, unsigned jobs,
                 std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  if (runs == 0) throw UsageError("--runs must be at least 1");
  const ModelConfig cfg = resolve_config(o);
  warn_config(cfg, err);
  const RuleTable rule = make_rule(cfg.rule);
  const fs::path dir = prepare_out_dir(out_dir);

  const auto members = run_ensemble(cfg, rule, runs, jobs);

  StagedFile csv(dir / "ensemble.csv");
  csv.stream() << "run,seed," << kTrajectoryHeader << '\n';
  for (const auto& m : members) {
    csv.stream() << m.index << ',' << m.seed << ',';
    write_trajectory_row(csv.stream(), m.final_record);
  }
  csv.commit();

  json config = json::parse(config_to_json(cfg));
  config["runs"] = runs;
  RunManifest manifest{"ensemble", config, seconds_since(start), {csv.path()}};
  manifest.write(dir);

  std::vector<double> products;
  for (const auto& m : members) products.push_back(m.final_record.product27);
  double mean = 0.0;
  for (double p : products) mean += p;
  mean /= static_cast<double>(products.size());
  double var = 0.0;
  for (double p : products) var += (p - mean) * (p - mean);
  const double sd = products.size() > 1 ? std::sqrt(var / static_cast<double>(products.size() - 1)) : 0.0;
  std::nth_element(products.begin(), products.begin() + static_cast<long>(products.size() / 2), products.end());
  out << "runs=" << runs << " product27 mean=" << format_real(mean) << " sd=" << format_real(sd)
      << " median=" << format_real(products[products.size() / 2]) << '\n';
  return kExitOk;
}

int cmd_drift_check(const ModelOptions& o, std::uint64_t samples, std::ostream& out) {
  ModelConfig cfg = resolve_config(o);
  const RuleTable rule = make_rule(cfg.rule);

  std::optional<FieldSpec> closed;
  switch (cfg.rule.name) {
    case RuleName::kRps: closed = PerturbedField{0.0}; break;
    case RuleName::kPerturbedRps: closed = PerturbedField{cfg.rule.h}; break;
    case RuleName::kTournament4: closed = TournamentField{}; break;
    case RuleName::kLinear: break;  // closed form is the zero field
    case RuleName::kCustom: throw UsageError("custom rules have no closed-form field to check against");
  }

  Rng rng(cfg.seed);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const SimplexPoint p = random_simplex_point(rng);
    const Vec3 drift = exact_drift(rule, p);
    const Vec3 ref = closed ? evaluate(*closed, p) : Vec3{0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(drift[c] - ref[c]));
  }
  constexpr double kGate = 1e-12;
  const bool ok = worst < kGate;
  out << "rule=" << to_string(cfg.rule.name) << " samples=" << samples
      << " max_discrepancy=" << format_real(worst) << " gate=" << kGate << ' '
      << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitGate;
}

SimplexPoint parse_point(const std::vector<double>& v) {
  if (v.size() != 3) throw UsageError("--x0 needs three comma-separated values");
  try {
    return SimplexPoint(v[0], v[1], v[2]);
  } catch (const std::domain_error& e) {
    throw UsageError(std::string("--x0: ") + e.what());
  }
}

int cmd_ode(const std::string& model_name, double h, const std::vector<double>& x0v, double dt,
            std::size_t steps, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Model model = parse_model(model_name);
  const FieldSpec spec = field_for(model, h);
  const SimplexPoint x0 = parse_point(x0v);
  const fs::path dir = prepare_out_dir(out_dir);

  const Trajectory traj = integrate(spec, x0, dt, steps);

  // Vertex proportions follow dA/dt = q(x) - A with q = x + 2P(x); the
  // linear equation is stepped exactly with q trapezoidal over each step.
  auto q_of = [&](const SimplexPoint& p) {
    const Vec3 f = evaluate(spec, p);
    return Vec3{p[0] + 2 * f[0], p[1] + 2 * f[1], p[2] + 2 * f[2]};
  };
  const double decay = std::exp(-dt);
  Vec3 a = x0.coords();
  Vec3 q_prev = q_of(x0);

  StagedFile csv(dir / "ode.csv");
  csv.stream() << "time,A,B,C,X,Y,Z,product27,xyz\n";
  bool monotone = true;
  std::size_t first_violation = 0;
  double prev_xyz = x0.product();
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const SimplexPoint& p = traj.points[i];
    if (i > 0) {
      const Vec3 q = q_of(p);
      for (std::size_t c = 0; c < 3; ++c) a[c] = a[c] * decay + (1 - decay) * (q_prev[c] + q[c]) / 2;
      q_prev = q;
      if (p.product() < prev_xyz - 1e-12 && monotone) {
        monotone = false;
        first_violation = i;
      }
      prev_xyz = p.product();
    }
    auto& s = csv.stream();
    s << format_real(static_cast<double>(i) * dt);
    for (double v : a) s << ',' << format_real(v);
    for (double v : p.coords()) s << ',' << format_real(v);
    s << ',' << format_real(27 * p.product()) << ',' << format_real(p.product()) << '\n';
  }
  csv.commit();

  json config{{"model", model_name}, {"h", h}, {"x0", x0v}, {"dt", dt}, {"steps", steps}};
  RunManifest{"ode", config, seconds_since(start), {csv.path()}}.write(dir);

  const auto& last = traj.points.back();
  out << "final x=" << format_real(last.x()) << " y=" << format_real(last.y())
      << " z=" << format_real(last.z()) << " renormalizations=" << traj.renormalizations << '\n';

  const bool interior = x0.x() > 0 && x0.y() > 0 && x0.z() > 0;
  const bool gated = interior && (model == Model::kTournament || h > 0);
  if (gated && !monotone) {
    err << "xyz decreased by more than 1e-12 at step " << first_violation << '\n';
    return kExitGate;
  }
  return kExitOk;
}

int cmd_stationary(const std::string& model_name, double h, int grid, double tol,
                   const std::string& out_dir, std::ostream& out) {
  const auto start = Clock::now();
  FieldSpec spec = model_name == "linear" ? FieldSpec{RuleField{linear_rule(2)}}
                                          : field_for(parse_model(model_name), h);
  const fs::path dir = prepare_out_dir(out_dir);
  const StationarySearch search = find_stationary_points(spec, grid, tol);

  StagedFile csv(dir / "stationary.csv");
  csv.stream() << "x,y,z,class,A,B,C\n";
  for (const auto& p : search.points) {
    csv.stream() << format_real(p.location.x()) << ',' << format_real(p.location.y()) << ','
                 << format_real(p.location.z()) << ',' << to_string(p.kind) << ','
                 << format_real(p.hessian.xx) << ',' << format_real(p.hessian.xy) << ','
                 << format_real(p.hessian.yy) << '\n';
  }
  csv.commit();
  json config{{"model", model_name}, {"h", h}, {"grid", grid}, {"tol", tol}};
  RunManifest{"stationary", config, seconds_since(start), {csv.path()}}.write(dir);

  if (search.field_identically_zero) {
    out << "field is identically zero; every point is stationary\n";
  } else {
    out << "stationary points=" << search.points.size() << " starts=" << search.starts
        << " non_converged=" << search.non_converged << " outside=" << search.outside_simplex << '\n';
  }
  return kExitOk;
}

int cmd_lyapunov_grid(const std::string& model_name, double h, int density, const std::string& out_dir,
                      std::ostream& out) {
  const auto start = Clock::now();
  const FieldSpec spec = field_for(parse_model(model_name), h);
  const fs::path dir = prepare_out_dir(out_dir);
  const auto grid = lyapunov_grid(spec, density);

  StagedFile csv(dir / "lyapunov_grid.csv");
  csv.stream() << "x,y,z,value\n";
  const GridValue* lowest = &grid.front();
  for (const auto& g : grid) {
    csv.stream() << format_real(g.point.x()) << ',' << format_real(g.point.y()) << ','
                 << format_real(g.point.z()) << ',' << format_real(g.value) << '\n';
    if (g.value < lowest->value) lowest = &g;
  }
  csv.commit();
  json config{{"model", model_name}, {"h", h}, {"density", density}};
  RunManifest{"lyapunov-grid", config, seconds_since(start), {csv.path()}}.write(dir);

  out << "min d(xyz)/dt=" << format_real(lowest->value) << " at (" << format_real(lowest->point.x())
      << ',' << format_real(lowest->point.y()) << ',' << format_real(lowest->point.z()) << ")\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Typed preferential attachment: simulation and mean-field analysis", "tpa"};
  app.set_help_flag("--help", "print help");  // -h is taken by the perturbation flag
  app.require_subcommand(1);
  app.set_version_flag("--version", TPA_VERSION);

  std::string out_dir = "out";
  unsigned jobs = 0;

  ModelOptions sim_opts;
  bool export_graph = false;
  auto* simulate = app.add_subcommand("simulate", "run one simulation and write trajectory.csv");
  add_model_options(simulate, sim_opts);
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_flag("--export-graph", export_graph, "graph mode: also write edges.txt and vertex_types.txt");

  ModelOptions ens_opts;
  std::uint64_t runs = 10;
  auto* ensemble = app.add_subcommand("ensemble", "run independent seeds and write ensemble.csv");
  add_model_options(ensemble, ens_opts);
  ensemble->add_option("--runs", runs, "number of runs");
  ensemble->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  ensemble->add_option("--out", out_dir, "output directory");

  ModelOptions drift_opts;
  std::uint64_t samples = 1000;
  auto* drift = app.add_subcommand("drift-check", "compare the rule-table drift with the closed-form field");
  add_model_options(drift, drift_opts);
  drift->add_option("--samples", samples, "random simplex points");

  std::string model = "perturbed";
  double h = 0.05;
  std::vector<double> x0{0.5, 0.3, 0.2};
  double dt = 0.01;
  std::size_t ode_steps = 100000;
  auto* ode = app.add_subcommand("ode", "integrate the mean-field ODE with RK4");
  ode->add_option("--model", model, "perturbed | tournament");
  ode->add_option("--h", h, "perturbation probability");
  ode->add_option("--x0", x0, "start point x,y,z")->delimiter(',')->expected(3);
  ode->add_option("--dt", dt, "time step");
  ode->add_option("--steps", ode_steps, "number of steps");
  ode->add_option("--out", out_dir, "output directory");

  int grid = 40;
  double tol = 1e-10;
  auto* stationary = app.add_subcommand("stationary", "locate and classify stationary points of f");
  stationary->add_option("--model", model, "perturbed | tournament | linear");
  stationary->add_option("--h", h, "perturbation probability");
  stationary->add_option("--grid", grid, "Newton start grid density");
  stationary->add_option("--tol", tol, "stationarity tolerance");
  stationary->add_option("--out", out_dir, "output directory");

  int density = 200;
  auto* lgrid = app.add_subcommand("lyapunov-grid", "sample d(xyz)/dt on an interior grid");
  lgrid->add_option("--model", model, "perturbed | tournament");
  lgrid->add_option("--h", h, "perturbation probability");
  lgrid->add_option("--density", density, "grid density");
  lgrid->add_option("--out", out_dir, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_opts, out_dir, export_graph, out, err);
    if (ensemble->parsed()) return cmd_ensemble(ens_opts, out_dir, runs, jobs, out, err);
    if (drift->parsed()) return cmd_drift_check(drift_opts, samples, out);
    if (ode->parsed()) return cmd_ode(model, h, x0, dt, ode_steps, out_dir, out, err);
    if (stationary->parsed()) return cmd_stationary(model, h, grid, tol, out_dir, out);
    if (lgrid->parsed()) return cmd_lyapunov_grid(model, h, density, out_dir, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tpa::cli
