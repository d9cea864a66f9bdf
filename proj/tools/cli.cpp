#include "cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "export.hpp"
#include "gcflow/entropy.hpp"
#include "gcflow/errors.hpp"
#include "gcflow/flow.hpp"
#include "gcflow/inequalities.hpp"
#include "json.hpp"

namespace gcf::cli {

namespace {

using nlohmann::ordered_json;

struct Setting {
  const char* flag;
  const char* help;
  bool is_switch = false;
};

const std::map<std::string, std::vector<Setting>> kSettings = {
    {"make-body",
     {{"shape", "ball | ellipse | random"},
      {"radius", "ball radius"},
      {"axes", "semi-axes, comma separated (n+1 values)"},
      {"seed", "random body seed"},
      {"amplitude", "random body amplitude in [0, 1)"},
      {"symmetric", "centrally symmetric random body", true},
      {"normalize", "rescale to the unit-ball volume", true},
      {"output", "body file name inside the output directory"}}},
    {"flow",
     {{"input", "body file to evolve"},
      {"shape", "ball | ellipse | random | file"},
      {"radius", "ball radius"},
      {"axes", "semi-axes, comma separated"},
      {"seed", "random body seed"},
      {"amplitude", "random body amplitude"},
      {"symmetric", "centrally symmetric random body", true},
      {"normalize", "rescale the input to the unit-ball volume", true},
      {"kind", "normalized | unnormalized | expanding"},
      {"alpha", "curvature power"},
      {"t-end", "final time"},
      {"sample-every", "diagnostics cadence"},
      {"tolerance", "soliton-residual early stop (0 disables)"},
      {"cfl", "explicit step safety factor"},
      {"volume-floor", "unnormalized stop at this volume fraction"},
      {"full-diagnostics", "entropy point and radii at every sample"},
      {"svg-curves", "boundary curves drawn in the SVG"}}},
    {"verify",
     {{"source", "ball | ellipse | file | fuzz"},
      {"input", "body file (source=file)"},
      {"axes", "semi-axes (source=ellipse)"},
      {"seed", "first fuzz seed"},
      {"count", "number of fuzz bodies"},
      {"amplitude", "fuzz body amplitude"},
      {"alpha", "alpha list, comma separated"}}},
    {"sweep",
     {{"alpha", "alpha list, comma separated"},
      {"seed", "seed list: 42, 1-10 or 1,4,9"},
      {"shape", "random | ellipse | ball | file"},
      {"input", "body file (shape=file)"},
      {"axes", "semi-axes (shape=ellipse)"},
      {"amplitude", "random body amplitude"},
      {"symmetric", "centrally symmetric random bodies", true},
      {"t-end", "final time per run"},
      {"segment", "restart from the entropy point after this much time"},
      {"sample-every", "diagnostics cadence"},
      {"tolerance", "soliton-residual early stop"},
      {"cfl", "explicit step safety factor"}}},
};

const std::vector<Setting> kCommon = {
    {"dim", "sphere dimension n (1 or 2)"},
    {"bandlimit", "spectral bandlimit L"},
    {"out-dir", "output directory"},
};

std::string key_of(const char* flag) {
  std::string k = flag;
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

struct Context {
  std::string command;
  Config cfg;
  std::ostream& out;

  Stamp stamp() const { return {command, cfg.digest()}; }
  std::string path(const std::string& name) const {
    return (std::filesystem::path(cfg.str("out_dir", ".")) / name).string();
  }
  int dim() const {
    const long d = cfg.integer("dim", 1);
    if (d != 1 && d != 2) throw UsageError("dim must be 1 or 2");
    return static_cast<int>(d);
  }
  GridPtr grid() const {
    const long L = cfg.integer("bandlimit", dim() == 1 ? 64 : 16);
    if (L < 4 || L > 512) throw UsageError("bandlimit must lie in [4, 512]");
    return build_grid(dim(), static_cast<int>(L));
  }
  double positive(const std::string& key, double fallback) const {
    const double v = cfg.real(key, fallback);
    if (!(v > 0.0)) throw UsageError(key + " must be positive");
    return v;
  }
  std::vector<double> alphas() const {
    const auto a = cfg.reals("alpha");
    if (a.empty()) throw UsageError("alpha list is empty");
    for (double x : a)
      if (x == 0.0) throw UsageError("alpha = 0 is not allowed");
    return a;
  }
};

void resolve_workers(const Config& cfg) {
  long workers = cfg.integer("workers", 0);
  if (const char* env = std::getenv("GCFLOW_WORKERS"); env && *env) {
    Config e;
    e.set("GCFLOW_WORKERS", env);
    workers = e.integer("GCFLOW_WORKERS", 0);
    if (workers < 1) throw UsageError("GCFLOW_WORKERS must be a positive integer");
  }
  if (workers < 0) throw UsageError("workers must be positive");
  if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
}

SupportFunction read_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read body file '" + path + "'");
  try {
    return read_body(in);
  } catch (const Error&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

SupportFunction make_body(const Context& c, const std::string& shape, std::uint64_t seed) {
  SupportFunction u;
  if (shape == "file") {
    if (!c.cfg.has("input")) throw UsageError("shape=file needs input");
    u = read_body_file(c.cfg.str("input", ""));
  } else if (shape == "ball") {
    u = ball(c.grid(), c.positive("radius", 1.0));
  } else if (shape == "ellipse" || shape == "ellipsoid") {
    const auto g = c.grid();
    const auto axes = c.cfg.reals("axes");
    if (static_cast<int>(axes.size()) != g->ambient())
      throw UsageError("axes needs " + std::to_string(g->ambient()) + " values");
    for (double a : axes)
      if (!(a > 0.0)) throw UsageError("axes must be positive");
    u = ellipsoid(g, axes);
  } else if (shape == "random") {
    const double amp = c.cfg.real("amplitude", 0.5);
    if (!(amp >= 0.0 && amp < 1.0)) throw UsageError("amplitude must lie in [0, 1)");
    u = random_body(seed, c.grid(), amp, c.cfg.flag("symmetric", false));
  } else {
    throw UsageError("unknown shape '" + shape + "'");
  }
  if (c.cfg.flag("normalize", false)) u = normalize_volume(u);
  return u;
}

std::string default_shape(const Config& cfg) { return cfg.has("input") ? "file" : "ball"; }

int cmd_make_body(Context& c) {
  const auto shape = c.cfg.str("shape", "ball");
  if (shape == "file") throw UsageError("make-body builds ball, ellipse or random bodies");
  const auto seeds = c.cfg.seeds("seed", 1);
  if (seeds.size() != 1) throw UsageError("make-body takes a single seed");
  const auto u = make_body(c, shape, seeds.front());
  curvature_data(u);
  const auto file = c.path(c.cfg.str("output", "body.txt"));
  write_file(file, body_text(c.stamp(), u));
  c.out << "wrote " << file << " (volume " << format_double(volume(u)) << ")\n";
  return kOk;
}

int cmd_flow(Context& c) {
  FlowOptions o;
  o.kind = parse_flow_kind(c.cfg.str("kind", "normalized"));
  const auto a = c.alphas();
  if (a.size() != 1) throw UsageError("flow takes a single alpha");
  o.alpha = a.front();
  if (!(o.alpha > 0.0)) throw UsageError("flows need alpha > 0");
  o.t_end = c.positive("t_end", 1.0);
  o.sample_every = c.positive("sample_every", o.t_end / 50);
  o.stop_tolerance = c.cfg.real("tolerance", -1.0);
  o.cfl = c.positive("cfl", o.cfl);
  o.volume_floor = c.positive("volume_floor", o.volume_floor);
  o.full_diagnostics = c.cfg.flag("full_diagnostics", true);

  const auto seeds = c.cfg.seeds("seed", 1);
  const auto u0 = make_body(c, c.cfg.str("shape", default_shape(c.cfg)), seeds.front());
  const int dim = u0.dim();
  o.keep_snapshots = dim == 1;
  const auto r = run(u0, o);
  const auto st = c.stamp();

  write_file(c.path("trajectory.csv"), trajectory_csv(st, dim, r.trajectory));
  write_file(c.path("final_body.txt"), body_text(st, r.final_state.u));
  if (dim == 1) {
    const long want = c.cfg.integer("svg_curves", 11);
    if (want < 1) throw UsageError("svg_curves must be positive");
    std::vector<SupportFunction> bodies;
    std::vector<double> times;
    const std::size_t n = r.snapshots.size();
    const std::size_t k = std::min<std::size_t>(n, static_cast<std::size_t>(want));
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = k == 1 ? n - 1 : i * (n - 1) / (k - 1);
      bodies.push_back(r.snapshots[j]);
      times.push_back(r.snapshot_times[j]);
    }
    write_file(c.path("curves.svg"), curves_svg(st, bodies, times));
  } else {
    write_file(c.path("final_body.obj"), body_obj(st, r.final_state.u));
  }

  ordered_json j;
  j["tool"] = "gcflow";
  j["version"] = tool_version();
  j["command"] = c.command;
  j["config_digest"] = st.digest;
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["kind"] = to_string(o.kind);
  j["alpha"] = o.alpha;
  j["dim"] = dim;
  j["bandlimit"] = u0.grid->bandlimit();
  j["steps"] = r.final_state.steps;
  j["rejected_steps"] = r.final_state.rejected_steps;
  j["final_time"] = r.final_state.time;
  j["samples"] = r.trajectory.size();
  if (!r.trajectory.empty()) {
    j["final_soliton_residual"] = r.trajectory.back().soliton_residual;
    j["final_entropy"] = std::isfinite(r.trajectory.back().entropy)
                             ? ordered_json(r.trajectory.back().entropy)
                             : ordered_json(nullptr);
  }
  if (o.kind == FlowKind::unnormalized) {
    j["extinction_lower"] = r.extinction_lower;
    j["extinction_upper"] =
        std::isfinite(r.extinction_upper) ? ordered_json(r.extinction_upper) : ordered_json(nullptr);
    auto lp = ordered_json::array();
    for (int k = 0; k < r.limit_point.size(); ++k) lp.push_back(r.limit_point[k]);
    j["limit_point"] = lp;
  }
  write_file(c.path("report.json"), j.dump(1) + "\n");

  c.out << to_string(r.status) << " at t=" << format_double(r.final_state.time) << " after "
        << r.final_state.steps << " steps\n";
  if (r.status == RunStatus::step_failed) {
    c.out << r.message << '\n';
    return kSolverFailure;
  }
  return kOk;
}

int cmd_verify(Context& c) {
  const auto alphas = c.alphas();
  const auto source = c.cfg.str("source", "fuzz");
  std::vector<CheckReport> reps;
  if (source == "fuzz") {
    FuzzOptions f;
    f.dim = c.dim();
    f.bandlimit = c.grid()->bandlimit();
    const auto seeds = c.cfg.seeds("seed", 1);
    if (seeds.size() != 1) throw UsageError("verify takes the first fuzz seed; use count for more");
    f.first_seed = seeds.front();
    const long count = c.cfg.integer("count", 100);
    if (count < 1) throw UsageError("count must be positive");
    f.count = static_cast<int>(count);
    f.amplitude = c.cfg.real("amplitude", 0.5);
    if (!(f.amplitude >= 0.0 && f.amplitude < 1.0)) throw UsageError("amplitude must lie in [0, 1)");
    f.alphas = alphas;
    reps = fuzz_suite(f);
  } else if (source == "ball" || source == "ellipse" || source == "file") {
    reps = check_all(normalize_volume(make_body(c, source, 1)), alphas);
  } else {
    throw UsageError("unknown source '" + source + "'");
  }
  const auto st = c.stamp();
  write_file(c.path("checks.csv"), checks_csv(st, reps));
  write_file(c.path("checks.json"), checks_json(st, reps));
  const auto fails = count_failures(reps);
  c.out << reps.size() << " checks, " << fails << " failures\n";
  for (const auto& r : reps)
    if (!r.pass && !r.informational) c.out << "FAIL " << r.name << " " << r.inputs << " " << r.note << '\n';
  return fails ? kCheckFailure : kOk;
}

struct SweepRow {
  double alpha = 0.0;
  std::string seed;
  std::string status;
  long steps = 0;
  double final_time = 0.0;
  double residual = NAN;
  double hausdorff = NAN;
  double band_low = NAN, band_high = NAN;
  std::string message;
  bool failed = false;
};

int cmd_sweep(Context& c) {
  const auto alphas = c.alphas();
  for (double a : alphas)
    if (!(a > 0.0)) throw UsageError("sweep needs alpha > 0");
  const auto shape = c.cfg.str("shape", "random");
  const auto seeds = c.cfg.seeds("seed", 1);
  FlowOptions o;
  o.t_end = c.positive("t_end", 100.0);
  const double segment = c.positive("segment", 10.0);
  o.sample_every = c.positive("sample_every", 1.0);
  o.stop_tolerance = c.cfg.real("tolerance", -1.0);
  o.cfl = c.positive("cfl", o.cfl);
  o.full_diagnostics = false;
  // Settle everything that can be a usage error before the parallel region.
  if (shape == "random")
    c.grid();
  else
    make_body(c, shape, 1);

  const std::size_t per_alpha = shape == "random" ? seeds.size() : 1;
  std::vector<SweepRow> rows(alphas.size() * per_alpha);
  const long total = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long t = 0; t < total; ++t) {
    const std::size_t ia = static_cast<std::size_t>(t) / per_alpha;
    const std::size_t is = static_cast<std::size_t>(t) % per_alpha;
    SweepRow& row = rows[static_cast<std::size_t>(t)];
    row.alpha = alphas[ia];
    if (shape == "random") row.seed = std::to_string(seeds[is]);
    try {
      FlowOptions mine = o;
      mine.alpha = row.alpha;
      auto u = make_body(c, shape, shape == "random" ? seeds[is] : 1);
      row.band_low = 1e300;
      row.band_high = 0.0;
      // Each segment starts from the entropy point, which keeps roundoff in
      // the unstable translation mode from building up over long runs.
      RunStatus status = RunStatus::completed;
      while (row.final_time < o.t_end * (1 - 1e-12)) {
        mine.t_end = std::min(segment, o.t_end - row.final_time);
        mine.sample_every = std::min(o.sample_every, mine.t_end);
        const auto r = run(u, mine);
        status = r.status;
        row.message = r.message;
        row.steps += r.final_state.steps;
        row.final_time += r.final_state.time;
        for (const auto& d : r.trajectory) {
          row.band_low = std::min(row.band_low, d.min_u);
          row.band_high = std::max(row.band_high, d.max_u);
        }
        u = r.final_state.u;
        if (status != RunStatus::completed) break;
      }
      row.status = to_string(status);
      row.failed = status == RunStatus::step_failed;
      const auto uz = support_about(u, entropy_point(u, row.alpha).point);
      row.residual = soliton_residual(uz, row.alpha).residual;
      row.hausdorff = 0.0;
      for (double v : uz.values) row.hausdorff = std::max(row.hausdorff, std::abs(v - 1.0));
    } catch (const std::exception& e) {
      row.status = "error";
      row.message = e.what();
      row.failed = true;
    }
  }

  std::ostringstream os;
  os << "# gcflow " << tool_version() << ' ' << c.command << " config=" << c.stamp().digest << '\n';
  os << "alpha,seed,status,steps,final_time,soliton_residual,hausdorff_to_ball,band_low,band_high,"
        "lambda_band,message\n";
  bool any_failed = false;
  for (const auto& r : rows) {
    any_failed = any_failed || r.failed;
    const double lam = std::max(r.band_high, 1.0 / r.band_low);
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    os << format_double(r.alpha) << ',' << r.seed << ',' << r.status << ',' << r.steps << ','
       << format_double(r.final_time) << ',' << format_double(r.residual) << ','
       << format_double(r.hausdorff) << ',' << format_double(r.band_low) << ','
       << format_double(r.band_high) << ',' << format_double(lam) << ',' << msg << '\n';
  }
  write_file(c.path("sweep.csv"), os.str());
  std::size_t nfail = 0;
  for (const auto& r : rows) nfail += r.failed;
  c.out << rows.size() << " runs, " << nfail << " failed\n";
  return any_failed ? kSolverFailure : kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauss curvature flows of convex bodies in support-function form"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> switches;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, settings] : kSettings) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    sub->add_option("--config", config_paths[name], "key=value settings file");
    std::vector<Setting> all = kCommon;
    all.insert(all.end(), settings.begin(), settings.end());
    for (const auto& s : all) {
      const std::string flag = std::string("--") + s.flag;
      if (s.is_switch)
        sub->add_flag(flag, switches[name][key_of(s.flag)], s.help);
      else
        sub->add_option(flag, values[name][key_of(s.flag)], s.help);
    }
  }
  subs["make-body"]->description("write a body file");
  subs["flow"]->description("evolve a body and export its trajectory");
  subs["verify"]->description("run the inequality suite");
  subs["sweep"]->description("normalized runs over alpha x seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  std::string name;
  for (const auto& [n, sub] : subs)
    if (sub->parsed()) name = n;

  try {
    Context c{name, {}, out};
    if (!config_paths[name].empty()) c.cfg = Config::load(config_paths[name]);
    std::vector<Setting> all = kCommon;
    all.insert(all.end(), kSettings.at(name).begin(), kSettings.at(name).end());
    for (const auto& s : all)
      if (!s.is_switch && subs[name]->count(std::string("--") + s.flag))
        c.cfg.set(key_of(s.flag), values[name][key_of(s.flag)]);
    for (const auto& [key, on] : switches[name])
      if (on) c.cfg.set(key, "true");

    std::vector<std::string> allowed = {"workers"};
    for (const auto& s : all) allowed.push_back(key_of(s.flag));
    c.cfg.restrict_to(allowed);
    resolve_workers(c.cfg);

    if (name == "make-body") return cmd_make_body(c);
    if (name == "flow") return cmd_flow(c);
    if (name == "verify") return cmd_verify(c);
    return cmd_sweep(c);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace gcf::cli
