#include "gilbert/cli/runner.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "gilbert/format.hpp"
#include "gilbert/growth.hpp"
#include "gilbert/lattice.hpp"
#include "gilbert/parallel.hpp"
#include "gilbert/planar_graph.hpp"
#include "gilbert/render.hpp"
#include "gilbert/rng.hpp"
#include "gilbert/sampling.hpp"
#include "gilbert/statistics.hpp"

namespace gilbert::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const std::vector<KeySpec>& common_keys() {
  static const std::vector<KeySpec> keys{
      {"seed", "1", "master seed of all random streams"},
      {"threads", "1", "worker threads for replicates; outputs do not depend on it"},
      {"output_dir", ".", "directory for outputs (env GILBERT_OUTPUT_DIR)"},
  };
  return keys;
}

const std::vector<ExperimentSpec>& experiments() {
  static const std::vector<ExperimentSpec> specs{
      {"simulate",
       "simulate one tessellation and write seeds, rays, graph and SVG",
       {{"lambda", "1", "seed intensity"},
        {"box", "20", "box side N"},
        {"horizon", "", "growth horizon (default: box side)"},
        {"mark_p", "0.5", "probability of a vertical mark"},
        {"seeds_csv", "", "read seeds from this CSV instead of sampling"},
        {"jitter", "0", "perturb degenerate input by up to this amount (0: strict)"},
        {"csv", "", "tessellation CSV path"},
        {"svg", "", "SVG path"}}},
      {"oracle-check",
       "compare the event-driven engine with the time-stepping oracle",
       {{"lambda", "1", "seed intensity"},
        {"box", "10", "box side N"},
        {"replicates", "100", "number of instances"},
        {"dt", "0.001", "oracle time step"}}},
      {"euler",
       "check the vertex, edge and face identities on Poisson instances",
       {{"lambda", "1", "seed intensity"}, {"box", "20", "box side N"}, {"replicates", "1000", "number of instances"}}},
      {"tail",
       "survival curve and exponential tail fit of the segment length",
       {{"lambda", "1", "seed intensity"},
        {"tmax", "10", "horizon of each half-ray"},
        {"replicates", "10000", "Palm replicates"},
        {"mark", "H", "mark of the pinned seed"},
        {"grid_points", "400", "survival grid points on [0, 2 tmax]"}}},
      {"scaling",
       "compare length laws at two intensities after rescaling by sqrt(lambda)",
       {{"lambda", "1", "first intensity"},
        {"lambda2", "4", "second intensity"},
        {"tmax", "10", "horizon at the first intensity; rescaled for the second"},
        {"replicates", "10000", "Palm replicates per intensity"},
        {"mark", "H", "mark of the pinned seed"},
        {"grid_points", "400", "survival grid points"}}},
      {"cov",
       "covariance of the growth events of two pinned half-rays",
       {{"lambda", "1", "background intensity (0: no background)"},
        {"u", "0,0", "first point"},
        {"v", "8,0.5", "second point"},
        {"mark_u", "H", "mark of u"},
        {"mark_v", "V", "mark of v"},
        {"side_u", "+", "half-ray of u"},
        {"side_v", "+", "half-ray of v"},
        {"t", "2", "event horizon"},
        {"replicates", "10000", "Palm replicates"}}},
      {"cov-sweep",
       "covariance against the L1 distance between the two seeds",
       {{"lambda", "1", "background intensity"},
        {"distances", "1,2,4,8", "increasing L1 distances"},
        {"offset", "0.5,0.5", "direction of v from u"},
        {"mark_u", "H", "mark of u"},
        {"mark_v", "H", "mark of v"},
        {"side_u", "+", "half-ray of u"},
        {"side_v", "+", "half-ray of v"},
        {"t", "1", "event horizon"},
        {"replicates", "10000", "Palm replicates per distance"}}},
      {"escape",
       "mean number of escaping rays against the box side",
       {{"lambda", "1", "seed intensity"},
        {"sides", "20,40,80", "increasing box sides"},
        {"replicates", "500", "instances per box side"}}},
      {"ca",
       "run the excitatory/inhibitory cellular automaton",
       {{"lattice_n", "40", "box {0..N}^2 for a random initial state"},
        {"density", "0.05", "activation probability of the random initial state"},
        {"initial_grid", "", "read the initial state from this grid file"},
        {"steps", "50", "number of steps"},
        {"history", "64", "cycle detection window"}}},
      {"lattice-rays",
       "lattice ray growth with head-on and corner collisions",
       {{"lattice_n", "20", "box side N"},
        {"n_seeds", "8", "random seeds in {1..N-1}^2"},
        {"mark_p", "0.5", "probability of a vertical mark"},
        {"horizon", "", "integer horizon (default: N)"},
        {"svg", "", "SVG path"}}},
  };
  return specs;
}

const ExperimentSpec& experiment(const std::string& name) {
  for (const auto& e : experiments()) {
    if (e.name == name) return e;
  }
  throw UsageError("unknown experiment '" + name + "'");
}

Config defaults_for(const std::string& name) {
  Config c;
  c.set("experiment", name);
  for (const auto& k : common_keys()) c.set(k.key, k.default_value);
  for (const auto& k : experiment(name).keys) {
    if (!k.default_value.empty()) c.set(k.key, k.default_value);
  }
  return c;
}

namespace {

struct Context {
  const Config& cfg;
  fs::path dir;
  std::string prefix;
  int threads;
  std::uint64_t seed;
  std::vector<fs::path> outputs;

  fs::path file(const std::string& suffix) const { return dir / (prefix + "_" + suffix); }
  std::string optional(const std::string& key) const { return cfg.has(key) ? cfg.text(key) : std::string(); }
};

std::ofstream open_output(Context& ctx, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  ctx.outputs.push_back(path);
  return out;
}

void write_json(Context& ctx, const fs::path& path, const json& doc) {
  auto out = open_output(ctx, path);
  out << doc.dump(2) << '\n';
}

int replicates_of(const Config& c) {
  const long long r = c.integer("replicates");
  if (r < 1 || r > 100000000) throw UsageError("'replicates' must be at least 1");
  return static_cast<int>(r);
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

json estimate_json(const CovarianceEstimate& e) {
  return {{"value", e.value},     {"std_error", e.std_error}, {"replicates", e.replicates},
          {"p_a", e.p_a},         {"p_b", e.p_b},             {"p_joint", e.p_joint},
          {"joint_count", e.joint_count}};
}

json fit_json(const TailFit& f) {
  return {{"rate", f.rate},   {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"t_lo", f.t_lo},   {"t_hi", f.t_hi},           {"points", f.points}};
}

// ---------------------------------------------------------------------------

int run_simulate(Context& ctx) {
  const Config& c = ctx.cfg;
  const double box = c.positive("box");
  const double horizon = ctx.optional("horizon").empty() ? box : c.positive("horizon");
  SeedSet seeds;
  if (const auto path = ctx.optional("seeds_csv"); !path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read seeds file " + path);
    seeds = read_seed_csv(in);
    seeds.window = Window::of(BoxDomain(box));
  } else {
    seeds = sample_poisson(BoxDomain(box), c.positive("lambda"), MarkDistribution(c.real("mark_p")), ctx.seed);
  }
  if (const double eps = c.real("jitter"); eps > 0.0) {
    if (!in_general_position(seeds.seeds)) seeds = jitter(seeds, eps, stream_seed(ctx.seed, 0, "jitter"));
  }
  const Tessellation t = simulate(seeds, horizon);

  {
    auto out = open_output(ctx, ctx.file("seeds.csv"));
    write_seed_csv(out, seeds);
  }
  {
    const auto csv = ctx.optional("csv");
    auto out = open_output(ctx, csv.empty() ? ctx.file("tessellation.csv") : fs::path(csv));
    write_tessellation_csv(out, t);
  }
  {
    const auto svg = ctx.optional("svg");
    auto out = open_output(ctx, svg.empty() ? ctx.file("tessellation.svg") : fs::path(svg));
    SvgOptions o;
    o.comment = "generated " + utc_now();
    write_tessellation_svg(out, t, t.window(), o);
  }

  const auto problems = check_invariants(t);
  json summary{{"experiment", "simulate"},
               {"seed", ctx.seed},
               {"box", box},
               {"horizon", horizon},
               {"seeds", seeds.size()},
               {"invariant_violations", problems}};
  if (horizon >= box) {
    summary["escaping_rays"] = escaping_rays(t);
    const PlanarGraph g = extract_graph(t);
    const EulerReport r = euler_check(g, static_cast<int>(seeds.size()));
    summary["graph"] = {{"vertices", r.vertices}, {"edges", r.edges},         {"faces", r.faces},
                        {"rectangles", r.rectangles}, {"euler_pass", r.pass()}, {"failures", r.failures}};
    auto out = open_output(ctx, ctx.file("graph.json"));
    write_graph_json(out, g);
  }
  write_json(ctx, ctx.file("summary.json"), summary);
  return problems.empty() ? Success : CheckFailed;
}

int run_oracle_check(Context& ctx) {
  const Config& c = ctx.cfg;
  const double box = c.positive("box"), lambda = c.positive("lambda"), dt = c.positive("dt");
  const int reps = replicates_of(c);
  struct Row {
    std::size_t seeds = 0;
    int mismatches = 0;
    double max_diff = 0.0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(reps));
  parallel_for(rows.size(), ctx.threads, [&](std::size_t k) {
    const auto seeds = sample_poisson(BoxDomain(box), lambda, MarkDistribution{}, stream_seed(ctx.seed, k, "oracle"));
    const auto a = simulate(seeds, box);
    const auto b = oracle_simulate(seeds, box, dt);
    Row row;
    row.seeds = seeds.size();
    for (std::size_t r = 0; r < a.half_rays().size(); ++r) {
      const HalfRay& x = a.half_rays()[r];
      const HalfRay& y = b.half_rays()[r];
      row.max_diff = std::max(row.max_diff, std::abs(x.length - y.length));
      const bool same = x.blocker.has_value() == y.blocker.has_value() &&
                        (!x.blocker || (x.blocker->seed_id == y.blocker->seed_id && x.blocker->side == y.blocker->side));
      row.mismatches += !same;
    }
    rows[k] = row;
  });
  auto out = open_output(ctx, ctx.file("instances.csv"));
  out << "instance,seeds,rays,cause_mismatches,max_length_diff,pass\n";
  int passes = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const bool pass = rows[k].mismatches == 0 && rows[k].max_diff <= 2 * dt;
    passes += pass;
    out << k << ',' << rows[k].seeds << ',' << 2 * rows[k].seeds << ',' << rows[k].mismatches << ','
        << format_double(rows[k].max_diff) << ',' << (pass ? 1 : 0) << '\n';
  }
  out.close();
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "oracle-check"},
              {"seed", ctx.seed},
              {"lambda", lambda},
              {"box", box},
              {"dt", dt},
              {"length_tolerance", 2 * dt},
              {"instances", reps},
              {"passes", passes},
              {"pass", passes == reps}});
  return passes == reps ? Success : CheckFailed;
}

int run_euler(Context& ctx) {
  const Config& c = ctx.cfg;
  const double box = c.positive("box"), lambda = c.positive("lambda");
  const int reps = replicates_of(c);
  std::vector<EulerReport> reports(static_cast<std::size_t>(reps));
  parallel_for(reports.size(), ctx.threads, [&](std::size_t k) {
    const auto seeds = sample_poisson(BoxDomain(box), lambda, MarkDistribution{}, stream_seed(ctx.seed, k, "euler"));
    reports[k] = euler_check(extract_graph(simulate(seeds, box)), static_cast<int>(seeds.size()));
  });
  auto out = open_output(ctx, ctx.file("instances.csv"));
  out << "instance,seeds,vertices,edges,faces,rectangles,bad_degree_vertices,pass\n";
  int passes = 0;
  json failures = json::array();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    passes += r.pass();
    if (!r.pass()) failures.push_back({{"instance", k}, {"failures", r.failures}});
    out << k << ',' << r.seeds << ',' << r.vertices << ',' << r.edges << ',' << r.faces << ',' << r.rectangles << ','
        << r.bad_degree_vertices << ',' << (r.pass() ? 1 : 0) << '\n';
  }
  out.close();
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "euler"},
              {"seed", ctx.seed},
              {"lambda", lambda},
              {"box", box},
              {"instances", reps},
              {"passes", passes},
              {"pass", passes == reps},
              {"failures", failures}});
  return passes == reps ? Success : CheckFailed;
}

struct TailResult {
  std::vector<LengthSample> samples;
  SurvivalCurve curve;
  TailFit fit;
  double censored_fraction = 0.0;
  double mean_length = 0.0;
};

TailResult tail_experiment(double lambda, double tmax, int reps, std::uint64_t stream, Direction mark,
                           long long grid_points, int threads) {
  if (grid_points < 3) throw UsageError("'grid_points' must be at least 3");
  TailResult r;
  r.samples = sample_ray_lengths(lambda, tmax, reps, stream, mark, threads);
  std::vector<double> lengths;
  long long censored = 0;
  for (const auto& s : r.samples) {
    lengths.push_back(s.length);
    censored += s.censored;
    r.mean_length += s.length;
  }
  r.mean_length /= static_cast<double>(lengths.size());
  r.censored_fraction = static_cast<double>(censored) / static_cast<double>(lengths.size());
  std::vector<double> grid;
  for (long long k = 0; k <= grid_points; ++k) grid.push_back(2.0 * tmax * static_cast<double>(k) / grid_points);
  r.curve = estimate_survival(lengths, grid, 2.0 * tmax);
  const FitRange range = default_fit_range(r.samples, 2.0 * tmax);
  r.fit = fit_exponential_tail(r.curve, range.lo, range.hi);
  return r;
}

void write_survival(Context& ctx, const fs::path& path, const SurvivalCurve& curve) {
  auto out = open_output(ctx, path);
  out << "t,survival\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    out << format_double(curve.grid[k]) << ',' << format_double(curve.survival[k]) << '\n';
  }
}

int run_tail(Context& ctx) {
  const Config& c = ctx.cfg;
  const double lambda = c.positive("lambda"), tmax = c.positive("tmax");
  const TailResult r = tail_experiment(lambda, tmax, replicates_of(c), stream_seed(ctx.seed, 0, "tail"),
                                       c.direction("mark"), c.integer("grid_points"), ctx.threads);
  write_survival(ctx, ctx.file("survival.csv"), r.curve);
  {
    auto out = open_output(ctx, ctx.file("lengths.csv"));
    out << "replicate,length,censored\n";
    for (std::size_t k = 0; k < r.samples.size(); ++k) {
      out << k << ',' << format_double(r.samples[k].length) << ',' << (r.samples[k].censored ? 1 : 0) << '\n';
    }
  }
  write_json(ctx, ctx.file("fit.json"),
             {{"experiment", "tail"},
              {"seed", ctx.seed},
              {"lambda", lambda},
              {"tmax", tmax},
              {"replicates", r.samples.size()},
              {"censored_fraction", r.censored_fraction},
              {"mean_length", r.mean_length},
              {"fit", fit_json(r.fit)},
              {"checks", {{"r_squared_at_least_0.98", r.fit.r_squared >= 0.98}}}});
  return Success;
}

int run_scaling(Context& ctx) {
  const Config& c = ctx.cfg;
  const double l1 = c.positive("lambda"), l2 = c.positive("lambda2"), tmax = c.positive("tmax");
  const int reps = replicates_of(c);
  const Direction mark = c.direction("mark");
  const long long grid = c.integer("grid_points");
  // Same window in units of the mean spacing; independent streams so that the
  // two samples are not a rescaled copy of each other.
  const double tmax2 = tmax * std::sqrt(l1 / l2);
  const TailResult a = tail_experiment(l1, tmax, reps, stream_seed(ctx.seed, 0, "scaling"), mark, grid, ctx.threads);
  const TailResult b = tail_experiment(l2, tmax2, reps, stream_seed(ctx.seed, 1, "scaling"), mark, grid, ctx.threads);
  const double factor = std::sqrt(l2 / l1);
  std::vector<double> xa, xb;
  for (const auto& s : a.samples) {
    if (!s.censored) xa.push_back(s.length);
  }
  for (const auto& s : b.samples) {
    if (!s.censored) xb.push_back(factor * s.length);
  }
  const double ks = ks_distance(xa, xb);
  const double ratio = b.fit.rate / a.fit.rate;

  auto out = open_output(ctx, ctx.file("fits.csv"));
  out << "lambda,tmax,replicates,censored_fraction,mean_length,rate,r_squared,t_lo,t_hi\n";
  const std::array<std::tuple<double, double, const TailResult*>, 2> rows{
      std::tuple{l1, tmax, &a}, std::tuple{l2, tmax2, &b}};
  for (const auto& [lambda, t, r] : rows) {
    out << format_double(lambda) << ',' << format_double(t) << ',' << r->samples.size() << ','
        << format_double(r->censored_fraction) << ',' << format_double(r->mean_length) << ','
        << format_double(r->fit.rate) << ',' << format_double(r->fit.r_squared) << ',' << format_double(r->fit.t_lo)
        << ',' << format_double(r->fit.t_hi) << '\n';
  }
  out.close();
  write_survival(ctx, ctx.file("survival_lambda1.csv"), a.curve);
  write_survival(ctx, ctx.file("survival_lambda2.csv"), b.curve);
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "scaling"},
              {"seed", ctx.seed},
              {"lambda", l1},
              {"lambda2", l2},
              {"tmax", tmax},
              {"tmax2", tmax2},
              {"ks_distance", ks},
              {"ks_samples", {xa.size(), xb.size()}},
              {"rate_ratio", ratio},
              {"expected_ratio", factor},
              {"fit_lambda", fit_json(a.fit)},
              {"fit_lambda2", fit_json(b.fit)},
              {"checks",
               {{"ks_below_0.03", ks < 0.03},
                {"rate_ratio_within_15_percent", std::abs(ratio / factor - 1.0) <= 0.15}}}});
  return Success;
}

int run_cov(Context& ctx) {
  const Config& c = ctx.cfg;
  const EventSpec a{c.point("u"), c.direction("mark_u"), c.side("side_u")};
  const EventSpec b{c.point("v"), c.direction("mark_v"), c.side("side_v")};
  if (a.position == b.position) throw UsageError("'u' and 'v' must differ");
  const double t = c.positive("t"), lambda = c.real("lambda");
  if (lambda < 0) throw UsageError("'lambda' must be non-negative");
  const auto est = estimate_covariance(a, b, t, lambda, replicates_of(c), stream_seed(ctx.seed, 0, "cov"), ctx.threads);
  const double d = l1_distance(a.position, b.position);
  auto out = open_output(ctx, ctx.file("estimate.csv"));
  out << "l1_distance,t,value,std_error,p_a,p_b,p_joint,joint_count,replicates\n";
  out << format_double(d) << ',' << format_double(t) << ',' << format_double(est.value) << ','
      << format_double(est.std_error) << ',' << format_double(est.p_a) << ',' << format_double(est.p_b) << ','
      << format_double(est.p_joint) << ',' << est.joint_count << ',' << est.replicates << '\n';
  out.close();
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "cov"},
              {"seed", ctx.seed},
              {"lambda", lambda},
              {"t", t},
              {"l1_distance", d},
              {"independence_horizon", d / 4},
              {"estimate", estimate_json(est)},
              {"checks",
               {{"within_3se_of_zero", std::abs(est.value) < 3 * est.std_error || est.value == 0.0},
                {"positive_by_3se", est.value > 3 * est.std_error},
                {"joint_never_observed", est.joint_count == 0}}}});
  return Success;
}

int run_cov_sweep(Context& ctx) {
  const Config& c = ctx.cfg;
  PairLayout layout;
  layout.mark_u = c.direction("mark_u");
  layout.mark_v = c.direction("mark_v");
  layout.side_u = c.side("side_u");
  layout.side_v = c.side("side_v");
  layout.offset = c.point("offset");
  const auto distances = c.reals("distances");
  if (distances.empty()) throw UsageError("'distances' is empty");
  const double t = c.positive("t"), lambda = c.real("lambda");
  if (lambda < 0) throw UsageError("'lambda' must be non-negative");
  const auto rows = covariance_decay_sweep(layout, distances, t, lambda, replicates_of(c),
                                           stream_seed(ctx.seed, 0, "cov-sweep"), ctx.threads);
  auto out = open_output(ctx, ctx.file("sweep.csv"));
  out << "distance,vx,vy,value,abs_value,std_error,p_a,p_b,p_joint,independence_regime\n";
  json table = json::array();
  for (const auto& r : rows) {
    const auto& e = r.estimate;
    const bool independent = t <= r.distance / 4;
    out << format_double(r.distance) << ',' << format_double(e.b.position.x) << ',' << format_double(e.b.position.y)
        << ',' << format_double(e.value) << ',' << format_double(std::abs(e.value)) << ','
        << format_double(e.std_error) << ',' << format_double(e.p_a) << ',' << format_double(e.p_b) << ','
        << format_double(e.p_joint) << ',' << (independent ? 1 : 0) << '\n';
    json row = estimate_json(e);
    row["distance"] = r.distance;
    row["independence_regime"] = independent;
    table.push_back(row);
  }
  out.close();
  const auto& first = rows.front().estimate;
  const auto& last = rows.back().estimate;
  const bool decays = std::abs(first.value) - std::abs(last.value) > 3 * std::hypot(first.std_error, last.std_error);
  const bool last_zero = std::abs(last.value) < 3 * last.std_error || last.value == 0.0;
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "cov-sweep"},
              {"seed", ctx.seed},
              {"lambda", lambda},
              {"t", t},
              {"rows", table},
              {"checks", {{"decay_by_3se", decays}, {"farthest_within_3se_of_zero", last_zero}}}});
  return Success;
}

int run_escape(Context& ctx) {
  const Config& c = ctx.cfg;
  const double lambda = c.positive("lambda");
  const auto sides = c.reals("sides");
  if (sides.empty()) throw UsageError("'sides' is empty");
  const auto rows = escaping_expectation(lambda, sides, replicates_of(c), stream_seed(ctx.seed, 0, "escape"), ctx.threads);
  auto out = open_output(ctx, ctx.file("escape.csv"));
  out << "box_side,mean,std_error,scaled,replicates\n";
  json table = json::array();
  double lo = rows.front().scaled, hi = lo, sum = 0;
  for (const auto& r : rows) {
    out << format_double(r.box_side) << ',' << format_double(r.mean) << ',' << format_double(r.std_error) << ','
        << format_double(r.scaled) << ',' << r.replicates << '\n';
    table.push_back({{"box_side", r.box_side}, {"mean", r.mean}, {"std_error", r.std_error}, {"scaled", r.scaled}});
    lo = std::min(lo, r.scaled);
    hi = std::max(hi, r.scaled);
    sum += r.scaled;
  }
  out.close();
  const double spread = (hi - lo) / (sum / static_cast<double>(rows.size()));
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "escape"},
              {"seed", ctx.seed},
              {"lambda", lambda},
              {"rows", table},
              {"relative_spread_of_scaled_mean", spread},
              {"checks", {{"linear_in_box_side_within_20_percent", spread <= 0.2}}}});
  return Success;
}

int run_ca(Context& ctx) {
  const Config& c = ctx.cfg;
  using namespace lattice;
  LatticeState initial;
  if (const auto path = ctx.optional("initial_grid"); !path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read grid file " + path);
    initial = read_grid(in);
  } else {
    const long n = static_cast<long>(c.integer("lattice_n"));
    const double density = c.real("density");
    if (n < 1) throw UsageError("'lattice_n' must be positive");
    if (!(density >= 0.0 && density <= 1.0)) throw UsageError("'density' must lie in [0, 1]");
    auto rng = make_engine(stream_seed(ctx.seed, 0, "ca"));
    std::vector<LatticePoint> active;
    for (long y = 0; y <= n; ++y) {
      for (long x = 0; x <= n; ++x) {
        if (uniform01(rng) < density) active.push_back({x, y});
      }
    }
    initial = LatticeState(std::move(active), LatticeBox::square(n));
  }
  const long long steps = c.integer("steps"), history = c.integer("history");
  if (steps < 0 || history < 1) throw UsageError("'steps' must be >= 0 and 'history' >= 1");
  const auto run = ca_run(initial, static_cast<std::size_t>(steps), static_cast<std::size_t>(history));
  {
    auto out = open_output(ctx, ctx.file("sizes.csv"));
    write_sizes_csv(out, run);
  }
  {
    auto out = open_output(ctx, ctx.file("initial.txt"));
    write_grid(out, run.states.front());
  }
  {
    auto out = open_output(ctx, ctx.file("final.txt"));
    write_grid(out, run.states.back());
  }
  json cycle = nullptr;
  if (run.cycle) cycle = {{"first_step", run.cycle->first_step}, {"period", run.cycle->period}};
  const auto sizes = run.sizes();
  bool monotone = true;
  for (std::size_t k = 1; k < sizes.size(); ++k) monotone = monotone && sizes[k] >= sizes[k - 1];
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "ca"},
              {"seed", ctx.seed},
              {"steps", steps},
              {"initial_active", sizes.front()},
              {"final_active", sizes.back()},
              {"non_decreasing", monotone},
              {"cycle", cycle}});
  return Success;
}

int run_lattice_rays(Context& ctx) {
  const Config& c = ctx.cfg;
  using namespace lattice;
  const long n = static_cast<long>(c.integer("lattice_n"));
  const long long count = c.integer("n_seeds");
  if (n <= 2) throw UsageError("'lattice_n' must exceed 2");
  if (count < 0 || count > (n - 1) * (n - 1)) throw UsageError("'n_seeds' does not fit in {1..N-1}^2");
  const long horizon = ctx.optional("horizon").empty() ? n : static_cast<long>(c.integer("horizon"));
  const MarkDistribution marks(c.real("mark_p"));

  auto rng = make_engine(stream_seed(ctx.seed, 0, "lattice-rays"));
  std::set<LatticePoint> used;
  LatticeRayConfig config{n, {}};
  while (static_cast<long long>(config.seeds.size()) < count) {
    const LatticePoint p{1 + static_cast<long>(uniform01(rng) * (n - 1)), 1 + static_cast<long>(uniform01(rng) * (n - 1))};
    const Direction d = uniform01(rng) < marks.p_vertical() ? Direction::Vertical : Direction::Horizontal;
    if (used.insert(p).second) config.seeds.push_back({p, d});
  }
  const auto result = lattice_ray_simulate(config, horizon);
  const auto frozen_a = lattice_ray_simulate(config, n).trace_in_box();
  const auto frozen_b = lattice_ray_simulate(config, 2 * n).trace_in_box();

  std::map<std::string, int> causes;
  {
    auto out = open_output(ctx, ctx.file("rays.csv"));
    out << "seed,x,y,mark,side,half_length,stop,tip_x2,tip_y2\n";
    for (const auto& r : result.rays) {
      const auto& s = config.seeds[r.seed];
      causes[stop_name(r.stop)] += 1;
      out << r.seed << ',' << s.position.x << ',' << s.position.y << ',' << direction_code(s.mark) << ','
          << side_code(r.side) << ',' << r.half_length << ',' << stop_name(r.stop) << ',' << r.tip.x << ','
          << r.tip.y << '\n';
    }
  }
  {
    auto out = open_output(ctx, ctx.file("comparison.csv"));
    out << "step,ca_active,ray_sites,symmetric_difference\n";
    for (const auto& row : compare_ca_with_rays(config, horizon)) {
      out << row.step << ',' << row.ca_active << ',' << row.ray_sites << ',' << row.symmetric_difference << '\n';
    }
  }
  {
    const auto svg = ctx.optional("svg");
    auto out = open_output(ctx, svg.empty() ? ctx.file("rays.svg") : fs::path(svg));
    SvgOptions o;
    o.comment = "generated " + utc_now();
    write_lattice_svg(out, result, o);
  }
  json cause_json = json::object();
  for (const auto& [k, v] : causes) cause_json[k] = v;
  write_json(ctx, ctx.file("summary.json"),
             {{"experiment", "lattice-rays"},
              {"seed", ctx.seed},
              {"lattice_n", n},
              {"horizon", horizon},
              {"seeds", config.seeds.size()},
              {"stop_causes", cause_json},
              {"frozen_between_n_and_2n", frozen_a == frozen_b}});
  return frozen_a == frozen_b ? Success : CheckFailed;
}

using Handler = int (*)(Context&);

Handler handler_for(const std::string& name) {
  if (name == "simulate") return run_simulate;
  if (name == "oracle-check") return run_oracle_check;
  if (name == "euler") return run_euler;
  if (name == "tail") return run_tail;
  if (name == "scaling") return run_scaling;
  if (name == "cov") return run_cov;
  if (name == "cov-sweep") return run_cov_sweep;
  if (name == "escape") return run_escape;
  if (name == "ca") return run_ca;
  if (name == "lattice-rays") return run_lattice_rays;
  throw UsageError("unknown experiment '" + name + "'");
}

void check_keys(const Config& c, const ExperimentSpec& spec) {
  for (const auto& [key, value] : c.values()) {
    if (key == "experiment") continue;
    const auto known = [&](const KeySpec& k) { return k.key == key; };
    if (std::none_of(common_keys().begin(), common_keys().end(), known) &&
        std::none_of(spec.keys.begin(), spec.keys.end(), known)) {
      throw UsageError("unknown key '" + key + "' for experiment " + spec.name);
    }
  }
}

}  // namespace

RunResult run(const Config& config, const std::string& version, std::ostream& log) {
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    const std::string name = config.text("experiment");
    const ExperimentSpec& spec = experiment(name);
    Config cfg = defaults_for(name);
    cfg.merge(config);
    check_keys(cfg, spec);

    const long long threads = cfg.integer("threads");
    if (threads < 1) throw UsageError("'threads' must be at least 1");
    Context ctx{cfg, fs::path(cfg.text("output_dir")), {}, static_cast<int>(threads), cfg.seed("seed"), {}};
    ctx.prefix = name + "_seed" + std::to_string(ctx.seed);
    fs::create_directories(ctx.dir);

    result.exit_code = handler_for(name)(ctx);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    result.manifest = ctx.file("manifest.txt");
    {
      std::ofstream out(result.manifest, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + result.manifest.string());
      out << "# gilbert experiment manifest\n";
      out << "# version=" << version << '\n';
      out << "# wall_time_seconds=" << format_double(std::round(seconds * 1000) / 1000) << '\n';
      out << "# outputs:";
      for (const auto& p : ctx.outputs) out << ' ' << p.filename().string();
      out << '\n';
      write_config(out, cfg);
    }
    result.outputs = ctx.outputs;
    result.outputs.push_back(result.manifest);
    if (result.exit_code == CheckFailed) result.message = name + ": check failed, see " + ctx.file("").string() + "*";
    log << name << ": wrote " << ctx.outputs.size() << " files to " << ctx.dir.string() << " in "
        << format_double(std::round(seconds * 100) / 100) << " s\n";
  } catch (const UsageError& e) {
    result.exit_code = Usage;
    result.message = e.what();
  } catch (const DegenerateInput& e) {
    result.exit_code = Degenerate;
    result.message = std::string("degenerate input: ") + e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = Usage;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = Usage;
    result.message = e.what();
  }
  if (!result.message.empty()) log << result.message << '\n';
  return result;
}

}  // namespace gilbert::cli
