#include "gjn/commands.hpp"

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <optional>
#include <set>

#include "gjn/action.hpp"
#include "gjn/errors.hpp"
#include "gjn/fluid.hpp"
#include "gjn/network_io.hpp"
#include "gjn/ratefn.hpp"
#include "gjn/report.hpp"
#include "gjn/seeds.hpp"
#include "gjn/simulate.hpp"
#include "gjn/verify.hpp"

namespace gjn {

namespace fs = std::filesystem;

namespace {

// Solver gave up without a trustworthy answer.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Typed access to a params object; anything not read is rejected by finish().
class Params {
 public:
  Params(const ojson& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object()) throw InvalidInput(ctx_ + ": must be an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  double number(const std::string& k, std::optional<double> def = std::nullopt) {
    const auto* v = get(k, def.has_value());
    if (!v) return *def;
    if (!v->is_number()) throw InvalidInput(where(k) + " must be a number");
    return v->get<double>();
  }

  int integer(const std::string& k, std::optional<int> def = std::nullopt) {
    const auto* v = get(k, def.has_value());
    if (!v) return *def;
    if (!v->is_number_integer()) throw InvalidInput(where(k) + " must be an integer");
    return v->get<int>();
  }

  bool boolean(const std::string& k, bool def) {
    const auto* v = get(k, true);
    if (!v) return def;
    if (!v->is_boolean()) throw InvalidInput(where(k) + " must be true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& k, const std::string& def) {
    const auto* v = get(k, true);
    if (!v) return def;
    if (!v->is_string()) throw InvalidInput(where(k) + " must be a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& k, std::optional<std::vector<double>> def = std::nullopt) {
    const auto* v = get(k, def.has_value());
    if (!v) return *def;
    return to_numbers(*v, where(k));
  }

  Vec vec(const std::string& k, int K) {
    const auto xs = numbers(k);
    if (static_cast<int>(xs.size()) != K)
      throw InvalidInput(where(k) + " must have " + std::to_string(K) + " entries");
    return Eigen::Map<const Vec>(xs.data(), K);
  }

  std::vector<std::int64_t> counts(const std::string& k, int K) {
    const auto* v = get(k, false);
    if (!v->is_array() || static_cast<int>(v->size()) != K)
      throw InvalidInput(where(k) + " must be an array of " + std::to_string(K) + " integers");
    std::vector<std::int64_t> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
        throw InvalidInput(where(k) + " entries must be nonnegative integers");
      out.push_back(e.get<std::int64_t>());
    }
    return out;
  }

  std::vector<Vec> vec_list(const std::string& k, int K) {
    const auto* v = get(k, false);
    if (!v->is_array()) throw InvalidInput(where(k) + " must be an array of points");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto xs = to_numbers((*v)[i], where(k) + "[" + std::to_string(i) + "]");
      if (static_cast<int>(xs.size()) != K) throw InvalidInput(where(k) + " points must have " + std::to_string(K) + " entries");
      out.push_back(Eigen::Map<const Vec>(xs.data(), K));
    }
    return out;
  }

  Params sub(const std::string& k) {
    const auto* v = get(k, false);
    return Params(*v, where(k));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw InvalidInput(ctx_ + ": unknown field '" + it.key() + "'");
  }

 private:
  std::string where(const std::string& k) const { return ctx_ + ": field '" + k + "'"; }

  const ojson* get(const std::string& k, bool optional) {
    used_.insert(k);
    auto it = j_.find(k);
    if (it == j_.end()) {
      if (optional) return nullptr;
      throw InvalidInput(where(k) + " is required");
    }
    return &*it;
  }

  static std::vector<double> to_numbers(const ojson& v, const std::string& w) {
    if (!v.is_array()) throw InvalidInput(w + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw InvalidInput(w + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const ojson& j_;
  std::string ctx_;
  std::set<std::string> used_;
};

ojson path_json(const PiecewisePath& p) {
  ojson j;
  j["times"] = num_array(p.times());
  ojson pos = ojson::array();
  for (const auto& x : p.positions()) pos.push_back(num_array(x));
  j["positions"] = pos;
  return j;
}

CsvTable path_table(const PiecewisePath& p) {
  CsvTable t;
  t.header.push_back("t");
  for (int k = 0; k < p.dim(); ++k) t.header.push_back("x" + std::to_string(k + 1));
  for (std::size_t i = 0; i < p.times().size(); ++i) {
    std::vector<std::string> row{format12(p.times()[i])};
    for (int k = 0; k < p.dim(); ++k) row.push_back(format12(p.positions()[i](k)));
    t.add(row);
  }
  return t;
}

ojson faces_json(const std::vector<Face>& faces) {
  ojson a = ojson::array();
  for (const auto& f : faces) a.push_back(f.str());
  return a;
}

ojson validation_json(const Network& net, const ValidationReport& rep) {
  ojson j;
  j["pass"] = rep.pass();
  j["subcritical"] = rep.subcritical();
  ojson checks = ojson::array();
  for (const auto& c : rep.checks) {
    ojson cj;
    cj["name"] = c.name;
    cj["hard"] = c.hard;
    cj["pass"] = c.pass;
    cj["message"] = c.message;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["warnings"] = rep.warnings();
  j["lambda"] = num_array(net.lambda);
  j["mu"] = num_array(net.mu);
  try {
    const auto tr = traffic_intensity(net);
    j["nu"] = num_array(tr.nu);
    j["utilization"] = num_array(tr.utilization);
  } catch (const NetworkError& e) {
    j["nu"] = nullptr;
    j["utilization"] = nullptr;
  }
  return j;
}

void require_valid(const Network& net) {
  if (!validate_network(net).pass()) throw NetworkError("network fails a hard validation check");
}

ActionOptions action_options(Params& p) {
  ActionOptions o;
  o.max_segments = p.integer("M_max", 3);
  if (o.max_segments < 1) throw InvalidInput("params: field 'M_max' must be >= 1");
  o.barrier.max_newton = p.integer("max_newton", o.barrier.max_newton);
  if (o.barrier.max_newton < 1) throw InvalidInput("params: field 'max_newton' must be >= 1");
  return o;
}

bool solver_failed(SolveStatus s) { return s == SolveStatus::MaxIterations || s == SolveStatus::NumericalFailure; }

ojson cmd_rate(const Network& net, const RunConfig& cfg, const fs::path&) {
  Params p(cfg.params, "params");
  const Vec x = p.vec("x", net.K);
  const Vec y = p.vec("y", net.K);
  BarrierOptions bo;
  bo.max_newton = p.integer("max_newton", bo.max_newton);
  if (bo.max_newton < 1) throw InvalidInput("params: field 'max_newton' must be >= 1");
  p.finish();
  if ((x.array() < 0.0).any()) throw InvalidInput("params: field 'x' must be nonnegative");
  const auto r = big_psi(net, Face::of_zeros(x), y, bo);
  if (!r.converged()) throw NonConvergence("rate: solver status " + to_string(r.status));
  ojson j;
  j["x"] = num_array(x);
  j["y"] = num_array(y);
  j["face"] = Face::of_zeros(x).str();
  j["value"] = num(r.value);
  j["status"] = to_string(r.status);
  j["near_boundary"] = r.near_boundary;
  if (std::isfinite(r.value)) {
    j["alpha"] = num_array(r.alpha);
    j["delta"] = num_array(r.delta);
    ojson rho = ojson::array();
    for (int k = 0; k < net.K; ++k) rho.push_back(num_array(Vec(r.rho.row(k).transpose())));
    j["rho"] = rho;
  }
  return j;
}

ojson cmd_fluid(const Network& net, const RunConfig& cfg, const fs::path& out) {
  Params p(cfg.params, "params");
  const Vec x0 = p.vec("x0", net.K);
  const double tail = p.number("tail", 1.0);
  p.finish();
  require_valid(net);
  const auto fr = integrate_fluid(net, x0, tail);
  ojson j;
  j["x0"] = num_array(x0);
  j["emptying_time"] = num(fr.emptying_time);
  j["emptying_bound"] = num(emptying_bound(net, x0.norm()));
  j["faces"] = faces_json(fr.faces);
  j["path"] = path_json(fr.path);
  write_csv(out / "path.csv", path_table(fr.path));
  return j;
}

ojson action_json(const ActionResult& r) {
  ojson j;
  j["value"] = num(r.value);
  j["status"] = to_string(r.status);
  j["horizon"] = num(r.horizon);
  j["segment_costs"] = num_array(r.segment_costs);
  j["faces"] = faces_json(r.faces);
  j["heuristic"] = r.heuristic;
  j["sequences_tried"] = r.sequences_tried;
  j["sequences_feasible"] = r.sequences_feasible;
  j["path"] = path_json(r.path);
  return j;
}

ojson cmd_quasipotential(const Network& net, const RunConfig& cfg, const fs::path& out) {
  Params p(cfg.params, "params");
  const Vec x = p.vec("x", net.K);
  const bool has_t = p.has("t");
  const double t = has_t ? p.number("t") : 0.0;
  auto opts = action_options(p);
  p.finish();
  if ((x.array() < 0.0).any()) throw InvalidInput("params: field 'x' must be nonnegative");
  require_valid(net);
  const auto r = has_t ? quasipotential_horizon(net, x, t, opts) : quasipotential(net, x, opts);
  if (solver_failed(r.status)) throw NonConvergence("quasipotential: solver status " + to_string(r.status));
  ojson j;
  j["x"] = num_array(x);
  if (has_t) j["t"] = num(t);
  j["M_max"] = opts.max_segments;
  j["result"] = action_json(r);
  try {
    const auto o = product_form_oracle(net);
    ojson oj;
    oj["value"] = num(o.V(x));
    oj["rel_error"] = num(o.V(x) > 0 ? std::abs(r.value - o.V(x)) / o.V(x) : std::abs(r.value));
    j["product_form"] = oj;
  } catch (const NetworkError&) {
    j["product_form"] = nullptr;
  }
  if (r.path.segments() >= 0 && !r.path.times().empty()) write_csv(out / "path.csv", path_table(r.path));
  return j;
}

ojson cmd_simulate(const Network& net, const RunConfig& cfg, const fs::path& out) {
  Params p(cfg.params, "params");
  const auto q0 = p.counts("q0", net.K);
  const double horizon = p.number("horizon");
  const double n = p.number("n", 1.0);
  const bool events = p.boolean("write_events", true);
  const bool has_dt = p.has("sample_dt");
  const double dt = has_dt ? p.number("sample_dt") : 0.0;
  const bool has_ball = p.has("ball");
  Vec centre;
  double radius = 0.0;
  if (has_ball) {
    auto b = p.sub("ball");
    centre = b.vec("center", net.K);
    radius = b.number("radius");
    b.finish();
  }
  p.finish();

  const auto tr = simulate_network(net, q0, horizon, cfg.seed, 0);
  const long cons = check_conservation(tr);
  const long busy = check_busy_time(tr);
  ojson j;
  ojson t;
  t["events"] = tr.events.size();
  t["final_queue"] = tr.final_queue;
  t["busy_time"] = num_array(tr.final_busy);
  std::vector<std::int64_t> A(static_cast<std::size_t>(net.K), 0), D(static_cast<std::size_t>(net.K), 0);
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::ExogenousArrival) ++A[static_cast<std::size_t>(e.station)];
    if (e.kind == EventKind::Departure) ++D[static_cast<std::size_t>(e.station)];
  }
  t["arrivals"] = A;
  t["departures"] = D;
  t["conservation_ok"] = cons < 0;
  t["busy_time_ok"] = busy < 0;
  // time-average queue lengths
  Vec area = Vec::Zero(net.K);
  double prev = 0.0;
  std::vector<std::int64_t> q = tr.q0;
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    for (int k = 0; k < net.K; ++k) area(k) += static_cast<double>(q[static_cast<std::size_t>(k)]) * (tr.events[i].time - prev);
    prev = tr.events[i].time;
    for (int k = 0; k < net.K; ++k) q[static_cast<std::size_t>(k)] = tr.queue(i, k);
  }
  for (int k = 0; k < net.K; ++k) area(k) += static_cast<double>(q[static_cast<std::size_t>(k)]) * (horizon - prev);
  t["time_average_queue"] = num_array(Vec(area / horizon));
  j["trace"] = t;

  if (events) {
    CsvTable ev;
    ev.header = {"time", "station", "kind", "peer"};
    for (int k = 0; k < net.K; ++k) ev.header.push_back("Q" + std::to_string(k + 1));
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
      const auto& e = tr.events[i];
      std::vector<std::string> row{format12(e.time), std::to_string(e.station + 1), to_string(e.kind),
                                   e.peer >= 0 ? std::to_string(e.peer + 1) : std::string("exit")};
      if (e.kind == EventKind::ExogenousArrival) row[3] = "";
      for (int k = 0; k < net.K; ++k) row.push_back(std::to_string(tr.queue(i, k)));
      ev.add(row);
    }
    write_csv(out / "events.csv", ev);
  }
  if (has_dt) {
    const auto sp = scaled_path(tr, n, dt);
    CsvTable st;
    st.header.push_back("t");
    for (int k = 0; k < net.K; ++k) st.header.push_back("x" + std::to_string(k + 1));
    for (std::size_t i = 0; i < sp.t.size(); ++i) {
      std::vector<std::string> row{format12(sp.t[i])};
      for (int k = 0; k < net.K; ++k) row.push_back(format12(sp.x[i](k)));
      st.add(row);
    }
    write_csv(out / "scaled_path.csv", st);
  }

  TerminalEvent ev;
  if (has_ball) ev = [centre, radius](const Vec& z) { return (z - centre).norm() < radius; };
  const auto ens = run_replications(net, q0, horizon, n, cfg.reps, derive_seed(cfg.seed, "ensemble"), ev);
  ojson e;
  e["seed_label"] = "ensemble";
  e["seed"] = ens.seed;
  e["reps"] = ens.reps;
  e["n"] = num(n);
  e["mean"] = num_array(ens.mean);
  e["variance"] = num_array(ens.variance);
  if (has_ball) {
    e["hits"] = ens.hits;
    e["hit_fraction"] = num(ens.hit_fraction);
  }
  j["ensemble"] = e;
  return j;
}

ojson slope_json(const SlopeEstimate& s) {
  ojson j;
  ojson pts = ojson::array();
  for (const auto& p : s.points) {
    ojson pj;
    pj["n"] = num(p.n);
    pj["trials"] = p.trials;
    pj["hits"] = p.hits;
    pj["p"] = num(p.p);
    pj["ci_low"] = num(p.ci_low);
    pj["ci_high"] = num(p.ci_high);
    pj["neg_log_p"] = num(p.neg_log_p);
    pj["reliable"] = p.reliable;
    pts.push_back(pj);
  }
  j["points"] = pts;
  j["defined"] = s.defined;
  j["slope"] = s.defined ? num(s.slope) : ojson(nullptr);
  j["slope_se"] = s.defined ? num(s.slope_se) : ojson(nullptr);
  j["r2"] = s.defined ? num(s.r2) : ojson(nullptr);
  j["note"] = s.note;
  return j;
}

ojson cmd_verify(const Network& net, const RunConfig& cfg, const fs::path& out) {
  Params p(cfg.params, "params");
  require_valid(net);
  ojson j;
  ojson verdicts = ojson::object();

  if (p.has("oracle")) {
    auto o = p.sub("oracle");
    const auto pts = o.vec_list("points", net.K);
    const double tol = o.number("rel_tol", 0.02);
    auto opts = action_options(o);
    o.finish();
    const auto oracle = product_form_oracle(net);
    ojson rows = ojson::array();
    CsvTable t;
    t.header = {"point", "computed", "oracle", "rel_error", "pass"};
    bool all = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto r = quasipotential(net, pts[i], opts);
      if (solver_failed(r.status)) throw NonConvergence("verify: quasipotential solver status " + to_string(r.status));
      const double v = oracle.V(pts[i]);
      const double rel = v > 0 ? std::abs(r.value - v) / v : std::abs(r.value);
      const bool ok = rel <= tol;
      all = all && ok;
      ojson rj;
      rj["x"] = num_array(pts[i]);
      rj["computed"] = num(r.value);
      rj["oracle"] = num(v);
      rj["rel_error"] = num(rel);
      rj["pass"] = ok;
      rows.push_back(rj);
      t.add({std::to_string(i), format12(r.value), format12(v), format12(rel), ok ? "true" : "false"});
    }
    j["oracle"] = rows;
    verdicts["oracle"] = all;
    write_csv(out / "oracle.csv", t);
  }

  if (p.has("tail")) {
    auto o = p.sub("tail");
    const auto levels = o.numbers("levels");
    const double burnin = o.number("burnin");
    const double horizon = o.number("horizon");
    TailOptions topts;
    topts.mode = tail_mode_from_string(o.string("mode", "total"));
    topts.batches = o.integer("batches", topts.batches);
    const bool has_target = o.has("target_root");
    const double target = has_target ? o.number("target_root") : 0.0;
    const double tol = o.number("tolerance", 0.05);
    o.finish();
    const auto tails = stationary_tail_estimate(net, levels, burnin, horizon, derive_seed(cfg.seed, "verify/tail"), topts);
    ojson rows = ojson::array();
    CsvTable t;
    t.header = {"level", "p", "ci_low", "ci_high", "root", "entries"};
    bool all = true;
    for (const auto& e : tails) {
      ojson rj;
      rj["level"] = num(e.level);
      rj["p"] = num(e.p);
      rj["ci_low"] = num(e.ci_low);
      rj["ci_high"] = num(e.ci_high);
      rj["root"] = num(e.root);
      rj["entries"] = e.entries;
      rj["batches"] = e.batches;
      if (has_target) {
        const bool ok = std::abs(e.root - target) <= tol;
        rj["pass"] = ok;
        all = all && ok;
      }
      rows.push_back(rj);
      t.add({format12(e.level), format12(e.p), format12(e.ci_low), format12(e.ci_high), format12(e.root),
             std::to_string(e.entries)});
    }
    ojson tj;
    tj["mode"] = to_string(topts.mode);
    tj["levels"] = rows;
    tj["slope"] = slope_json(tail_slope_estimate(tails));
    j["tail"] = tj;
    if (has_target) verdicts["tail"] = all;
    write_csv(out / "tail.csv", t);
  }

  if (p.has("slope")) {
    auto o = p.sub("slope");
    const Vec x = o.vec("x", net.K);
    const auto grid = o.numbers("n_grid");
    SlopeOptions so;
    so.ball_radius = o.number("ball_radius", -1.0);
    so.burnin_factor = o.number("burnin_factor", so.burnin_factor);
    o.finish();
    j["slope"] = slope_json(ldp_slope_estimate(net, x, grid, cfg.reps, derive_seed(cfg.seed, "verify/slope"), so));
  }

  if (p.has("chernoff")) {
    auto o = p.sub("chernoff");
    const int station = o.integer("station", 1);
    const std::string role = o.string("role", "arrival");
    const double eps = o.number("eps", 0.5);
    const auto ng = o.numbers("n_grid", std::vector<double>{5, 10, 20});
    const auto tg = o.numbers("t_grid", std::vector<double>{1, 2});
    const double cmax = o.number("C_max", 10.0);
    o.finish();
    if (station < 1 || station > net.K) throw InvalidInput("params: chernoff: field 'station' out of range");
    if (role != "arrival" && role != "service") throw InvalidInput("params: chernoff: field 'role' must be arrival or service");
    const auto& d = role == "arrival" ? net.arrivals[static_cast<std::size_t>(station - 1)]
                                      : net.services[static_cast<std::size_t>(station - 1)];
    const auto env = chernoff_envelope(d, eps, ng, tg, cfg.reps, derive_seed(cfg.seed, "verify/chernoff"));
    ojson cj;
    cj["eps"] = num(eps);
    cj["sigma"] = num(env.bound.sigma);
    cj["alpha"] = num(env.bound.alpha);
    ojson rows = ojson::array();
    CsvTable t;
    t.header = {"n", "t", "p", "bound", "ratio"};
    for (const auto& r : env.rows) {
      ojson rj;
      rj["n"] = num(r.n);
      rj["t"] = num(r.t);
      rj["p"] = num(r.p);
      rj["bound"] = num(r.bound);
      rj["ratio"] = num(r.ratio);
      rows.push_back(rj);
      t.add({format12(r.n), format12(r.t), format12(r.p), format12(r.bound), format12(r.ratio)});
    }
    cj["rows"] = rows;
    cj["C"] = num(env.C);
    j["chernoff"] = cj;
    verdicts["chernoff"] = env.C < cmax;
    write_csv(out / "chernoff.csv", t);
  }

  if (p.has("coupling")) {
    auto o = p.sub("coupling");
    const auto qa = o.counts("qa", net.K);
    const auto qb = o.counts("qb", net.K);
    const double horizon = o.number("horizon");
    o.finish();
    const auto c = coupling_tv_probe(net, qa, qb, horizon, cfg.reps, derive_seed(cfg.seed, "verify/coupling"));
    ojson cj;
    cj["reps"] = c.reps;
    cj["coupled"] = c.coupled;
    cj["mean"] = num(c.mean);
    cj["grid"] = num_array(c.grid);
    cj["survival"] = num_array(c.survival);
    cj["defined"] = c.defined;
    cj["rate"] = c.defined ? num(c.rate) : ojson(nullptr);
    cj["r2"] = c.defined ? num(c.r2) : ojson(nullptr);
    cj["note"] = c.note;
    j["coupling"] = cj;
  }

  if (p.has("tv")) {
    auto o = p.sub("tv");
    const int m = o.integer("truncation", 20);
    const double burnin = o.number("burnin");
    const double horizon = o.number("horizon");
    const double tol = o.number("tolerance", 0.02);
    o.finish();
    const auto tv = stationary_tv_product_form(net, m, burnin, horizon, derive_seed(cfg.seed, "verify/tv"));
    ojson tj;
    tj["truncation"] = m;
    tj["tv"] = num(tv.tv);
    tj["outside_empirical"] = num(tv.outside_empirical);
    tj["outside_oracle"] = num(tv.outside_oracle);
    tj["events"] = tv.events;
    j["tv"] = tj;
    verdicts["tv"] = tv.tv < tol;
  }
  p.finish();
  j["verdicts"] = verdicts;
  return j;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& log) {
  fs::path out;
  try {
    check_run_config(cfg);
    const Network net = resolve_network(cfg);
    out = cfg.out;
    fs::create_directories(out);
    omp_set_num_threads(cfg.threads);
    write_json(out / "manifest.json", manifest_json(cfg, net));

    ojson results;
    results["command"] = cfg.command;
    results["seed"] = cfg.seed;
    bool hard_fail = false;
    if (cfg.command == "validate") {
      Params(cfg.params, "params").finish();
      const auto rep = validate_network(net);
      hard_fail = !rep.pass();
      results["validation"] = validation_json(net, rep);
    } else if (cfg.command == "rate") {
      results["rate"] = cmd_rate(net, cfg, out);
    } else if (cfg.command == "fluid") {
      results["fluid"] = cmd_fluid(net, cfg, out);
    } else if (cfg.command == "quasipotential") {
      results["quasipotential"] = cmd_quasipotential(net, cfg, out);
    } else if (cfg.command == "simulate") {
      results["simulate"] = cmd_simulate(net, cfg, out);
    } else if (cfg.command == "verify") {
      results["verify"] = cmd_verify(net, cfg, out);
    }
    write_json(out / "results.json", results);
    if (hard_fail) {
      log << "validation failed\n";
      return kExitValidation;
    }
    return kExitOk;
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const OutsideMgfDomain& e) {
    log << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const NetworkError& e) {
    log << "validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NonConvergence& e) {
    log << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
}

}  // namespace gjn
