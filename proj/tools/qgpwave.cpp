#include <qgpwave/qgpwave.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

using json = nlohmann::ordered_json;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Thrown when a library call fails; carries the status for the exit code.
struct ApiError : std::runtime_error {
  qgp_status status;
  ApiError(qgp_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(qgp_status s) {
  if (s != QGP_OK) throw ApiError(s, std::string(qgp_status_name(s)) + ": " + qgp_last_error());
}

int exit_code(qgp_status s) {
  switch (s) {
    case QGP_OK: return 0;
    case QGP_ERR_QUADRATURE:
    case QGP_ERR_BLOWUP:
    case QGP_ERR_INTERNAL: return 3;
    default: return 2;
  }
}

struct ProfileDeleter {
  void operator()(qgp_profile* p) const { qgp_profile_free(p); }
};
struct StateDeleter {
  void operator()(qgp_state* s) const { qgp_state_free(s); }
};
using ProfilePtr = std::unique_ptr<qgp_profile, ProfileDeleter>;
using StatePtr = std::unique_ptr<qgp_state, StateDeleter>;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json jarray(const double* p, size_t n) {
  json a = json::array();
  for (size_t i = 0; i < n; ++i) a.push_back(jnum(p[i]));
  return a;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// A table of named numeric columns.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;

  void add(std::string name, std::vector<double> col) {
    names.push_back(std::move(name));
    cols.push_back(std::move(col));
  }

  std::string csv() const {
    std::ostringstream os;
    for (size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
    os << "\n";
    const size_t rows = cols.empty() ? 0 : cols.front().size();
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols.size(); ++j) os << (j ? "," : "") << num(cols[j][i]);
      os << "\n";
    }
    return os.str();
  }

  json as_json() const {
    json out = json::object();
    for (size_t j = 0; j < names.size(); ++j) out[names[j]] = jarray(cols[j].data(), cols[j].size());
    return out;
  }
};

struct Options {
  std::string format = "json";
  std::string out;
  double c = 1.0;
  double kappa = 0.0;
  bool exact = false;
  std::string kind = "soliton";
  double L = 20.0;
  double h = 1e-2;
  int j = 1;
  std::optional<double> eta0;
  std::optional<double> K0;
  std::vector<double> chain;
  std::string method = "closed";
  int n = 200;
  std::optional<double> qmax;
  double dt = 0.0;
  double T = 1.0;
  double perturb = 0.0;
  double record = 0.1;
  std::string snapshots;
  std::string figure = "ep-diagram";
  double c_max = 2.0;
  double kappa_min = -2.0;
  double kappa_max = 2.0;
};

// Output assembly shared by every subcommand.
struct Output {
  std::string subcommand;
  json config;
  json result = json::object();
  json report = json::object();
  std::optional<Table> table;

  json metadata() const {
    json m;
    m["schema"] = QGP_SCHEMA_VERSION;
    m["tool"] = "qgpwave";
    m["version"] = qgp_version();
    m["generated_at"] = utc_now();
    m["config"] = config;
    if (!report.empty()) m["report"] = report;
    return m;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

void emit(const Options& o, const Output& out) {
  if (o.format == "csv") {
    if (!out.table) throw ApiError(QGP_ERR_PARAM, "param: " + out.subcommand + " has no CSV form; use --format json");
    const std::string text = out.table->csv();
    if (o.out.empty()) {
      std::cout << text;
    } else {
      write_text(o.out, text);
      json meta = out.metadata();
      meta["result"] = out.result;
      write_text(o.out + ".meta.json", meta.dump(2) + "\n");
    }
    return;
  }
  json doc = out.metadata();
  for (auto& [k, v] : out.result.items()) doc[k] = v;
  if (out.table) doc["data"] = out.table->as_json();
  const std::string text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text(o.out, text);
  }
}

json params_json(qgp_params p) { return json{{"c", jnum(p.c)}, {"kappa", jnum(p.kappa)}}; }

std::vector<std::string> inventory(qgp_region r, double c) {
  qgp_wave_kind kinds[16];
  size_t count = 0;
  check(qgp_wave_inventory(r, c, kinds, 16, &count));
  std::vector<std::string> names;
  for (size_t i = 0; i < count; ++i) names.emplace_back(qgp_wave_kind_name(kinds[i]));
  return names;
}

Output run_classify(const Options& o) {
  Output out{"classify", {{"subcommand", "classify"}, {"c", o.c}, {"kappa", o.kappa}, {"exact", o.exact}}};
  qgp_classification cl{};
  check(qgp_classify({o.c, o.kappa}, o.exact ? 1 : 0, &cl));
  const std::vector<std::string> waves = inventory(cl.region, cl.params.c);
  out.result["region"] = qgp_region_name(cl.region);
  out.result["params"] = params_json(cl.params);
  out.result["conjugated"] = cl.conjugated != 0;
  out.result["waves"] = waves;
  return out;
}

ProfilePtr build_profile(const Options& o) {
  const qgp_params p{o.c, o.kappa};
  const qgp_grid g{o.L, o.h};
  qgp_profile* raw = nullptr;
  if (o.kind == "soliton") {
    check(qgp_profile_soliton(p, g, &raw));
  } else if (o.kind == "black") {
    check(qgp_profile_black(o.kappa, g, &raw));
  } else if (o.kind == "cuspon") {
    check(qgp_profile_cuspon(p, g, &raw));
  } else if (o.kind == "compacton") {
    check(qgp_profile_compacton(o.c, o.j, g, &raw));
  } else if (o.kind == "composite") {
    if (!o.chain.empty()) {
      check(qgp_profile_composite_chain(p, o.chain.data(), o.chain.size(), g, &raw));
    } else {
      if (!o.eta0) throw ApiError(QGP_ERR_PARAM, "param: composite waves need --eta0 or --chain");
      check(qgp_profile_composite(p, *o.eta0, o.K0 ? 1 : 0, o.K0.value_or(0.0), g, &raw));
    }
  } else {
    check(qgp_profile_trivial(g, &raw));
  }
  return ProfilePtr(raw);
}

json profile_points(const qgp_profile* w) {
  const double* pts = nullptr;
  json j;
  size_t n = qgp_profile_singular_points(w, &pts);
  j["singular_points"] = jarray(pts, n);
  n = qgp_profile_nondiff_points(w, &pts);
  j["nondiff_points"] = jarray(pts, n);
  n = qgp_profile_extrema(w, &pts);
  j["extrema"] = jarray(pts, n);
  return j;
}

json residual_report(const qgp_profile* w) {
  double first = NAN, second = NAN;
  const qgp_status s = qgp_profile_residuals(w, 0.0, &first, &second);
  if (s != QGP_OK) return json{{"error", std::string(qgp_status_name(s)) + ": " + qgp_last_error()}};
  return json{{"residual_first_integral", jnum(first)}, {"residual_second_order", jnum(second)}, {"collar_h", 5.0}};
}

json profile_config(const Options& o, const char* sub) {
  json c{{"subcommand", sub}, {"c", o.c}, {"kappa", o.kappa}, {"kind", o.kind}, {"L", o.L}, {"h", o.h}};
  if (o.kind == "compacton") c["j"] = o.j;
  if (o.eta0) c["eta0"] = *o.eta0;
  if (o.K0) c["K0"] = *o.K0;
  if (!o.chain.empty()) c["chain"] = o.chain;
  return c;
}

Output run_profile(const Options& o) {
  Output out{"profile", profile_config(o, "profile")};
  const ProfilePtr w = build_profile(o);
  qgp_params p{};
  qgp_region r{};
  qgp_wave_kind k{};
  check(qgp_profile_info(w.get(), &p, &r, &k));
  out.result["region"] = qgp_region_name(r);
  out.result["kind"] = qgp_wave_kind_name(k);
  out.result["params"] = params_json(p);
  const json pts = profile_points(w.get());
  for (auto& [key, v] : pts.items()) out.result[key] = v;
  out.report = residual_report(w.get());
  const size_t n = qgp_profile_size(w.get());
  Table t;
  t.add("x", {qgp_profile_x(w.get()), qgp_profile_x(w.get()) + n});
  t.add("eta", {qgp_profile_eta(w.get()), qgp_profile_eta(w.get()) + n});
  t.add("theta", {qgp_profile_theta(w.get()), qgp_profile_theta(w.get()) + n});
  t.add("u_re", {qgp_profile_u_re(w.get()), qgp_profile_u_re(w.get()) + n});
  t.add("u_im", {qgp_profile_u_im(w.get()), qgp_profile_u_im(w.get()) + n});
  out.table = std::move(t);
  return out;
}

json observables_json(const qgp_observables& ob) {
  return json{{"energy", jnum(ob.energy)},
              {"momentum", jnum(ob.momentum)},
              {"dE_dc", jnum(ob.dE_dc)},
              {"dp_dc", jnum(ob.dp_dc)},
              {"method", ob.method == QGP_METHOD_CLOSED_FORM ? "closed" : "quadrature"}};
}

qgp_observables wave_observables(const Options& o, qgp_method m, qgp_grid g) {
  qgp_observables ob{};
  if (o.kind == "cuspon") {
    check(qgp_cuspon_observables({o.c, o.kappa}, m, g, &ob));
  } else if (o.kind == "soliton") {
    check(qgp_soliton_observables({o.c, o.kappa}, m, g, &ob));
  } else {
    throw ApiError(QGP_ERR_PARAM, "param: observables support --kind soliton or cuspon");
  }
  return ob;
}

Output run_observables(const Options& o) {
  Output out{"observables",
             {{"subcommand", "observables"}, {"c", o.c}, {"kappa", o.kappa}, {"kind", o.kind}, {"method", o.method},
              {"L", o.L}, {"h", o.h}}};
  const qgp_method m = o.method == "quadrature" ? QGP_METHOD_QUADRATURE : QGP_METHOD_CLOSED_FORM;
  const qgp_observables ob = wave_observables(o, m, {o.L, o.h});
  out.result = observables_json(ob);
  Table t;
  t.add("c", {o.c});
  t.add("kappa", {o.kappa});
  t.add("E", {ob.energy});
  t.add("p", {ob.momentum});
  t.add("dE_dc", {ob.dE_dc});
  t.add("dp_dc", {ob.dp_dc});
  out.table = std::move(t);
  return out;
}

Output run_criticals(const Options& o) {
  Output out{"criticals", {{"subcommand", "criticals"}, {"kappa", o.kappa}}};
  qgp_critical_values v{};
  check(qgp_critical_values_of(o.kappa, &v));
  out.result = json{{"kappa", v.kappa},
                    {"kappa0", v.kappa0},
                    {"c_tilde", v.has_c_tilde ? jnum(v.c_tilde) : json(nullptr)},
                    {"c_star", v.c_star},
                    {"q_star", v.q_star},
                    {"E_black", v.E_black}};
  Table t;
  t.add("kappa", {v.kappa});
  t.add("kappa0", {v.kappa0});
  t.add("c_tilde", {v.c_tilde});
  t.add("c_star", {v.c_star});
  t.add("q_star", {v.q_star});
  t.add("E_black", {v.E_black});
  out.table = std::move(t);
  return out;
}

Output run_curve(const Options& o) {
  Output out{"curve", {{"subcommand", "curve"}, {"kappa", o.kappa}, {"n", o.n}}};
  if (o.n < 2) throw ApiError(QGP_ERR_PARAM, "param: --n must be at least 2");
  double qs_star = 0.0;
  check(qgp_q_star(o.kappa, &qs_star));
  const double qmax = o.qmax.value_or(2.0 * qs_star);
  out.config["qmax"] = qmax;
  std::vector<double> qs(size_t(o.n)), E(qs.size()), c(qs.size());
  for (int i = 0; i < o.n; ++i) qs[size_t(i)] = qmax * i / (o.n - 1);
  check(qgp_min_curve(o.kappa, qs.data(), qs.size(), E.data(), c.data()));
  out.result["q_star"] = qs_star;
  Table t;
  t.add("q", qs);
  t.add("E_min", E);
  t.add("c", c);
  out.table = std::move(t);
  return out;
}

struct EvolveWatch {
  const qgp_profile* reference;
  std::string snapshots;
  double guess = 0.0;
  int index = 0;
  std::exception_ptr failure;
  std::vector<double> t, E, p, min_rho, dist, shift;
};

void write_snapshot(const qgp_state* s, const std::string& prefix, int index) {
  const size_t n = qgp_state_size(s);
  Table t;
  t.add("x", {qgp_state_x(s), qgp_state_x(s) + n});
  t.add("rho", {qgp_state_rho(s), qgp_state_rho(s) + n});
  t.add("v", {qgp_state_v(s), qgp_state_v(s) + n});
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "_%05d.csv", index);
  write_text(prefix + suffix, t.csv());
}

void record_state(const qgp_state* s, EvolveWatch* w) {
  double E = NAN, p = NAN;
  check(qgp_state_observables(s, &E, &p));
  qgp_distance d{};
  check(qgp_modulated_distance(s, w->reference, w->guess, 1.0, &d));
  w->guess = d.shift;
  const size_t n = qgp_state_size(s);
  const double* rho = qgp_state_rho(s);
  w->t.push_back(qgp_state_time(s));
  w->E.push_back(E);
  w->p.push_back(p);
  w->min_rho.push_back(*std::min_element(rho, rho + n));
  w->dist.push_back(d.distance);
  w->shift.push_back(d.shift);
  if (!w->snapshots.empty()) write_snapshot(s, w->snapshots, w->index);
  ++w->index;
}

// Exceptions must not cross the C boundary; they are parked and rethrown after the run.
int evolve_observer(const qgp_state* s, void* user) {
  auto* w = static_cast<EvolveWatch*>(user);
  try {
    record_state(s, w);
    return 0;
  } catch (...) {
    w->failure = std::current_exception();
    return 1;
  }
}

Output run_evolve(const Options& o) {
  Output out{"evolve",
             {{"subcommand", "evolve"}, {"c", o.c}, {"kappa", o.kappa}, {"L", o.L}, {"h", o.h}, {"dt", o.dt},
              {"T", o.T}, {"perturb", o.perturb}, {"record", o.record}}};
  if (!o.snapshots.empty()) out.config["snapshots"] = o.snapshots;
  const qgp_params p{o.c, o.kappa};
  const qgp_grid g{o.L, o.h};
  qgp_profile* raw = nullptr;
  check(qgp_profile_soliton(p, g, &raw));
  const ProfilePtr wave(raw);
  check(qgp_profile_soliton(p, {o.L, 0.25 * o.h}, &raw));
  const ProfilePtr reference(raw);
  qgp_state* sraw = nullptr;
  check(qgp_state_from_profile(wave.get(), g, &sraw));
  const StatePtr state(sraw);
  if (o.perturb != 0.0) check(qgp_state_add_bump(state.get(), o.perturb, 0.0, 1.0));
  EvolveWatch watch{reference.get(), o.snapshots};
  const auto start = std::chrono::steady_clock::now();
  const qgp_status s = qgp_state_evolve(state.get(), o.T, o.dt, o.record, nullptr, evolve_observer, &watch);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check(s);
  if (watch.failure) std::rethrow_exception(watch.failure);
  double e_drift = 0.0, p_drift = 0.0, max_dist = 0.0;
  for (size_t i = 0; i < watch.t.size(); ++i) {
    e_drift = std::max(e_drift, std::abs(watch.E[i] - watch.E[0]) / std::abs(watch.E[0]));
    p_drift = std::max(p_drift, std::abs(watch.p[i] - watch.p[0]) / std::abs(watch.p[0]));
    max_dist = std::max(max_dist, watch.dist[i]);
  }
  out.result["energy_drift"] = e_drift;
  out.result["momentum_drift"] = p_drift;
  out.result["max_modulated_distance"] = max_dist;
  out.result["min_rho"] = *std::min_element(watch.min_rho.begin(), watch.min_rho.end());
  out.report = json{{"runtime_seconds", seconds}};
  Table t;
  t.add("t", watch.t);
  t.add("E", watch.E);
  t.add("p", watch.p);
  t.add("min_rho", watch.min_rho);
  t.add("mod_distance", watch.dist);
  t.add("shift", watch.shift);
  out.table = std::move(t);
  return out;
}

json verify_wave(const Options& o, const char* kind) {
  Options w = o;
  w.kind = kind;
  json j;
  j["kind"] = kind;
  const ProfilePtr prof = build_profile(w);
  j["residuals"] = residual_report(prof.get());
  const qgp_observables closed = wave_observables(w, QGP_METHOD_CLOSED_FORM, {});
  const qgp_observables quad = wave_observables(w, QGP_METHOD_QUADRATURE, {});
  j["closed"] = observables_json(closed);
  j["quadrature"] = observables_json(quad);
  j["energy_difference"] = std::abs(closed.energy - quad.energy);
  j["momentum_difference"] = std::abs(closed.momentum - quad.momentum);
  const double res = j["residuals"].value("residual_first_integral", 1.0);
  j["pass"] = res < 1e-5 && j["energy_difference"].get<double>() < 1e-6 &&
              j["momentum_difference"].get<double>() < 1e-6;
  return j;
}

Output run_verify(const Options& o) {
  Output out{"verify", {{"subcommand", "verify"}, {"c", o.c}, {"kappa", o.kappa}, {"L", o.L}, {"h", o.h}}};
  qgp_classification cl{};
  check(qgp_classify({o.c, o.kappa}, 0, &cl));
  out.result["region"] = qgp_region_name(cl.region);
  json waves = json::array();
  const bool soliton = cl.region == QGP_REGION_D1 || cl.region == QGP_REGION_D2 || cl.region == QGP_REGION_D3;
  const bool cuspon = cl.region == QGP_REGION_D1 || cl.region == QGP_REGION_D3 || cl.region == QGP_REGION_BMINUS ||
                      cl.region == QGP_REGION_BPLUS;
  if (soliton) waves.push_back(verify_wave(o, "soliton"));
  if (cuspon) waves.push_back(verify_wave(o, "cuspon"));
  if (waves.empty()) throw ApiError(QGP_ERR_REGION, "region: no soliton or cuspon to verify for these parameters");
  bool all = true;
  for (const auto& w : waves) all = all && w["pass"].get<bool>();
  out.result["waves"] = waves;
  out.result["tolerances"] = json{{"residual_first_integral", 1e-5}, {"closed_vs_quadrature", 1e-6}};
  out.result["all_pass"] = all;
  return out;
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QGPWAVE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, unsigned(v));
  }
  return n;
}

// Runs f(i) for i in [0, n) on up to thread_cap() threads; the first failure is rethrown.
template <class F>
void parallel_for(size_t n, F&& f) {
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (size_t i; !failed && (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned threads = std::min<size_t>(thread_cap(), std::max<size_t>(n, 1));
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

Output run_sweep(const Options& o) {
  Output out{"sweep", {{"subcommand", "sweep"}, {"figure", o.figure}, {"kappa", o.kappa}, {"n", o.n}}};
  if (o.n < 2) throw ApiError(QGP_ERR_PARAM, "param: --n must be at least 2");
  const size_t n = size_t(o.n);
  Table t;
  if (o.figure == "ep-diagram" || o.figure == "energy-compare") {
    std::vector<double> cs(n), E(n), p(n), Ec(n, NAN), pc(n, NAN);
    for (size_t i = 0; i < n; ++i) cs[i] = kSqrt2 * double(i + 1) / double(n + 1);
    const bool cuspons = o.figure == "energy-compare";
    parallel_for(n, [&](size_t i) {
      check(qgp_energy_closed({cs[i], o.kappa}, &E[i]));
      check(qgp_momentum_closed({cs[i], o.kappa}, &p[i]));
      if (cuspons) {
        check(qgp_cuspon_energy_closed({cs[i], o.kappa}, &Ec[i]));
        check(qgp_cuspon_momentum_closed({cs[i], o.kappa}, &pc[i]));
      }
    });
    int flips = 0;
    for (size_t i = 2; i < n; ++i) {
      if ((p[i] - p[i - 1] > 0.0) != (p[i - 1] - p[i - 2] > 0.0)) ++flips;
    }
    out.result["momentum_trend_changes"] = flips;
    t.add("c", cs);
    t.add("E", E);
    t.add("p", p);
    if (cuspons) {
      t.add("E_cuspon", Ec);
      t.add("p_cuspon", pc);
    }
  } else if (o.figure == "region-map") {
    out.config["c_max"] = o.c_max;
    out.config["kappa_min"] = o.kappa_min;
    out.config["kappa_max"] = o.kappa_max;
    std::vector<double> cs(n * n), ks(n * n), region(n * n);
    parallel_for(n * n, [&](size_t idx) {
      const size_t a = idx / n, b = idx % n;
      cs[idx] = o.c_max * double(a) / double(n - 1);
      ks[idx] = o.kappa_min + (o.kappa_max - o.kappa_min) * double(b) / double(n - 1);
      qgp_classification cl{};
      check(qgp_classify({cs[idx], ks[idx]}, 0, &cl));
      region[idx] = double(cl.region);
    });
    json legend = json::object();
    for (int r = QGP_REGION_D1; r <= QGP_REGION_NONE; ++r) legend[std::to_string(r)] = qgp_region_name(qgp_region(r));
    out.result["region_codes"] = legend;
    t.add("c", cs);
    t.add("kappa", ks);
    t.add("region", region);
  } else {
    throw ApiError(QGP_ERR_PARAM, "param: unknown figure " + o.figure);
  }
  out.table = std::move(t);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traveling waves of the quasilinear Gross-Pitaevskii equation"};
  app.require_subcommand(1);
  // --h is the grid spacing, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(qgp_version()));
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", o.out, "Output path (stdout when absent)");
  };
  auto params = [&](CLI::App* sub) {
    sub->add_option("--c", o.c, "Wave speed")->capture_default_str();
    sub->add_option("--kappa", o.kappa, "Quasilinear coefficient")->capture_default_str();
  };
  const std::vector<std::string> kinds{"soliton", "black", "cuspon", "compacton", "composite", "trivial"};

  auto* classify = app.add_subcommand("classify", "Region and wave inventory for (c, kappa)");
  params(classify);
  classify->add_flag("--exact", o.exact, "Disable snapping to the boundary lines");
  common(classify);

  auto* profile = app.add_subcommand("profile", "Sample a wave profile");
  params(profile);
  profile->add_option("--kind", o.kind, "Wave kind")->check(CLI::IsMember(kinds))->capture_default_str();
  profile->add_option("--j", o.j, "Compacton bubble count")->capture_default_str();
  profile->add_option("--eta0", o.eta0, "Composite bubble centre value");
  profile->add_option("--K0", o.K0, "Composite constant when eta0 = 1");
  profile->add_option("--chain", o.chain, "Centre values of bubbles placed side by side")->delimiter(',');
  common(profile);

  auto* observables = app.add_subcommand("observables", "Energy, momentum and their speed derivatives");
  params(observables);
  observables->add_option("--kind", o.kind, "soliton or cuspon")
      ->check(CLI::IsMember({"soliton", "cuspon"}))
      ->capture_default_str();
  observables->add_option("--method", o.method, "closed or quadrature")
      ->check(CLI::IsMember({"closed", "quadrature"}))
      ->capture_default_str();
  common(observables);

  auto* criticals = app.add_subcommand("criticals", "kappa0, c_tilde, c_star, q_star and the black soliton energy");
  criticals->add_option("--kappa", o.kappa, "Quasilinear coefficient")->required();
  common(criticals);

  auto* curve = app.add_subcommand("curve", "Energy minimization curve on a uniform momentum grid");
  curve->add_option("--kappa", o.kappa, "Quasilinear coefficient")->required();
  curve->add_option("--n", o.n, "Number of momentum samples")->capture_default_str();
  curve->add_option("--qmax", o.qmax, "Largest momentum (default 2 q_star)");
  common(curve);

  auto* evolve = app.add_subcommand("evolve", "Evolve a (perturbed) dark soliton");
  params(evolve);
  evolve->add_option("--dt", o.dt, "Time step cap (default: stability bound)")->capture_default_str();
  evolve->add_option("--T", o.T, "Final time")->capture_default_str();
  evolve->add_option("--perturb", o.perturb, "Bump amplitude added to Psi")->capture_default_str();
  evolve->add_option("--record", o.record, "Recording interval")->capture_default_str();
  evolve->add_option("--snapshots", o.snapshots, "Path prefix for state snapshots at each record");
  common(evolve);

  auto* verify = app.add_subcommand("verify", "Residual and closed-form checks for the waves at (c, kappa)");
  params(verify);
  common(verify);

  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps for energy-momentum diagrams and region maps");
  sweep->add_option("--figure", o.figure, "ep-diagram, energy-compare or region-map")
      ->check(CLI::IsMember({"ep-diagram", "energy-compare", "region-map"}))
      ->capture_default_str();
  sweep->add_option("--kappa", o.kappa, "Quasilinear coefficient")->capture_default_str();
  sweep->add_option("--n", o.n, "Samples per axis")->capture_default_str();
  sweep->add_option("--c-max", o.c_max, "Region map speed range")->capture_default_str();
  sweep->add_option("--kappa-min", o.kappa_min, "Region map lower kappa")->capture_default_str();
  sweep->add_option("--kappa-max", o.kappa_max, "Region map upper kappa")->capture_default_str();
  common(sweep);

  // Grid defaults differ per subcommand.
  double prof_L = 20.0, prof_h = 1e-2, obs_L = 40.0, obs_h = 1e-3, evo_L = 30.0, evo_h = 0.05, ver_L = 20.0,
         ver_h = 1e-3;
  profile->add_option("--L", prof_L, "Half-width of the grid")->capture_default_str();
  profile->add_option("--h", prof_h, "Grid spacing")->capture_default_str();
  observables->add_option("--L", obs_L, "Quadrature grid half-width")->capture_default_str();
  observables->add_option("--h", obs_h, "Quadrature grid spacing")->capture_default_str();
  evolve->add_option("--L", evo_L, "Half-width of the domain")->capture_default_str();
  evolve->add_option("--h", evo_h, "Grid spacing")->capture_default_str();
  verify->add_option("--L", ver_L, "Half-width of the residual grid")->capture_default_str();
  verify->add_option("--h", ver_h, "Residual grid spacing")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    Output out;
    if (*classify) {
      out = run_classify(o);
    } else if (*profile) {
      o.L = prof_L, o.h = prof_h;
      out = run_profile(o);
    } else if (*observables) {
      o.L = obs_L, o.h = obs_h;
      out = run_observables(o);
    } else if (*criticals) {
      out = run_criticals(o);
    } else if (*curve) {
      out = run_curve(o);
    } else if (*evolve) {
      o.L = evo_L, o.h = evo_h;
      out = run_evolve(o);
    } else if (*verify) {
      o.L = ver_L, o.h = ver_h;
      out = run_verify(o);
    } else if (*sweep) {
      out = run_sweep(o);
    }
    out.config["format"] = o.format;
    emit(o, out);
    if (*verify && !out.result["all_pass"].get<bool>()) return 3;
    return 0;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
