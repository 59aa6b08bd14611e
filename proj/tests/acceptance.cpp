// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <qgpwave/qgpwave.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

class CheckFailed {
 public:
  explicit CheckFailed(std::string what) : what_(std::move(what)) {}
  const std::string& what() const { return what_; }

 private:
  std::string what_;
};

void ok(qgp_status s, const char* call) {
  if (s != QGP_OK) {
    throw CheckFailed(std::string(call) + ": " + qgp_status_name(s) + " (" + qgp_last_error() + ")");
  }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Profile {
  qgp_profile* p = nullptr;
  Profile() = default;
  Profile(const Profile&) = delete;
  Profile& operator=(const Profile&) = delete;
  ~Profile() { qgp_profile_free(p); }
  size_t size() const { return qgp_profile_size(p); }
  const double* x() const { return qgp_profile_x(p); }
  const double* eta() const { return qgp_profile_eta(p); }
};

struct State {
  qgp_state* s = nullptr;
  State() = default;
  State(const State&) = delete;
  State& operator=(const State&) = delete;
  ~State() { qgp_state_free(s); }
};

double closed(qgp_status (*f)(qgp_params, double*), double c, double k) {
  double out = 0.0;
  ok(f({c, k}, &out), "closed form");
  return out;
}

Outcome kappa0_root() {
  const auto t0 = std::chrono::steady_clock::now();
  double k0 = 0.0;
  ok(qgp_kappa0(&k0), "qgp_kappa0");
  const double ms = 1e3 * seconds_since(t0);
  return {k0 >= -3.65 && k0 <= -3.62 && ms < 10.0, fmt("kappa0 = %.12f, %.2f ms", k0, ms)};
}

Outcome gp_limit() {
  double worst = 0.0;
  for (double c : {0.5, 1.0, 1.3}) {
    const double s = std::sqrt(2.0 - c * c);
    const double E = closed(qgp_energy_closed, c, -1e-8), p = closed(qgp_momentum_closed, c, -1e-8);
    worst = std::max(worst, std::abs(E - s * s * s / 3.0));
    worst = std::max(worst, std::abs(p - (kPi / 2.0 - std::atan(c / s) - c * s / 2.0)));
  }
  return {worst < 1e-6, fmt("max deviation %.3e", worst)};
}

Outcome compacton_limit() {
  const double c = 1.0, c2 = c * c, k = 0.5 - 1e-8;
  const double E_lim = kPi * (0.75 * c2 * c2 - 3.0 * c2 + 3.0) / (8.0 * kSqrt2);
  const double p_lim = kPi * ((0.5 * c2 * c - 3.0 * c) / (4.0 * kSqrt2) + 0.5);
  const double dE = std::abs(closed(qgp_energy_closed, c, k) - E_lim);
  const double dp = std::abs(closed(qgp_momentum_closed, c, k) - p_lim);
  return {dE < 1e-5 && dp < 1e-5, fmt("|dE| = %.3e, |dp| = %.3e (limits %.6f, %.6f)", dE, dp, E_lim, p_lim)};
}

Outcome closed_vs_quadrature() {
  struct Box {
    const char* name;
    bool cuspon;
    double c_lo, c_hi, k_lo, k_hi;
  };
  const std::vector<Box> boxes = {
      {"soliton D1", false, 0.2, 1.3, 0.05, 0.45},  {"soliton D2", false, 0.2, 1.3, -10.0, -0.1},
      {"soliton D3", false, 1.5, 2.5, 0.6, 3.0},    {"cuspon D1", true, 0.2, 1.3, 0.05, 0.45},
      {"cuspon D3", true, 1.5, 2.5, 0.6, 3.0},      {"cuspon B-", true, kSqrt2, kSqrt2, 0.05, 0.45},
      {"cuspon B+", true, kSqrt2, kSqrt2, 0.6, 3.0},
  };
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const qgp_grid g{40.0, 1e-3};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string where;
  for (const Box& b : boxes) {
    for (int i = 0; i < 10; ++i) {
      const qgp_params p{b.c_lo + (b.c_hi - b.c_lo) * u(rng), b.k_lo + (b.k_hi - b.k_lo) * u(rng)};
      qgp_observables cf, qd;
      auto run = b.cuspon ? qgp_cuspon_observables : qgp_soliton_observables;
      ok(run(p, QGP_METHOD_CLOSED_FORM, g, &cf), b.name);
      ok(run(p, QGP_METHOD_QUADRATURE, g, &qd), b.name);
      const double d = std::max(std::abs(cf.energy - qd.energy), std::abs(cf.momentum - qd.momentum));
      if (d > worst) {
        worst = d;
        where = fmt(" at (%.4f, %.4f)", p.c, p.kappa) + " " + b.name;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && secs < 30.0, fmt("max deviation %.3e", worst) + where + fmt(", %.1f s", secs)};
}

Outcome hamilton() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    qgp_params p;
    switch (i % 3) {
      case 0: p = {0.05 + 1.35 * u(rng), 0.01 + 0.48 * u(rng)}; break;
      case 1: p = {0.05 + 1.35 * u(rng), -50.0 * u(rng)}; break;
      default: p = {1.45 + 1.5 * u(rng), 0.51 + 4.0 * u(rng)}; break;
    }
    double dE = 0.0, dp = 0.0;
    ok(qgp_dE_dc_closed(p, &dE), "qgp_dE_dc_closed");
    ok(qgp_dp_dc_closed(p, &dp), "qgp_dp_dc_closed");
    worst = std::max(worst, std::abs(dE - p.c * dp));
  }
  return {worst < 1e-8, fmt("max |dE/dc - c dp/dc| = %.3e", worst)};
}

Outcome ode_residuals() {
  const qgp_grid g{20.0, 1e-3};
  double worst_fi = 0.0;
  auto check = [&](qgp_status (*make)(qgp_params, qgp_grid, qgp_profile**), qgp_params p) {
    Profile w;
    ok(make(p, g, &w.p), "profile");
    double fi = 0.0, so = 0.0;
    ok(qgp_profile_residuals(w.p, 5.0, &fi, &so), "qgp_profile_residuals");
    worst_fi = std::max(worst_fi, fi);
  };
  for (qgp_params p : {qgp_params{1.0, 0.2}, qgp_params{1.0, -5.0}, qgp_params{2.0, 1.0}}) check(qgp_profile_soliton, p);
  for (qgp_params p : {qgp_params{1.0, 0.4}, qgp_params{2.0, 1.0}, qgp_params{kSqrt2, 0.3}, qgp_params{kSqrt2, 1.0}}) {
    check(qgp_profile_cuspon, p);
  }
  Profile comp;
  ok(qgp_profile_compacton(1.0, 1, g, &comp.p), "qgp_profile_compacton");
  double fi = 0.0, so = 0.0;
  ok(qgp_profile_residuals(comp.p, 5.0, &fi, &so), "qgp_profile_residuals");
  return {worst_fi < 1e-5 && so < 1e-4,
          fmt("first integral max %.3e, compacton second order %.3e", worst_fi, so)};
}

Outcome round_trips() {
  struct Case {
    qgp_family fam;
    qgp_params p;
  };
  const std::vector<Case> cases = {
      {QGP_FAMILY_F, {1.0, 0.2}},        {QGP_FAMILY_G, {1.0, -5.0}},      {QGP_FAMILY_H, {2.0, 1.0}},
      {QGP_FAMILY_f, {1.0, 0.4}},        {QGP_FAMILY_g, {kSqrt2, 0.3}},    {QGP_FAMILY_GTILDE, {kSqrt2, 1.0}},
      {QGP_FAMILY_h, {2.0, 1.0}},
  };
  double worst = 0.0;
  int evaluated = 0;
  for (const Case& cs : cases) {
    for (int i = 0; i < 200; ++i) {
      const double x = 1e-3 + (20.0 - 1e-3) * i / 199.0;
      double eta = 0.0, back = 0.0;
      ok(qgp_family_invert(cs.fam, cs.p, x, &eta), "qgp_family_invert");
      if (eta == 0.0) continue;  // the intensity underflowed; there is nothing to map back
      ok(qgp_family_eval(cs.fam, cs.p, eta, &back), "qgp_family_eval");
      worst = std::max(worst, std::abs(back - x));
      ++evaluated;
    }
  }
  return {worst < 1e-10, fmt("max |F(eta(x)) - x| = %.3e over %.0f points", worst, evaluated)};
}

Outcome figure_values() {
  qgp_critical_values cv50, cv3;
  ok(qgp_critical_values_of(-50.0, &cv50), "qgp_critical_values_of");
  ok(qgp_critical_values_of(-3.0, &cv3), "qgp_critical_values_of");
  const bool ct = cv50.has_c_tilde && cv50.c_tilde >= 0.49 && cv50.c_tilde <= 0.53;
  const bool cs = cv50.c_star >= 0.73 && cv50.c_star <= 0.77;
  const bool qs = cv50.q_star >= 3.4 && cv50.q_star <= 3.6;
  const bool e50 = std::abs(cv50.E_black - 3.748) <= 0.02;
  const bool e3 = std::abs(cv3.E_black - 1.347) <= 0.02;
  std::string d = fmt("c_tilde %.6f", cv50.c_tilde) + (ct ? "" : " (outside [0.49, 0.53])") +
                  fmt(", c_star %.6f, q_star %.6f, E_black(-50) %.6f, E_black(-3) %.6f", cv50.c_star, cv50.q_star,
                      cv50.E_black, cv3.E_black);
  return {ct && cs && qs && e50 && e3, d};
}

Outcome min_curve_properties() {
  std::string detail;
  bool pass = true;
  for (double k : {-1.0, -10.0, -50.0}) {
    double qs_max = 0.0, Eb = 0.0;
    ok(qgp_q_star(k, &qs_max), "qgp_q_star");
    ok(qgp_black_energy(k, &Eb), "qgp_black_energy");
    const int n = 200;
    std::vector<double> q(n), E(n);
    for (int i = 0; i < n; ++i) q[i] = 2.0 * qs_max * (i + 1) / n;
    ok(qgp_min_curve(k, q.data(), n, E.data(), nullptr), "qgp_min_curve");
    double margin = 1e300, concav = -1e300, lip = 0.0, flat = 0.0;
    for (int i = 0; i < n; ++i) {
      margin = std::min(margin, kSqrt2 * q[i] - E[i]);
      if (i + 1 < n) lip = std::max(lip, std::abs(E[i + 1] - E[i]) / (q[i + 1] - q[i]));
      if (i > 0 && i + 1 < n) concav = std::max(concav, E[i - 1] - 2.0 * E[i] + E[i + 1]);
      if (q[i] > qs_max) flat = std::max(flat, std::abs(E[i] - Eb));
    }
    const bool good = margin > 0.0 && concav <= 1e-10 && lip <= kSqrt2 && flat <= 1e-12;
    pass = pass && good;
    detail += fmt("k=%g: margin %.2e, max d2 %.1e, lip %.4f", k, margin, concav, lip) + fmt(", flat %.1e; ", flat);
  }
  return {pass, detail};
}

Outcome vk_signs() {
  const int n = 100;
  const double lo = 0.01, hi = kSqrt2 - 0.01, step = (hi - lo) / (n - 1);
  bool all_negative = true;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    ok(qgp_dp_dc_closed({lo + step * i, -1.0}, &s), "qgp_dp_dc_closed");
    all_negative = all_negative && s < 0.0;
  }
  double ct = 0.0;
  ok(qgp_c_tilde(-50.0, &ct), "qgp_c_tilde");
  int changes = 0;
  double where = 0.0, prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = lo + step * i;
    double s = 0.0;
    ok(qgp_dp_dc_closed({c, -50.0}, &s), "qgp_dp_dc_closed");
    if (i > 0 && (s > 0.0) != (prev > 0.0)) {
      ++changes;
      where = c - 0.5 * step;
    }
    prev = s;
  }
  const bool located = std::abs(where - ct) <= step;
  return {all_negative && changes == 1 && located,
          std::string(all_negative ? "kappa=-1 all negative" : "kappa=-1 has nonnegative values") +
              fmt(", kappa=-50 %.0f sign change(s) near %.4f, c_tilde %.6f", changes, where, ct)};
}

// Profile value at the node nearest x.
double at(const Profile& w, double x) {
  const double* xs = w.x();
  const size_t n = w.size();
  size_t i = size_t(std::lower_bound(xs, xs + n, x) - xs);
  if (i == n) i = n - 1;
  if (i > 0 && std::abs(xs[i - 1] - x) < std::abs(xs[i] - x)) --i;
  return w.eta()[i];
}

// max |d eta| / sqrt(dx) over neighbours. Stays bounded under refinement for a continuous
// profile with square-root edges; a jump J makes it grow like J / sqrt(h).
double holder_quotient(const Profile& w) {
  double m = 0.0;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    m = std::max(m, std::abs(w.eta()[i + 1] - w.eta()[i]) / std::sqrt(w.x()[i + 1] - w.x()[i]));
  }
  return m;
}

double evenness_defect(const Profile& w) {
  double m = 0.0;
  const size_t n = w.size();
  for (size_t i = 0; i < n; ++i) m = std::max(m, std::abs(w.eta()[i] - w.eta()[n - 1 - i]));
  return m;
}

Outcome composite_waves() {
  const double eta0 = -10.0;
  std::string detail;
  bool pass = true;
  for (qgp_params p : {qgp_params{1.0, 0.5}, qgp_params{1.0, 0.4}}) {
    qgp_composite spec;
    ok(qgp_composite_spec(p, eta0, 0, 0.0, &spec), "qgp_composite_spec");
    const double L = std::ceil(spec.b0) + 10.0;
    Profile w, fine;
    ok(qgp_profile_composite(p, eta0, 0, 0.0, {L, 1e-3}, &w.p), "qgp_profile_composite");
    ok(qgp_profile_composite(p, eta0, 0, 0.0, {L, 5e-4}, &fine.p), "qgp_profile_composite");
    const double level = 1.0 - 1.0 / (2.0 * p.kappa);
    const double glue = std::max(std::abs(at(w, spec.b0) - level), std::abs(at(w, -spec.b0) - level));
    const double even = evenness_defect(w);
    const double j1 = holder_quotient(w), j2 = holder_quotient(fine);
    const bool continuous = j1 < 10.0 && j2 < 1.1 * j1;
    double fi = 0.0, so = 0.0;
    ok(qgp_profile_residuals(w.p, 5.0, &fi, &so), "qgp_profile_residuals");
    double tails = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      const double x = w.x()[i];
      if (std::abs(x) <= spec.b0) continue;
      double expect = 0.0;
      if (p.kappa != 0.5) ok(qgp_cuspon_eta(p, std::abs(x) - spec.b0, &expect), "qgp_cuspon_eta");
      tails = std::max(tails, std::abs(w.eta()[i] - expect));
    }
    const bool good = glue < 1e-8 && even < 1e-12 && continuous && fi < 1e-4 && tails < 1e-8;
    pass = pass && good;
    detail += fmt("(c,k)=(%g,%g): ", p.c, p.kappa) + fmt("b0 %.4f, glue %.1e, even %.1e, ", spec.b0, glue, even) +
              fmt("holder %.2f/%.2f, residual %.1e, ", j1, j2, fi) +
              fmt(p.kappa == 0.5 ? "support %.1e; " : "tails %.1e; ", tails);
  }
  return {pass, detail};
}

Outcome compacton_exactness() {
  const double c = 1.0, edge = kPi / kSqrt2;
  double d_eta = 0.0, d_mod = 0.0, d_phase = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -2.0 * edge + 4.0 * edge * i / 2000.0;
    double re = 0.0, im = 0.0;
    ok(qgp_compacton(c, 1, x, &re, &im), "qgp_compacton");
    const double mod2 = re * re + im * im;
    if (std::abs(x) >= edge) {
      d_mod = std::max(d_mod, std::abs(mod2 - 1.0));
      continue;
    }
    const double cs = std::cos(x / kSqrt2);
    d_eta = std::max(d_eta, std::abs((1.0 - mod2) - 0.5 * (2.0 - c * c) * cs * cs));
    // Phase on (0, sqrt(2) pi), extended as an odd function; the cotangent pole sits at 0.
    const double ax = std::abs(x);
    if (ax < 1e-3) continue;
    double theta = -0.5 * c * ax - (std::atan(c / kSqrt2 / std::tan(ax / kSqrt2)) - 0.5 * kPi);
    if (x < 0.0) theta = -theta;
    const double diff = std::remainder(std::arg(std::complex<double>(re, im)) - theta, 2.0 * kPi);
    d_phase = std::max(d_phase, std::abs(diff));
  }
  return {d_eta < 1e-12 && d_mod < 1e-12 && d_phase < 1e-10,
          fmt("intensity %.1e, outside modulus %.1e, phase %.1e", d_eta, d_mod, d_phase)};
}

Outcome translate() {
  std::string detail;
  bool pass = true;
  const qgp_grid g{30.0, 0.05};
  for (double k : {-1e-8, -1.0}) {
    const qgp_params p{1.0, k};
    const auto t0 = std::chrono::steady_clock::now();
    Profile w;
    ok(qgp_profile_soliton(p, g, &w.p), "qgp_profile_soliton");
    State s;
    ok(qgp_state_from_profile(w.p, g, &s.s), "qgp_state_from_profile");
    double E0 = 0.0, p0 = 0.0, E1 = 0.0, p1 = 0.0;
    ok(qgp_state_observables(s.s, &E0, &p0), "qgp_state_observables");
    ok(qgp_state_evolve(s.s, 1.0, 0.0, 0.0, nullptr, nullptr, nullptr), "qgp_state_evolve");
    ok(qgp_state_observables(s.s, &E1, &p1), "qgp_state_observables");
    const double secs = seconds_since(t0);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < qgp_state_size(s.s); ++i) {
      double e = 0.0;
      ok(qgp_soliton_eta(p, qgp_state_x(s.s)[i] - p.c * 1.0, &e), "qgp_soliton_eta");
      const double diff = qgp_state_rho(s.s)[i] - (1.0 - e);
      num += diff * diff;
      den += (1.0 - e) * (1.0 - e);
    }
    const double err = std::sqrt(num / den);
    const double dE = std::abs(E1 - E0) / E0, dp = std::abs(p1 - p0) / p0;
    pass = pass && err < 1e-2 && dE < 1e-4 && dp < 1e-4 && secs < 60.0;
    detail += fmt("k=%g: L2 %.2e, drift E %.1e p %.1e", k, err, dE, dp) + fmt(", %.2f s; ", secs);
  }
  return {pass, detail};
}

Outcome stability() {
  const double delta = 1e-3;
  qgp_report* rep = nullptr;
  ok(qgp_stability_experiment({1.0, -1.0}, delta, 5.0, {30.0, 0.05}, 0.0, 0.1, nullptr, &rep), "stability");
  const size_t n = qgp_report_size(rep);
  const double worst = *std::max_element(qgp_report_distance(rep), qgp_report_distance(rep) + n);
  const double lowest = *std::min_element(qgp_report_min_rho(rep), qgp_report_min_rho(rep) + n);
  qgp_report_free(rep);
  return {worst < 50.0 * delta && lowest > 0.1, fmt("max distance %.3e (budget %.3e), min rho %.4f", worst, 50.0 * delta, lowest)};
}

Outcome bright() {
  double worst = 0.0;
  for (double x : {0.0, 1.0, 2.0}) {
    double y = 0.0;
    ok(qgp_bright_profile(1.0, 0.0, x, &y), "qgp_bright_profile");
    worst = std::max(worst, std::abs(y - kSqrt2 / std::cosh(x)));
  }
  return {worst < 1e-8, fmt("max deviation %.3e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kappa0 root", kappa0_root},
      {"gp limit", gp_limit},
      {"compacton limit", compacton_limit},
      {"closed form vs quadrature", closed_vs_quadrature},
      {"hamilton identity", hamilton},
      {"ode residuals", ode_residuals},
      {"round trips", round_trips},
      {"figure values at kappa=-50", figure_values},
      {"minimization curve", min_curve_properties},
      {"vk sign structure", vk_signs},
      {"composite waves", composite_waves},
      {"compacton exactness", compacton_exactness},
      {"evolution translate", translate},
      {"orbital stability witness", stability},
      {"bright soliton", bright},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const CheckFailed& e) {
      o = {false, e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
