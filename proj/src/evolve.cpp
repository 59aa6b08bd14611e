#include "evolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "criticals.hpp"
#include "regions.hpp"
#include "stencil.hpp"

namespace qgp {

namespace {

using cplx = std::complex<double>;

constexpr int kGhost = 4;

// Edge treatment for uniform-grid derivatives.
enum class Edge {
  Background,  // pad with the background value beyond both ends
  OneSided,    // shifted five-point stencils where the central one would leave the grid
};

// Derivative of order deriv (1 or 2) at node i from the five nodes nearest i inside the grid.
double shifted5(const std::vector<double>& f, double h, long i, int deriv) {
  const long n = long(f.size());
  const long start = std::clamp<long>(i - 2, 0, n - 5);
  std::array<double, 5> z{};
  for (int k = 0; k < 5; ++k) z[k] = double(start + k - i) * h;
  const auto C = fd_weights(0.0, z);
  double d = 0.0;
  for (int k = 0; k < 5; ++k) d += C[k][deriv] * f[std::size_t(start + k)];
  return d;
}

// First derivative on a uniform grid; order is 4 or 8.
std::vector<double> d1_uniform(const std::vector<double>& f, double h, double bg, int order,
                               Edge edge = Edge::Background) {
  static constexpr std::array<double, 2> c4{8.0 / 12.0, -1.0 / 12.0};
  static constexpr std::array<double, 4> c8{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const long n = long(f.size());
  const long reach = order / 2;
  auto at = [&](long i) { return (i < 0 || i >= n) ? bg : f[std::size_t(i)]; };
  std::vector<double> out(f.size());
  for (long i = 0; i < n; ++i) {
    if (edge == Edge::OneSided && (i < reach || i >= n - reach)) {
      out[std::size_t(i)] = shifted5(f, h, i, 1);
      continue;
    }
    double d = 0.0;
    if (order == 8) {
      for (int k = 0; k < 4; ++k) d += c8[k] * (at(i + k + 1) - at(i - k - 1));
    } else {
      for (int k = 0; k < 2; ++k) d += c4[k] * (at(i + k + 1) - at(i - k - 1));
    }
    out[std::size_t(i)] = d / h;
  }
  return out;
}

std::vector<double> d2_uniform(const std::vector<double>& f, double h, double bg, Edge edge = Edge::Background) {
  const long n = long(f.size());
  auto at = [&](long i) { return (i < 0 || i >= n) ? bg : f[std::size_t(i)]; };
  std::vector<double> out(f.size());
  for (long i = 0; i < n; ++i) {
    if (edge == Edge::OneSided && (i < 2 || i >= n - 2)) {
      out[std::size_t(i)] = shifted5(f, h, i, 2);
      continue;
    }
    out[std::size_t(i)] =
        (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / (12.0 * h * h);
  }
  return out;
}

double capillarity(double rho, double kappa) { return (1.0 - 2.0 * kappa * rho) / (4.0 * rho); }

void check_state(const FieldState& s) {
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (!std::isfinite(s.rho[i]) || !std::isfinite(s.v[i])) fail(ErrorKind::Blowup, "non-finite field value");
    if (!(s.rho[i] > kRhoFloor)) {
      fail(ErrorKind::Blowup, "density fell below the vacuum guard at x = " + std::to_string(s.xs[i]));
    }
  }
}

struct Rates {
  std::vector<double> rho, v;
};

// Madelung system: rho_t = 2 (rho v)_x, v_t = (v^2 - R)_x with
// R = (1 - 2 kappa rho)/(2 rho) rho_xx - rho_x^2/(4 rho^2) + 1 - rho.
Rates rates(const std::vector<double>& rho, const std::vector<double>& v, double h, double kappa) {
  const std::size_t n = rho.size();
  const std::vector<double> rx = d1_uniform(rho, h, 1.0, 4);
  const std::vector<double> rxx = d2_uniform(rho, h, 1.0);
  std::vector<double> flux(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rho[i];
    flux[i] = 2.0 * r * v[i];
    const double R = (1.0 - 2.0 * kappa * r) / (2.0 * r) * rxx[i] - rx[i] * rx[i] / (4.0 * r * r) + 1.0 - r;
    q[i] = v[i] * v[i] - R;
  }
  Rates out{d1_uniform(flux, h, 0.0, 4), d1_uniform(q, h, 0.0, 4)};
  // Ends are pinned to the background.
  out.rho.front() = out.rho.back() = 0.0;
  out.v.front() = out.v.back() = 0.0;
  return out;
}

std::vector<double> uniform_grid(const Grid& g) {
  std::vector<double> xs = make_grid(g);
  return xs;
}

double lagrange6(const std::vector<double>& xs, const std::vector<double>& f, double x, double h0, double lo_val,
                 double hi_val) {
  const long n = long(xs.size());
  if (x <= xs.front()) return lo_val;
  if (x >= xs.back()) return hi_val;
  long j = long(std::floor((x - xs.front()) / h0));
  j = std::clamp<long>(j - 2, 0, n - 6);
  double sum = 0.0;
  for (long a = j; a < j + 6; ++a) {
    double w = 1.0;
    for (long b = j; b < j + 6; ++b) {
      if (b != a) w *= (x - xs[std::size_t(b)]) / (xs[std::size_t(a)] - xs[std::size_t(b)]);
    }
    sum += w * f[std::size_t(a)];
  }
  return sum;
}

bool is_uniform(const std::vector<double>& xs, double& h) {
  if (xs.size() < 6) return false;
  h = (xs.back() - xs.front()) / double(xs.size() - 1);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (std::abs(xs[i] - xs[i - 1] - h) > 1e-9 * h) return false;
  }
  return true;
}

std::size_t origin_index(const std::vector<double>& xs) {
  const auto it = std::min_element(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  return std::size_t(it - xs.begin());
}

double trapezoid_uniform(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
  s -= 0.5 * (f.front() + f.back());
  return s * h;
}

}  // namespace

FieldState constant_state(const Grid& g, double kappa) {
  FieldState s;
  s.xs = uniform_grid(g);
  s.h = g.spacing;
  s.rho.assign(s.xs.size(), 1.0);
  s.v.assign(s.xs.size(), 0.0);
  s.kappa = kappa;
  return s;
}

FieldState from_profile(const WaveProfile& w, const Grid& g) {
  if (!(w.params.kappa <= 0.0)) fail(ErrorKind::Param, "evolution is limited to kappa <= 0");
  FieldState s = constant_state(g, w.params.kappa);
  const std::size_t n = s.xs.size();
  std::vector<double> eta(n);
  if (w.xs == s.xs) {
    eta = w.eta;
  } else {
    double hw = 0.0;
    if (!is_uniform(w.xs, hw)) fail(ErrorKind::Grid, "profile must be sampled on a uniform grid to resample");
    for (std::size_t i = 0; i < n; ++i) eta[i] = lagrange6(w.xs, w.eta, s.xs[i], hw, 0.0, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(1.0 - eta[i] > kRhoFloor)) fail(ErrorKind::Vanishing, "profile vanishes; the hydrodynamic form needs rho > 0");
    s.rho[i] = 1.0 - eta[i];
    s.v[i] = w.params.c * eta[i] / (2.0 * (1.0 - eta[i]));
  }
  return s;
}

double max_stable_dt(const FieldState& s, const EvolveOptions& opt) {
  double kmax = 0.0;
  for (double r : s.rho) kmax = std::max(kmax, capillarity(r, s.kappa));
  if (!(kmax > 0.0)) fail(ErrorKind::Param, "capillarity must be positive");
  return opt.cfl * s.h * s.h / kmax;
}

FieldState step(const FieldState& s, double dt, const EvolveOptions& opt) {
  if (!(dt > 0.0) || dt > max_stable_dt(s, opt) * (1.0 + 1e-12)) {
    fail(ErrorKind::Param, "dt violates the stability bound");
  }
  const std::size_t n = s.rho.size();
  auto axpy = [&](const std::vector<double>& a, const std::vector<double>& b, double c) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + c * b[i];
    return out;
  };
  const Rates k1 = rates(s.rho, s.v, s.h, s.kappa);
  const Rates k2 = rates(axpy(s.rho, k1.rho, 0.5 * dt), axpy(s.v, k1.v, 0.5 * dt), s.h, s.kappa);
  const Rates k3 = rates(axpy(s.rho, k2.rho, 0.5 * dt), axpy(s.v, k2.v, 0.5 * dt), s.h, s.kappa);
  const Rates k4 = rates(axpy(s.rho, k3.rho, dt), axpy(s.v, k3.v, dt), s.h, s.kappa);
  FieldState out = s;
  const double L = std::max(std::abs(s.xs.front()), std::abs(s.xs.back()));
  const double inner = (1.0 - opt.sponge_fraction) * L;
  for (std::size_t i = 0; i < n; ++i) {
    out.rho[i] += dt / 6.0 * (k1.rho[i] + 2.0 * k2.rho[i] + 2.0 * k3.rho[i] + k4.rho[i]);
    out.v[i] += dt / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
    const double ax = std::abs(s.xs[i]);
    if (opt.sponge_fraction > 0.0 && ax > inner) {
      const double r = (ax - inner) / (L - inner);
      const double damp = std::exp(-opt.sponge_strength * r * r * dt);
      out.rho[i] = 1.0 + (out.rho[i] - 1.0) * damp;
      out.v[i] *= damp;
    }
  }
  out.t = s.t + dt;
  check_state(out);
  return out;
}

void evolve_for(FieldState& s, double T, double dt_max, double record_every,
                const std::function<void(const FieldState&)>& observer, const EvolveOptions& opt) {
  if (!(T >= 0.0)) fail(ErrorKind::Param, "evolution time must be >= 0");
  check_state(s);
  const double bound = max_stable_dt(s, opt);
  // Leave headroom since the bound tightens if the density dips.
  const double dt_cap = dt_max > 0.0 ? std::min(dt_max, bound) : 0.9 * bound;
  const double t0 = s.t;
  // Record instants split [0, T] into segments, each covered by whole steps.
  const long segments = record_every > 0.0 ? std::max(1L, long(std::ceil(T / record_every - 1e-9))) : 1L;
  if (observer) observer(s);
  for (long k = 1; k <= segments; ++k) {
    const double seg_end = (k == segments) ? T : double(k) * record_every;
    const double seg_len = seg_end - (s.t - t0);
    const long steps = std::max(1L, long(std::ceil(seg_len / dt_cap - 1e-9)));
    const double dt = seg_len / double(steps);
    for (long i = 0; i < steps; ++i) s = step(s, dt, opt);
    s.t = t0 + seg_end;
    if (observer) observer(s);
  }
}

StateObservables observables_of_state(const FieldState& s) {
  const std::size_t n = s.rho.size();
  const std::vector<double> rx = d1_uniform(s.rho, s.h, 1.0, 4);
  std::vector<double> e(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.rho[i];
    e[i] = 0.125 * rx[i] * rx[i] * (1.0 - 2.0 * s.kappa * r) / r + 0.5 * r * s.v[i] * s.v[i] +
           0.25 * (1.0 - r) * (1.0 - r);
    m[i] = 0.5 * (1.0 - r) * s.v[i];
  }
  return {trapezoid_uniform(e, s.h), trapezoid_uniform(m, s.h)};
}

Field reconstruct(const FieldState& s) {
  const std::size_t n = s.rho.size();
  for (double r : s.rho) {
    if (!(r > kRhoFloor)) fail(ErrorKind::Vanishing, "cannot reconstruct a phase through vacuum");
  }
  // theta by the trapezoid rule with Euler-Maclaurin end corrections through h^4.
  const std::vector<double> v1 = d1_uniform(s.v, s.h, 0.0, 8, Edge::OneSided);
  const std::vector<double> v3 = d2_uniform(v1, s.h, 0.0, Edge::OneSided);
  const std::vector<double> rx = d1_uniform(s.rho, s.h, 1.0, 8, Edge::OneSided);
  Field f;
  f.psi.resize(n);
  f.dpsi.resize(n);
  double trap = 0.0;
  const double h2 = s.h * s.h;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) trap += 0.5 * s.h * (s.v[i - 1] + s.v[i]);
    const double theta = trap - h2 / 12.0 * (v1[i] - v1[0]) + h2 * h2 / 720.0 * (v3[i] - v3[0]);
    const double a = std::sqrt(s.rho[i]);
    const cplx e = std::polar(1.0, theta);
    f.psi[i] = a * e;
    f.dpsi[i] = cplx(rx[i] / (2.0 * a), a * s.v[i]) * e;
  }
  return f;
}

FieldState add_bump(const FieldState& s, double delta, double center, double width) {
  if (!(width > 0.0)) fail(ErrorKind::Param, "bump width must be positive");
  Field f = reconstruct(s);
  FieldState out = s;
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    const double r = (s.xs[i] - center) / width;
    if (std::abs(r) >= 1.0) continue;
    const double q = 1.0 - r * r;
    const double b = std::exp(1.0 - 1.0 / q);
    const double db = b * (-2.0 * r / (q * q)) / width;
    const cplx psi = f.psi[i] + delta * b;
    const cplx dpsi = f.dpsi[i] + delta * db;
    out.rho[i] = std::norm(psi);
    out.v[i] = std::imag(std::conj(psi) * dpsi) / out.rho[i];
  }
  check_state(out);
  return out;
}

namespace {

struct Reference {
  std::vector<double> xs;
  double h = 0.0;
  std::vector<double> ure, uim, dre, dim;
  cplx left, right;

  cplx u(double x) const {
    return {lagrange6(xs, ure, x, h, left.real(), right.real()), lagrange6(xs, uim, x, h, left.imag(), right.imag())};
  }
  cplx du(double x) const { return {lagrange6(xs, dre, x, h, 0.0, 0.0), lagrange6(xs, dim, x, h, 0.0, 0.0)}; }
};

Reference make_reference(const WaveProfile& w) {
  if (!w.singular_points.empty() || !w.nondiff_points.empty()) {
    fail(ErrorKind::Param, "the reference wave must be smooth");
  }
  Reference ref;
  if (!is_uniform(w.xs, ref.h)) fail(ErrorKind::Grid, "the reference must be sampled on a uniform grid");
  ref.xs = w.xs;
  const std::vector<double> deta = slope_5pt(w.xs, w.eta);
  const std::size_t n = w.xs.size();
  ref.ure = w.u_re;
  ref.uim = w.u_im;
  ref.dre.resize(n);
  ref.dim.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double om = 1.0 - w.eta[i];
    if (!(om > kRhoFloor)) fail(ErrorKind::Vanishing, "the reference wave vanishes");
    const double a = std::sqrt(om);
    const double dth = w.params.c * w.eta[i] / (2.0 * om);
    const cplx d = cplx(-deta[i] / (2.0 * a), a * dth) * std::polar(1.0, w.theta[i]);
    ref.dre[i] = d.real();
    ref.dim[i] = d.imag();
  }
  ref.left = {w.u_re.front(), w.u_im.front()};
  ref.right = {w.u_re.back(), w.u_im.back()};
  return ref;
}

struct Fit {
  double d = 0.0;
  double phi = 0.0;
};

Fit distance_at(const FieldState& s, const Field& f, const Reference& ref, std::size_t i0, double y) {
  const std::size_t n = s.xs.size();
  std::vector<cplx> U(n), dU(n);
  cplx inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.xs[i] - y;
    U[i] = ref.u(x);
    dU[i] = ref.du(x);
    const double w = (i == 0 || i + 1 == n) ? 0.5 * s.h : s.h;
    inner += w * std::conj(dU[i]) * f.dpsi[i];
  }
  const cplx u0 = ref.u(-y);
  inner += std::conj(u0) * f.psi[i0];
  const double phi = std::arg(inner);
  const cplx rot = std::polar(1.0, phi);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::norm(f.dpsi[i] - rot * dU[i]);
    b[i] = std::pow(std::abs(f.psi[i]) - std::abs(U[i]), 2);
  }
  const double d = std::sqrt(trapezoid_uniform(a, s.h)) + std::sqrt(trapezoid_uniform(b, s.h)) +
                   std::abs(f.psi[i0] - rot * u0);
  return {d, phi};
}

}  // namespace

DistanceResult modulated_distance(const FieldState& s, const WaveProfile& reference, double shift_guess,
                                  double window) {
  const Reference ref = make_reference(reference);
  const Field f = reconstruct(s);
  const std::size_t i0 = origin_index(s.xs);
  if (std::abs(s.xs[i0]) > 1e-12) fail(ErrorKind::Grid, "state grid must contain x = 0");
  auto J = [&](double y) { return distance_at(s, f, ref, i0, y).d; };
  // Coarse scan at the state spacing, then golden-section refinement around the best node.
  const int m = std::max(2, int(std::ceil(2.0 * window / s.h)));
  double best_y = shift_guess, best = J(shift_guess);
  for (int k = 0; k <= m; ++k) {
    const double y = shift_guess - window + 2.0 * window * k / m;
    const double val = J(y);
    if (val < best) {
      best = val;
      best_y = y;
    }
  }
  const double step = 2.0 * window / m;
  double a = best_y - step, b = best_y + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = J(x1), f2 = J(x2);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = J(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = J(x2);
    }
  }
  double y = 0.5 * (a + b);
  Fit fit = distance_at(s, f, ref, i0, y);
  if (best < fit.d) {
    y = best_y;
    fit = distance_at(s, f, ref, i0, y);
  }
  return {fit.d, y, fit.phi};
}

EvolutionReport stability_experiment(const Params& p, double delta, double T, const Grid& g, double dt,
                                     double record_every, const EvolveOptions& opt) {
  if (classify_exact(p) != Region::D2 || !(p.kappa < 0.0)) fail(ErrorKind::Region, "stability runs need (c, kappa) in D2 with kappa < 0");
  if (!(p.c > c_star(p.kappa))) fail(ErrorKind::Param, "stability runs need c > c_star(kappa)");
  const WaveProfile wave = soliton_profile(p, g);
  const WaveProfile reference = soliton_profile(p, Grid{g.half_width, 0.25 * g.spacing});
  FieldState s = from_profile(wave, g);
  if (delta != 0.0) s = add_bump(s, delta);
  EvolutionReport rep;
  double guess = 0.0;
  evolve_for(
      s, T, dt, record_every,
      [&](const FieldState& st) {
        const StateObservables ob = observables_of_state(st);
        const DistanceResult dr = modulated_distance(st, reference, guess, 1.0);
        guess = dr.shift;
        rep.times.push_back(st.t);
        rep.energy.push_back(ob.energy);
        rep.momentum.push_back(ob.momentum);
        rep.modulated_distance.push_back(dr.distance);
        rep.shift.push_back(dr.shift);
        rep.min_rho.push_back(*std::min_element(st.rho.begin(), st.rho.end()));
      },
      opt);
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    rep.energy_drift = std::max(rep.energy_drift, std::abs(rep.energy[k] - rep.energy[0]) / std::abs(rep.energy[0]));
    rep.momentum_drift =
        std::max(rep.momentum_drift, std::abs(rep.momentum[k] - rep.momentum[0]) / std::abs(rep.momentum[0]));
  }
  return rep;
}

}  // namespace qgp
