#include "profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "quadrature.hpp"
#include "regions.hpp"
#include "stencil.hpp"

namespace qgp {

namespace {

constexpr int kMaxIter = 200;
constexpr double kUnderflowS = 740.0;  // exp(-s) underflows beyond this
constexpr double kPanel = 0.05;        // longest Gauss-Legendre panel in the bubble angle
constexpr double kCuspWindow = 100.0;  // cusp-adapted differences within this many h of a singular point

// Solves phi(anchor e^{-s}) = x for s >= 0, phi increasing in s. Returns +inf when the
// solution underflows. Safeguarded Newton with a bisection fallback.
template <class Phi, class DPhi>
double solve_log(const Phi& phi, const DPhi& dphi, double anchor, double x, double warm_s) {
  if (!(x > 0.0)) return 0.0;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  double s = (std::isfinite(warm_s) && warm_s > 0.0) ? warm_s : 1.0;
  for (int it = 0; it < kMaxIter; ++it) {
    if (std::isinf(hi) && s > kUnderflowS) return std::numeric_limits<double>::infinity();
    const double y = anchor * std::exp(-s);
    if (y == 0.0) {
      hi = s;
      s = 0.5 * (lo + hi);
      continue;
    }
    const double r = phi(y) - x;
    if (r == 0.0) return s;
    if (r > 0.0) hi = s;
    else lo = s;
    double next = std::numeric_limits<double>::quiet_NaN();
    if (y != anchor) {
      const double d = -y * dphi(y);
      if (std::isfinite(d) && d > 0.0) next = s - r / d;
    }
    if (!(next > lo && next < hi)) next = std::isinf(hi) ? std::max(2.0 * s, s + 1.0) : 0.5 * (lo + hi);
    const double scale = std::max(1.0, s);
    if (std::abs(next - s) <= 4e-16 * scale || hi - lo <= 4e-16 * scale) return next;
    s = next;
  }
  return s;
}

double solve_family(const ImplicitFamily& fam, double x, double warm_s) {
  return solve_log([&](double y) { return eval_implicit(fam, y); },
                   [&](double y) { return eval_implicit_deriv(fam, y); }, fam.anchor, x, warm_s);
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

bool on_sonic_line(Region r) { return r == Region::BMinus || r == Region::BPlus; }

// Gauss-Legendre over [a, b] split into panels no longer than kPanel.
template <class F>
double panels(const F& f, double a, double b) {
  if (a == b) return 0.0;
  const int n = std::max(1, int(std::ceil(std::abs(b - a) / kPanel)));
  const double w = (b - a) / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += gauss_legendre(f, a + k * w, a + (k + 1) * w);
  return sum;
}

// Phase rate along a soliton or cuspon branch in the variable t, with y = anchor - sgn(anchor) t^2.
// Both forms are smooth in t on the whole branch.
struct PhaseRate {
  Params p;
  double anchor = 0.0;
  bool cuspon = false;
  bool sonic = false;

  double operator()(double t) const {
    const double sa = sgn(anchor);
    const double y = anchor - sa * t * t;
    const double k = p.kappa;
    if (!cuspon) {
      const double N = 1.0 - 2.0 * k + 2.0 * k * y;
      return p.c * sa * std::sqrt(std::abs(N)) / (kSqrt2 * (1.0 - y));
    }
    const double M = sonic ? -2.0 * y : 2.0 - p.c * p.c - 2.0 * y;
    return p.c * sa * t * t * std::sqrt(2.0 * k / std::abs(M)) / (1.0 - y);
  }
};

// Walks a soliton or cuspon branch outward from its anchor, keeping the phase accumulated
// from distance zero. Distances passed to advance() must not decrease.
class Branch {
 public:
  Branch(const ImplicitFamily& fam, bool cuspon)
      : fam_(fam), rate_{fam.params, fam.anchor, cuspon, on_sonic_line(ImplicitFamily::region_of(fam.fam))} {}

  void advance(double d) {
    s_ = d > 0.0 ? solve_family(fam_, d, s_) : 0.0;
    const double t = t_of_s(s_);
    if (fam_.params.c != 0.0 && t != t_) theta_ += panels(rate_, t_, t);
    t_ = t;
  }

  double eta() const { return fam_.anchor * std::exp(-s_); }
  double one_minus_eta() const { return fam_.anchor == 1.0 ? -std::expm1(-s_) : 1.0 - eta(); }
  double theta() const { return theta_; }
  double s() const { return s_; }

 private:
  double t_of_s(double s) const { return std::sqrt(std::abs(fam_.anchor) * -std::expm1(-s)); }

  ImplicitFamily fam_;
  PhaseRate rate_;
  double s_ = 0.0;
  double t_ = 0.0;
  double theta_ = 0.0;
};

// Central bubble parametrised by s = eta0 + delta sin^2(phi), phi in [0, pi/2].
class Bubble {
 public:
  explicit Bubble(const CompositeSpec& spec) : spec_(spec) {
    e_ = singular_level(spec.params.kappa);
    delta_ = e_ - spec.eta0;
    const double tol = 1e-12 * std::max({1.0, std::abs(spec.p0), std::abs(spec.p1), e_ * e_});
    pe_ = spec.P(e_);
    if (std::abs(pe_) <= tol) pe_ = 0.0;
    dpe_ = spec.dP(e_);
  }

  // dx/dphi.
  double G(double phi) const {
    const double cs = std::cos(phi);
    if (cs <= 0.0) return 0.0;
    const double w = cs * cs;
    const double R = dpe_ * delta_ + 2.0 * delta_ * delta_ * w;  // -P(s) = -P(e) + w R
    const double k2 = 2.0 * spec_.params.kappa;
    if (pe_ == 0.0) return 2.0 * std::abs(delta_) * cs * std::sqrt(k2 / R);
    return 2.0 * std::abs(delta_) * w * std::sqrt(k2 / (-pe_ + w * R));
  }

  double eta(double phi) const {
    const double sn = std::sin(phi);
    return spec_.eta0 + delta_ * sn * sn;
  }
  double one_minus_eta(double phi) const {
    const double sn = std::sin(phi);
    return (1.0 - spec_.eta0) - delta_ * sn * sn;
  }

  double theta_rate(double phi) const {
    const double s = eta(phi);
    return spec_.params.c * s / (2.0 * one_minus_eta(phi)) * G(phi);
  }

  double half_width() const {
    return integrate_smooth([this](double phi) { return G(phi); }, 0.0, 0.5 * kPi);
  }

  // Moves to |xi| = d, which must not decrease between calls.
  void advance(double d) {
    const double target = std::min(d, spec_.b0);
    double phi_new;
    if (d >= spec_.b0) {
      phi_new = 0.5 * kPi;
    } else {
      double lo = phi_, hi = 0.5 * kPi;
      double x = phi_;
      const double g0 = G(phi_);
      x = g0 > 0.0 ? phi_ + (target - X_) / g0 : 0.5 * (lo + hi);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
      for (int it = 0; it < kMaxIter; ++it) {
        const double val = X_ + panels([this](double f) { return G(f); }, phi_, x) - target;
        if (val > 0.0) hi = x;
        else lo = x;
        const double g = G(x);
        double nx = g > 0.0 ? x - val / g : 0.5 * (lo + hi);
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) <= 4e-16 || hi - lo <= 4e-16) {
          x = nx;
          break;
        }
        x = nx;
      }
      phi_new = x;
    }
    if (phi_new != phi_) {
      X_ += panels([this](double f) { return G(f); }, phi_, phi_new);
      if (spec_.params.c != 0.0) theta_ += panels([this](double f) { return theta_rate(f); }, phi_, phi_new);
    }
    phi_ = phi_new;
  }

  double phi() const { return phi_; }
  double theta() const { return theta_; }

 private:
  const CompositeSpec& spec_;
  double e_ = 0.0, delta_ = 0.0, pe_ = 0.0, dpe_ = 0.0;
  double phi_ = 0.0, X_ = 0.0, theta_ = 0.0;
};

Region require_region(const Params& p, std::initializer_list<Region> allowed, const char* what) {
  const Region r = classify_exact(p);
  for (Region a : allowed) {
    if (a == r) return r;
  }
  fail(ErrorKind::Region, std::string(what) + " not available in region " + region_name(r));
}

// Indices of nodes sorted by |x - origin|.
std::vector<std::size_t> order_by_distance(const std::vector<double>& xs, double origin,
                                           const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out = idx;
  std::stable_sort(out.begin(), out.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(xs[a] - origin) < std::abs(xs[b] - origin); });
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

void fill_field(WaveProfile& w, const std::vector<double>& one_minus) {
  const std::size_t n = w.xs.size();
  w.u_re.resize(n);
  w.u_im.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::sqrt(std::max(0.0, one_minus[i]));
    w.u_re[i] = a * std::cos(w.theta[i]);
    w.u_im[i] = a * std::sin(w.theta[i]);
  }
}

// Samples one branch (soliton or cuspon) along the given nodes at distance |x - origin| - offset.
void sample_branch(const ImplicitFamily& fam, bool cuspon, const std::vector<double>& xs, double origin,
                   double offset, const std::vector<std::size_t>& idx, double theta0, std::vector<double>& eta,
                   std::vector<double>& theta, std::vector<double>& one_minus) {
  Branch br(fam, cuspon);
  for (std::size_t i : order_by_distance(xs, origin, idx)) {
    const double d = std::max(0.0, std::abs(xs[i] - origin) - offset);
    br.advance(d);
    eta[i] = br.eta();
    one_minus[i] = br.one_minus_eta();
    theta[i] = sgn(xs[i] - origin) * (theta0 + br.theta());
  }
}

WaveKind cuspon_kind(Region r) {
  return (r == Region::D1 || r == Region::BMinus) ? WaveKind::AntidarkCuspon : WaveKind::DarkCuspon;
}

}  // namespace

double invert_family(const ImplicitFamily& fam, double x, double warm) {
  if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorKind::Domain, "inversion needs a finite distance x >= 0");
  double warm_s = std::numeric_limits<double>::quiet_NaN();
  if (std::isfinite(warm) && warm / fam.anchor > 0.0 && warm / fam.anchor <= 1.0) warm_s = -std::log(warm / fam.anchor);
  return fam.anchor * std::exp(-solve_family(fam, x, warm_s));
}

double bright_profile(double omega, double kappa, double x) {
  const double top = std::sqrt(2.0 * omega);
  bright_implicit(omega, kappa, top);  // validates arguments
  const double s = solve_log([&](double y) { return bright_implicit(omega, kappa, y); },
                             [&](double y) { return bright_implicit_deriv(omega, kappa, y); }, top, std::abs(x),
                             std::numeric_limits<double>::quiet_NaN());
  return top * std::exp(-s);
}

double soliton_eta(const Params& p, double x) {
  const Region r = require_region(p, {Region::D1, Region::D2, Region::D3}, "smooth soliton");
  return invert_family(ImplicitFamily::make(soliton_family(r), p), std::abs(x));
}

double soliton_phase(const Params& p, double x) {
  const Region r = require_region(p, {Region::D1, Region::D2, Region::D3}, "smooth soliton");
  if (!(p.c > 0.0)) fail(ErrorKind::Param, "soliton phase needs c > 0");
  const ImplicitFamily fam = ImplicitFamily::make(soliton_family(r), p);
  const double s = solve_family(fam, std::abs(x), std::numeric_limits<double>::quiet_NaN());
  const double t = std::sqrt(std::abs(fam.anchor) * -std::expm1(-s));
  const PhaseRate rate{p, fam.anchor, false, false};
  return sgn(x) * integrate_smooth(rate, 0.0, t);
}

double soliton_phase_limit(const Params& p) {
  const Region r = require_region(p, {Region::D1, Region::D2, Region::D3}, "smooth soliton");
  if (!(p.c > 0.0)) fail(ErrorKind::Param, "soliton phase needs c > 0");
  const ImplicitFamily fam = ImplicitFamily::make(soliton_family(r), p);
  const PhaseRate rate{p, fam.anchor, false, false};
  return integrate_smooth(rate, 0.0, std::sqrt(std::abs(fam.anchor)));
}

double black_soliton(double kappa, double x) {
  const Params p{0.0, kappa};
  const Region r = require_region(p, {Region::D1, Region::D2}, "black soliton");
  const ImplicitFamily fam = ImplicitFamily::make(soliton_family(r), p);
  const double s = solve_family(fam, std::abs(x), std::numeric_limits<double>::quiet_NaN());
  return sgn(x) * std::sqrt(-std::expm1(-s));
}

double cuspon_eta(const Params& p, double x) {
  const Region r = require_region(p, {Region::D1, Region::D3, Region::BMinus, Region::BPlus}, "cuspon");
  return invert_family(ImplicitFamily::make(cuspon_family(r), p), std::abs(x));
}

double cuspon_phase(const Params& p, double x) {
  const Region r = require_region(p, {Region::D1, Region::D3, Region::BMinus, Region::BPlus}, "cuspon");
  if (p.c == 0.0) return 0.0;
  const ImplicitFamily fam = ImplicitFamily::make(cuspon_family(r), p);
  const double s = solve_family(fam, std::abs(x), std::numeric_limits<double>::quiet_NaN());
  const double t = std::sqrt(std::abs(fam.anchor) * -std::expm1(-s));
  const PhaseRate rate{p, fam.anchor, true, on_sonic_line(r)};
  return sgn(x) * integrate_smooth(rate, 0.0, t);
}

namespace {

void check_compacton_args(double c, int j) {
  if (j < 1 || j % 2 == 0) fail(ErrorKind::Param, "compacton index j must be an odd positive integer");
  if (!(c >= 0.0) || !std::isfinite(c)) fail(ErrorKind::Param, "compacton speed must be finite and >= 0");
  if (c == kSqrt2) fail(ErrorKind::Param, "no compacton at c = sqrt(2)");
}

double compacton_eta(double c, double x) {
  const double cs = std::cos(x / kSqrt2);
  return 0.5 * (2.0 - c * c) * cs * cs;
}

}  // namespace

double compacton_phase(double c, int j, double x) {
  check_compacton_args(c, j);
  const double half = j * kPi / kSqrt2;
  const double xc = std::clamp(x, -half, half);
  const double arg = xc / kSqrt2;
  if (c == 0.0) return std::sin(arg) >= 0.0 ? 0.0 : kPi;
  const double k = std::floor(arg / kPi);
  const double frac = arg - k * kPi;
  return 0.5 * kPi + k * kPi - 0.5 * c * xc - std::atan2(c * std::cos(frac), kSqrt2 * std::sin(frac));
}

std::complex<double> compacton(double c, int j, double x) {
  check_compacton_args(c, j);
  const double half = j * kPi / kSqrt2;
  const double xc = std::clamp(x, -half, half);
  if (c == 0.0) return {std::sin(xc / kSqrt2), 0.0};
  const double a = std::sqrt(1.0 - compacton_eta(c, xc));
  return std::polar(a, compacton_phase(c, j, xc));
}

CompositeSpec composite_polynomial(const Params& p, double eta0, std::optional<double> K0) {
  require_region(p, {Region::D1, Region::D3, Region::BMinus, Region::BPlus, Region::C}, "composite wave");
  if (!std::isfinite(eta0) || eta0 > 1.0) fail(ErrorKind::Param, "eta0 must be finite and <= 1");
  const double e = singular_level(p.kappa);
  if (eta0 == e) fail(ErrorKind::Param, "eta0 must differ from the singular level 1 - 1/(2 kappa)");
  CompositeSpec spec;
  spec.params = p;
  spec.eta0 = eta0;
  const double c2 = p.c * p.c;
  if (eta0 == 1.0) {
    if (p.c != 0.0) fail(ErrorKind::Param, "eta0 = 1 requires c = 0");
    if (!K0 || !(*K0 >= 0.0)) fail(ErrorKind::Param, "eta0 = 1 requires a supplied K0 >= 0");
    spec.K0 = *K0;
  } else {
    spec.K0 = c2 * eta0 * eta0 / (4.0 - 4.0 * eta0);
    if (K0 && std::abs(*K0 - spec.K0) > 1e-12 * std::max(1.0, spec.K0)) {
      fail(ErrorKind::Param, "K0 is determined by eta0 when eta0 < 1");
    }
  }
  spec.p2 = -2.0;
  spec.p1 = 2.0 - c2 - 2.0 * eta0;
  spec.p0 = (2.0 - c2) * eta0 - 4.0 * spec.K0;

  // P is concave: its maximum on [eta0, e) sits at an end or at the vertex.
  const double tol = 1e-12 * std::max({1.0, std::abs(spec.p0), std::abs(spec.p1), e * e});
  const double lo = std::min(eta0, e), hi = std::max(eta0, e);
  const double vertex = spec.p1 / 4.0;
  bool ok = spec.P(eta0) < 0.0 && spec.P(e) <= tol;
  if (vertex > lo && vertex < hi) ok = ok && spec.P(vertex) < 0.0;
  spec.admissible = ok;
  spec.b0 = std::numeric_limits<double>::quiet_NaN();
  if (ok) spec.b0 = Bubble(spec).half_width();
  return spec;
}

CompositeSpec composite_spec(const Params& p, double eta0, std::optional<double> K0) {
  CompositeSpec spec = composite_polynomial(p, eta0, K0);
  if (!spec.admissible) fail(ErrorKind::Inadmissible, "P(y) is not negative on the bubble interval");
  return spec;
}

std::vector<double> make_grid(const Grid& g, const std::vector<double>& extra) {
  if (!(g.spacing > 0.0) || !(g.half_width > 0.0) || !std::isfinite(g.half_width)) {
    fail(ErrorKind::Grid, "grid needs half_width > 0 and spacing > 0");
  }
  const long n = long(std::floor(g.half_width / g.spacing + 1e-9));
  if (n < 2 || n > 50'000'000) fail(ErrorKind::Grid, "grid node count out of range");
  std::vector<double> xs(std::size_t(2 * n + 1));
  for (long k = -n; k <= n; ++k) xs[std::size_t(k + n)] = double(k) * g.spacing;
  std::vector<bool> moved(xs.size(), false);
  std::vector<double> inserted;
  for (double s : extra) {
    if (!(std::abs(s) <= xs.back())) continue;
    const long k = std::lround(s / g.spacing) + n;
    const std::size_t idx = std::size_t(std::clamp<long>(k, 0, 2 * n));
    if (std::abs(xs[idx] - s) <= 1e-12 * std::max(1.0, std::abs(s))) {
      xs[idx] = s;
      moved[idx] = true;
    } else if (!moved[idx] && idx > 0 && idx + 1 < xs.size()) {
      xs[idx] = s;
      moved[idx] = true;
    } else {
      inserted.push_back(s);
    }
  }
  xs.insert(xs.end(), inserted.begin(), inserted.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

WaveProfile trivial_profile(const Grid& g) {
  WaveProfile w;
  w.kind = WaveKind::Trivial;
  w.xs = make_grid(g);
  const std::size_t n = w.xs.size();
  w.eta.assign(n, 0.0);
  w.theta.assign(n, 0.0);
  w.u_re.assign(n, 1.0);
  w.u_im.assign(n, 0.0);
  return w;
}

WaveProfile black_profile(double kappa, const Grid& g) {
  const Params p{0.0, kappa};
  const Region r = require_region(p, {Region::D1, Region::D2}, "black soliton");
  const ImplicitFamily fam = ImplicitFamily::make(soliton_family(r), p);
  WaveProfile w;
  w.params = p;
  w.region = r;
  w.kind = WaveKind::BlackSoliton;
  w.xs = make_grid(g);
  const std::size_t n = w.xs.size();
  w.eta.resize(n);
  w.theta.resize(n);
  w.u_re.resize(n);
  w.u_im.assign(n, 0.0);
  Branch br(fam, false);
  for (std::size_t i : order_by_distance(w.xs, 0.0, all_indices(n))) {
    br.advance(std::abs(w.xs[i]));
    w.eta[i] = br.eta();
    w.u_re[i] = sgn(w.xs[i]) * std::sqrt(br.one_minus_eta());
    w.theta[i] = w.xs[i] < 0.0 ? kPi : 0.0;
  }
  w.extrema = {0.0};
  return w;
}

WaveProfile soliton_profile(const Params& p, const Grid& g) {
  const Region r = require_region(p, {Region::D1, Region::D2, Region::D3}, "smooth soliton");
  if (p.c == 0.0) return black_profile(p.kappa, g);
  WaveProfile w;
  w.params = p;
  w.region = r;
  w.kind = r == Region::D3 ? WaveKind::AntidarkSoliton : WaveKind::DarkSoliton;
  w.xs = make_grid(g);
  const std::size_t n = w.xs.size();
  w.eta.resize(n);
  w.theta.resize(n);
  std::vector<double> one_minus(n);
  sample_branch(ImplicitFamily::make(soliton_family(r), p), false, w.xs, 0.0, 0.0, all_indices(n), 0.0, w.eta,
                w.theta, one_minus);
  fill_field(w, one_minus);
  w.extrema = {0.0};
  return w;
}

WaveProfile cuspon_profile(const Params& p, const Grid& g) {
  const Region r = require_region(p, {Region::D1, Region::D3, Region::BMinus, Region::BPlus}, "cuspon");
  WaveProfile w;
  w.params = p;
  w.region = r;
  w.kind = cuspon_kind(r);
  w.xs = make_grid(g, {0.0});
  const std::size_t n = w.xs.size();
  w.eta.resize(n);
  w.theta.resize(n);
  std::vector<double> one_minus(n);
  sample_branch(ImplicitFamily::make(cuspon_family(r), p), true, w.xs, 0.0, 0.0, all_indices(n), 0.0, w.eta,
                w.theta, one_minus);
  fill_field(w, one_minus);
  w.singular_points = {0.0};
  w.nondiff_points = {0.0};
  return w;
}

WaveProfile compacton_profile(double c, int j, const Grid& g) {
  check_compacton_args(c, j);
  const double half = j * kPi / kSqrt2;
  WaveProfile w;
  w.params = {c, 0.5};
  w.region = Region::C;
  w.kind = WaveKind::Compacton;
  w.compacton_j = j;
  // Zeros of the intensity on the closed support, and interior maxima.
  for (int m = -(j + 1) / 2; m <= (j - 1) / 2; ++m) w.singular_points.push_back(kSqrt2 * kPi * (m + 0.5));
  for (int k = -(j - 1) / 2; k <= (j - 1) / 2; ++k) {
    if (std::abs(k * kSqrt2 * kPi) < half) w.extrema.push_back(k * kSqrt2 * kPi);
  }
  w.xs = make_grid(g, w.singular_points);
  const std::size_t n = w.xs.size();
  w.eta.resize(n);
  w.theta.resize(n);
  w.u_re.resize(n);
  w.u_im.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xc = std::clamp(w.xs[i], -half, half);
    w.eta[i] = std::abs(w.xs[i]) >= half ? 0.0 : compacton_eta(c, xc);
    w.theta[i] = compacton_phase(c, j, xc);
    const std::complex<double> u = compacton(c, j, xc);
    w.u_re[i] = u.real();
    w.u_im[i] = u.imag();
  }
  return w;
}

namespace {

WaveProfile assemble_composite(const std::vector<CompositeSpec>& pieces, const Grid& g) {
  if (pieces.empty()) fail(ErrorKind::Param, "no bubbles to assemble");
  const Params p = pieces.front().params;
  for (const CompositeSpec& s : pieces) {
    if (s.params.c != p.c || s.params.kappa != p.kappa) fail(ErrorKind::Param, "bubbles must share (c, kappa)");
    if (!s.admissible || !(s.b0 > 0.0)) fail(ErrorKind::Inadmissible, "bubble is not admissible");
  }
  const Region r = classify_exact(p);
  double width = 0.0;
  for (const CompositeSpec& s : pieces) width += 2.0 * s.b0;
  const double left = -0.5 * width;

  WaveProfile w;
  w.params = p;
  w.region = r;
  w.kind = WaveKind::CompositeWave;
  std::vector<double> glue{left};
  double cursor = left;
  for (const CompositeSpec& s : pieces) {
    w.bubbles.push_back({cursor + s.b0, s});
    w.extrema.push_back(cursor + s.b0);
    cursor += 2.0 * s.b0;
    glue.push_back(cursor);
  }
  glue.back() = -left;
  w.singular_points = glue;
  w.nondiff_points = glue;
  w.xs = make_grid(g, glue);
  const std::size_t n = w.xs.size();
  w.eta.resize(n);
  w.theta.resize(n);
  std::vector<double> one_minus(n);

  // Bubble interiors. Each node belongs to the first bubble whose closed span contains it.
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < w.bubbles.size(); ++b) {
      if (std::abs(w.xs[i] - w.bubbles[b].center) <= w.bubbles[b].spec.b0 * (1.0 + 1e-15)) {
        owner[i] = int(b);
        break;
      }
    }
  }
  std::vector<double> jump(w.bubbles.size(), 0.0);
  for (std::size_t b = 0; b < w.bubbles.size(); ++b) {
    const BubblePiece& piece = w.bubbles[b];
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (owner[i] == int(b)) idx.push_back(i);
    }
    Bubble bub(piece.spec);
    const bool vanishing = piece.spec.eta0 == 1.0;
    for (std::size_t i : order_by_distance(w.xs, piece.center, idx)) {
      const double d = std::abs(w.xs[i] - piece.center);
      bub.advance(d);
      w.eta[i] = d >= piece.spec.b0 ? singular_level(p.kappa) : bub.eta(bub.phi());
      one_minus[i] = d >= piece.spec.b0 ? 0.5 / p.kappa : bub.one_minus_eta(bub.phi());
      const double local = vanishing ? 0.5 * kPi : bub.theta();
      w.theta[i] = sgn(w.xs[i] - piece.center) * local;
    }
    bub.advance(piece.spec.b0);
    jump[b] = vanishing ? 0.5 * kPi : bub.theta();
  }
  double total = 0.0;
  for (double jb : jump) total += jb;
  double offset = -total;
  for (std::size_t b = 0; b < w.bubbles.size(); ++b) {
    offset += jump[b];
    for (std::size_t i = 0; i < n; ++i) {
      if (owner[i] == int(b)) w.theta[i] += offset;
    }
    offset += jump[b];
  }

  // Tails beyond the outermost gluing points.
  std::vector<std::size_t> tail;
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] < 0) tail.push_back(i);
  }
  if (r == Region::C) {
    for (std::size_t i : tail) {
      w.eta[i] = 0.0;
      one_minus[i] = 1.0;
      w.theta[i] = sgn(w.xs[i]) * total;
    }
  } else {
    sample_branch(ImplicitFamily::make(cuspon_family(r), p), true, w.xs, 0.0, -left, tail, total, w.eta, w.theta,
                  one_minus);
  }
  if (p.c == 0.0) {
    for (double& th : w.theta) th -= total;
  }
  fill_field(w, one_minus);
  return w;
}

}  // namespace

WaveProfile composite_profile(const CompositeSpec& spec, const Grid& g) { return assemble_composite({spec}, g); }

WaveProfile concatenate_bubbles(const std::vector<CompositeSpec>& pieces, const Grid& g) {
  return assemble_composite(pieces, g);
}

namespace {

struct Slopes {
  double d1 = std::numeric_limits<double>::quiet_NaN();
  double d2 = std::numeric_limits<double>::quiet_NaN();
};

std::vector<double> breakpoints(const WaveProfile& w) {
  std::vector<double> b = w.singular_points;
  b.insert(b.end(), w.nondiff_points.begin(), w.nondiff_points.end());
  std::sort(b.begin(), b.end());
  return b;
}

// Nearest breakpoint to x, or NaN.
double nearest(const std::vector<double>& b, double x) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double s : b) {
    if (!(std::abs(s - x) >= std::abs(best - x))) best = s;
  }
  return best;
}

// First and second derivatives of eta at node i from the five-node stencil. Close to a
// breakpoint the stencil is taken in tau = |x - s|^(2/3), in which the intensity is smooth on
// each side of a cusp. NaN when the stencil is unavailable or straddles a breakpoint.
Slopes slopes_at(const WaveProfile& w, const std::vector<double>& brk, std::size_t i, bool adapt) {
  Slopes out;
  const auto& xs = w.xs;
  if (i < 2 || i + 2 >= xs.size()) return out;
  const double lo = xs[i - 2], hi = xs[i + 2];
  for (double s : brk) {
    if (s > lo && s < hi) return out;
  }
  std::array<double, 5> z{}, f{};
  for (int k = 0; k < 5; ++k) f[k] = w.eta[i - 2 + k];
  const double h = 0.25 * (hi - lo);
  const double s = nearest(brk, xs[i]);
  if (adapt && std::isfinite(s) && std::abs(xs[i] - s) < kCuspWindow * h && xs[i] != s) {
    const double sigma = sgn(xs[i] - s);
    for (int k = 0; k < 5; ++k) z[k] = std::cbrt(std::pow(xs[i - 2 + k] - s, 2.0));
    if (sigma < 0.0) {
      std::reverse(z.begin(), z.end());
      std::reverse(f.begin(), f.end());
    }
    const double r = std::abs(xs[i] - s);
    const auto C = fd_weights(std::cbrt(r * r), z);
    double e1 = 0.0, e2 = 0.0;
    for (int k = 0; k < 5; ++k) {
      e1 += C[k][1] * f[k];
      e2 += C[k][2] * f[k];
    }
    const double tp = (2.0 / 3.0) * sigma / std::cbrt(r);
    const double tpp = -(2.0 / 9.0) / (r * std::cbrt(r));
    out.d1 = e1 * tp;
    out.d2 = e2 * tp * tp + e1 * tpp;
    return out;
  }
  for (int k = 0; k < 5; ++k) z[k] = xs[i - 2 + k];
  const auto C = fd_weights(xs[i], z);
  out.d1 = out.d2 = 0.0;
  for (int k = 0; k < 5; ++k) {
    out.d1 += C[k][1] * f[k];
    out.d2 += C[k][2] * f[k];
  }
  return out;
}

const BubblePiece* bubble_at(const WaveProfile& w, double x) {
  for (const BubblePiece& b : w.bubbles) {
    if (std::abs(x - b.center) < b.spec.b0) return &b;
  }
  return nullptr;
}

template <class Residual>
double max_residual(const WaveProfile& w, const ResidualOptions& opt, const Residual& res) {
  const std::vector<double> brk = breakpoints(w);
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < w.xs.size(); ++i) {
    const double h = 0.25 * (w.xs[i + 2] - w.xs[i - 2]);
    bool skip = false;
    for (double s : brk) skip = skip || std::abs(w.xs[i] - s) < opt.collar * h * (1.0 - 1e-9);
    if (skip) continue;
    const Slopes d = slopes_at(w, brk, i, true);
    if (!std::isfinite(d.d1) || !std::isfinite(d.d2)) continue;
    worst = std::max(worst, std::abs(res(i, d)));
  }
  return worst;
}

}  // namespace

double residual_first_integral(const WaveProfile& w, const ResidualOptions& opt) {
  const double c2 = w.params.c * w.params.c, k = w.params.kappa;
  return max_residual(w, opt, [&](std::size_t i, const Slopes& d) {
    const double eta = w.eta[i];
    const double N = 1.0 - 2.0 * k + 2.0 * k * eta;
    double rhs = eta * eta * (2.0 - c2 - 2.0 * eta);
    if (const BubblePiece* b = bubble_at(w, w.xs[i])) rhs = (eta - b->spec.eta0) * b->spec.P(eta);
    return N * d.d1 * d.d1 - rhs;
  });
}

double residual_second_order(const WaveProfile& w, const ResidualOptions& opt) {
  const double c2 = w.params.c * w.params.c, k = w.params.kappa;
  return max_residual(w, opt, [&](std::size_t i, const Slopes& d) {
    const double eta = w.eta[i];
    const double N = 1.0 - 2.0 * k + 2.0 * k * eta;
    double rhs = (2.0 - c2) * eta - 3.0 * eta * eta;
    if (const BubblePiece* b = bubble_at(w, w.xs[i])) {
      rhs = 0.5 * (b->spec.P(eta) + (eta - b->spec.eta0) * b->spec.dP(eta));
    }
    return N * d.d2 + k * d.d1 * d.d1 - rhs;
  });
}

std::vector<double> intensity_slope(const WaveProfile& w) {
  const std::vector<double> brk = breakpoints(w);
  std::vector<double> out(w.xs.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < w.xs.size(); ++i) out[i] = slopes_at(w, brk, i, false).d1;
  return out;
}

}  // namespace qgp
