#include "quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "common.hpp"

namespace qgp {

namespace {

constexpr int kFitNodes = 8;   // nodes beyond the cusp used by the local expansion
constexpr int kFitOrder = 4;   // highest power of |x - s|^(2/3)

struct LocalFit {
  double integral = 0.0;  // exact integral of the fitted expansion from the cusp to the junction
  double slope = 0.0;     // df/dx of the expansion at the junction
};

// Least-squares fit of f in powers of tau = |x - s|^(2/3) on nodes [cusp, junction].
LocalFit fit_cusp(std::span<const double> xs, std::span<const double> fs, std::size_t cusp, std::size_t junction) {
  const double s = xs[cusp];
  const std::size_t lo = std::min(cusp, junction), hi = std::max(cusp, junction);
  const int n = int(hi - lo + 1);
  const int order = std::min(kFitOrder, n - 1);
  Eigen::MatrixXd V(n, order + 1);
  Eigen::VectorXd rhs(n);
  for (int r = 0; r < n; ++r) {
    const double tau = std::cbrt(std::pow(std::abs(xs[lo + r] - s), 2.0));
    double pw = 1.0;
    for (int k = 0; k <= order; ++k) {
      V(r, k) = pw;
      pw *= tau;
    }
    rhs(r) = fs[lo + r];
  }
  const Eigen::VectorXd a = V.colPivHouseholderQr().solve(rhs);
  const double d = std::abs(xs[junction] - s);
  const double dir = xs[junction] > s ? 1.0 : -1.0;
  LocalFit out;
  for (int k = 0; k <= order; ++k) {
    const double e = 2.0 * k / 3.0;
    out.integral += a(k) * std::pow(d, e + 1.0) / (e + 1.0);
    if (k > 0) out.slope += dir * a(k) * e * std::pow(d, e - 1.0);
  }
  return out;
}

double trapezoid(std::span<const double> xs, std::span<const double> fs, std::size_t i0, std::size_t i1) {
  double sum = 0.0;
  for (std::size_t i = i0; i < i1; ++i) sum += 0.5 * (xs[i + 1] - xs[i]) * (fs[i] + fs[i + 1]);
  return sum;
}

// Integral of one segment whose ends may be cusps.
double integrate_segment(std::span<const double> xs, std::span<const double> fs, std::size_t i0, std::size_t i1,
                         bool left_cusp, bool right_cusp) {
  const std::size_t len = i1 - i0;
  const std::size_t need = (left_cusp ? kFitNodes : 0) + (right_cusp ? kFitNodes : 0) + 2;
  if ((!left_cusp && !right_cusp) || len < need) return trapezoid(xs, fs, i0, i1);
  std::size_t a = i0, b = i1;
  double total = 0.0;
  if (left_cusp) {
    a = i0 + kFitNodes;
    const LocalFit fit = fit_cusp(xs, fs, i0, a);
    const double h = xs[a + 1] - xs[a];
    total += fit.integral + h * h / 12.0 * fit.slope;
  }
  if (right_cusp) {
    b = i1 - kFitNodes;
    const LocalFit fit = fit_cusp(xs, fs, i1, b);
    const double h = xs[b] - xs[b - 1];
    total += fit.integral - h * h / 12.0 * fit.slope;
  }
  return total + trapezoid(xs, fs, a, b);
}

// Tail beyond one grid end; inner is a node about one unit inside.
double tail_estimate(TailModel model, double x_end, double f_end, double x_in, double f_in) {
  const double dx = std::abs(x_end - x_in);
  if (model == TailModel::None || dx == 0.0) return 0.0;
  if (!(f_end != 0.0 && f_in != 0.0 && (f_end > 0.0) == (f_in > 0.0))) return 0.0;
  const double sgn = f_end > 0.0 ? 1.0 : -1.0;
  const double fe = std::abs(f_end), fi = std::abs(f_in);
  if (model == TailModel::Exponential) {
    const double rate = std::log(fi / fe) / dx;
    if (!(rate > 0.0) || !std::isfinite(rate)) return 0.0;
    return sgn * fe / rate;
  }
  const double ge = std::pow(fe, -0.25), gi = std::pow(fi, -0.25);
  const double slope = (ge - gi) / dx;
  if (!(slope > 0.0) || !std::isfinite(slope)) return 0.0;
  return sgn * fe * (ge / slope) / 3.0;
}

}  // namespace

double integrate_grid(const GridIntegrand& g) {
  const auto& xs = g.xs;
  const auto& fs = g.fs;
  if (xs.size() != fs.size()) fail(ErrorKind::Grid, "node and sample counts differ");
  if (xs.size() < 2) fail(ErrorKind::Grid, "grid needs at least two nodes");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) fail(ErrorKind::Grid, "grid nodes must be strictly increasing");
  }
  std::vector<std::size_t> breaks{0};
  std::vector<bool> is_cusp{false};
  for (double s : g.cusps) {
    auto it = std::lower_bound(xs.begin(), xs.end(), s - 1e-12);
    if (it == xs.end() || std::abs(*it - s) > 1e-12) fail(ErrorKind::Grid, "singular point is not a grid node");
    const std::size_t idx = std::size_t(it - xs.begin());
    if (idx == 0 || idx == xs.size() - 1) continue;
    breaks.push_back(idx);
    is_cusp.push_back(true);
  }
  breaks.push_back(xs.size() - 1);
  is_cusp.push_back(false);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    total += integrate_segment(xs, fs, breaks[k], breaks[k + 1], is_cusp[k], is_cusp[k + 1]);
  }
  if (g.tail != TailModel::None) {
    const std::size_t n = xs.size();
    auto inner_right = std::lower_bound(xs.begin(), xs.end(), xs[n - 1] - 1.0);
    auto inner_left = std::lower_bound(xs.begin(), xs.end(), xs[0] + 1.0);
    const std::size_t ir = std::min<std::size_t>(std::size_t(inner_right - xs.begin()), n - 2);
    const std::size_t il = std::max<std::size_t>(std::size_t(inner_left - xs.begin()), 1);
    total += tail_estimate(g.tail, xs[n - 1], fs[n - 1], xs[ir], fs[ir]);
    total += tail_estimate(g.tail, xs[0], fs[0], xs[il], fs[il]);
  }
  return total;
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b, double tol) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b, double tol) {
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, tol);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

}  // namespace qgp
