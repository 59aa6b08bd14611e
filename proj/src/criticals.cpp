#include "criticals.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>

#include "closedforms.hpp"
#include "common.hpp"
#include "observables.hpp"

namespace qgp {

namespace {

constexpr double kSmallSpeed = 1e-8;     // stands in for c -> 0+
constexpr double kSonicGap = 1e-6;       // keeps brackets off c = sqrt(2), where dp/dc vanishes
constexpr std::uintmax_t kMaxRootIter = 200;

template <class F>
double bracketed_root(F f, double a, double b, const char* what) {
  const double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) fail(ErrorKind::Param, std::string("no sign change while solving for ") + what);
  std::uintmax_t iters = kMaxRootIter;
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52),
                                                   iters);
  return 0.5 * (r.first + r.second);
}

void require_negative(double kappa) {
  if (!(kappa < 0.0) || !std::isfinite(kappa)) fail(ErrorKind::Param, "critical values need kappa < 0");
}

// Momentum without the region check, so the sonic endpoint p(sqrt 2) = 0 is reachable.
double momentum(double c, double kappa) { return c >= kSqrt2 ? 0.0 : detail::soliton_momentum(c, kappa); }

}  // namespace

double kappa0() {
  static std::once_flag once;
  static double value = 0.0;
  std::call_once(once, [] { value = bracketed_root([](double k) { return w_of_kappa(k); }, -100.0, -1e-3, "kappa0"); });
  return value;
}

double black_energy(double kappa) {
  require_negative(kappa);
  return energy_closed({kSmallSpeed, kappa});
}

double c_tilde(double kappa) {
  require_negative(kappa);
  if (kappa >= kappa0()) fail(ErrorKind::Param, "dp/dc has no sign change for kappa >= kappa0");
  return bracketed_root([kappa](double c) { return dp_dc_closed({c, kappa}); }, kSmallSpeed, kSqrt2 - kSonicGap,
                        "c_tilde");
}

double c_star(double kappa) {
  require_negative(kappa);
  if (kappa >= kappa0()) return 0.0;
  const double target = black_energy(kappa);
  return bracketed_root([&](double c) { return energy_closed({c, kappa}) - target; }, c_tilde(kappa),
                        kSqrt2 - kSonicGap, "c_star");
}

double q_star(double kappa) {
  const double cs = c_star(kappa);
  return cs == 0.0 ? 0.5 * kPi : momentum_closed({cs, kappa});
}

CriticalValues critical_values(double kappa) {
  require_negative(kappa);
  CriticalValues out;
  out.kappa = kappa;
  out.kappa0 = kappa0();
  if (kappa < out.kappa0) out.c_tilde = c_tilde(kappa);
  out.c_star = c_star(kappa);
  out.q_star = out.c_star == 0.0 ? 0.5 * kPi : momentum_closed({out.c_star, kappa});
  out.E_black = black_energy(kappa);
  return out;
}

namespace {

double speed_of_momentum(double kappa, double q, double cs, double qs) {
  if (!(q >= 0.0 && q <= qs)) fail(ErrorKind::Range, "momentum outside [0, q_star]");
  if (q == 0.0) return kSqrt2;
  if (q == qs) return cs;
  return bracketed_root([&](double c) { return momentum(c, kappa) - q; }, cs, kSqrt2, "speed of momentum");
}

}  // namespace

double speed_of_momentum(double kappa, double q) {
  const double cs = c_star(kappa);
  const double qs = cs == 0.0 ? 0.5 * kPi : momentum_closed({cs, kappa});
  return speed_of_momentum(kappa, q, cs, qs);
}

std::vector<MinCurvePoint> min_curve(double kappa, std::span<const double> qs) {
  const CriticalValues cv = critical_values(kappa);
  std::vector<MinCurvePoint> out;
  out.reserve(qs.size());
  for (double q : qs) {
    if (!(q >= 0.0)) fail(ErrorKind::Range, "momenta must be nonnegative");
    MinCurvePoint pt;
    pt.q = q;
    if (q == 0.0) {
      pt.E_min = 0.0;
      pt.c = kSqrt2;
    } else if (q <= cv.q_star) {
      const double c = speed_of_momentum(kappa, q, cv.c_star, cv.q_star);
      pt.c = c;
      pt.E_min = c == 0.0 ? cv.E_black : (c >= kSqrt2 ? 0.0 : energy_closed({c, kappa}));
    } else {
      pt.E_min = cv.E_black;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace qgp
