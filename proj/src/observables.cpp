#include "observables.hpp"

#include <algorithm>
#include <string>

#include "quadrature.hpp"
#include "regions.hpp"
#include "stencil.hpp"

namespace qgp {

namespace {

constexpr double kComplexStep = 1e-30;

TailModel tail_model(const WaveProfile& w) {
  if (w.kind == WaveKind::Trivial || w.kind == WaveKind::Compacton || w.region == Region::C) return TailModel::None;
  if (w.region == Region::BMinus || w.region == Region::BPlus) return TailModel::InverseQuartic;
  return TailModel::Exponential;
}

std::vector<double> cusps_of(const WaveProfile& w) {
  std::vector<double> b = w.singular_points;
  b.insert(b.end(), w.nondiff_points.begin(), w.nondiff_points.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double integrate_profile(const WaveProfile& w, const std::vector<double>& f, TailModel tail) {
  const std::vector<double> cusps = cusps_of(w);
  return integrate_grid({w.xs, f, cusps, tail});
}

void require_smooth(const WaveProfile& w) {
  if (!w.singular_points.empty() || !w.nondiff_points.empty()) {
    fail(ErrorKind::Param, "the polar form needs a profile without singular points");
  }
}

void require_nonvanishing(const WaveProfile& w) {
  for (double e : w.eta) {
    if (!(1.0 - e > kVanishingThreshold)) fail(ErrorKind::Vanishing, "momentum needs a nonvanishing field");
  }
}

bool sonic(Region r) { return r == Region::BMinus || r == Region::BPlus; }

Region soliton_region(const Params& p) {
  const Region r = classify_exact(p);
  if (r != Region::D1 && r != Region::D2 && r != Region::D3) {
    fail(ErrorKind::Region, std::string("no smooth soliton in region ") + region_name(r));
  }
  return r;
}

Region cuspon_region(const Params& p) {
  const Region r = classify_exact(p);
  if (r != Region::D1 && r != Region::D3 && !sonic(r)) {
    fail(ErrorKind::Region, std::string("no cuspon in region ") + region_name(r));
  }
  return r;
}

}  // namespace

double energy_quadrature(const WaveProfile& w, EnergyForm form) {
  const std::size_t n = w.xs.size();
  if (form == EnergyForm::TravelingWave) {
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = 0.5 * w.eta[i] * w.eta[i];
    return integrate_profile(w, f, tail_model(w));
  }
  require_smooth(w);
  require_nonvanishing(w);
  const double k = w.params.kappa;
  const std::vector<double> deta = slope_5pt(w.xs, w.eta);
  const std::vector<double> dtheta = slope_5pt(w.xs, w.theta);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = w.eta[i];
    f[i] = 0.125 * deta[i] * deta[i] * (1.0 - 2.0 * k + 2.0 * k * e) / (1.0 - e) +
           0.5 * (1.0 - e) * dtheta[i] * dtheta[i] + 0.25 * e * e;
  }
  return integrate_profile(w, f, tail_model(w));
}

double momentum_quadrature(const WaveProfile& w, EnergyForm form) {
  require_nonvanishing(w);
  const std::size_t n = w.xs.size();
  std::vector<double> f(n);
  if (form == EnergyForm::TravelingWave) {
    for (std::size_t i = 0; i < n; ++i) f[i] = 0.25 * w.params.c * w.eta[i] * w.eta[i] / (1.0 - w.eta[i]);
  } else {
    require_smooth(w);
    const std::vector<double> dtheta = slope_5pt(w.xs, w.theta);
    for (std::size_t i = 0; i < n; ++i) f[i] = 0.5 * w.eta[i] * dtheta[i];
  }
  return integrate_profile(w, f, tail_model(w));
}

double energy_closed(const Params& p) {
  soliton_region(p);
  return detail::soliton_energy(p.c, p.kappa);
}

double momentum_closed(const Params& p) {
  soliton_region(p);
  return detail::soliton_momentum(p.c, p.kappa);
}

double dp_dc_closed(const Params& p) {
  soliton_region(p);
  const double c2 = p.c * p.c, k = p.kappa;
  const double L = std::sqrt((2.0 - c2) / (1.0 - 2.0 * k));
  const double B = 3.0 * c2 * k - 4.0 * k - 1.0;
  return 0.25 * B * detail::scaled_atan(k, L) - 0.75 * (1.0 - 2.0 * k) * L;
}

double dE_dc_closed(const Params& p) {
  soliton_region(p);
  const std::complex<double> c(p.c, kComplexStep);
  return detail::soliton_energy(c, p.kappa).imag() / kComplexStep;
}

double cuspon_energy_closed(const Params& p) {
  const Region r = cuspon_region(p);
  return detail::cuspon_energy(p.c, p.kappa, sonic(r));
}

double cuspon_momentum_closed(const Params& p) {
  const Region r = cuspon_region(p);
  return detail::cuspon_momentum(p.c, p.kappa, sonic(r));
}

Observables soliton_observables(const Params& p, Method m, const Grid& g) {
  Observables o;
  o.method = m;
  o.dp_dc = dp_dc_closed(p);
  o.dE_dc = dE_dc_closed(p);
  if (m == Method::ClosedForm) {
    o.energy = energy_closed(p);
    o.momentum = momentum_closed(p);
    return o;
  }
  const WaveProfile w = soliton_profile(p, g);
  o.energy = energy_quadrature(w);
  o.momentum = momentum_quadrature(w);
  return o;
}

Observables cuspon_observables(const Params& p, Method m, const Grid& g) {
  const Region r = cuspon_region(p);
  Observables o;
  o.method = m;
  if (!sonic(r) && p.c > 0.0) {
    const std::complex<double> c(p.c, kComplexStep);
    o.dE_dc = detail::cuspon_energy(c, p.kappa, false).imag() / kComplexStep;
    o.dp_dc = detail::cuspon_momentum(c, p.kappa, false).imag() / kComplexStep;
  }
  if (m == Method::ClosedForm) {
    o.energy = cuspon_energy_closed(p);
    o.momentum = cuspon_momentum_closed(p);
    return o;
  }
  const WaveProfile w = cuspon_profile(p, g);
  o.energy = energy_quadrature(w);
  o.momentum = momentum_quadrature(w);
  return o;
}

}  // namespace qgp
