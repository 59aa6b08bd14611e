#pragma once

#include <complex>
#include <limits>

#include "closedforms.hpp"
#include "common.hpp"
#include "profiles.hpp"

namespace qgp {

enum class Method { ClosedForm, Quadrature };

// TravelingWave uses E = 1/2 int eta^2 and p = c/4 int eta^2/(1-eta); Polar uses the general
// hydrodynamic densities and needs a profile without singular points.
enum class EnergyForm { TravelingWave, Polar };

struct Observables {
  double energy = 0.0;
  double momentum = 0.0;
  double dE_dc = std::numeric_limits<double>::quiet_NaN();
  double dp_dc = std::numeric_limits<double>::quiet_NaN();
  Method method = Method::ClosedForm;
};

inline constexpr double kVanishingThreshold = 1e-6;

double energy_quadrature(const WaveProfile& w, EnergyForm form = EnergyForm::TravelingWave);
double momentum_quadrature(const WaveProfile& w, EnergyForm form = EnergyForm::TravelingWave);

// Smooth solitons in D1, D2, D3 (c = 0 allowed: black soliton energy, momentum limit pi/2).
double energy_closed(const Params& p);
double momentum_closed(const Params& p);
double dp_dc_closed(const Params& p);
// Complex-step derivative of energy_closed.
double dE_dc_closed(const Params& p);

// Cuspons in D1, D3, B-, B+.
double cuspon_energy_closed(const Params& p);
double cuspon_momentum_closed(const Params& p);

Observables soliton_observables(const Params& p, Method m, const Grid& g = {40.0, 1e-3});
Observables cuspon_observables(const Params& p, Method m, const Grid& g = {40.0, 1e-3});

namespace detail {

template <class T>
T soliton_momentum(T c, double k) {
  using std::atan;
  using std::sqrt;
  const T c2 = c * c;
  const T L = sqrt((2.0 - c2) / (1.0 - 2.0 * k));
  const T C = c2 * k - 4.0 * k - 1.0;
  return 0.25 * c * (C * scaled_atan(k, L) - (1.0 - 2.0 * k) * L) + (0.5 * kPi - atan(c / L));
}

// -atan2(1, sqrt(k) L)/sqrt(k) for k > 0, L >= 0.
template <class T>
T cuspon_angle(T L, double k) {
  using std::atan;
  return (atan(std::sqrt(k) * L) - 0.5 * kPi) / std::sqrt(k);
}

// L vanishes identically on the sonic line.
template <class T>
T cuspon_L(T c, double k, bool sonic) {
  using std::sqrt;
  if (sonic) return T(0.0);
  return sqrt((2.0 - c * c) / (1.0 - 2.0 * k));
}

template <class T>
T cuspon_energy(T c, double k, bool sonic) {
  const T c2 = c * c;
  const T L = cuspon_L(c, k, sonic);
  const T A = 3.0 * c2 * c2 * k * k - 8.0 * c2 * k * k - 2.0 * c2 * k + 8.0 * k - 1.0;
  const T B = 3.0 * c2 * k - 4.0 * k - 1.0;
  return (A * cuspon_angle(L, k) - (1.0 - 2.0 * k) * L * B) / (16.0 * k);
}

template <class T>
T cuspon_momentum(T c, double k, bool sonic) {
  using std::atan;
  const T c2 = c * c;
  const T L = cuspon_L(c, k, sonic);
  const T C = c2 * k - 4.0 * k - 1.0;
  // atan2(c, L) for c > 0, L >= 0.
  const T ang = 0.5 * kPi - atan(L / c);
  return 0.25 * c * (C * cuspon_angle(L, k) - (1.0 - 2.0 * k) * L) - ang;
}

}  // namespace detail

}  // namespace qgp
