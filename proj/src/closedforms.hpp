#pragma once

#include <complex>

#include "common.hpp"

namespace qgp {

// Inversion functions whose inverse at |x| is the intensity profile.
//   F, G, H: smooth solitons in D1, D2, D3.
//   f, h:    cuspons in D1, D3.
//   g, gTilde: cuspons on the sonic line, kappa < 1/2 and kappa > 1/2.
enum class Family { F, G, H, f, g, gTilde, h };

const char* family_name(Family fam);

struct ImplicitFamily {
  Family fam = Family::F;
  Params params;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  double anchor = 0.0;  // endpoint where the function vanishes
  bool increasing = false;

  // Region the family belongs to.
  static Region region_of(Family fam);
  // Validates params against the family's region; throws Region error otherwise.
  static ImplicitFamily make(Family fam, const Params& p);

  bool contains(double y) const;
};

double eval_implicit(const ImplicitFamily& fam, double y);
double eval_implicit_deriv(const ImplicitFamily& fam, double y);

// Soliton family for a region in D1, D2, D3 and cuspon family for D1, D3, B-, B+.
Family soliton_family(Region r);
Family cuspon_family(Region r);

// Antiderivatives of -y sqrt(Q) and (c/2)(-y/(1-y)) sqrt(Q), with
// Q(y) = (1-2k+2ky)/(2-c^2-2y), in the region's branch.
double energy_antideriv(Region r, const Params& p, double y);
double momentum_antideriv(Region r, const Params& p, double y);

// Derivative of the soliton momentum with respect to c at c = 0, for kappa < 0.
double w_of_kappa(double kappa);

// Implicit function for bright solitons; inverse at |x| is the bright profile.
double bright_implicit(double omega, double kappa, double y);
double bright_implicit_deriv(double omega, double kappa, double y);

namespace detail {

// atan(sqrt(k) x)/sqrt(k) for k > 0, atanh(sqrt(-k) x)/sqrt(-k) for k < 0, x for k = 0.
template <class T>
T scaled_atan(double k, T x) {
  using std::atan;
  using std::atanh;
  using std::sqrt;
  if (k > 0.0) return atan(std::sqrt(k) * x) / std::sqrt(k);
  if (k < 0.0) return atanh(std::sqrt(-k) * x) / std::sqrt(-k);
  return x;
}

// (s(u) - 1)/u with s(u) = scaled_atan(u, 1); stable near u = 0.
template <class T>
T scaled_atan_excess(T u) {
  using std::abs;
  using std::atan;
  using std::atanh;
  using std::sqrt;
  if (abs(u) < 0.1) {
    T term = T(1.0), sum = T(0.0);
    for (int n = 1; n <= 20; ++n) {
      sum += term * (((n % 2) != 0) ? -1.0 : 1.0) / double(2 * n + 1);
      term *= u;
    }
    return sum;
  }
  T s;
  if (std::real(T(u)) > 0.0) {
    T r = sqrt(u);
    s = atan(r) / r;
  } else {
    T r = sqrt(-u);
    s = atanh(r) / r;
  }
  return (s - 1.0) / u;
}

// Smooth-soliton energy for any (c, kappa) in D1, D2, D3.
template <class T>
T soliton_energy(T c, double k) {
  using std::sqrt;
  const T c2 = c * c;
  const T L = sqrt((2.0 - c2) / (1.0 - 2.0 * k));
  const T A = 3.0 * c2 * c2 * k * k - 8.0 * c2 * k * k - 2.0 * c2 * k + 8.0 * k - 1.0;
  const T a1 = 8.0 - 2.0 * c2, a2 = 3.0 * c2 * c2 - 8.0 * c2, b1 = 3.0 * c2 - 4.0;
  // (A s(kL^2) - (1-2k) B)/k split into the series part and an exact polynomial.
  const T bracket = A * L * L * scaled_atan_excess(T(k) * L * L) + (a1 - b1 - 2.0) + k * (a2 + 2.0 * b1);
  return L * bracket / 16.0;
}

}  // namespace detail

}  // namespace qgp
