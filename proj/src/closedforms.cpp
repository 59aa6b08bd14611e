#include "closedforms.hpp"

#include <string>

#include "regions.hpp"

namespace qgp {

namespace {

// atanh(z) given z and 1 - z^2 separately, so arguments close to 1 keep their digits.
double atanh_split(double z, double one_minus_z2) { return std::log1p(z) - 0.5 * std::log(one_minus_z2); }

struct Coef {
  double a;   // 2 - c^2
  double b;   // 1 - 2 kappa
  double k;   // kappa
  double ck;  // 1 - c^2 kappa
};

Coef coef(const Params& p) { return {2.0 - p.c * p.c, 1.0 - 2.0 * p.kappa, p.kappa, 1.0 - p.c * p.c * p.kappa}; }

void require_domain(const ImplicitFamily& fam, double y) {
  if (!fam.contains(y)) {
    fail(ErrorKind::Domain, std::string("y=") + std::to_string(y) + " outside the domain of " + family_name(fam.fam));
  }
}

// 2 sqrt(b/a) atanh(z) with z^2 = b M/(a N): shared by F, G, H.
double smooth_log_term(const Coef& q, double y) {
  const double M = q.a - 2.0 * y, N = q.b + 2.0 * q.k * y;
  const double z2 = q.b * M / (q.a * N);
  const double one_minus = 2.0 * y * q.ck / (q.a * N);
  return 2.0 * std::sqrt(q.b / q.a) * atanh_split(std::sqrt(z2), one_minus);
}

// Same with the argument inverted: shared by f and h.
double cuspon_log_term(const Coef& q, double y) {
  const double M = q.a - 2.0 * y, N = q.b + 2.0 * q.k * y;
  const double z2 = q.a * N / (q.b * M);
  const double one_minus = -2.0 * y * q.ck / (q.b * M);
  return 2.0 * std::sqrt(q.b / q.a) * atanh_split(std::sqrt(z2), one_minus);
}

// 2 sqrt(k) (atan(sqrt(k M/N)) - pi/2), written to stay accurate as N -> 0.
double cuspon_angle_term(double k, double M, double N) {
  return -2.0 * std::sqrt(k) * std::atan2(std::sqrt(std::abs(N)), std::sqrt(k * std::abs(M)));
}

}  // namespace

const char* family_name(Family fam) {
  switch (fam) {
    case Family::F: return "F";
    case Family::G: return "G";
    case Family::H: return "H";
    case Family::f: return "f";
    case Family::g: return "g";
    case Family::gTilde: return "gTilde";
    case Family::h: return "h";
  }
  return "?";
}

Region ImplicitFamily::region_of(Family fam) {
  switch (fam) {
    case Family::F: return Region::D1;
    case Family::G: return Region::D2;
    case Family::H: return Region::D3;
    case Family::f: return Region::D1;
    case Family::g: return Region::BMinus;
    case Family::gTilde: return Region::BPlus;
    case Family::h: return Region::D3;
  }
  return Region::NoWave;
}

ImplicitFamily ImplicitFamily::make(Family fam, const Params& p) {
  if (classify_exact(p) != region_of(fam)) {
    fail(ErrorKind::Region, std::string("family ") + family_name(fam) + " requires region " +
                                region_name(region_of(fam)) + ", got " + region_name(classify_exact(p)));
  }
  ImplicitFamily out;
  out.fam = fam;
  out.params = p;
  switch (fam) {
    case Family::F:
    case Family::G:
      out.anchor = soliton_peak(p.c);
      out.domain_lo = 0.0;
      out.domain_hi = out.anchor;
      out.increasing = false;
      break;
    case Family::H:
      out.anchor = soliton_peak(p.c);
      out.domain_lo = out.anchor;
      out.domain_hi = 0.0;
      out.increasing = true;
      break;
    case Family::f:
    case Family::g:
      out.anchor = singular_level(p.kappa);
      out.domain_lo = out.anchor;
      out.domain_hi = 0.0;
      out.increasing = true;
      break;
    case Family::gTilde:
    case Family::h:
      out.anchor = singular_level(p.kappa);
      out.domain_lo = 0.0;
      out.domain_hi = out.anchor;
      out.increasing = false;
      break;
  }
  return out;
}

bool ImplicitFamily::contains(double y) const {
  if (!std::isfinite(y)) return false;
  // The endpoint at y = 0 is excluded; the anchor endpoint is included.
  if (domain_lo == 0.0) return y > 0.0 && y <= domain_hi;
  return y >= domain_lo && y < 0.0;
}

double eval_implicit(const ImplicitFamily& fam, double y) {
  require_domain(fam, y);
  if (y == fam.anchor) return 0.0;
  const Coef q = coef(fam.params);
  const double k = q.k;
  const double M = q.a - 2.0 * y, N = q.b + 2.0 * k * y;
  switch (fam.fam) {
    case Family::F:
    case Family::H:
      return 2.0 * std::sqrt(k) * std::atan(std::sqrt(k * M / N)) + smooth_log_term(q, y);
    case Family::G:
      return -2.0 * std::sqrt(-k) * std::atanh(std::sqrt(-k * M / N)) + smooth_log_term(q, y);
    case Family::f:
    case Family::h:
      return cuspon_angle_term(k, M, N) + cuspon_log_term(q, y);
    case Family::g:
    case Family::gTilde:
      return cuspon_angle_term(k, -2.0 * y, N) + kSqrt2 * std::sqrt(-N / y);
  }
  return 0.0;
}

double eval_implicit_deriv(const ImplicitFamily& fam, double y) {
  require_domain(fam, y);
  if (y == fam.anchor) fail(ErrorKind::Domain, "derivative diverges at the anchor endpoint");
  const Params& p = fam.params;
  const double M = 2.0 - p.c * p.c - 2.0 * y, N = 1.0 - 2.0 * p.kappa + 2.0 * p.kappa * y;
  return -std::sqrt(N / M) / y;
}

Family soliton_family(Region r) {
  switch (r) {
    case Region::D1: return Family::F;
    case Region::D2: return Family::G;
    case Region::D3: return Family::H;
    default: fail(ErrorKind::Region, std::string("no smooth soliton in region ") + region_name(r));
  }
}

Family cuspon_family(Region r) {
  switch (r) {
    case Region::D1: return Family::f;
    case Region::D3: return Family::h;
    case Region::BMinus: return Family::g;
    case Region::BPlus: return Family::gTilde;
    default: fail(ErrorKind::Region, std::string("no cuspon in region ") + region_name(r));
  }
}

namespace {

void require_antideriv_domain(Region r, const Params& p, double y) {
  if (classify_exact(p) != r) fail(ErrorKind::Region, "params do not lie in the requested region");
  const double peak = soliton_peak(p.c);
  const double lo = std::min(0.0, r == Region::D2 ? peak : std::min(peak, singular_level(p.kappa)));
  const double hi = std::max(0.0, r == Region::D2 ? peak : std::max(peak, singular_level(p.kappa)));
  if (!(y >= lo && y <= hi)) fail(ErrorKind::Domain, "y outside the integration interval");
  const double M = 2.0 - p.c * p.c - 2.0 * y, N = 1.0 - 2.0 * p.kappa + 2.0 * p.kappa * y;
  if (M * N < 0.0) fail(ErrorKind::Domain, "y outside the integration interval");
}

// scaled_atan(k, sqrt(M/N)) with the N -> 0 limit handled.
double scaled_atan_ratio(double k, double M, double N) {
  if (k > 0.0) return std::atan2(std::sqrt(k * std::abs(M)), std::sqrt(std::abs(N))) / std::sqrt(k);
  return detail::scaled_atan(k, std::sqrt(M / N));
}

// +1 in the sonic-or-subsonic branch, -1 in the supersonic branch.
double branch_sign(Region r) { return (r == Region::D3 || r == Region::BPlus) ? -1.0 : 1.0; }

}  // namespace

double energy_antideriv(Region r, const Params& p, double y) {
  require_antideriv_domain(r, p, y);
  const double c2 = p.c * p.c, k = p.kappa;
  const double M = 2.0 - c2 - 2.0 * y, N = 1.0 - 2.0 * k + 2.0 * k * y;
  if (k == 0.0) {
    const double u = M;
    return 0.5 * (2.0 - c2) * std::sqrt(u) - u * std::sqrt(u) / 6.0;
  }
  const double A = 3.0 * c2 * c2 * k * k - 8.0 * c2 * k * k - 2.0 * c2 * k + 8.0 * k - 1.0;
  const double S = std::sqrt(M * N);
  const double W = 3.0 * c2 * k - 4.0 * k * y - 4.0 * k - 1.0;
  return (A * scaled_atan_ratio(k, M, N) - branch_sign(r) * S * W) / (16.0 * k);
}

double momentum_antideriv(Region r, const Params& p, double y) {
  require_antideriv_domain(r, p, y);
  const double c = p.c, c2 = c * c, k = p.kappa;
  const double M = 2.0 - c2 - 2.0 * y, N = 1.0 - 2.0 * k + 2.0 * k * y;
  const double C = c2 * k - 4.0 * k - 1.0;
  const double S = std::sqrt(M * N);
  const double angle = std::atan2(std::sqrt(std::abs(M)), c * std::sqrt(std::abs(N)));
  return 0.25 * c * (C * scaled_atan_ratio(k, M, N) - branch_sign(r) * S) + angle;
}

double w_of_kappa(double kappa) {
  if (!(kappa < 0.0)) fail(ErrorKind::Domain, "w(kappa) requires kappa < 0");
  const double k = kappa;
  return (-4.0 * k - 1.0) / (4.0 * std::sqrt(-k)) * std::atanh(std::sqrt(-2.0 * k / (1.0 - 2.0 * k))) -
         1.5 * std::sqrt((1.0 - 2.0 * k) / 2.0);
}

double bright_implicit(double omega, double kappa, double y) {
  if (!(omega > 0.0) || !(kappa >= 0.0)) fail(ErrorKind::Domain, "bright profile needs omega > 0, kappa >= 0");
  const double top = std::sqrt(2.0 * omega);
  if (!(y > 0.0 && y <= top)) fail(ErrorKind::Domain, "bright profile argument outside (0, sqrt(2 omega)]");
  if (y == top) return 0.0;
  const double y2 = y * y;
  const double ratio = (2.0 * omega - y2) / (1.0 + 2.0 * kappa * y2);
  const double z = std::sqrt(ratio / (2.0 * omega));
  const double one_minus = y2 * (1.0 + 4.0 * omega * kappa) / (2.0 * omega * (1.0 + 2.0 * kappa * y2));
  return atanh_split(z, one_minus) / std::sqrt(omega) +
         2.0 * std::sqrt(kappa) * std::atan(std::sqrt(2.0 * kappa * ratio));
}

double bright_implicit_deriv(double omega, double kappa, double y) {
  if (!(y > 0.0 && y < std::sqrt(2.0 * omega))) fail(ErrorKind::Domain, "derivative needs 0 < y < sqrt(2 omega)");
  // From the bright first integral 2 y'^2 (1 + 2 kappa y^2) = y^2 (2 omega - y^2).
  const double y2 = y * y;
  return -std::sqrt(2.0 * (1.0 + 2.0 * kappa * y2) / (2.0 * omega - y2)) / y;
}

}  // namespace qgp
