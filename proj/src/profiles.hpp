#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "closedforms.hpp"
#include "common.hpp"

namespace qgp {

struct Grid {
  double half_width = 20.0;  // L
  double spacing = 1e-2;     // h
};

// Quadratic P(y) = p2 y^2 + p1 y + p0 governing a composite bubble.
struct CompositeSpec {
  Params params;
  double eta0 = 0.0;
  double K0 = 0.0;
  double b0 = 0.0;
  double p2 = -2.0, p1 = 0.0, p0 = 0.0;
  bool admissible = false;

  double P(double y) const { return (p2 * y + p1) * y + p0; }
  double dP(double y) const { return 2.0 * p2 * y + p1; }
};

// A bubble of a composite wave centred at `center`, spanning center +- spec.b0.
struct BubblePiece {
  double center = 0.0;
  CompositeSpec spec;
};

struct WaveProfile {
  Params params;
  Region region = Region::NoWave;
  WaveKind kind = WaveKind::Trivial;
  std::vector<double> xs;
  std::vector<double> eta;
  std::vector<double> theta;
  std::vector<double> u_re;
  std::vector<double> u_im;
  std::vector<double> singular_points;
  std::vector<double> nondiff_points;
  std::vector<double> extrema;
  std::vector<BubblePiece> bubbles;  // composite waves only, left to right
  int compacton_j = 0;               // explicit compactons only
};

// Invert an implicit family at distance x >= 0. Warm start is a previous solution or NaN.
double invert_family(const ImplicitFamily& fam, double x, double warm = std::numeric_limits<double>::quiet_NaN());

// Inverse of the bright implicit function.
double bright_profile(double omega, double kappa, double x);

double soliton_eta(const Params& p, double x);
double soliton_phase(const Params& p, double x);
// Phase limit theta(+inf); the full jump across the line is twice this.
double soliton_phase_limit(const Params& p);
double black_soliton(double kappa, double x);
double cuspon_eta(const Params& p, double x);
double cuspon_phase(const Params& p, double x);
std::complex<double> compacton(double c, int j, double x);
double compacton_phase(double c, int j, double x);

// Polynomial, K0, admissibility and (when admissible) b0; never throws Inadmissible.
CompositeSpec composite_polynomial(const Params& p, double eta0, std::optional<double> K0 = std::nullopt);
// Same, but throws Inadmissible when P is not negative on the bubble interval.
CompositeSpec composite_spec(const Params& p, double eta0, std::optional<double> K0 = std::nullopt);

// Uniform grid on [-L, L] through 0, with extra nodes inserted.
std::vector<double> make_grid(const Grid& g, const std::vector<double>& extra = {});

WaveProfile soliton_profile(const Params& p, const Grid& g);
WaveProfile black_profile(double kappa, const Grid& g);
WaveProfile cuspon_profile(const Params& p, const Grid& g);
WaveProfile compacton_profile(double c, int j, const Grid& g);
WaveProfile composite_profile(const CompositeSpec& spec, const Grid& g);
WaveProfile trivial_profile(const Grid& g);

// Places single-bubble composites side by side: each piece is shifted so consecutive
// bubbles meet at their gluing points. Pieces must share params.
WaveProfile concatenate_bubbles(const std::vector<CompositeSpec>& pieces, const Grid& g);

struct ResidualOptions {
  double collar = 5.0;  // excluded distance around singular points, in units of h
};

double residual_first_integral(const WaveProfile& w, const ResidualOptions& opt = {});
double residual_second_order(const WaveProfile& w, const ResidualOptions& opt = {});

// Fourth-order central first derivative of the intensity at every node; NaN where the
// stencil is unavailable or crosses a singular point.
std::vector<double> intensity_slope(const WaveProfile& w);

}  // namespace qgp
