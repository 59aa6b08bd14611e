#pragma once

#include <optional>
#include <span>
#include <vector>

namespace qgp {

struct CriticalValues {
  double kappa = 0.0;
  double kappa0 = 0.0;
  std::optional<double> c_tilde;  // only below kappa0
  double c_star = 0.0;
  double q_star = 0.0;
  double E_black = 0.0;
};

struct MinCurvePoint {
  double q = 0.0;
  double E_min = 0.0;
  std::optional<double> c;  // absent beyond q_star
};

// Root of w(kappa); computed once.
double kappa0();

// Soliton energy in the limit c -> 0+, equal to the black soliton energy.
double black_energy(double kappa);

double c_tilde(double kappa);
double c_star(double kappa);
double q_star(double kappa);
CriticalValues critical_values(double kappa);

// Speed c in [c_star, sqrt(2)] whose soliton carries momentum q.
double speed_of_momentum(double kappa, double q);

std::vector<MinCurvePoint> min_curve(double kappa, std::span<const double> qs);

}  // namespace qgp
