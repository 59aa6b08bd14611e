#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qgp {

enum class TailModel {
  None,         // integrand already negligible at the grid ends
  Exponential,  // f ~ A exp(-lambda |x|), rate fitted from the last unit of samples
  InverseQuartic,  // f ~ A (|x| + x0)^-4, both constants fitted
};

struct GridIntegrand {
  std::span<const double> xs;      // strictly increasing nodes
  std::span<const double> fs;      // samples
  std::span<const double> cusps;   // nodes where f ~ f0 + a |x - s|^(2/3) + ...
  TailModel tail = TailModel::None;
};

// Integral over the grid plus tail estimates beyond both ends.
double integrate_grid(const GridIntegrand& g);

// Adaptive Gauss-Kronrod for smooth integrands on finite intervals.
double integrate_smooth(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

// Tanh-sinh for integrands with integrable endpoint singularities.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

// Fixed 20-point Gauss-Legendre on [a, b]; for short intervals of analytic integrands.
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

}  // namespace qgp
