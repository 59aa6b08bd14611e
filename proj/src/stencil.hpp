#pragma once

#include <array>
#include <span>
#include <vector>

namespace qgp {

// Fornberg weights for derivatives 0..2 at z0 on five nodes.
std::array<std::array<double, 3>, 5> fd_weights(double z0, const std::array<double, 5>& z);

// First derivative of samples f on nodes xs with five-point stencils, shifted at the ends.
std::vector<double> slope_5pt(std::span<const double> xs, std::span<const double> f);

}  // namespace qgp
