#include "stencil.hpp"

#include <algorithm>
#include <stdexcept>

namespace qgp {

std::array<std::array<double, 3>, 5> fd_weights(double z0, const std::array<double, 5>& z) {
  std::array<std::array<double, 3>, 5> C{};
  double c1 = 1.0, c4 = z[0] - z0;
  C[0][0] = 1.0;
  for (int i = 1; i < 5; ++i) {
    const int mn = std::min(i, 2);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = z[i] - z0;
    for (int j = 0; j < i; ++j) {
      const double c3 = z[i] - z[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) C[i][k] = c1 * (k * C[i - 1][k - 1] - c5 * C[i - 1][k]) / c2;
        C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) C[j][k] = (c4 * C[j][k] - k * C[j][k - 1]) / c3;
      C[j][0] = c4 * C[j][0] / c3;
    }
    c1 = c2;
  }
  return C;
}

std::vector<double> slope_5pt(std::span<const double> xs, std::span<const double> f) {
  const std::size_t n = xs.size();
  if (n < 5 || f.size() != n) throw std::invalid_argument("slope_5pt needs at least five matching samples");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::clamp<std::size_t>(i < 2 ? 0 : i - 2, 0, n - 5);
    std::array<double, 5> z{};
    for (int k = 0; k < 5; ++k) z[k] = xs[start + k];
    const auto C = fd_weights(xs[i], z);
    double d = 0.0;
    for (int k = 0; k < 5; ++k) d += C[k][1] * f[start + k];
    out[i] = d;
  }
  return out;
}

}  // namespace qgp
