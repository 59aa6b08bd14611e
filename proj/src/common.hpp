#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qgp {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kPi = std::numbers::pi;

// Error categories; each maps to one C API status code.
enum class ErrorKind {
  Domain,
  Region,
  Param,
  Inadmissible,
  Quadrature,
  Vanishing,
  Blowup,
  Range,
  Grid,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

enum class Region { D1, D2, D3, BMinus, BPlus, C, NoWave };

enum class WaveKind {
  DarkSoliton,
  AntidarkSoliton,
  BlackSoliton,
  DarkCuspon,
  AntidarkCuspon,
  Compacton,
  CompositeWave,
  Trivial,
};

struct Params {
  double c = 0.0;
  double kappa = 0.0;
};

const char* region_name(Region r);
const char* wave_kind_name(WaveKind k);

// Value taken by the intensity at the maximum of a smooth soliton.
inline double soliton_peak(double c) { return 1.0 - 0.5 * c * c; }

// Intensity at which the dispersion degenerates (|u|^2 = 1/(2 kappa)).
inline double singular_level(double kappa) { return 1.0 - 0.5 / kappa; }

}  // namespace qgp
