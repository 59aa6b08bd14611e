#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "common.hpp"
#include "profiles.hpp"

namespace qgp {

// Hydrodynamic state rho = |Psi|^2, v = d theta/dx on a uniform grid through 0.
struct FieldState {
  std::vector<double> xs;
  double h = 0.0;
  std::vector<double> rho;
  std::vector<double> v;
  double t = 0.0;
  double kappa = 0.0;
};

struct EvolveOptions {
  double cfl = 0.1;              // dt <= cfl h^2 / max K(rho)
  double sponge_fraction = 0.1;  // outer share of the domain that is damped
  double sponge_strength = 5.0;  // peak damping rate at the domain ends
};

inline constexpr double kRhoFloor = 1e-6;

FieldState constant_state(const Grid& g, double kappa);
FieldState from_profile(const WaveProfile& w, const Grid& g);

// Largest dt allowed by the stability bound for this state.
double max_stable_dt(const FieldState& s, const EvolveOptions& opt = {});

// One classical Runge-Kutta step. Throws Param if dt exceeds the bound, Blowup on vacuum or overflow.
FieldState step(const FieldState& s, double dt, const EvolveOptions& opt = {});

// Steps to time s.t + T with a uniform dt no larger than dt_max (the bound when dt_max <= 0).
// The observer is called at the start and whenever a multiple of record_every is crossed.
void evolve_for(FieldState& s, double T, double dt_max, double record_every,
                const std::function<void(const FieldState&)>& observer, const EvolveOptions& opt = {});

struct StateObservables {
  double energy = 0.0;
  double momentum = 0.0;
};
StateObservables observables_of_state(const FieldState& s);

// Psi reconstructed with theta(-L) = 0, and its derivative.
struct Field {
  std::vector<std::complex<double>> psi;
  std::vector<std::complex<double>> dpsi;
};
Field reconstruct(const FieldState& s);

// Adds delta * bump((x - center)/width) to Psi; the bump is smooth, compactly supported, with peak 1.
FieldState add_bump(const FieldState& s, double delta, double center = 0.0, double width = 1.0);

struct DistanceResult {
  double distance = 0.0;
  double shift = 0.0;  // y
  double phase = 0.0;  // phi, relative to the reference as sampled
};

// inf over (y, phi) of d(Psi, e^{i phi} u(. - y)) with y searched in [guess - window, guess + window].
// The reference must be a smooth nonvanishing traveling wave, ideally sampled finer than the state.
DistanceResult modulated_distance(const FieldState& s, const WaveProfile& reference, double shift_guess = 0.0,
                                  double window = 2.0);

struct EvolutionReport {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> momentum;
  std::vector<double> modulated_distance;
  std::vector<double> shift;
  std::vector<double> min_rho;
  double energy_drift = 0.0;    // max relative |E(t) - E(0)|
  double momentum_drift = 0.0;  // max relative |p(t) - p(0)|
};

// Evolves the dark soliton plus a bump of amplitude delta over [0, T].
EvolutionReport stability_experiment(const Params& p, double delta, double T, const Grid& g, double dt = 0.0,
                                     double record_every = 0.1, const EvolveOptions& opt = {});

}  // namespace qgp
