#pragma once

#include <vector>

#include "common.hpp"

namespace qgp {

inline constexpr double kBoundaryTol = 1e-12;

struct Classification {
  Region region = Region::NoWave;
  Params params;        // c after conjugation and boundary snapping
  bool conjugated = false;  // input had c < 0
};

// Exact set membership; c must already be >= 0.
Region classify_exact(const Params& p);

// User-facing classification: conjugates c < 0 and, unless exact, snaps c to sqrt(2)
// and kappa to 1/2 within kBoundaryTol.
Classification classify(const Params& p, bool exact = false);

// Wave kinds present in a region. Speed zero turns dark solitons into black ones.
std::vector<WaveKind> wave_inventory(Region r, double c = 1.0);

}  // namespace qgp
