#include "regions.hpp"

namespace qgp {

const char* region_name(Region r) {
  switch (r) {
    case Region::D1: return "D1";
    case Region::D2: return "D2";
    case Region::D3: return "D3";
    case Region::BMinus: return "BMinus";
    case Region::BPlus: return "BPlus";
    case Region::C: return "C";
    case Region::NoWave: return "NoWave";
  }
  return "NoWave";
}

const char* wave_kind_name(WaveKind k) {
  switch (k) {
    case WaveKind::DarkSoliton: return "DarkSoliton";
    case WaveKind::AntidarkSoliton: return "AntidarkSoliton";
    case WaveKind::BlackSoliton: return "BlackSoliton";
    case WaveKind::DarkCuspon: return "DarkCuspon";
    case WaveKind::AntidarkCuspon: return "AntidarkCuspon";
    case WaveKind::Compacton: return "Compacton";
    case WaveKind::CompositeWave: return "CompositeWave";
    case WaveKind::Trivial: return "Trivial";
  }
  return "Trivial";
}

Region classify_exact(const Params& p) {
  const double c = p.c, k = p.kappa;
  if (!std::isfinite(c) || !std::isfinite(k) || c < 0.0) return Region::NoWave;
  if (k == 0.5) return Region::C;
  if (c == kSqrt2) {
    if (k > 0.0 && k < 0.5) return Region::BMinus;
    if (k > 0.5) return Region::BPlus;
    return Region::NoWave;
  }
  if (c < kSqrt2) {
    if (k > 0.0 && k < 0.5) return Region::D1;
    if (k <= 0.0) return Region::D2;
    return Region::NoWave;
  }
  if (k > 0.5) return Region::D3;
  return Region::NoWave;
}

Classification classify(const Params& p, bool exact) {
  Classification out;
  out.params = p;
  if (out.params.c < 0.0) {
    out.params.c = -out.params.c;
    out.conjugated = true;
  }
  if (!exact) {
    if (std::abs(out.params.c - kSqrt2) <= kBoundaryTol) out.params.c = kSqrt2;
    if (std::abs(out.params.kappa - 0.5) <= kBoundaryTol) out.params.kappa = 0.5;
  }
  out.region = classify_exact(out.params);
  return out;
}

std::vector<WaveKind> wave_inventory(Region r, double c) {
  const WaveKind dark = (c == 0.0) ? WaveKind::BlackSoliton : WaveKind::DarkSoliton;
  switch (r) {
    case Region::D1: return {dark, WaveKind::AntidarkCuspon, WaveKind::CompositeWave};
    case Region::D2: return {dark};
    case Region::D3: return {WaveKind::AntidarkSoliton, WaveKind::DarkCuspon, WaveKind::CompositeWave};
    case Region::BMinus: return {WaveKind::AntidarkCuspon, WaveKind::CompositeWave};
    case Region::BPlus: return {WaveKind::DarkCuspon, WaveKind::CompositeWave};
    case Region::C: return {WaveKind::Compacton, WaveKind::CompositeWave};
    case Region::NoWave: return {WaveKind::Trivial};
  }
  return {WaveKind::Trivial};
}

}  // namespace qgp
