#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "closedforms.hpp"
#include "criticals.hpp"
#include "evolve.hpp"
#include "observables.hpp"
#include "profiles.hpp"
#include "qgpwave/qgpwave.h"
#include "regions.hpp"

#ifndef QGPWAVE_VERSION
#define QGPWAVE_VERSION "0.0.0"
#endif

struct qgp_profile {
  qgp::WaveProfile w;
};

struct qgp_state {
  qgp::FieldState s;
};

struct qgp_report {
  qgp::EvolutionReport r;
};

namespace {

using namespace qgp;

static_assert(int(Region::D1) == QGP_REGION_D1 && int(Region::NoWave) == QGP_REGION_NONE);
static_assert(int(WaveKind::DarkSoliton) == QGP_WAVE_DARK_SOLITON && int(WaveKind::Trivial) == QGP_WAVE_TRIVIAL);
static_assert(int(Family::F) == QGP_FAMILY_F && int(Family::gTilde) == QGP_FAMILY_GTILDE &&
              int(Family::h) == QGP_FAMILY_h);

thread_local std::string g_last_error;

qgp_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return QGP_ERR_DOMAIN;
    case ErrorKind::Region: return QGP_ERR_REGION;
    case ErrorKind::Param: return QGP_ERR_PARAM;
    case ErrorKind::Inadmissible: return QGP_ERR_INADMISSIBLE;
    case ErrorKind::Quadrature: return QGP_ERR_QUADRATURE;
    case ErrorKind::Vanishing: return QGP_ERR_VANISHING;
    case ErrorKind::Blowup: return QGP_ERR_BLOWUP;
    case ErrorKind::Range: return QGP_ERR_RANGE;
    case ErrorKind::Grid: return QGP_ERR_GRID;
  }
  return QGP_ERR_INTERNAL;
}

template <class F>
qgp_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return QGP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QGP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QGP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return QGP_ERR_INTERNAL;
  }
}

template <class... P>
bool any_null(const P*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

qgp_status null_arg() {
  g_last_error = "required pointer argument is NULL";
  return QGP_ERR_NULL;
}

Params to_params(qgp_params p) { return {p.c, p.kappa}; }
qgp_params from_params(const Params& p) { return {p.c, p.kappa}; }
Grid to_grid(qgp_grid g) {
  if (!(g.half_width > 0.0) || !(g.spacing > 0.0) || g.spacing > g.half_width) {
    fail(ErrorKind::Grid, "grid needs 0 < spacing <= half_width");
  }
  return {g.half_width, g.spacing};
}

EvolveOptions to_options(const qgp_evolve_options* o) {
  EvolveOptions e;
  if (o != nullptr) {
    e.cfl = o->cfl;
    e.sponge_fraction = o->sponge_fraction;
    e.sponge_strength = o->sponge_strength;
  }
  if (!(e.cfl > 0.0) || !(e.sponge_fraction >= 0.0 && e.sponge_fraction < 1.0) || !(e.sponge_strength >= 0.0)) {
    fail(ErrorKind::Param, "invalid evolution options");
  }
  return e;
}

ImplicitFamily family(qgp_family f, qgp_params p) {
  if (int(f) < 0 || int(f) > int(QGP_FAMILY_h)) fail(ErrorKind::Param, "unknown family");
  return ImplicitFamily::make(Family(f), to_params(p));
}

qgp_composite from_spec(const CompositeSpec& s) {
  return {from_params(s.params), s.eta0, s.K0, s.admissible ? s.b0 : std::numeric_limits<double>::quiet_NaN(),
          s.p2, s.p1, s.p0, s.admissible ? 1 : 0};
}

std::optional<double> optional_K0(int has_K0, double K0) {
  return has_K0 ? std::optional<double>(K0) : std::nullopt;
}

qgp_status make_profile(qgp_profile** out, auto&& build) {
  if (out == nullptr) return null_arg();
  *out = nullptr;
  return guard([&] { *out = new qgp_profile{build()}; });
}

qgp_status scalar(double* out, auto&& f) {
  if (out == nullptr) return null_arg();
  return guard([&] { *out = f(); });
}

qgp_observables from_observables(const Observables& o) {
  return {o.energy, o.momentum, o.dE_dc, o.dp_dc,
          o.method == Method::ClosedForm ? QGP_METHOD_CLOSED_FORM : QGP_METHOD_QUADRATURE};
}

Grid observables_grid(qgp_grid g) { return g.spacing == 0.0 ? Grid{40.0, 1e-3} : to_grid(g); }

Method to_method(qgp_method m) { return m == QGP_METHOD_QUADRATURE ? Method::Quadrature : Method::ClosedForm; }

EnergyForm to_form(qgp_energy_form f) { return f == QGP_FORM_POLAR ? EnergyForm::Polar : EnergyForm::TravelingWave; }

size_t points(const std::vector<double>& v, const double** pts) {
  if (pts != nullptr) *pts = v.empty() ? nullptr : v.data();
  return v.size();
}

}  // namespace

extern "C" {

const char* qgp_version(void) { return QGPWAVE_VERSION; }

const char* qgp_last_error(void) { return g_last_error.c_str(); }

const char* qgp_status_name(qgp_status s) {
  switch (s) {
    case QGP_OK: return "ok";
    case QGP_ERR_DOMAIN: return "domain";
    case QGP_ERR_REGION: return "region";
    case QGP_ERR_PARAM: return "param";
    case QGP_ERR_INADMISSIBLE: return "inadmissible";
    case QGP_ERR_QUADRATURE: return "quadrature";
    case QGP_ERR_VANISHING: return "vanishing";
    case QGP_ERR_BLOWUP: return "blowup";
    case QGP_ERR_RANGE: return "range";
    case QGP_ERR_GRID: return "grid";
    case QGP_ERR_NULL: return "null";
    case QGP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* qgp_region_name(qgp_region r) {
  if (int(r) < 0 || int(r) > int(QGP_REGION_NONE)) return "unknown";
  return region_name(Region(r));
}

const char* qgp_wave_kind_name(qgp_wave_kind k) {
  if (int(k) < 0 || int(k) > int(QGP_WAVE_TRIVIAL)) return "unknown";
  return wave_kind_name(WaveKind(k));
}

const char* qgp_family_name(qgp_family f) {
  if (int(f) < 0 || int(f) > int(QGP_FAMILY_h)) return "unknown";
  return family_name(Family(f));
}

qgp_status qgp_classify(qgp_params p, int exact, qgp_classification* out) {
  if (out == nullptr) return null_arg();
  return guard([&] {
    const Classification c = classify(to_params(p), exact != 0);
    *out = {qgp_region(c.region), from_params(c.params), c.conjugated ? 1 : 0};
  });
}

qgp_status qgp_wave_inventory(qgp_region r, double c, qgp_wave_kind* kinds, size_t cap, size_t* count) {
  if (count == nullptr || (kinds == nullptr && cap > 0)) return null_arg();
  return guard([&] {
    if (int(r) < 0 || int(r) > int(QGP_REGION_NONE)) fail(ErrorKind::Param, "unknown region");
    const std::vector<WaveKind> inv = wave_inventory(Region(r), c);
    *count = inv.size();
    for (size_t i = 0; i < std::min(cap, inv.size()); ++i) kinds[i] = qgp_wave_kind(inv[i]);
  });
}

qgp_status qgp_family_domain(qgp_family f, qgp_params p, double* lo, double* hi, double* anchor) {
  if (any_null(lo, hi, anchor)) return null_arg();
  return guard([&] {
    const ImplicitFamily fam = family(f, p);
    *lo = fam.domain_lo;
    *hi = fam.domain_hi;
    *anchor = fam.anchor;
  });
}

qgp_status qgp_family_eval(qgp_family f, qgp_params p, double eta, double* x) {
  return scalar(x, [&] { return eval_implicit(family(f, p), eta); });
}

qgp_status qgp_family_deriv(qgp_family f, qgp_params p, double eta, double* dx) {
  return scalar(dx, [&] { return eval_implicit_deriv(family(f, p), eta); });
}

qgp_status qgp_family_invert(qgp_family f, qgp_params p, double x, double* eta) {
  return scalar(eta, [&] { return invert_family(family(f, p), x); });
}

qgp_status qgp_energy_antideriv(qgp_region r, qgp_params p, double y, double* out) {
  return scalar(out, [&] { return energy_antideriv(Region(r), to_params(p), y); });
}

qgp_status qgp_momentum_antideriv(qgp_region r, qgp_params p, double y, double* out) {
  return scalar(out, [&] { return momentum_antideriv(Region(r), to_params(p), y); });
}

qgp_status qgp_w_of_kappa(double kappa, double* out) {
  return scalar(out, [&] { return w_of_kappa(kappa); });
}

qgp_status qgp_bright_implicit(double omega, double kappa, double y, double* x) {
  return scalar(x, [&] { return bright_implicit(omega, kappa, y); });
}

qgp_status qgp_bright_profile(double omega, double kappa, double x, double* y) {
  return scalar(y, [&] { return bright_profile(omega, kappa, x); });
}

qgp_status qgp_soliton_eta(qgp_params p, double x, double* eta) {
  return scalar(eta, [&] { return soliton_eta(to_params(p), x); });
}

qgp_status qgp_soliton_phase(qgp_params p, double x, double* theta) {
  return scalar(theta, [&] { return soliton_phase(to_params(p), x); });
}

qgp_status qgp_black_soliton(double kappa, double x, double* u) {
  return scalar(u, [&] { return black_soliton(kappa, x); });
}

qgp_status qgp_cuspon_eta(qgp_params p, double x, double* eta) {
  return scalar(eta, [&] { return cuspon_eta(to_params(p), x); });
}

qgp_status qgp_cuspon_phase(qgp_params p, double x, double* theta) {
  return scalar(theta, [&] { return cuspon_phase(to_params(p), x); });
}

qgp_status qgp_compacton(double c, int j, double x, double* re, double* im) {
  if (any_null(re, im)) return null_arg();
  return guard([&] {
    const std::complex<double> u = compacton(c, j, x);
    *re = u.real();
    *im = u.imag();
  });
}

qgp_status qgp_composite_spec(qgp_params p, double eta0, int has_K0, double K0, qgp_composite* out) {
  if (out == nullptr) return null_arg();
  return guard([&] { *out = from_spec(composite_polynomial(to_params(p), eta0, optional_K0(has_K0, K0))); });
}

qgp_status qgp_profile_soliton(qgp_params p, qgp_grid g, qgp_profile** out) {
  return make_profile(out, [&] { return soliton_profile(to_params(p), to_grid(g)); });
}

qgp_status qgp_profile_black(double kappa, qgp_grid g, qgp_profile** out) {
  return make_profile(out, [&] { return black_profile(kappa, to_grid(g)); });
}

qgp_status qgp_profile_cuspon(qgp_params p, qgp_grid g, qgp_profile** out) {
  return make_profile(out, [&] { return cuspon_profile(to_params(p), to_grid(g)); });
}

qgp_status qgp_profile_compacton(double c, int j, qgp_grid g, qgp_profile** out) {
  return make_profile(out, [&] { return compacton_profile(c, j, to_grid(g)); });
}

qgp_status qgp_profile_composite(qgp_params p, double eta0, int has_K0, double K0, qgp_grid g, qgp_profile** out) {
  return make_profile(out, [&] {
    return composite_profile(composite_spec(to_params(p), eta0, optional_K0(has_K0, K0)), to_grid(g));
  });
}

qgp_status qgp_profile_composite_chain(qgp_params p, const double* eta0s, size_t n, qgp_grid g, qgp_profile** out) {
  if (eta0s == nullptr && n > 0) return null_arg();
  return make_profile(out, [&] {
    if (n == 0) fail(ErrorKind::Param, "a composite chain needs at least one bubble");
    std::vector<CompositeSpec> pieces;
    for (size_t i = 0; i < n; ++i) pieces.push_back(composite_spec(to_params(p), eta0s[i]));
    return concatenate_bubbles(pieces, to_grid(g));
  });
}

qgp_status qgp_profile_trivial(qgp_grid g, qgp_profile** out) {
  return make_profile(out, [&] { return trivial_profile(to_grid(g)); });
}

void qgp_profile_free(qgp_profile* w) { delete w; }

size_t qgp_profile_size(const qgp_profile* w) { return w ? w->w.xs.size() : 0; }
const double* qgp_profile_x(const qgp_profile* w) { return w ? w->w.xs.data() : nullptr; }
const double* qgp_profile_eta(const qgp_profile* w) { return w ? w->w.eta.data() : nullptr; }
const double* qgp_profile_theta(const qgp_profile* w) { return w ? w->w.theta.data() : nullptr; }
const double* qgp_profile_u_re(const qgp_profile* w) { return w ? w->w.u_re.data() : nullptr; }
const double* qgp_profile_u_im(const qgp_profile* w) { return w ? w->w.u_im.data() : nullptr; }

qgp_status qgp_profile_info(const qgp_profile* w, qgp_params* p, qgp_region* r, qgp_wave_kind* k) {
  if (w == nullptr) return null_arg();
  if (p) *p = from_params(w->w.params);
  if (r) *r = qgp_region(w->w.region);
  if (k) *k = qgp_wave_kind(w->w.kind);
  g_last_error.clear();
  return QGP_OK;
}

size_t qgp_profile_singular_points(const qgp_profile* w, const double** pts) {
  return w ? points(w->w.singular_points, pts) : 0;
}
size_t qgp_profile_nondiff_points(const qgp_profile* w, const double** pts) {
  return w ? points(w->w.nondiff_points, pts) : 0;
}
size_t qgp_profile_extrema(const qgp_profile* w, const double** pts) { return w ? points(w->w.extrema, pts) : 0; }

qgp_status qgp_profile_residuals(const qgp_profile* w, double collar, double* first_integral, double* second_order) {
  if (w == nullptr) return null_arg();
  return guard([&] {
    ResidualOptions opt;
    if (collar > 0.0) opt.collar = collar;
    if (first_integral) *first_integral = residual_first_integral(w->w, opt);
    if (second_order) *second_order = residual_second_order(w->w, opt);
  });
}

qgp_status qgp_energy_closed(qgp_params p, double* out) {
  return scalar(out, [&] { return energy_closed(to_params(p)); });
}
qgp_status qgp_momentum_closed(qgp_params p, double* out) {
  return scalar(out, [&] { return momentum_closed(to_params(p)); });
}
qgp_status qgp_dE_dc_closed(qgp_params p, double* out) {
  return scalar(out, [&] { return dE_dc_closed(to_params(p)); });
}
qgp_status qgp_dp_dc_closed(qgp_params p, double* out) {
  return scalar(out, [&] { return dp_dc_closed(to_params(p)); });
}
qgp_status qgp_cuspon_energy_closed(qgp_params p, double* out) {
  return scalar(out, [&] { return cuspon_energy_closed(to_params(p)); });
}
qgp_status qgp_cuspon_momentum_closed(qgp_params p, double* out) {
  return scalar(out, [&] { return cuspon_momentum_closed(to_params(p)); });
}

qgp_status qgp_soliton_observables(qgp_params p, qgp_method m, qgp_grid g, qgp_observables* out) {
  if (out == nullptr) return null_arg();
  return guard(
      [&] { *out = from_observables(soliton_observables(to_params(p), to_method(m), observables_grid(g))); });
}

qgp_status qgp_cuspon_observables(qgp_params p, qgp_method m, qgp_grid g, qgp_observables* out) {
  if (out == nullptr) return null_arg();
  return guard(
      [&] { *out = from_observables(cuspon_observables(to_params(p), to_method(m), observables_grid(g))); });
}

qgp_status qgp_profile_energy(const qgp_profile* w, qgp_energy_form form, double* out) {
  if (w == nullptr) return null_arg();
  return scalar(out, [&] { return energy_quadrature(w->w, to_form(form)); });
}

qgp_status qgp_profile_momentum(const qgp_profile* w, qgp_energy_form form, double* out) {
  if (w == nullptr) return null_arg();
  return scalar(out, [&] { return momentum_quadrature(w->w, to_form(form)); });
}

qgp_status qgp_kappa0(double* out) {
  return scalar(out, [] { return kappa0(); });
}
qgp_status qgp_black_energy(double kappa, double* out) {
  return scalar(out, [&] { return black_energy(kappa); });
}
qgp_status qgp_c_tilde(double kappa, double* out) {
  return scalar(out, [&] { return c_tilde(kappa); });
}
qgp_status qgp_c_star(double kappa, double* out) {
  return scalar(out, [&] { return c_star(kappa); });
}
qgp_status qgp_q_star(double kappa, double* out) {
  return scalar(out, [&] { return q_star(kappa); });
}

qgp_status qgp_critical_values_of(double kappa, qgp_critical_values* out) {
  if (out == nullptr) return null_arg();
  return guard([&] {
    const CriticalValues v = critical_values(kappa);
    *out = {v.kappa,
            v.kappa0,
            v.c_tilde ? 1 : 0,
            v.c_tilde.value_or(std::numeric_limits<double>::quiet_NaN()),
            v.c_star,
            v.q_star,
            v.E_black};
  });
}

qgp_status qgp_speed_of_momentum(double kappa, double q, double* c) {
  return scalar(c, [&] { return speed_of_momentum(kappa, q); });
}

qgp_status qgp_min_curve(double kappa, const double* qs, size_t n, double* E_out, double* c_out) {
  if (n > 0 && any_null(qs, E_out)) return null_arg();
  return guard([&] {
    const std::vector<MinCurvePoint> pts = min_curve(kappa, std::span<const double>(qs, n));
    for (size_t i = 0; i < n; ++i) {
      E_out[i] = pts[i].E_min;
      if (c_out) c_out[i] = pts[i].c.value_or(std::numeric_limits<double>::quiet_NaN());
    }
  });
}

qgp_evolve_options qgp_evolve_options_default(void) {
  const EvolveOptions e;
  return {e.cfl, e.sponge_fraction, e.sponge_strength};
}

qgp_status qgp_state_from_profile(const qgp_profile* w, qgp_grid g, qgp_state** out) {
  if (any_null(w, out)) return null_arg();
  *out = nullptr;
  return guard([&] { *out = new qgp_state{from_profile(w->w, to_grid(g))}; });
}

qgp_status qgp_state_constant(qgp_grid g, double kappa, qgp_state** out) {
  if (out == nullptr) return null_arg();
  *out = nullptr;
  return guard([&] {
    if (!(kappa <= 0.0)) fail(ErrorKind::Param, "evolution is limited to kappa <= 0");
    *out = new qgp_state{constant_state(to_grid(g), kappa)};
  });
}

qgp_status qgp_state_clone(const qgp_state* s, qgp_state** out) {
  if (any_null(s, out)) return null_arg();
  *out = nullptr;
  return guard([&] { *out = new qgp_state{s->s}; });
}

void qgp_state_free(qgp_state* s) { delete s; }
size_t qgp_state_size(const qgp_state* s) { return s ? s->s.xs.size() : 0; }
const double* qgp_state_x(const qgp_state* s) { return s ? s->s.xs.data() : nullptr; }
const double* qgp_state_rho(const qgp_state* s) { return s ? s->s.rho.data() : nullptr; }
const double* qgp_state_v(const qgp_state* s) { return s ? s->s.v.data() : nullptr; }
double qgp_state_time(const qgp_state* s) { return s ? s->s.t : std::numeric_limits<double>::quiet_NaN(); }

qgp_status qgp_state_set(qgp_state* s, const double* rho, const double* v) {
  if (any_null(s, rho, v)) return null_arg();
  return guard([&] {
    const size_t n = s->s.xs.size();
    for (size_t i = 0; i < n; ++i) {
      if (!(rho[i] > kRhoFloor) || !std::isfinite(v[i])) fail(ErrorKind::Vanishing, "state fields must have rho > 0");
    }
    std::copy(rho, rho + n, s->s.rho.begin());
    std::copy(v, v + n, s->s.v.begin());
  });
}

qgp_status qgp_state_max_dt(const qgp_state* s, const qgp_evolve_options* opt, double* dt) {
  if (s == nullptr) return null_arg();
  return scalar(dt, [&] { return max_stable_dt(s->s, to_options(opt)); });
}

qgp_status qgp_state_step(qgp_state* s, double dt, const qgp_evolve_options* opt) {
  if (s == nullptr) return null_arg();
  return guard([&] { s->s = step(s->s, dt, to_options(opt)); });
}

qgp_status qgp_state_evolve(qgp_state* s, double T, double dt_max, double record_every,
                            const qgp_evolve_options* opt, qgp_observer observer, void* user) {
  if (s == nullptr) return null_arg();
  struct Stop {};
  return guard([&] {
    std::function<void(const FieldState&)> watch;
    if (observer != nullptr) {
      watch = [&](const FieldState& st) {
        const qgp_state view{st};
        if (observer(&view, user) != 0) throw Stop{};
      };
    }
    FieldState work = s->s;
    try {
      evolve_for(work, T, dt_max, record_every, watch, to_options(opt));
    } catch (const Stop&) {
    } catch (...) {
      s->s = std::move(work);
      throw;
    }
    s->s = std::move(work);
  });
}

qgp_status qgp_state_observables(const qgp_state* s, double* energy, double* momentum) {
  if (any_null(s, energy, momentum)) return null_arg();
  return guard([&] {
    const StateObservables o = observables_of_state(s->s);
    *energy = o.energy;
    *momentum = o.momentum;
  });
}

qgp_status qgp_state_add_bump(qgp_state* s, double delta, double center, double width) {
  if (s == nullptr) return null_arg();
  return guard([&] { s->s = add_bump(s->s, delta, center, width); });
}

qgp_status qgp_modulated_distance(const qgp_state* s, const qgp_profile* reference, double shift_guess,
                                  double window, qgp_distance* out) {
  if (any_null(s, reference, out)) return null_arg();
  return guard([&] {
    if (!(window > 0.0)) fail(ErrorKind::Param, "search window must be positive");
    const DistanceResult d = modulated_distance(s->s, reference->w, shift_guess, window);
    *out = {d.distance, d.shift, d.phase};
  });
}

qgp_status qgp_stability_experiment(qgp_params p, double delta, double T, qgp_grid g, double dt, double record_every,
                                    const qgp_evolve_options* opt, qgp_report** out) {
  if (out == nullptr) return null_arg();
  *out = nullptr;
  return guard([&] {
    *out = new qgp_report{stability_experiment(to_params(p), delta, T, to_grid(g), dt, record_every, to_options(opt))};
  });
}

void qgp_report_free(qgp_report* r) { delete r; }
size_t qgp_report_size(const qgp_report* r) { return r ? r->r.times.size() : 0; }
const double* qgp_report_times(const qgp_report* r) { return r ? r->r.times.data() : nullptr; }
const double* qgp_report_energy(const qgp_report* r) { return r ? r->r.energy.data() : nullptr; }
const double* qgp_report_momentum(const qgp_report* r) { return r ? r->r.momentum.data() : nullptr; }
const double* qgp_report_distance(const qgp_report* r) { return r ? r->r.modulated_distance.data() : nullptr; }
const double* qgp_report_shift(const qgp_report* r) { return r ? r->r.shift.data() : nullptr; }
const double* qgp_report_min_rho(const qgp_report* r) { return r ? r->r.min_rho.data() : nullptr; }

qgp_status qgp_report_drifts(const qgp_report* r, double* energy_drift, double* momentum_drift) {
  if (any_null(r, energy_drift, momentum_drift)) return null_arg();
  *energy_drift = r->r.energy_drift;
  *momentum_drift = r->r.momentum_drift;
  g_last_error.clear();
  return QGP_OK;
}

}  // extern "C"
