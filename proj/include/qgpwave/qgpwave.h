#ifndef QGPWAVE_QGPWAVE_H
#define QGPWAVE_QGPWAVE_H

/*
 * Traveling waves of the one-dimensional defocusing quasilinear Gross-Pitaevskii equation
 *
 *   i Psi_t + Psi_xx + kappa Psi (|Psi|^2)_xx + Psi (1 - |Psi|^2) = 0.
 *
 * Every fallible call returns a qgp_status; on failure qgp_last_error() describes the
 * cause for the calling thread. Handles are opaque and released with the matching
 * *_free function. Array pointers returned by accessors stay valid until the owning
 * handle is modified or freed.
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(QGPWAVE_BUILDING)
#define QGP_API __declspec(dllexport)
#else
#define QGP_API __declspec(dllimport)
#endif
#else
#define QGP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define QGP_SCHEMA_VERSION 1

typedef enum qgp_status {
  QGP_OK = 0,
  QGP_ERR_DOMAIN = 1,       /* argument outside a function's domain */
  QGP_ERR_REGION = 2,       /* no wave of the requested kind for these parameters */
  QGP_ERR_PARAM = 3,        /* invalid parameter value */
  QGP_ERR_INADMISSIBLE = 4, /* composite bubble does not exist */
  QGP_ERR_QUADRATURE = 5,
  QGP_ERR_VANISHING = 6, /* field touches zero where the hydrodynamic form needs |Psi| > 0 */
  QGP_ERR_BLOWUP = 7,    /* evolution left the admissible state space */
  QGP_ERR_RANGE = 8,
  QGP_ERR_GRID = 9,
  QGP_ERR_NULL = 10, /* required pointer argument was NULL */
  QGP_ERR_INTERNAL = 11
} qgp_status;

typedef enum qgp_region {
  QGP_REGION_D1 = 0,     /* subsonic, 0 < kappa < 1/2 */
  QGP_REGION_D2 = 1,     /* subsonic, kappa <= 0 */
  QGP_REGION_D3 = 2,     /* supersonic, kappa > 1/2 */
  QGP_REGION_BMINUS = 3, /* sonic, 0 < kappa < 1/2 */
  QGP_REGION_BPLUS = 4,  /* sonic, kappa > 1/2 */
  QGP_REGION_C = 5,      /* kappa = 1/2 */
  QGP_REGION_NONE = 6
} qgp_region;

typedef enum qgp_wave_kind {
  QGP_WAVE_DARK_SOLITON = 0,
  QGP_WAVE_ANTIDARK_SOLITON = 1,
  QGP_WAVE_BLACK_SOLITON = 2,
  QGP_WAVE_DARK_CUSPON = 3,
  QGP_WAVE_ANTIDARK_CUSPON = 4,
  QGP_WAVE_COMPACTON = 5,
  QGP_WAVE_COMPOSITE = 6,
  QGP_WAVE_TRIVIAL = 7
} qgp_wave_kind;

/* Implicit profile families x = Phi(eta): smooth solitons (F, G, H) and cuspons (f, g, gt, h). */
typedef enum qgp_family {
  QGP_FAMILY_F = 0,
  QGP_FAMILY_G = 1,
  QGP_FAMILY_H = 2,
  QGP_FAMILY_f = 3,
  QGP_FAMILY_g = 4,
  QGP_FAMILY_GTILDE = 5,
  QGP_FAMILY_h = 6
} qgp_family;

typedef enum qgp_method { QGP_METHOD_CLOSED_FORM = 0, QGP_METHOD_QUADRATURE = 1 } qgp_method;

typedef enum qgp_energy_form { QGP_FORM_TRAVELING_WAVE = 0, QGP_FORM_POLAR = 1 } qgp_energy_form;

typedef struct qgp_params {
  double c;
  double kappa;
} qgp_params;

/* Uniform grid on [-half_width, half_width] through 0. */
typedef struct qgp_grid {
  double half_width;
  double spacing;
} qgp_grid;

typedef struct qgp_classification {
  qgp_region region;
  qgp_params params; /* after conjugating c < 0 and snapping to boundary lines */
  int conjugated;
} qgp_classification;

typedef struct qgp_composite {
  qgp_params params;
  double eta0; /* intensity deviation at the bubble centre */
  double K0;   /* first-integral constant */
  double b0;   /* bubble half-width; NaN when inadmissible */
  double p2, p1, p0;
  int admissible;
} qgp_composite;

typedef struct qgp_observables {
  double energy;
  double momentum;
  double dE_dc; /* NaN where undefined */
  double dp_dc;
  qgp_method method;
} qgp_observables;

typedef struct qgp_critical_values {
  double kappa;
  double kappa0;
  int has_c_tilde;
  double c_tilde; /* NaN unless has_c_tilde */
  double c_star;
  double q_star;
  double E_black;
} qgp_critical_values;

typedef struct qgp_evolve_options {
  double cfl;             /* dt <= cfl h^2 / max K(rho) */
  double sponge_fraction; /* outer share of the domain damped towards (1, 0) */
  double sponge_strength;
} qgp_evolve_options;

typedef struct qgp_distance {
  double distance;
  double shift;
  double phase;
} qgp_distance;

typedef struct qgp_profile qgp_profile;
typedef struct qgp_state qgp_state;
typedef struct qgp_report qgp_report;

/* Called during evolution; return nonzero to stop early. */
typedef int (*qgp_observer)(const qgp_state* state, void* user);

/* ---- library ---- */
QGP_API const char* qgp_version(void);
QGP_API const char* qgp_last_error(void);
QGP_API const char* qgp_status_name(qgp_status s);
QGP_API const char* qgp_region_name(qgp_region r);
QGP_API const char* qgp_wave_kind_name(qgp_wave_kind k);
QGP_API const char* qgp_family_name(qgp_family f);

/* ---- regions ---- */
QGP_API qgp_status qgp_classify(qgp_params p, int exact, qgp_classification* out);
/* Writes up to cap kinds; *count receives the full number. */
QGP_API qgp_status qgp_wave_inventory(qgp_region r, double c, qgp_wave_kind* kinds, size_t cap, size_t* count);

/* ---- closed forms ---- */
QGP_API qgp_status qgp_family_domain(qgp_family f, qgp_params p, double* lo, double* hi, double* anchor);
QGP_API qgp_status qgp_family_eval(qgp_family f, qgp_params p, double eta, double* x);
QGP_API qgp_status qgp_family_deriv(qgp_family f, qgp_params p, double eta, double* dx);
/* Inverse of the family at x >= 0. */
QGP_API qgp_status qgp_family_invert(qgp_family f, qgp_params p, double x, double* eta);
QGP_API qgp_status qgp_energy_antideriv(qgp_region r, qgp_params p, double y, double* out);
QGP_API qgp_status qgp_momentum_antideriv(qgp_region r, qgp_params p, double y, double* out);
QGP_API qgp_status qgp_w_of_kappa(double kappa, double* out);
QGP_API qgp_status qgp_bright_implicit(double omega, double kappa, double y, double* x);
QGP_API qgp_status qgp_bright_profile(double omega, double kappa, double x, double* y);

/* ---- pointwise profiles ---- */
QGP_API qgp_status qgp_soliton_eta(qgp_params p, double x, double* eta);
QGP_API qgp_status qgp_soliton_phase(qgp_params p, double x, double* theta);
QGP_API qgp_status qgp_black_soliton(double kappa, double x, double* u);
QGP_API qgp_status qgp_cuspon_eta(qgp_params p, double x, double* eta);
QGP_API qgp_status qgp_cuspon_phase(qgp_params p, double x, double* theta);
QGP_API qgp_status qgp_compacton(double c, int j, double x, double* re, double* im);
QGP_API qgp_status qgp_composite_spec(qgp_params p, double eta0, int has_K0, double K0, qgp_composite* out);

/* ---- sampled profiles ---- */
QGP_API qgp_status qgp_profile_soliton(qgp_params p, qgp_grid g, qgp_profile** out);
QGP_API qgp_status qgp_profile_black(double kappa, qgp_grid g, qgp_profile** out);
QGP_API qgp_status qgp_profile_cuspon(qgp_params p, qgp_grid g, qgp_profile** out);
QGP_API qgp_status qgp_profile_compacton(double c, int j, qgp_grid g, qgp_profile** out);
QGP_API qgp_status qgp_profile_composite(qgp_params p, double eta0, int has_K0, double K0, qgp_grid g,
                                         qgp_profile** out);
/* Bubbles with centre values eta0s[0..n) placed side by side, left to right. */
QGP_API qgp_status qgp_profile_composite_chain(qgp_params p, const double* eta0s, size_t n, qgp_grid g,
                                               qgp_profile** out);
QGP_API qgp_status qgp_profile_trivial(qgp_grid g, qgp_profile** out);
QGP_API void qgp_profile_free(qgp_profile* w);

QGP_API size_t qgp_profile_size(const qgp_profile* w);
QGP_API const double* qgp_profile_x(const qgp_profile* w);
QGP_API const double* qgp_profile_eta(const qgp_profile* w);
QGP_API const double* qgp_profile_theta(const qgp_profile* w);
QGP_API const double* qgp_profile_u_re(const qgp_profile* w);
QGP_API const double* qgp_profile_u_im(const qgp_profile* w);
QGP_API qgp_status qgp_profile_info(const qgp_profile* w, qgp_params* p, qgp_region* r, qgp_wave_kind* k);
QGP_API size_t qgp_profile_singular_points(const qgp_profile* w, const double** pts);
QGP_API size_t qgp_profile_nondiff_points(const qgp_profile* w, const double** pts);
QGP_API size_t qgp_profile_extrema(const qgp_profile* w, const double** pts);
/* Residuals away from singular points; collar in units of h (<= 0 selects the default). */
QGP_API qgp_status qgp_profile_residuals(const qgp_profile* w, double collar, double* first_integral,
                                         double* second_order);

/* ---- observables ---- */
QGP_API qgp_status qgp_energy_closed(qgp_params p, double* out);
QGP_API qgp_status qgp_momentum_closed(qgp_params p, double* out);
QGP_API qgp_status qgp_dE_dc_closed(qgp_params p, double* out);
QGP_API qgp_status qgp_dp_dc_closed(qgp_params p, double* out);
QGP_API qgp_status qgp_cuspon_energy_closed(qgp_params p, double* out);
QGP_API qgp_status qgp_cuspon_momentum_closed(qgp_params p, double* out);
/* Grid is used by the quadrature method only; a zero spacing selects L = 40, h = 1e-3. */
QGP_API qgp_status qgp_soliton_observables(qgp_params p, qgp_method m, qgp_grid g, qgp_observables* out);
QGP_API qgp_status qgp_cuspon_observables(qgp_params p, qgp_method m, qgp_grid g, qgp_observables* out);
QGP_API qgp_status qgp_profile_energy(const qgp_profile* w, qgp_energy_form form, double* out);
QGP_API qgp_status qgp_profile_momentum(const qgp_profile* w, qgp_energy_form form, double* out);

/* ---- critical values ---- */
QGP_API qgp_status qgp_kappa0(double* out);
QGP_API qgp_status qgp_black_energy(double kappa, double* out);
QGP_API qgp_status qgp_c_tilde(double kappa, double* out);
QGP_API qgp_status qgp_c_star(double kappa, double* out);
QGP_API qgp_status qgp_q_star(double kappa, double* out);
QGP_API qgp_status qgp_critical_values_of(double kappa, qgp_critical_values* out);
QGP_API qgp_status qgp_speed_of_momentum(double kappa, double q, double* c);
/* Minimal energy at each momentum; c_out (optional) receives the minimizing speed or NaN. */
QGP_API qgp_status qgp_min_curve(double kappa, const double* qs, size_t n, double* E_out, double* c_out);

/* ---- evolution ---- */
QGP_API qgp_evolve_options qgp_evolve_options_default(void);
QGP_API qgp_status qgp_state_from_profile(const qgp_profile* w, qgp_grid g, qgp_state** out);
QGP_API qgp_status qgp_state_constant(qgp_grid g, double kappa, qgp_state** out);
QGP_API qgp_status qgp_state_clone(const qgp_state* s, qgp_state** out);
QGP_API void qgp_state_free(qgp_state* s);
QGP_API size_t qgp_state_size(const qgp_state* s);
QGP_API const double* qgp_state_x(const qgp_state* s);
QGP_API const double* qgp_state_rho(const qgp_state* s);
QGP_API const double* qgp_state_v(const qgp_state* s);
QGP_API double qgp_state_time(const qgp_state* s);
/* Replaces the fields; both arrays must have qgp_state_size entries. */
QGP_API qgp_status qgp_state_set(qgp_state* s, const double* rho, const double* v);
QGP_API qgp_status qgp_state_max_dt(const qgp_state* s, const qgp_evolve_options* opt, double* dt);
/* opt may be NULL for defaults. */
QGP_API qgp_status qgp_state_step(qgp_state* s, double dt, const qgp_evolve_options* opt);
/* Advances by T with dt <= dt_max (the stability bound when dt_max <= 0). The observer, if
   given, sees the initial state and every multiple of record_every. */
QGP_API qgp_status qgp_state_evolve(qgp_state* s, double T, double dt_max, double record_every,
                                    const qgp_evolve_options* opt, qgp_observer observer, void* user);
QGP_API qgp_status qgp_state_observables(const qgp_state* s, double* energy, double* momentum);
QGP_API qgp_status qgp_state_add_bump(qgp_state* s, double delta, double center, double width);
QGP_API qgp_status qgp_modulated_distance(const qgp_state* s, const qgp_profile* reference, double shift_guess,
                                          double window, qgp_distance* out);

QGP_API qgp_status qgp_stability_experiment(qgp_params p, double delta, double T, qgp_grid g, double dt,
                                            double record_every, const qgp_evolve_options* opt, qgp_report** out);
QGP_API void qgp_report_free(qgp_report* r);
QGP_API size_t qgp_report_size(const qgp_report* r);
QGP_API const double* qgp_report_times(const qgp_report* r);
QGP_API const double* qgp_report_energy(const qgp_report* r);
QGP_API const double* qgp_report_momentum(const qgp_report* r);
QGP_API const double* qgp_report_distance(const qgp_report* r);
QGP_API const double* qgp_report_shift(const qgp_report* r);
QGP_API const double* qgp_report_min_rho(const qgp_report* r);
QGP_API qgp_status qgp_report_drifts(const qgp_report* r, double* energy_drift, double* momentum_drift);

#ifdef __cplusplus
}
#endif

#endif
