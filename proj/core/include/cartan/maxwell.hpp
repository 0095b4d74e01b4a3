// Root equations of the symmetry-fixed-point analysis, the normalized first
// Maxwell times, the two critical moduli where min(t1z, t1v) switches branch,
// and the cut-time function on covectors.
#pragma once

#include <stdexcept>

#include "cartan/elliptic.hpp"
#include "cartan/pendulum.hpp"

namespace cartan {

// First positive roots of these three functions give the candidate Maxwell
// times.  All vanish at p = 0 to high order; the first root is strictly
// positive.
double f1z(double p, Modulus k);
double f1v(double p, Modulus k);
double f2v(double p, Modulus k);

enum class RootTarget { f1z, f1v, f2v };

struct no_root_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smallest p > 0 with f(p, k) = 0, search window (0, 4K(k)].  The window and
// the sampling density are sized so the root is always bracketed; a miss
// signals a transcription bug, not a legitimate outcome.
double first_root(RootTarget f, Modulus k);

// Normalized times.  t1z, t1v live on C1 (unit = half the pendulum period,
// 2K), t2v on C2 (unit = K) and as the k = 0 limit on C6.  Fields that do not
// apply to the requested stratum are NaN.
struct MaxwellTimes {
  double t1z;
  double t1v;
  double t2v;
  double combined;  // min(t1z, t1v) on C1; t2v on C2; t2v(0) on C6
};

MaxwellTimes normalized_times(Modulus k, Stratum s);

// Moduli where min(t1z, t1v) switches branch: t1z wins on (0, k1] and
// [k0, 1), t1v wins on [k1, k0].
struct CriticalModuli {
  double k0;
  double k1;
};

const CriticalModuli& critical_moduli();

// Limit value t2v(0) = 2 p / pi for the first root p of the zero-modulus
// closed form; this is the C6 normalized cut time and the comparison
// constant of the Engel bound.
double t2v_zero();

// First time the geodesic with covector l stops being optimal.  +infinity on
// C3, C4, C5, C7.
double cut_time(const Covector& l);

// Dimensionless defect |z V| of the endpoint at time t, evaluated on the
// endpoint rescaled by dilation to unit homogeneous norm.  z V has weight 6,
// so the value is invariant under the dilation action and vanishes (to
// integration tolerance) exactly when the endpoint lies on the surface
// {z V = 0} that carries all Maxwell points and symmetry fixed points.
double maxwell_defect(const Covector& l, double t, double ode_tol = 1e-10);

bool in_cut_candidate_set(const Covector& l, double t, double tol = 1e-6,
                          double ode_tol = 1e-10);

// Fixed-point predicate of the reflection symmetries: sn(tau) cn(tau) = 0
// with tau = sqrt(alpha) (phi + t/2) on C1 and (sqrt(alpha)/k)(phi + t/2) on
// C2, phi from pendulum phase.  Requires l in C1 or C2.
bool fix_predicate(const Covector& l, double t, double tol = 1e-6);

}  // namespace cartan
