// Vertical subsystem: the pendulum on the cylinder of normalized covectors,
// its energy stratification, and elliptic phase coordinates.
#pragma once

#include <stdexcept>

#include "cartan/elliptic.hpp"

namespace cartan {

// Energy strata of the pendulum (theta' = c, c' = -alpha sin(theta - beta),
// E = c^2/2 - alpha cos(theta - beta)):
//   C1  oscillation,            alpha > 0, -alpha < E < alpha
//   C2  rotation,               alpha > 0, E > alpha
//   C3  separatrix motion,      alpha > 0, E = alpha, c != 0
//   C4  stable equilibrium,     alpha > 0, E = -alpha
//   C5  unstable equilibrium,   alpha > 0, E = alpha, c = 0
//   C6  free uniform rotation,  alpha = 0, c != 0
//   C7  rest,                   alpha = 0, c = 0
enum class Stratum { C1, C2, C3, C4, C5, C6, C7 };

const char* to_string(Stratum s) noexcept;

// Thrown when an operation does not apply to the covector's stratum.
struct stratum_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Normalized initial covector (theta, c, alpha, beta); angles are reduced to
// (-pi, pi], alpha >= 0, all fields finite.
struct Covector {
  Covector(double theta, double c, double alpha, double beta);

  double theta;
  double c;
  double alpha;
  double beta;
};

double wrap_angle(double a) noexcept;  // to (-pi, pi]

double energy(const Covector& l) noexcept;

// Stratum membership.  tol = 0 compares exactly; otherwise |E -+ alpha| <=
// tol*max(1, alpha) selects the separatrix/bottom bands and alpha <= tol,
// |c| <= tol select the degenerate strata.
Stratum classify(const Covector& l, double tol = 0.0) noexcept;

// Elliptic modulus of the stratum: C1: k^2 = (E+alpha)/(2 alpha),
// C2: k^2 = 2 alpha/(E+alpha), C3: k = 1.  Other strata have none.
Modulus modulus(const Covector& l, double tol = 0.0);

// Pendulum state after time t (alpha, beta ride along unchanged).
Covector pendulum_flow(const Covector& l, double t, double tol = 1e-12);

// State period: C1: 4K/sqrt(alpha); C2: 2kK/sqrt(alpha) (one elastica
// period; the free-rotation limit alpha -> 0 gives 2 pi/|c|); C6: 2 pi/|c|;
// C3: +infinity.  Equilibria have none.
double pendulum_period(const Covector& l, double tol = 0.0);

// Phase coordinates on C1 and C2: phi >= 0 is the time since the most recent
// passage through theta - beta == 0 (mod 2 pi) with c > 0 on C1 (on C2 the
// sign of c never changes).  phi < pendulum_period.
struct EllipticCoords {
  double phi;
  Modulus k;
  double alpha;
  double beta;
  Stratum stratum;
};

EllipticCoords phase(const Covector& l, double tol = 1e-12);

// Inverse construction: the covector at given phase on C1 (any k in (0,1))
// or C2 (c_sign picks the rotation direction).
Covector covector_at_phase(Stratum s, Modulus k, double phi, double alpha,
                           double beta, int c_sign = +1);

}  // namespace cartan
