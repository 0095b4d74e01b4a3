// The 4-dimensional Engel quotient: projection of covectors and points,
// Engel cut times, and the comparison constant zeta bounding the ratio of
// the two cut-time functions.
#pragma once

#include <stdexcept>

#include "cartan/expmap.hpp"
#include "cartan/pendulum.hpp"

namespace cartan {

struct EngelPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double v = 0.0;

  static EngelPoint identity() noexcept { return {}; }
};

// Engel covector (theta, c, alpha); alpha may take either sign here, unlike
// the Cartan cylinder.  Projections of Cartan covectors always land on
// alpha >= 0.
struct EngelCovector {
  EngelCovector(double theta_, double c_, double alpha_);

  double theta;
  double c;
  double alpha;
};

// Projection along beta: the covector maps to (theta - beta + pi/2, c,
// alpha); a point is first rotated by beta - pi/2, then w is dropped.
EngelCovector project_engel(const Covector& l);
EngelPoint project_engel(const GroupPoint& q, double beta);

// Pendulum energy of the Engel vertical subsystem, c^2/2 - alpha sin theta.
double engel_energy(const EngelCovector& l);

// Same stratum labels as the Cartan cylinder, with |alpha| in the energy
// conditions.  Negative alpha is folded by the symmetry alpha -> -alpha,
// theta -> theta + pi.
Stratum classify_engel(const EngelCovector& l, double tol = 0.0);
Modulus engel_modulus(const EngelCovector& l, double tol = 0.0);

// Engel exponential map: integrates theta' = c, c' = alpha cos theta and the
// first four horizontal equations from the identity.
EngelPoint engel_exp(const EngelCovector& l, double t, double tol = 1e-10);

double engel_cut_time(const EngelCovector& l);

// zeta = max over both normalized cut-time curves; the certificate records
// where each branch attains its maximum and that everything sampled stays
// strictly below 2.
struct ZetaCertificate {
  double zeta;
  double t1z_max;
  double t1z_argmax;
  double t2v_max;
  double t2v_argmax;
  bool less_than_two;
};

const ZetaCertificate& zeta_certificate();
double zeta();

struct comparison_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cut times of l and of its Engel projection, with the proven sandwich
// tE <= tC <= zeta * tE enforced (violation signals a numerical bug).
// ratio = tC / tE, with 1 for the strata where both are infinite.
struct CutComparison {
  double tE;
  double tC;
  double ratio;
};

CutComparison compare(const Covector& l);

}  // namespace cartan
