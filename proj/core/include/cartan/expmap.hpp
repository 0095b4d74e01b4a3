// Exponential map of the sub-Riemannian structure: integrates the extremal
// system from the identity, plus the dilation and rotation symmetries.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cartan/pendulum.hpp"

namespace cartan {

// Point of the 5-dimensional group in the coordinates of the model:
// unit-speed planar curve (x, y), signed area z, and the two cubic moments
// (v, w).
struct GroupPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double v = 0.0;
  double w = 0.0;

  static GroupPoint identity() noexcept { return {}; }

  // Symmetry defect V = xv + yw - (x^2 + y^2) z / 2.  The product z*V
  // vanishes exactly on the closure of the optimality-breaking surface.
  double V() const noexcept {
    return x * v + y * w - 0.5 * (x * x + y * y) * z;
  }
};

// Endpoint of the time-t extremal with initial covector l.  t >= 0 is the
// arc length of the planar projection.
GroupPoint exp(const Covector& l, double t, double tol = 1e-10);

struct TrajectorySample {
  double t;
  GroupPoint q;
  double theta;  // tangent direction of the planar curve
};

struct Trajectory {
  Covector lambda;
  double tol;
  std::vector<TrajectorySample> samples;
};

// Uniform sampling of [0, t] with `samples` intervals (samples+1 rows).
Trajectory exp_trajectory(const Covector& l, double t, std::size_t samples,
                          double tol = 1e-10);

// Dilation delta_mu, mu > 0: weights (1, 1, 2, 3, 3) on (x, y, z, v, w).
GroupPoint dilate(double mu, const GroupPoint& q);

// Rotation R_eta of the horizontal plane; (v, w) rotate as a pair, z fixed.
GroupPoint rotate(double eta, const GroupPoint& q);

// Covector halves of the symmetries: Exp(dilate_cov(mu, l, t)) =
// dilate(mu, Exp(l, t)) and Exp(rotate_cov(eta, l), t) = rotate(eta,
// Exp(l, t)).
std::pair<Covector, double> dilate_cov(double mu, const Covector& l, double t);
Covector rotate_cov(double eta, const Covector& l);

}  // namespace cartan
