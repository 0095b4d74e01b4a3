// Boundary solver: find the unique (covector, time) with Exp(l, t) = q for
// targets off the surface {z V = 0}, by canonicalization, multistart
// screening and damped Gauss-Newton refinement.  The time of the solution is
// the sub-Riemannian distance.
#pragma once

#include <cstdint>
#include <stdexcept>

#include "cartan/expmap.hpp"
#include "cartan/pendulum.hpp"

namespace cartan {

struct not_in_domain : std::domain_error {
  using std::domain_error::domain_error;
};

struct no_convergence : std::runtime_error {
  no_convergence(const std::string& msg, double best)
      : std::runtime_error(msg), best_residual(best) {}
  double best_residual;
};

struct SolverConfig {
  double residual_tol = 1e-9;  // endpoint max-norm, target at unit size
  double ode_tol = 1e-12;      // integrator tolerance during refinement
  double screen_tol = 1e-5;    // integrator tolerance during seed ranking
  int max_newton_iters = 60;   // per start
  int max_grid_starts = 160;   // refined seeds taken from the ranked grid
  int max_random_starts = 48;  // fallback after the grid is exhausted
  std::uint64_t seed = 12345;  // for the random fallback only
};

struct ShootResult {
  Covector lambda{0.0, 0.0, 0.0, 0.0};
  double t = 0.0;
  double residual = 0.0;  // endpoint max-norm, target dilated to unit size
  double distance = 0.0;  // equals t by optimality
  int iterations = 0;     // refinement iterations of the accepted start
  int starts_tried = 0;
  bool ill_conditioned = false;  // |z V| < 1e-8 at unit homogeneous norm
};

// Rotation + dilation bringing q to x = 0, y = 1: q_canonical =
// dilate(mu, rotate(eta, q)).
struct Canonicalized {
  GroupPoint q;
  double eta;
  double mu;
};

Canonicalized canonicalize(const GroupPoint& q);

ShootResult solve(const GroupPoint& q, const SolverConfig& cfg = {});

double distance(const GroupPoint& q, const SolverConfig& cfg = {});

}  // namespace cartan
