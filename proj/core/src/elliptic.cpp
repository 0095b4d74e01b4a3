#include "cartan/elliptic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cartan {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Hyperbolic degeneration at k = 1: sn = tanh, cn = dn = sech, E(p) = tanh p.
EllipticValues values_at_unit_modulus(double p) {
  const double t = std::tanh(p);
  const double s = 1.0 / std::cosh(p);
  return {t, s, s, t};
}

}  // namespace

Modulus::Modulus(double k) : k_(k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw std::domain_error("Modulus: k must lie in [0, 1]");
  }
}

double complete_K(Modulus m) {
  if (m.k() == 1.0) return std::numeric_limits<double>::infinity();
  // AGM of (1, k'); quadratic convergence.  The iteration can stall with
  // a - b frozen at one ulp, so stop on stagnation, not only on the bound.
  double a = 1.0;
  double b = std::sqrt(1.0 - m.k2());
  for (int i = 0; i < 48 && a - b > 0.5e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    if (an == a && bn == b) break;
    a = an;
    b = bn;
  }
  return kPi / (2.0 * a);
}

double complete_E(Modulus m) {
  if (m.k() == 1.0) return 1.0;
  // E/K = 1 - sum 2^{n-1} c_n^2 over the AGM chain, c_0 = k.  Same
  // stagnation guard as complete_K.
  double a = 1.0;
  double b = std::sqrt(1.0 - m.k2());
  double c = m.k();
  double sum = 0.5 * c * c;
  double pow2 = 0.5;
  for (int i = 0; i < 48 && c > 0.5e-16 * a; ++i) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    pow2 *= 2.0;
    sum += pow2 * c * c;
    if (an == a && bn == b) break;
    a = an;
    b = bn;
  }
  return (kPi / (2.0 * a)) * (1.0 - sum);
}

JacobiEngine::JacobiEngine(Modulus m) : m_(m) {
  double a = 1.0;
  double b = std::sqrt(1.0 - m_.k2());
  double c = m_.k();
  agm_a_[0] = a;
  agm_c_[0] = c;
  std::size_t n = 0;
  double sum = 0.5 * c * c;
  double pow2 = 0.5;
  // k = 1 never reaches here through at(); chain kept for K_/E_ fields.
  while (c > 0.5e-16 * a && n + 1 < kMaxDepth && b > 0.0) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    if (an == a && bn == b) break;  // one-ulp stall; chain is complete
    a = an;
    b = bn;
    ++n;
    agm_a_[n] = a;
    agm_c_[n] = c;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  depth_ = n;
  if (m_.k() == 1.0) {
    K_ = std::numeric_limits<double>::infinity();
    E_ = 1.0;
  } else {
    K_ = kPi / (2.0 * a);
    E_ = K_ * (1.0 - sum);
  }
}

EllipticValues JacobiEngine::at(double p) const {
  const double k2 = m_.k2();
  if (m_.k() == 1.0) return values_at_unit_modulus(p);
  if (m_.k() == 0.0) return {std::sin(p), std::cos(p), 1.0, p};

  // Reduce modulo the full period and track the quasi-period of eps.
  const double period = 4.0 * K_;
  const double cycles = std::floor(p / period);
  const double r = p - cycles * period;

  // Amplitudes by the descending Landen chain: phi_N = 2^N a_N r, then
  // sin(2 phi_{n-1} - phi_n) = (c_n / a_n) sin phi_n downward.  The principal
  // arcsin branch is correct because |2 phi_{n-1} - phi_n| <= pi/2 along the
  // true amplitude sequence.
  double phi = std::ldexp(agm_a_[depth_] * r, static_cast<int>(depth_));
  double eps_sum = 0.0;
  for (std::size_t n = depth_; n > 0; --n) {
    const double s = std::sin(phi);
    eps_sum += agm_c_[n] * s;
    double ratio = agm_c_[n] / agm_a_[n] * s;
    if (ratio > 1.0) ratio = 1.0;
    if (ratio < -1.0) ratio = -1.0;
    phi = 0.5 * (phi + std::asin(ratio));
  }

  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  const double dn = std::sqrt(std::fmax(1.0 - k2 * sn * sn, 0.0));
  const double eps = eps_sum + (E_ / K_) * r + 4.0 * E_ * cycles;
  return {sn, cn, dn, eps};
}

EllipticValues jacobi(double p, Modulus m) { return JacobiEngine(m).at(p); }

}  // namespace cartan
