#include "cartan/pendulum.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cartan/ode.hpp"

namespace cartan {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string("Covector: non-finite ") + what);
  }
}

}  // namespace

const char* to_string(Stratum s) noexcept {
  switch (s) {
    case Stratum::C1: return "C1";
    case Stratum::C2: return "C2";
    case Stratum::C3: return "C3";
    case Stratum::C4: return "C4";
    case Stratum::C5: return "C5";
    case Stratum::C6: return "C6";
    case Stratum::C7: return "C7";
  }
  return "?";
}

double wrap_angle(double a) noexcept {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

Covector::Covector(double theta_, double c_, double alpha_, double beta_)
    : theta(wrap_angle(theta_)), c(c_), alpha(alpha_), beta(wrap_angle(beta_)) {
  require_finite(theta_, "theta");
  require_finite(c_, "c");
  require_finite(alpha_, "alpha");
  require_finite(beta_, "beta");
  if (alpha < 0.0) throw std::domain_error("Covector: alpha must be >= 0");
}

double energy(const Covector& l) noexcept {
  return 0.5 * l.c * l.c - l.alpha * std::cos(l.theta - l.beta);
}

Stratum classify(const Covector& l, double tol) noexcept {
  const double E = energy(l);
  if (l.alpha <= tol) {
    return std::fabs(l.c) > tol ? Stratum::C6 : Stratum::C7;
  }
  const double band = tol * std::fmax(1.0, l.alpha);
  if (std::fabs(E - l.alpha) <= band) {
    return std::fabs(l.c) > tol ? Stratum::C3 : Stratum::C5;
  }
  if (std::fabs(E + l.alpha) <= band) return Stratum::C4;
  return E < l.alpha ? Stratum::C1 : Stratum::C2;
}

Modulus modulus(const Covector& l, double tol) {
  const Stratum s = classify(l, tol);
  const double E = energy(l);
  switch (s) {
    case Stratum::C1: {
      double k2 = (E + l.alpha) / (2.0 * l.alpha);
      k2 = std::fmin(std::fmax(k2, 0.0), 1.0);
      return Modulus(std::sqrt(k2));
    }
    case Stratum::C2: {
      double k2 = 2.0 * l.alpha / (E + l.alpha);
      k2 = std::fmin(std::fmax(k2, 0.0), 1.0);
      return Modulus(std::sqrt(k2));
    }
    case Stratum::C3:
      return Modulus(1.0);
    default:
      throw stratum_error(std::string("modulus: undefined on ") +
                          to_string(s));
  }
}

Covector pendulum_flow(const Covector& l, double t, double tol) {
  if (t == 0.0) return l;
  const double alpha = l.alpha, beta = l.beta;
  auto rhs = [alpha, beta](double, const ode::State<2>& y) -> ode::State<2> {
    return {y[1], -alpha * std::sin(y[0] - beta)};
  };
  ode::Options opt;
  opt.rtol = opt.atol = tol;
  const ode::State<2> yt =
      ode::integrate<2>(rhs, {l.theta, l.c}, 0.0, t, opt);
  return Covector(yt[0], yt[1], alpha, beta);
}

double pendulum_period(const Covector& l, double tol) {
  const Stratum s = classify(l, tol);
  switch (s) {
    case Stratum::C1:
      return 4.0 * complete_K(modulus(l, tol)) / std::sqrt(l.alpha);
    case Stratum::C2: {
      const Modulus k = modulus(l, tol);
      return 2.0 * k.k() * complete_K(k) / std::sqrt(l.alpha);
    }
    case Stratum::C3:
      return std::numeric_limits<double>::infinity();
    case Stratum::C6:
      return kTwoPi / std::fabs(l.c);
    default:
      throw stratum_error(std::string("pendulum_period: undefined on ") +
                          to_string(s));
  }
}

EllipticCoords phase(const Covector& l, double tol) {
  const Stratum s = classify(l);
  if (s != Stratum::C1 && s != Stratum::C2) {
    throw stratum_error(std::string("phase: defined on C1/C2 only, got ") +
                        to_string(s));
  }
  const Modulus k = modulus(l);
  const double period = pendulum_period(l);

  // Run the time-reversed pendulum forward; the first crossing of
  // theta - beta == 0 (mod 2 pi) with the right c sign is the phase.
  const double alpha = l.alpha, beta = l.beta;
  auto rhs = [alpha, beta](double, const ode::State<2>& y) -> ode::State<2> {
    return {-y[1], alpha * std::sin(y[0] - beta)};
  };
  auto event = [beta](double, const ode::State<2>& y) {
    return std::sin(0.5 * (y[0] - beta));
  };
  auto accept = [s](double, const ode::State<2>& y) {
    return s == Stratum::C2 || y[1] > 0.0;
  };

  // Already at the section?
  if (std::fabs(event(0.0, {l.theta, l.c})) < 1e-15 &&
      accept(0.0, {l.theta, l.c})) {
    return {0.0, k, alpha, beta, s};
  }

  ode::Options opt;
  opt.rtol = opt.atol = tol;
  const auto hit = ode::first_event<2>(rhs, {l.theta, l.c}, 0.0,
                                       1.25 * period, event, accept, opt);
  if (!hit) {
    throw std::runtime_error("phase: no section crossing within one period");
  }
  double phi = *hit;
  if (phi >= period) phi -= period;
  return {phi, k, alpha, beta, s};
}

Covector covector_at_phase(Stratum s, Modulus k, double phi, double alpha,
                           double beta, int c_sign) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("covector_at_phase: needs alpha > 0");
  }
  const double sgn = c_sign >= 0 ? 1.0 : -1.0;
  Covector ref(beta, 0.0, alpha, beta);
  switch (s) {
    case Stratum::C1:
      if (!(k.k() > 0.0 && k.k() < 1.0)) {
        throw std::domain_error("covector_at_phase: C1 needs k in (0,1)");
      }
      ref.c = 2.0 * k.k() * std::sqrt(alpha);
      break;
    case Stratum::C2:
      if (!(k.k() > 0.0 && k.k() < 1.0)) {
        throw std::domain_error("covector_at_phase: C2 needs k in (0,1)");
      }
      ref.c = sgn * 2.0 * std::sqrt(alpha) / k.k();
      break;
    default:
      throw stratum_error("covector_at_phase: C1/C2 only");
  }
  return phi == 0.0 ? ref : pendulum_flow(ref, phi);
}

}  // namespace cartan
