#include "cartan/expmap.hpp"

#include <cmath>
#include <stdexcept>

#include "cartan/ode.hpp"

namespace cartan {

namespace {

// Extremal state: [theta, c, x, y, z, v, w].
using ExtState = ode::State<7>;

ExtState initial_state(const Covector& l) {
  return {l.theta, l.c, 0.0, 0.0, 0.0, 0.0, 0.0};
}

ExtState extremal_rhs(double alpha, double beta, const ExtState& s) {
  const double st = std::sin(s[0]);
  const double ct = std::cos(s[0]);
  const double r2 = s[2] * s[2] + s[3] * s[3];
  return {s[1],
          -alpha * std::sin(s[0] - beta),
          ct,
          st,
          0.5 * (s[2] * st - s[3] * ct),
          0.5 * st * r2,
          -0.5 * ct * r2};
}

GroupPoint point_of(const ExtState& s) {
  return {s[2], s[3], s[4], s[5], s[6]};
}

}  // namespace

GroupPoint exp(const Covector& l, double t, double tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("exp: time must be finite and nonnegative");
  }
  if (!(tol > 0.0)) {
    throw std::domain_error("exp: tolerance must be positive");
  }
  if (t == 0.0) return GroupPoint::identity();
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  const double alpha = l.alpha;
  const double beta = l.beta;
  const ExtState y = ode::integrate<7>(
      [alpha, beta](double, const ExtState& s) {
        return extremal_rhs(alpha, beta, s);
      },
      initial_state(l), 0.0, t, opt);
  return point_of(y);
}

Trajectory exp_trajectory(const Covector& l, double t, std::size_t samples,
                          double tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error(
        "exp_trajectory: time must be finite and nonnegative");
  }
  if (samples == 0) {
    throw std::domain_error("exp_trajectory: need at least one interval");
  }
  Trajectory out{l, tol, {}};
  out.samples.reserve(samples + 1);
  ExtState y0 = initial_state(l);
  out.samples.push_back({0.0, point_of(y0), y0[0]});
  if (t == 0.0) {
    for (std::size_t i = 1; i <= samples; ++i) {
      out.samples.push_back({0.0, point_of(y0), y0[0]});
    }
    return out;
  }

  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  const double alpha = l.alpha;
  const double beta = l.beta;
  std::size_t next = 1;
  const ExtState y = ode::integrate<7>(
      [alpha, beta](double, const ExtState& s) {
        return extremal_rhs(alpha, beta, s);
      },
      y0, 0.0, t, opt, [&](const ode::DenseStep<7>& step) {
        const double step_end = step.t0 + step.h;
        while (next <= samples) {
          const double ti = t * static_cast<double>(next) /
                            static_cast<double>(samples);
          if (ti > step_end * (1.0 + 1e-14)) break;
          const ExtState si = step.eval(std::min(ti, step_end));
          out.samples.push_back({ti, point_of(si), si[0]});
          ++next;
        }
        return true;
      });
  // Round-off can leave the final sample pending; close it with the endpoint.
  while (next <= samples) {
    const double ti = t * static_cast<double>(next) / static_cast<double>(samples);
    out.samples.push_back({ti, point_of(y), y[0]});
    ++next;
  }
  return out;
}

GroupPoint dilate(double mu, const GroupPoint& q) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::domain_error("dilate: mu must be finite and positive");
  }
  const double mu2 = mu * mu;
  const double mu3 = mu2 * mu;
  return {mu * q.x, mu * q.y, mu2 * q.z, mu3 * q.v, mu3 * q.w};
}

GroupPoint rotate(double eta, const GroupPoint& q) {
  const double ce = std::cos(eta);
  const double se = std::sin(eta);
  return {q.x * ce + q.y * se, q.y * ce - q.x * se, q.z,
          q.v * ce + q.w * se, q.w * ce - q.v * se};
}

std::pair<Covector, double> dilate_cov(double mu, const Covector& l,
                                       double t) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::domain_error("dilate_cov: mu must be finite and positive");
  }
  return {Covector(l.theta, l.c / mu, l.alpha / (mu * mu), l.beta), mu * t};
}

Covector rotate_cov(double eta, const Covector& l) {
  return Covector(l.theta - eta, l.c, l.alpha, l.beta - eta);
}

}  // namespace cartan
