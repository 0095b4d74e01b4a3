// Adaptive Dormand-Prince 5(4) integration with dense output and event
// location.  Fixed-size states, no allocation on the hot path.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

namespace cartan::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double max_step = 0.0;  // 0: no cap
  std::size_t max_steps = 20'000'000;
};

// Continuous extension over one accepted step; order-4 interpolant.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> r{};

  State<N> eval(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = r[0][i] +
             s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
    }
    return y;
  }
};

namespace detail {

// Butcher tableau (Dormand & Prince, 1980) plus the dense-output weights.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;

}  // namespace detail

// Integrates y' = f(t, y) from t0 to t1 (either direction).  step_out, when
// non-null, receives every accepted step's dense interpolant and may return
// false to stop early.
template <std::size_t N, typename F>
State<N> integrate(F&& f, State<N> y, double t0, double t1,
                   const Options& opt = {},
                   const std::function<bool(const DenseStep<N>&)>& step_out =
                       nullptr) {
  using namespace detail;
  if (t1 == t0) return y;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::fabs(t1 - t0);
  double hmax = opt.max_step > 0.0 ? opt.max_step : span;

  State<N> k1 = f(t0, y);
  // Initial step from the scale of y and f.
  double ynorm = 0.0, fnorm = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    ynorm = std::fmax(ynorm, std::fabs(y[i]));
    fnorm = std::fmax(fnorm, std::fabs(k1[i]));
  }
  double h = 0.01 * (ynorm + 1.0) / (fnorm + 1.0);
  h = std::fmin(h, hmax);
  h = std::fmin(h, span);
  h = std::fmax(h, 1e-12 * span);

  double t = t0;
  double err_prev = 1.0;
  State<N> k2, k3, k4, k5, k6, k7, ytmp, ynew;

  for (std::size_t steps = 0; steps < opt.max_steps; ++steps) {
    if ((t1 - t - dir * h) * dir < 0.0) h = std::fabs(t1 - t);
    const double hs = dir * h;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    k2 = f(t + c2 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                             a54 * k4[i]);
    k5 = f(t + c5 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + hs, ynew);  // FSAL

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          opt.atol + opt.rtol * std::fmax(std::fabs(y[i]), std::fabs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      if (step_out) {
        DenseStep<N> ds;
        ds.t0 = t;
        ds.h = hs;
        for (std::size_t i = 0; i < N; ++i) {
          const double dy = ynew[i] - y[i];
          const double bspl = hs * k1[i] - dy;
          ds.r[0][i] = y[i];
          ds.r[1][i] = dy;
          ds.r[2][i] = bspl;
          ds.r[3][i] = dy - hs * k7[i] - bspl;
          ds.r[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                             d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        if (!step_out(ds)) return ynew;
      }
      t += hs;
      y = ynew;
      k1 = k7;
      if ((t1 - t) * dir <= 0.0) return y;
      // PI controller (Hairer-Norsett-Wanner style exponents).
      double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::fmin(5.0, std::fmax(0.2, fac));
      h = std::fmin(h * fac, hmax);
      err_prev = std::fmax(err, 1e-4);
    } else {
      h *= std::fmax(0.2, 0.9 * std::pow(err, -0.2));
    }
    if (h <= std::fabs(t) * 1e-16 + 1e-300) {
      throw std::runtime_error("ode: step size underflow");
    }
  }
  throw std::runtime_error("ode: step budget exhausted");
}

// First time in [t0, t1] where g(t, y(t)) crosses zero and accept(t, y) holds.
// Crossings are bracketed on a per-step subgrid, then bisected on the dense
// interpolant.
template <std::size_t N, typename F, typename G, typename A>
std::optional<double> first_event(F&& f, State<N> y0, double t0, double t1,
                                  G&& g, A&& accept, const Options& opt = {}) {
  if (!(t1 > t0)) throw std::invalid_argument("first_event: needs t1 > t0");
  std::optional<double> hit;
  auto observer = [&](const DenseStep<N>& ds) -> bool {
    constexpr int kSub = 8;
    double ta = ds.t0;
    State<N> ya = ds.eval(ta);
    double ga = g(ta, ya);
    for (int j = 1; j <= kSub; ++j) {
      const double tb = ds.t0 + ds.h * j / kSub;
      State<N> yb = ds.eval(tb);
      const double gb = g(tb, yb);
      if ((ga < 0.0 && gb >= 0.0) || (ga > 0.0 && gb <= 0.0) ||
          (ga == 0.0 && j == 1)) {
        double lo = ta, hi = tb, glo = ga;
        for (int it = 0; it < 100 && hi - lo > 0.0; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid == lo || mid == hi) break;
          const double gm = g(mid, ds.eval(mid));
          if ((glo <= 0.0) == (gm <= 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        const double tc = 0.5 * (lo + hi);
        if (accept(tc, ds.eval(tc))) {
          hit = tc;
          return false;
        }
      }
      ta = tb;
      ya = yb;
      ga = gb;
    }
    return true;
  };
  integrate<N>(std::forward<F>(f), y0, t0, t1, opt, observer);
  return hit;
}

}  // namespace cartan::ode
