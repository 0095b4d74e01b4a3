// Scalar root bracketing and refinement helpers.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace cartan {

// Brent's method on a sign-changing bracket [a, b].
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  double xtol = 1e-10, int max_iter = 200) {
  if (!((fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0))) {
    throw std::invalid_argument("brent_root: no sign change on bracket");
  }
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * 1e-16 * std::fabs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return b;
    if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
      d = e = m;  // bisection
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::fmin(3.0 * m * q - std::fabs(tol * q),
                              std::fabs(e * q))) {
        e = d; d = p / q;  // accept interpolation
      } else {
        d = e = m;
      }
    }
    a = b; fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; e = d = b - a; }
  }
  return b;
}

// First zero of f on (lo, hi]: uniform scan for the leading sign change, then
// Brent.  Returns nullopt when every sample keeps the same sign.
template <typename F>
std::optional<double> first_sign_change(F&& f, double lo, double hi,
                                        int samples = 1024,
                                        double xtol = 1e-10) {
  double xa = lo, fa = f(lo);
  if (fa == 0.0) return lo;
  for (int i = 1; i <= samples; ++i) {
    const double xb = lo + (hi - lo) * i / samples;
    const double fb = f(xb);
    if (fb == 0.0) return xb;
    if ((fa < 0.0) != (fb < 0.0)) {
      return brent_root(f, xa, xb, fa, fb, xtol);
    }
    xa = xb;
    fa = fb;
  }
  return std::nullopt;
}

// Golden-section maximizer on [a, b] for unimodal-enough f.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b,
                                     double xtol = 1e-8) {
  constexpr double phi = 0.6180339887498949;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + phi * (b - a); f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - phi * (b - a); f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace cartan
