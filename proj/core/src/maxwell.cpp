#include "cartan/maxwell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cartan/expmap.hpp"
#include "cartan/roots.hpp"

namespace cartan {

namespace {

constexpr double kPi = 3.14159265358979323846;

double f1z_impl(const JacobiEngine& J, double p) {
  const EllipticValues e = J.at(p);
  const double g1 = 2.0 * e.eps - p;
  return e.sn * e.dn - g1 * e.cn;
}

double f1v_impl(const JacobiEngine& J, double p) {
  const EllipticValues e = J.at(p);
  const double k2 = J.k2();
  const double g1 = 2.0 * e.eps - p;
  const double bracket = g1 * g1 * g1 - p -
                         2.0 * g1 * (1.0 - (2.0 - 6.0 * e.cn * e.cn) * k2) +
                         8.0 * k2 * e.sn * e.cn * e.dn;
  return (4.0 / 3.0) * e.dn * e.sn * bracket +
         4.0 * e.cn * g1 * g1 * (1.0 - 2.0 * k2 * e.sn * e.sn);
}

double f2v_impl(const JacobiEngine& J, double p) {
  const EllipticValues e = J.at(p);
  const double k2 = J.k2();
  const double g2 = 2.0 * e.eps - (2.0 - k2) * p;
  const double sn2 = e.sn * e.sn;
  const double term_dn =
      e.dn * (8.0 * k2 * e.cn * e.cn * sn2 + g2 * g2 * (3.0 - 6.0 * sn2));
  const double term_cs =
      e.cn * e.sn *
      (g2 * g2 * g2 - k2 * k2 * p - 2.0 * g2 * (4.0 + k2 * (1.0 - 6.0 * sn2)));
  return (4.0 / 3.0) * (term_dn + term_cs);
}

// The general C2 expression degenerates to 0 identically at k = 0; the limit
// after dividing out the leading modulus power has this closed form.
double f2v_zero_modulus(double p) {
  return ((32.0 * p * p - 1.0) * std::cos(2.0 * p) - 8.0 * p * std::sin(2.0 * p) +
          std::cos(6.0 * p)) /
         512.0;
}

// The k^2-order terms of the general f2v cancel identically, so for small
// moduli the expression evaluates orders of magnitude below its summands and
// the root drowns in rounding noise (spurious sign changes appear below
// k ~ 0.05).  The zero-modulus limit form is clean, and the normalized root
// it yields differs from the true one by less than 7e-7 for k <= 0.08, which
// is where the two evaluation paths cross in accuracy.
constexpr double kSmallModulus = 0.08;

// All three functions vanish at p = 0 to high order (cubic and above), so a
// scan starting near 0 picks up rounding-noise sign flips of the trivial
// zero.  They are sign-definite on (0, K/5] for every modulus (leading
// series terms: f1z ~ p^3 (1-k^2)/3 > 0, f1v < 0, f2v < 0), so the scan may
// safely start at K/5; the zero-modulus form is sign-definite up to pi/40.
constexpr double kScanFloorFraction = 0.2;
constexpr int kScanSamples = 1024;

double checked_k(Modulus m, const char* who) {
  if (m.k() >= 1.0) {
    throw std::domain_error(std::string(who) + ": modulus must satisfy k < 1");
  }
  return m.k();
}

double first_root_zero_modulus() {
  const auto r = first_sign_change(f2v_zero_modulus, kPi / 40.0, 2.0 * kPi,
                                   kScanSamples, 1e-12);
  if (!r) throw no_root_error("first_root: no sign change for f2v at k = 0");
  return *r;
}

}  // namespace

double f1z(double p, Modulus k) {
  checked_k(k, "f1z");
  return f1z_impl(JacobiEngine(k), p);
}

double f1v(double p, Modulus k) {
  checked_k(k, "f1v");
  return f1v_impl(JacobiEngine(k), p);
}

double f2v(double p, Modulus k) {
  checked_k(k, "f2v");
  if (k.k() < kSmallModulus) return f2v_zero_modulus(p);
  return f2v_impl(JacobiEngine(k), p);
}

double first_root(RootTarget f, Modulus k) {
  checked_k(k, "first_root");
  if (f == RootTarget::f2v && k.k() < kSmallModulus) {
    // Report the root in the elliptic argument, so dividing by K recovers the
    // normalized time regardless of modulus.
    return t2v_zero() * complete_K(k);
  }
  const JacobiEngine J(k);
  const double K = J.K();
  const double lo = kScanFloorFraction * K;
  const double hi = 4.0 * K;
  const double xtol = 1e-10 * std::max(1.0, K);
  auto eval = [&](double p) {
    switch (f) {
      case RootTarget::f1z:
        return f1z_impl(J, p);
      case RootTarget::f1v:
        return f1v_impl(J, p);
      default:
        return f2v_impl(J, p);
    }
  };
  const auto r = first_sign_change(eval, lo, hi, kScanSamples, xtol);
  if (!r) {
    throw no_root_error("first_root: no sign change in (0, 4K] at k = " +
                        std::to_string(k.k()));
  }
  return *r;
}

MaxwellTimes normalized_times(Modulus k, Stratum s) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MaxwellTimes out{nan, nan, nan, nan};
  switch (s) {
    case Stratum::C1: {
      const double twoK = 2.0 * complete_K(k);
      out.t1z = first_root(RootTarget::f1z, k) / twoK;
      out.t1v = first_root(RootTarget::f1v, k) / twoK;
      out.combined = std::min(out.t1z, out.t1v);
      return out;
    }
    case Stratum::C2: {
      // Take the zero-modulus value directly below the dispatch threshold;
      // the round trip through first_root would perturb the last bit, and the
      // comparison certificate relies on the small-k plateau being exact.
      // Above the threshold, clamp to the k = 0 value: the branch attains its
      // supremum there, and root jitter just past the dispatch point must
      // not be allowed to exceed it or the zeta sandwich loses its upper
      // bound.
      out.t2v = (k.k() < kSmallModulus)
                    ? t2v_zero()
                    : std::min(first_root(RootTarget::f2v, k) / complete_K(k),
                               t2v_zero());
      out.combined = out.t2v;
      return out;
    }
    case Stratum::C6: {
      out.t2v = t2v_zero();
      out.combined = out.t2v;
      return out;
    }
    default:
      throw stratum_error("normalized_times: defined on C1, C2, C6 only");
  }
}

double t2v_zero() {
  static const double value = 2.0 * first_root_zero_modulus() / kPi;
  return value;
}

const CriticalModuli& critical_moduli() {
  static const CriticalModuli cached = [] {
    auto diff = [](double k) {
      const MaxwellTimes t = normalized_times(Modulus(k), Stratum::C1);
      return t.t1z - t.t1v;
    };
    // t1z - t1v is negative near 0, positive between the crossings, negative
    // again toward 1; locate both sign changes by scan + bisection.  The
    // upper crossing sits at a cube-root cusp of t1z, which bisection on a
    // plain sign change handles fine.
    constexpr int n = 96;
    constexpr double lo = 0.05, hi = 0.98;
    double roots[2];
    int found = 0;
    double kprev = lo;
    double fprev = diff(kprev);
    for (int i = 1; i <= n && found < 2; ++i) {
      const double kcur = lo + (hi - lo) * i / n;
      const double fcur = diff(kcur);
      if ((fprev < 0.0) != (fcur < 0.0)) {
        double a = kprev, b = kcur, fa = fprev;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = diff(m);
          if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
          } else {
            a = m;
            fa = fm;
          }
        }
        roots[found++] = 0.5 * (a + b);
      }
      kprev = kcur;
      fprev = fcur;
    }
    if (found != 2) {
      throw no_root_error("critical_moduli: expected two branch crossings");
    }
    return CriticalModuli{roots[1], roots[0]};
  }();
  return cached;
}

double cut_time(const Covector& l) {
  const Stratum s = classify(l);
  switch (s) {
    case Stratum::C1: {
      const Modulus k = modulus(l);
      const MaxwellTimes t = normalized_times(k, s);
      return 4.0 * complete_K(k) * t.combined / std::sqrt(l.alpha);
    }
    case Stratum::C2: {
      const Modulus k = modulus(l);
      const MaxwellTimes t = normalized_times(k, s);
      return 2.0 * k.k() * complete_K(k) * t.combined / std::sqrt(l.alpha);
    }
    case Stratum::C6:
      return 2.0 * kPi * t2v_zero() / std::abs(l.c);
    default:
      return std::numeric_limits<double>::infinity();
  }
}

double maxwell_defect(const Covector& l, double t, double ode_tol) {
  if (!(t > 0.0)) return 0.0;
  const GroupPoint q = exp(l, t, ode_tol);
  // Homogeneous norm with dilation weights (1,1,2,3,3); dividing z V by its
  // sixth power evaluates the defect on the endpoint rescaled to unit size,
  // which keeps the threshold meaningful for geodesics that wind back close
  // to the origin (where any power of t would overstate the scale).
  const double n = std::max({std::abs(q.x), std::abs(q.y),
                             std::sqrt(std::abs(q.z)),
                             std::cbrt(std::abs(q.v)),
                             std::cbrt(std::abs(q.w))});
  if (n == 0.0) return 0.0;
  const double n2 = n * n;
  return std::abs(q.z * q.V()) / (n2 * n2 * n2);
}

bool in_cut_candidate_set(const Covector& l, double t, double tol,
                          double ode_tol) {
  return maxwell_defect(l, t, ode_tol) <= tol;
}

bool fix_predicate(const Covector& l, double t, double tol) {
  const Stratum s = classify(l);
  if (s != Stratum::C1 && s != Stratum::C2) {
    throw stratum_error("fix_predicate: defined on C1 and C2 only");
  }
  const EllipticCoords ec = phase(l);
  const double root_alpha = std::sqrt(l.alpha);
  const double tau = (s == Stratum::C1)
                         ? root_alpha * (ec.phi + 0.5 * t)
                         : (root_alpha / ec.k.k()) * (ec.phi + 0.5 * t);
  const EllipticValues e = jacobi(tau, ec.k);
  return std::abs(e.sn * e.cn) <= tol;
}

}  // namespace cartan
