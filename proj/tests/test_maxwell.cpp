#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cartan/expmap.hpp"
#include "cartan/maxwell.hpp"
#include "cartan/pendulum.hpp"
#include "support/oracles.hpp"

using namespace cartan;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent transcription of the three root functions, straight from the
// source formulas, evaluated with the library's Jacobi engine.  Guards
// against sign or factor slips in the production copies.
double ref_f1z(double p, Modulus m) {
  const EllipticValues v = jacobi(p, m);
  const double g = 2.0 * v.eps - p;
  return v.sn * v.dn - g * v.cn;
}

double ref_f1v(double p, Modulus m) {
  const EllipticValues v = jacobi(p, m);
  const double k2 = m.k2();
  const double g = 2.0 * v.eps - p;
  return (4.0 / 3.0) * v.dn * v.sn *
             (g * g * g - p - 2.0 * g * (1.0 - (2.0 - 6.0 * v.cn * v.cn) * k2) +
              8.0 * k2 * v.sn * v.cn * v.dn) +
         4.0 * v.cn * g * g * (1.0 - 2.0 * k2 * v.sn * v.sn);
}

double ref_f2v(double p, Modulus m) {
  const EllipticValues v = jacobi(p, m);
  const double k2 = m.k2();
  const double g = 2.0 * v.eps - (2.0 - k2) * p;
  return (4.0 / 3.0) *
         (v.dn * (8.0 * k2 * v.cn * v.cn * v.sn * v.sn +
                  g * g * (3.0 - 6.0 * v.sn * v.sn)) +
          v.cn * v.sn *
              (g * g * g - k2 * k2 * p -
               2.0 * g * (4.0 + k2 * (1.0 - 6.0 * v.sn * v.sn))));
}

}  // namespace

TEST_CASE("root functions match the reference values") {
  CHECK(f1z(1.0, Modulus(0.5)) ==
        doctest::Approx(oracle::f1z_10_05).epsilon(1e-13));
  CHECK(f1v(1.0, Modulus(0.5)) ==
        doctest::Approx(oracle::f1v_10_05).epsilon(1e-12));
  CHECK(f2v(1.0, Modulus(0.5)) ==
        doctest::Approx(oracle::f2v_10_05).epsilon(1e-9));
  CHECK(f2v(2.0, Modulus(0.6)) ==
        doctest::Approx(oracle::f2v_20_06).epsilon(1e-10));
  CHECK(f1z(2.0, Modulus(0.0)) ==
        doctest::Approx(oracle::f1z_20_00).epsilon(1e-13));
}

TEST_CASE("production copies agree with an independent transcription") {
  for (double k : {0.1, 0.35, 0.6, 0.8, 0.95}) {
    const Modulus m(k);
    const double K = complete_K(m);
    for (double f = 0.21; f < 3.9; f += 0.43) {
      const double p = f * K;
      CHECK(f1z(p, m) == doctest::Approx(ref_f1z(p, m)).epsilon(1e-12));
      CHECK(f1v(p, m) == doctest::Approx(ref_f1v(p, m)).epsilon(1e-12));
      CHECK(f2v(p, m) == doctest::Approx(ref_f2v(p, m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("small-modulus f2v follows the closed zero-modulus form") {
  // -pi/256 at p = pi/4.
  CHECK(f2v(kPi / 4, Modulus(0.0)) ==
        doctest::Approx(oracle::f2v0_pi4).epsilon(1e-13));
  // The dispatch threshold keeps the two branches consistent.
  const double p = 1.7;
  CHECK(f2v(p, Modulus(9e-4)) ==
        doctest::Approx(f2v(p, Modulus(0.0))).epsilon(1e-4));
}

TEST_CASE("first roots at k = 0") {
  // f1z at k = 0 reduces to sin - (p - ...) form whose first root solves
  // tan p = p.
  CHECK(first_root(RootTarget::f1z, Modulus(0.0)) ==
        doctest::Approx(oracle::p1z_0).epsilon(1e-11));
  CHECK(first_root(RootTarget::f2v, Modulus(0.0)) ==
        doctest::Approx(oracle::p2v_0).epsilon(1e-11));
}

TEST_CASE("normalized times match the reference values") {
  {
    const MaxwellTimes mt = normalized_times(Modulus(0.5), Stratum::C1);
    CHECK(mt.t1z == doctest::Approx(oracle::t1z_05).epsilon(1e-11));
    CHECK(mt.t1v == doctest::Approx(oracle::t1v_05).epsilon(1e-11));
    CHECK(std::isnan(mt.t2v));
    CHECK(mt.combined == doctest::Approx(oracle::t1z_05).epsilon(1e-11));
  }
  {
    const MaxwellTimes mt = normalized_times(Modulus(0.9), Stratum::C1);
    CHECK(mt.t1z == doctest::Approx(oracle::t1z_09).epsilon(1e-11));
    CHECK(mt.t1v == doctest::Approx(oracle::t1v_09).epsilon(1e-11));
    // k = 0.9 lies between k1 and k0, where the v-branch wins.
    CHECK(mt.combined == doctest::Approx(oracle::t1v_09).epsilon(1e-11));
  }
  {
    const MaxwellTimes mt = normalized_times(Modulus(0.5), Stratum::C2);
    CHECK(std::isnan(mt.t1z));
    CHECK(std::isnan(mt.t1v));
    CHECK(mt.t2v == doctest::Approx(oracle::t2v_05).epsilon(1e-11));
    CHECK(mt.combined == doctest::Approx(oracle::t2v_05).epsilon(1e-11));
  }
  {
    const MaxwellTimes mt = normalized_times(Modulus(0.9), Stratum::C2);
    CHECK(mt.t2v == doctest::Approx(oracle::t2v_09).epsilon(1e-11));
  }
  {
    // C6 ignores the modulus and reports the k = 0 limit.
    const MaxwellTimes mt = normalized_times(Modulus(0.7), Stratum::C6);
    CHECK(mt.t2v == doctest::Approx(oracle::t2v_0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(normalized_times(Modulus(0.5), Stratum::C3), stratum_error);
  CHECK_THROWS_AS(normalized_times(Modulus(0.5), Stratum::C7), stratum_error);
}

TEST_CASE("large-modulus t2v stays below 3/2") {
  CHECK(normalized_times(Modulus(0.999), Stratum::C2).t2v ==
        doctest::Approx(oracle::t2v_0999).epsilon(1e-10));
  CHECK(normalized_times(Modulus(0.9999), Stratum::C2).t2v ==
        doctest::Approx(oracle::t2v_09999).epsilon(1e-9));
}

TEST_CASE("critical moduli") {
  const CriticalModuli& cm = critical_moduli();
  CHECK(cm.k1 == doctest::Approx(oracle::k1_crit).epsilon(1e-9));
  CHECK(cm.k0 == doctest::Approx(oracle::k0_crit).epsilon(1e-9));
  CHECK(cm.k1 < cm.k0);
  // k0 coincides with the root of 2E(k) = K(k).
  CHECK(std::abs(cm.k0 - oracle::k_2EK) < 1e-9);
  // Both curves meet at 1 at k0.  The v-branch is smooth there; the
  // z-branch has a cube-root cusp, so its deviation scales like the cube
  // root of the k0 error.
  const MaxwellTimes at_k0 = normalized_times(Modulus(cm.k0), Stratum::C1);
  CHECK(at_k0.t1v == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(at_k0.t1z == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("t2v_zero is the C6 constant") {
  CHECK(t2v_zero() == doctest::Approx(oracle::t2v_0).epsilon(1e-12));
  CHECK(t2v_zero() == doctest::Approx(2.0 * oracle::p2v_0 / kPi).epsilon(1e-13));
}

TEST_CASE("cut time on the oscillating stratum") {
  // lambda with k = 0.6, alpha = 1.7 (phase position does not matter).
  const Covector l = covector_at_phase(Stratum::C1, Modulus(0.6), 0.3, 1.7,
                                       0.4);
  CHECK(cut_time(l) == doctest::Approx(oracle::cut_C1_06_17).epsilon(1e-10));
}

TEST_CASE("cut time on the rotating stratum") {
  const Covector l = covector_at_phase(Stratum::C2, Modulus(0.8), 0.1, 0.9,
                                       -0.7, -1);
  CHECK(cut_time(l) == doctest::Approx(oracle::cut_C2_08_09).epsilon(1e-10));
}

TEST_CASE("cut time equals 1 at the synchronized modulus") {
  // At k0 both normalized curves equal 1, so choosing alpha = (4K)^2 gives
  // cut time 4K * 1 / sqrt(alpha) = 1.
  const CriticalModuli& cm = critical_moduli();
  const double K = complete_K(Modulus(cm.k0));
  const Covector l = covector_at_phase(Stratum::C1, Modulus(cm.k0), 0.0,
                                       16.0 * K * K, 0.0);
  CHECK(cut_time(l) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("free rotation cut time") {
  const Covector l(0.2, -1.7, 0.0, 0.0);
  CHECK(cut_time(l) ==
        doctest::Approx(2.0 * kPi * oracle::t2v_0 / 1.7).epsilon(1e-12));
}

TEST_CASE("cut time is infinite on the degenerate strata") {
  CHECK(std::isinf(cut_time(Covector(0.4, 1.0, 0.25, 0.4))));    // C3
  CHECK(std::isinf(cut_time(Covector(0.0, 0.0, 1.0, 0.0))));     // C4
  CHECK(std::isinf(cut_time(Covector(kPi, 0.0, 1.0, 0.0))));     // C5
  CHECK(std::isinf(cut_time(Covector(0.3, 0.0, 0.0, 0.0))));     // C7
}

TEST_CASE("cut time scales under dilations") {
  const Covector l = covector_at_phase(Stratum::C1, Modulus(0.45), 0.2, 1.3,
                                       0.6);
  const double mu = 2.3;
  const auto [lm, unused] = dilate_cov(mu, l, 0.0);
  CHECK(cut_time(lm) == doctest::Approx(mu * cut_time(l)).epsilon(1e-12));
}

TEST_CASE("endpoints at the cut time land on the vanishing surface") {
  const Covector a = covector_at_phase(Stratum::C1, Modulus(0.6), 0.0, 1.7,
                                       0.4);
  CHECK(in_cut_candidate_set(a, cut_time(a)));
  const Covector b = covector_at_phase(Stratum::C2, Modulus(0.8), 0.0, 0.9,
                                       -0.7);
  CHECK(in_cut_candidate_set(b, cut_time(b)));
}

TEST_CASE("generic interior times stay off the vanishing surface") {
  const Covector l = covector_at_phase(Stratum::C1, Modulus(0.6), 0.0, 1.7,
                                       0.4);
  // tau = sqrt(alpha) t/2 away from the quarter-period lattice and t below
  // every Maxwell time: z V != 0.
  const double t = 0.6 * cut_time(l);
  CHECK(!in_cut_candidate_set(l, t));
  CHECK(maxwell_defect(l, t) > 1e-6);
}

TEST_CASE("fix predicate detects the symmetry fixed points") {
  const double alpha = 1.44;
  const Modulus k(0.55);
  const double K = complete_K(k);
  // Phase 0: tau = sqrt(alpha) t / 2, on the lattice iff t = 2mK/sqrt(alpha).
  const Covector l = covector_at_phase(Stratum::C1, k, 0.0, alpha, 0.2);
  CHECK(fix_predicate(l, 2.0 * K / std::sqrt(alpha)));
  CHECK(fix_predicate(l, 4.0 * K / std::sqrt(alpha)));
  CHECK(!fix_predicate(l, 2.7 * K / std::sqrt(alpha)));
  CHECK_THROWS_AS(fix_predicate(Covector(0.1, 1.0, 0.0, 0.0), 1.0),
                  stratum_error);
}

TEST_CASE("fix predicate on the rotating stratum") {
  const double alpha = 0.81;
  const Modulus k(0.7);
  const double K = complete_K(k);
  // tau = (sqrt(alpha)/k)(phi + t/2); phase 0 gives t = 2mkK/sqrt(alpha).
  const Covector l = covector_at_phase(Stratum::C2, k, 0.0, alpha, -0.3);
  CHECK(fix_predicate(l, 2.0 * k.k() * K / std::sqrt(alpha)));
  CHECK(!fix_predicate(l, 3.1 * k.k() * K / std::sqrt(alpha)));
}
