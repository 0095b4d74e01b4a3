// Acceptance gate: one binary, one line per criterion, exit 0 only if all
// pass.  Each criterion is self-contained and timed against its budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/engel.hpp"
#include "cartan/maxwell.hpp"
#include "cartan/shooting.hpp"

using namespace cartan;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic uniforms; acceptance runs must be reproducible.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  double operator()() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * (*this)(); }
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }
};

Covector sample_c1(Rng& r, double kmin = 0.02, double kmax = 0.97) {
  const Modulus k(r.uniform(kmin, kmax));
  const double alpha = r.log_uniform(0.25, 4.0);
  const double beta = r.uniform(-kPi, kPi);
  const double phi = r.uniform(0.0, 4.0 * complete_K(k) / std::sqrt(alpha));
  return covector_at_phase(Stratum::C1, k, phi, alpha, beta);
}

Covector sample_c2(Rng& r, double kmin = 0.05, double kmax = 0.95) {
  const Modulus k(r.uniform(kmin, kmax));
  const double alpha = r.log_uniform(0.25, 4.0);
  const double beta = r.uniform(-kPi, kPi);
  const int sign = r() < 0.5 ? -1 : +1;
  const double phi =
      r.uniform(0.0, 2.0 * k.k() * complete_K(k) / std::sqrt(alpha));
  return covector_at_phase(Stratum::C2, k, phi, alpha, beta, sign);
}

Covector sample_c6(Rng& r) {
  const double theta = r.uniform(-kPi, kPi);
  const double c = (r() < 0.5 ? -1.0 : 1.0) * r.log_uniform(0.3, 3.0);
  return Covector(theta, c, 0.0, 0.0);
}

struct Outcome {
  bool pass;
  std::string detail;
};

using CriterionFn = std::function<Outcome()>;

// ---- 1: constants ---------------------------------------------------------

Outcome c1_constants() {
  const CriticalModuli& cm = critical_moduli();
  const double t1z0 = normalized_times(Modulus(0.0), Stratum::C1).t1z;
  const double t2v0 = t2v_zero();
  std::ostringstream os;
  os << "k0=" << cm.k0 << " k1=" << cm.k1 << " t1z0=" << t1z0
     << " t2v0=" << t2v0;
  const bool ok = std::abs(cm.k0 - 0.909) <= 1e-3 &&
                  std::abs(cm.k1 - 0.802) <= 1e-3 &&
                  std::abs(t1z0 - 1.430) <= 1e-3 &&
                  std::abs(t2v0 - 1.465) <= 1e-3;
  return {ok, os.str()};
}

// ---- 2: root bounds on a 200-point grid -----------------------------------

Outcome c2_root_bounds() {
  const CriticalModuli& cm = critical_moduli();
  int bad = 0;
  std::string first;
  for (int i = 1; i <= 200; ++i) {
    const double k = double(i) / 201.0;
    const MaxwellTimes c1 = normalized_times(Modulus(k), Stratum::C1);
    const MaxwellTimes c2 = normalized_times(Modulus(k), Stratum::C2);
    bool ok = c1.t1z > 0.5 && c1.t1z < 1.5;
    ok = ok && c1.t1v > 1.0 && c1.t1v < 2.0;
    ok = ok && c2.t2v >= 1.0 && c2.t2v < 2.0;
    // branch switch: z-branch wins outside [k1, k0], v-branch inside
    const bool z_wins = (k < cm.k1) || (k > cm.k0);
    ok = ok && (z_wins ? c1.combined == c1.t1z : c1.combined == c1.t1v);
    if (!ok && bad++ == 0) {
      std::ostringstream os;
      os << "first failure at k=" << k;
      first = os.str();
    }
  }
  const double ta = normalized_times(Modulus(0.999), Stratum::C2).t2v;
  const double tb = normalized_times(Modulus(0.9999), Stratum::C2).t2v;
  if (!(ta <= 1.5 && tb <= 1.5)) {
    ++bad;
    first = "large-modulus t2v above 3/2";
  }
  std::ostringstream os;
  if (bad)
    os << bad << " grid failures; " << first;
  else
    os << "200 moduli in bounds, t2v(0.999)=" << ta << " t2v(0.9999)=" << tb;
  return {bad == 0, os.str()};
}

// ---- 3: zeta certificate ---------------------------------------------------

Outcome c3_zeta() {
  const ZetaCertificate& zc = zeta_certificate();
  const bool ok = zc.zeta < 2.0 && zc.less_than_two &&
                  zc.t1z_argmax == 0.0 && zc.t2v_argmax == 0.0 &&
                  std::abs(zc.t1z_max - 1.430) <= 1e-3 &&
                  std::abs(zc.t2v_max - 1.465) <= 1e-3;
  std::ostringstream os;
  os << "zeta=" << zc.zeta << " argmax(z)=" << zc.t1z_argmax
     << " argmax(v)=" << zc.t2v_argmax;
  return {ok, os.str()};
}

// ---- 4: Engel-Cartan inequality sweep --------------------------------------

Outcome c4_inequality() {
  Rng rng(0x5eedu);
  const double z = zeta();
  const double slack = 1e-9;
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    Covector l = i < 400   ? sample_c1(rng, 0.01, 0.995)
                 : i < 800 ? sample_c2(rng, 0.01, 0.995)
                           : sample_c6(rng);
    try {
      const CutComparison c = compare(l);
      if (!(c.tE <= c.tC * (1 + slack)) || !(c.tC <= z * c.tE * (1 + slack)))
        ++violations;
    } catch (const std::exception&) {
      ++violations;
    }
  }
  std::ostringstream os;
  os << violations << "/1000 violations";
  return {violations == 0, os.str()};
}

// ---- 5: exponential-map properties ------------------------------------------

Outcome c5_expmap() {
  Rng rng(0xfeedu);
  int bad = 0;
  std::string what;
  auto fail = [&](const char* tag) {
    if (bad++ == 0) what = tag;
  };
  const double tol = 1e-12;
  for (int i = 0; i < 200; ++i) {
    Covector l = i % 3 == 0   ? sample_c1(rng)
                 : i % 3 == 1 ? sample_c2(rng)
                              : sample_c6(rng);
    const double t = rng.uniform(0.2, 3.0);
    const GroupPoint q = cartan::exp(l, t, tol);
    const double scale =
        std::max({1.0, std::abs(q.x), std::abs(q.y), std::abs(q.z),
                  std::abs(q.v), std::abs(q.w)});

    const double mu = rng.uniform(0.5, 2.0);
    const auto [lm, tm] = dilate_cov(mu, l, t);
    const GroupPoint a = cartan::exp(lm, tm, tol);
    const GroupPoint b = dilate(mu, q);
    const double da =
        std::max({std::abs(a.x - b.x), std::abs(a.y - b.y),
                  std::abs(a.z - b.z), std::abs(a.v - b.v),
                  std::abs(a.w - b.w)});
    if (da > 1e-9 * scale * std::max(1.0, mu * mu * mu)) fail("dilation");

    const double eta = rng.uniform(-kPi, kPi);
    const GroupPoint c = cartan::exp(rotate_cov(eta, l), t, tol);
    const GroupPoint d = rotate(eta, q);
    const double dc =
        std::max({std::abs(c.x - d.x), std::abs(c.y - d.y),
                  std::abs(c.z - d.z), std::abs(c.v - d.v),
                  std::abs(c.w - d.w)});
    if (dc > 1e-9 * scale) fail("rotation");

    // Conservation is a property of the flow, not of a particular step size;
    // integrate tighter than the target so truncation error cannot mask it.
    if (std::abs(energy(pendulum_flow(l, t, 1e-14)) - energy(l)) > 1e-10)
      fail("energy");
  }
  // C7: straight lines with cubic moments.
  for (int i = 0; i < 50; ++i) {
    const double theta = rng.uniform(-kPi, kPi);
    const double t = rng.uniform(0.2, 2.5);
    const GroupPoint q = cartan::exp(Covector(theta, 0, 0, 0), t, tol);
    const double t3 = t * t * t / 6.0;
    const double err = std::max(
        {std::abs(q.x - t * std::cos(theta)),
         std::abs(q.y - t * std::sin(theta)), std::abs(q.z),
         std::abs(q.v - std::sin(theta) * t3),
         std::abs(q.w + std::cos(theta) * t3)});
    if (err > 1e-9) fail("line");
  }
  // C6: circles of radius 1/|c|.
  for (int i = 0; i < 50; ++i) {
    const Covector l = sample_c6(rng);
    const double t = rng.uniform(0.2, 2.5);
    const GroupPoint q = cartan::exp(l, t, tol);
    const double cx = -std::sin(l.theta) / l.c;
    const double cy = std::cos(l.theta) / l.c;
    const double r = std::hypot(q.x - cx, q.y - cy);
    if (std::abs(r - 1.0 / std::abs(l.c)) > 1e-9) fail("circle");
  }
  std::ostringstream os;
  if (bad)
    os << bad << " failures, first: " << what;
  else
    os << "200 equivariance + 100 closed-form samples within tolerance";
  return {bad == 0, os.str()};
}

// ---- 6: Maxwell membership ---------------------------------------------------

Outcome c6_maxwell() {
  Rng rng(0xcafeu);
  int bad = 0;
  std::vector<double> interior;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Covector l = i % 2 ? sample_c1(rng, 0.05, 0.95)
                             : sample_c2(rng, 0.05, 0.95);
    const double tc = cut_time(l);
    const double defect = maxwell_defect(l, tc, 1e-12);
    worst = std::max(worst, defect);
    if (!(defect <= 1e-6)) ++bad;
    interior.push_back(maxwell_defect(l, 0.8 * tc, 1e-12));
  }
  std::nth_element(interior.begin(), interior.begin() + 50, interior.end());
  const double median = interior[50];
  std::ostringstream os;
  os << "worst normalized |zV| at cut " << worst << ", median at 0.8t "
     << median;
  return {bad == 0 && median > 1e-3, os.str()};
}

// ---- 7: shooting round trip ---------------------------------------------------

// Round trips live on the uniqueness domain {z V != 0}: C6 circle endpoints
// sit exactly on the excluded surface (V vanishes along every circle), so the
// samples come from C1 and C2, whose images stay off the surface except at
// isolated Maxwell and fixed-point times.
Outcome c7_shooting() {
  Rng rng(0xd15cu);
  int converged = 0;
  double max_param = 0.0, max_res = 0.0;
  int n = 0;
  std::string first_fail;
  for (int i = 0; i < 500; ++i) {
    Covector l = i < 250 ? sample_c1(rng, 0.02, 0.97)
                         : sample_c2(rng, 0.05, 0.95);
    const double u = rng.uniform(0.05, 0.95);
    const double t = u * cut_time(l);
    // Round-trip targets carry the generator's own endpoint error times the
    // local conditioning into the recovered parameters, so integrate them
    // tighter than the solver's working tolerance.
    const GroupPoint q = cartan::exp(l, t, 1e-14);
    ++n;
    try {
      const ShootResult r = solve(q);
      const double perr = std::max(
          {std::abs(wrap_angle(r.lambda.theta - l.theta)),
           std::abs(r.lambda.c - l.c),
           std::abs(r.lambda.alpha * std::cos(r.lambda.beta) -
                    l.alpha * std::cos(l.beta)),
           std::abs(r.lambda.alpha * std::sin(r.lambda.beta) -
                    l.alpha * std::sin(l.beta)),
           std::abs(r.t - t)});
      max_param = std::max(max_param, perr);
      max_res = std::max(max_res, r.residual);
      if (r.residual <= 1e-9 && perr < 1e-6) {
        ++converged;
      } else if (first_fail.empty()) {
        std::ostringstream os;
        os << "sample " << i << " perr=" << perr << " res=" << r.residual;
        first_fail = os.str();
      }
    } catch (const std::exception& e) {
      if (first_fail.empty()) {
        std::ostringstream os;
        os << "sample " << i << " threw: " << e.what();
        first_fail = os.str();
      }
    }
  }
  std::ostringstream os;
  os << converged << "/" << n << " converged, max param err " << max_param
     << ", max residual " << max_res;
  if (!first_fail.empty()) os << "; " << first_fail;
  return {converged == n, os.str()};
}

// ---- 8: cut-time curves CSV ---------------------------------------------------

Outcome c8_fig3() {
  const char* path = "acceptance_fig3.csv";
  std::ofstream out(path);
  if (!out) return {false, "cannot open acceptance_fig3.csv"};
  out << "family,k,engel,cartan\n";
  char buf[160];
  int bad = 0;
  for (int i = 1; i <= 199; ++i) {
    const double k = double(i) / 200.0;
    const MaxwellTimes a = normalized_times(Modulus(k), Stratum::C1);
    const double e1 = std::min(1.0, a.t1z);
    const double c1 = a.combined;
    std::snprintf(buf, sizeof buf, "inflectional,%.15g,%.15g,%.15g\n", k, e1,
                  c1);
    out << buf;
    if (!(c1 >= e1 - 1e-12)) ++bad;
    const MaxwellTimes b = normalized_times(Modulus(k), Stratum::C2);
    std::snprintf(buf, sizeof buf, "non-inflectional,%.15g,%.15g,%.15g\n", k,
                  1.0, b.t2v);
    out << buf;
    if (!(b.t2v >= 1.0 - 1e-12)) ++bad;
  }
  std::ostringstream os;
  if (bad)
    os << bad << " rows violate dominance";
  else
    os << "398 rows, Cartan >= Engel row-wise, wrote " << path;
  return {bad == 0, os.str()};
}

struct Criterion {
  const char* name;
  double budget_s;  // 0 = no budget stated
  CriterionFn fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"constants k0,k1,t1z(0),t2v(0)", 10, c1_constants},
      {"root bounds on 200-point grid", 30, c2_root_bounds},
      {"zeta certificate", 30, c3_zeta},
      {"Engel-Cartan inequality x1000", 60, c4_inequality},
      {"exponential-map properties", 60, c5_expmap},
      {"Maxwell membership at cut", 60, c6_maxwell},
      {"shooting round trip x500", 600, c7_shooting},
      {"cut-time curves CSV", 0, c8_fig3},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (criteria[i].budget_s > 0 && dt > criteria[i].budget_s) {
      o.pass = false;
      o.detail += " [over budget]";
    }
    std::printf("[%zu/8] %-32s %s  (%.2f s)  %s\n", i + 1, criteria[i].name,
                o.pass ? "PASS" : "FAIL", dt, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (failures) std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
