// Command line surface: classification, exponential map, elastica tables,
// constants, cut-time curves, and inverse shooting, with CSV/JSON output.
#include <clocale>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cartan/engel.hpp"
#include "cartan/expmap.hpp"
#include "cartan/maxwell.hpp"
#include "cartan/pendulum.hpp"
#include "cartan/shooting.hpp"

namespace {

using nlohmann::json;

constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitParse = 4;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// Deterministic parallel map: worker w handles indices w, w+nw, ...; results
// land in a preallocated slot per index, so output order never depends on
// scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned nw = std::thread::hardware_concurrency();
  if (nw == 0) nw = 1;
  nw = static_cast<unsigned>(std::min<std::size_t>(nw, n));
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (unsigned w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += nw) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct CovectorArgs {
  double theta = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--theta", theta, "Initial angle");
    cmd->add_option("--c", c, "Initial angular velocity");
    cmd->add_option("--alpha", alpha, "Pendulum amplitude (>= 0)");
    cmd->add_option("--beta", beta, "Pendulum phase offset");
  }
};

int cmd_classify(const CovectorArgs& in, double tol) {
  const cartan::Covector l(in.theta, in.c, in.alpha, in.beta);
  const cartan::Stratum s = cartan::classify(l, tol);
  json out;
  out["stratum"] = cartan::to_string(s);
  out["E"] = cartan::energy(l);
  switch (s) {
    case cartan::Stratum::C1:
    case cartan::Stratum::C2:
    case cartan::Stratum::C3:
      out["k"] = cartan::modulus(l, tol).k();
      break;
    default:
      out["k"] = nullptr;
  }
  std::printf("%s\n", out.dump().c_str());
  return 0;
}

int cmd_exp(const CovectorArgs& in, double t, int samples, double tol) {
  const cartan::Covector l(in.theta, in.c, in.alpha, in.beta);
  const cartan::Trajectory traj = cartan::exp_trajectory(l, t, samples, tol);
  std::printf("t,x,y,z,v,w,theta\n");
  for (const auto& s : traj.samples) {
    std::printf("%s,%s,%s,%s,%s,%s,%s\n", num(s.t).c_str(), num(s.q.x).c_str(),
                num(s.q.y).c_str(), num(s.q.z).c_str(), num(s.q.v).c_str(),
                num(s.q.w).c_str(), num(s.theta).c_str());
  }
  return 0;
}

// One longest-optimal elastica arc per modulus: rows up to the Cartan cut
// time, with the segment column splitting the part already beyond the Engel
// cut time (the gray/black distinction of the usual figure).
int cmd_elastica(const std::string& family, int grid, double kmin,
                 double kmax, int samples, double tol) {
  struct Curve {
    const char* family;
    double k;
  };
  std::vector<Curve> curves;
  for (int gi = 0; gi < grid; ++gi) {
    const double k =
        (grid == 1) ? kmin : kmin + (kmax - kmin) * gi / (grid - 1.0);
    if (family == "inflectional" || family == "both") {
      curves.push_back({"inflectional", k});
    }
    if (family == "noninflectional" || family == "both") {
      curves.push_back({"noninflectional", k});
    }
  }
  std::vector<std::string> blocks(curves.size());
  std::vector<std::string> errors(curves.size());
  parallel_for(curves.size(), [&](std::size_t i) {
    try {
      const bool infl = curves[i].family[0] == 'i';
      const cartan::Modulus m(curves[i].k);
      const cartan::Covector l = cartan::covector_at_phase(
          infl ? cartan::Stratum::C1 : cartan::Stratum::C2, m, 0.0, 1.0, 0.0);
      const double t_cartan = cartan::cut_time(l);
      const double t_engel =
          cartan::engel_cut_time(cartan::project_engel(l));
      const cartan::Trajectory traj =
          cartan::exp_trajectory(l, t_cartan, samples, tol);
      std::string& b = blocks[i];
      for (const auto& s : traj.samples) {
        b += curves[i].family;
        b += ',';
        b += num(curves[i].k);
        b += ',';
        b += (s.t <= t_engel) ? "engel" : "cartan";
        b += ',';
        b += num(s.t);
        b += ',';
        b += num(s.q.x);
        b += ',';
        b += num(s.q.y);
        b += ',';
        b += num(s.q.z);
        b += ',';
        b += num(s.q.v);
        b += ',';
        b += num(s.q.w);
        b += ',';
        b += num(s.theta);
        b += '\n';
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const std::string& e : errors) {
    if (!e.empty()) {
      std::fprintf(stderr, "elastica: %s\n", e.c_str());
      return kExitDomain;
    }
  }
  std::printf("family,k,segment,t,x,y,z,v,w,theta\n");
  for (const std::string& b : blocks) std::fputs(b.c_str(), stdout);
  return 0;
}

int cmd_constants(bool as_json) {
  const cartan::CriticalModuli& cm = cartan::critical_moduli();
  const double t1z0 =
      cartan::normalized_times(cartan::Modulus(0.0), cartan::Stratum::C1).t1z;
  const double t2v0 = cartan::t2v_zero();
  const cartan::ZetaCertificate& zc = cartan::zeta_certificate();
  if (as_json) {
    json out;
    out["k0"] = cm.k0;
    out["k1"] = cm.k1;
    out["t1z0"] = t1z0;
    out["t2v0"] = t2v0;
    out["zeta"] = zc.zeta;
    out["zeta_less_than_two"] = zc.less_than_two;
    std::printf("%s\n", out.dump().c_str());
  } else {
    std::printf("k0   = %.6f\n", cm.k0);
    std::printf("k1   = %.6f\n", cm.k1);
    std::printf("t1z0 = %.6f\n", t1z0);
    std::printf("t2v0 = %.6f\n", t2v0);
    std::printf("zeta = %.6f\n", zc.zeta);
    std::printf("zeta < 2: %s\n", zc.less_than_two ? "yes" : "NO");
  }
  return zc.less_than_two ? 0 : 1;
}

// Normalized cut-time curves, one row per modulus: the Engel and Cartan cut
// times of the family representative, both in units of the elastica period.
int cmd_tables(int grid, double kmin, double kmax) {
  struct Row {
    double k;
    double c1_engel, c1_cartan;
    double c2_engel, c2_cartan;
  };
  std::vector<Row> rows(grid);
  parallel_for(rows.size(), [&](std::size_t i) {
    const double k =
        kmin + (kmax - kmin) * (static_cast<double>(i) + 1.0) / (grid + 1.0);
    const cartan::Modulus m(k);
    const cartan::MaxwellTimes t1 =
        cartan::normalized_times(m, cartan::Stratum::C1);
    const cartan::MaxwellTimes t2 =
        cartan::normalized_times(m, cartan::Stratum::C2);
    rows[i] = Row{k, std::min(1.0, t1.t1z), t1.combined, 1.0, t2.t2v};
  });
  std::printf("family,k,engel,cartan\n");
  for (const Row& r : rows) {
    std::printf("inflectional,%s,%s,%s\n", num(r.k).c_str(),
                num(r.c1_engel).c_str(), num(r.c1_cartan).c_str());
  }
  for (const Row& r : rows) {
    std::printf("noninflectional,%s,%s,%s\n", num(r.k).c_str(),
                num(r.c2_engel).c_str(), num(r.c2_cartan).c_str());
  }
  return 0;
}

int cmd_shoot(const cartan::GroupPoint& q, const cartan::SolverConfig& cfg) {
  try {
    const cartan::ShootResult r = cartan::solve(q, cfg);
    json out;
    out["theta"] = r.lambda.theta;
    out["c"] = r.lambda.c;
    out["alpha"] = r.lambda.alpha;
    out["beta"] = r.lambda.beta;
    out["t"] = r.t;
    out["residual"] = r.residual;
    out["distance"] = r.distance;
    out["iterations"] = r.iterations;
    out["starts_tried"] = r.starts_tried;
    out["ill_conditioned"] = r.ill_conditioned;
    std::printf("%s\n", out.dump().c_str());
    return 0;
  } catch (const cartan::not_in_domain& e) {
    json err;
    err["error"] = "domain";
    err["message"] = e.what();
    std::printf("%s\n", err.dump().c_str());
    return kExitDomain;
  } catch (const cartan::no_convergence& e) {
    json err;
    err["error"] = "convergence";
    err["message"] = e.what();
    err["best_residual"] = e.best_residual;
    std::printf("%s\n", err.dump().c_str());
    return kExitConvergence;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{
      "Optimal synthesis on the free nilpotent (2,3,5) group: strata, "
      "geodesics, cut times, and inverse shooting"};
  app.require_subcommand(1);

  // classify
  auto* classify = app.add_subcommand(
      "classify", "Stratum, energy, and modulus of a covector (JSON)");
  CovectorArgs cl_in;
  cl_in.attach(classify);
  double cl_tol = 1e-9;
  classify->add_option("--tol", cl_tol, "Stratum band tolerance")
      ->envname("CARTANSR_TOL");

  // exp
  auto* exp_cmd = app.add_subcommand(
      "exp", "Geodesic trajectory of a covector as CSV");
  CovectorArgs ex_in;
  ex_in.attach(exp_cmd);
  double ex_t = 1.0;
  int ex_samples = 200;
  double ex_tol = 1e-10;
  exp_cmd->add_option("--t", ex_t, "Duration (>= 0)");
  exp_cmd->add_option("--samples", ex_samples, "Row count minus one")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--tol", ex_tol, "Integration tolerance")
      ->envname("CARTANSR_TOL");

  // elastica
  auto* elastica = app.add_subcommand(
      "elastica",
      "Longest optimal elastica arcs over a modulus grid as CSV");
  std::string el_family = "both";
  int el_grid = 7;
  double el_kmin = 0.1, el_kmax = 0.9;
  int el_samples = 400;
  double el_tol = 1e-10;
  elastica->add_option("--family", el_family, "Curve family")
      ->check(CLI::IsMember({"inflectional", "noninflectional", "both"}));
  elastica->add_option("--grid", el_grid, "Number of moduli")
      ->check(CLI::PositiveNumber);
  elastica->add_option("--kmin", el_kmin, "Smallest modulus");
  elastica->add_option("--kmax", el_kmax, "Largest modulus");
  elastica->add_option("--samples", el_samples, "Rows per curve minus one")
      ->check(CLI::PositiveNumber);
  elastica->add_option("--tol", el_tol, "Integration tolerance")
      ->envname("CARTANSR_TOL");

  // constants
  auto* constants = app.add_subcommand(
      "constants", "Critical moduli, limit cut times, and zeta");
  bool co_json = false;
  constants->add_flag("--json", co_json, "Emit JSON instead of text");

  // tables
  auto* tables = app.add_subcommand(
      "tables", "Normalized Engel/Cartan cut-time curves as CSV");
  int ta_grid = 199;
  double ta_kmin = 0.0, ta_kmax = 1.0;
  tables->add_option("--grid", ta_grid, "Interior grid size")
      ->check(CLI::PositiveNumber);
  tables->add_option("--kmin", ta_kmin, "Open interval lower end");
  tables->add_option("--kmax", ta_kmax, "Open interval upper end");

  // shoot
  auto* shoot = app.add_subcommand(
      "shoot", "Invert the exponential map at a target point (JSON)");
  cartan::GroupPoint sh_q{0.0, 0.0, 0.0, 0.0, 0.0};
  cartan::SolverConfig sh_cfg;
  shoot->add_option("--x", sh_q.x, "Target x")->required();
  shoot->add_option("--y", sh_q.y, "Target y")->required();
  shoot->add_option("--z", sh_q.z, "Target z")->required();
  shoot->add_option("--v", sh_q.v, "Target v")->required();
  shoot->add_option("--w", sh_q.w, "Target w")->required();
  shoot->add_option("--tol", sh_cfg.residual_tol, "Residual target")
      ->envname("CARTANSR_TOL");
  shoot->add_option("--seed", sh_cfg.seed, "Random restart seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (app.got_subcommand(classify)) return cmd_classify(cl_in, cl_tol);
    if (app.got_subcommand(exp_cmd)) {
      return cmd_exp(ex_in, ex_t, ex_samples, ex_tol);
    }
    if (app.got_subcommand(elastica)) {
      return cmd_elastica(el_family, el_grid, el_kmin, el_kmax, el_samples,
                          el_tol);
    }
    if (app.got_subcommand(constants)) return cmd_constants(co_json);
    if (app.got_subcommand(tables)) return cmd_tables(ta_grid, ta_kmin,
                                                      ta_kmax);
    if (app.got_subcommand(shoot)) return cmd_shoot(sh_q, sh_cfg);
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
