#include "sp1kepler/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sp1kepler/conformal.hpp"
#include "sp1kepler/dynamics.hpp"
#include "sp1kepler/parallel.hpp"
#include "sp1kepler/realization.hpp"
#include "sp1kepler/simd/kernels.hpp"
#include "sp1kepler/sternberg.hpp"

namespace sp1kepler {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxOrder = 8;

bool kepler_command(const std::string& c) { return c != "verify-algebra"; }

ordered_json header(const std::string& command, const RunConfig& cfg, double tol) {
  ordered_json j;
  j["schema"] = "1";
  j["command"] = command;
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["tol"] = tol;
  return j;
}

ordered_json check(const std::string& name, double residual, double tol, std::size_t count) {
  ordered_json c;
  c["name"] = name;
  c["count"] = count;
  c["max_residual"] = residual;
  c["tol"] = tol;
  c["pass"] = residual < tol;
  return c;
}

// Finalizes "pass" over report["checks"] and returns the matching exit code.
int close_report(ordered_json& report) {
  bool pass = true;
  for (const auto& c : report["checks"]) pass = pass && c["pass"].get<bool>();
  if (report.contains("dimension")) pass = pass && report["dimension"]["pass"].get<bool>();
  report["pass"] = pass;
  return pass ? exit_code::ok : exit_code::failure;
}

// Elementwise maximum of fn(i) over i < count, computed in parallel.
template <std::size_t K, class Fn>
std::array<double, K> sample_max(std::size_t count, Fn fn) {
  std::vector<std::array<double, K>> all(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) all[i] = fn(i);
  });
  std::array<double, K> m{};
  for (const auto& a : all)
    for (std::size_t k = 0; k < K; ++k) m[k] = std::max(m[k], a[k]);
  return m;
}

ConformalElement random_element(const ConformalAlgebra& alg, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ConformalElement e = alg.zero();
  for (auto& v : e.x) v = g(rng);
  for (auto& v : e.y) v = g(rng);
  const auto& k = simd::kernels();
  const std::size_t len = e.s.rows() * e.s.cols();
  for (const auto& q : alg.str_basis()) k.axpy(g(rng), q.data(), e.s.data(), len);
  return e;
}

ordered_json qvector_json(const QVector& v) {
  ordered_json a = ordered_json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back({v[i].w, v[i].x, v[i].y, v[i].z});
  return a;
}

std::string checks_csv(const ordered_json& report) {
  std::ostringstream os;
  os << "check,count,max_residual,tol,pass\n";
  for (const auto& c : report["checks"]) {
    os << c["name"].get<std::string>() << ',' << c["count"].get<std::size_t>() << ',' << std::setprecision(17)
       << c["max_residual"].get<double>() << ',' << std::setprecision(6) << c["tol"].get<double>() << ','
       << (c["pass"].get<bool>() ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace

double default_tolerance(const std::string& command) {
  if (command == "verify-algebra") return 1e-10;
  if (command == "verify-realization") return 1e-12;
  if (command == "simulate") return 1e-8;
  return 1e-9;
}

void validate(const RunConfig& cfg) {
  static const std::vector<std::string> commands = {"verify-algebra", "verify-realization", "verify-quadratic",
                                                    "verify-pullback", "simulate"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  }
  const std::size_t min_n = kepler_command(cfg.command) ? 2 : 1;
  if (cfg.n < min_n || cfg.n > kMaxOrder) {
    throw std::invalid_argument("--n must be in [" + std::to_string(min_n) + ", " + std::to_string(kMaxOrder) + "]");
  }
  if (!std::isfinite(cfg.mu) || cfg.mu < 0.0) throw std::invalid_argument("--mu must be finite and >= 0");
  if (cfg.samples == 0) throw std::invalid_argument("--samples must be positive");
  if (cfg.tol && (!std::isfinite(*cfg.tol) || *cfg.tol <= 0.0)) throw std::invalid_argument("--tol must be positive");
  if (!std::isfinite(cfg.dt) || cfg.dt <= 0.0) throw std::invalid_argument("--dt must be positive");
  if (!std::isfinite(cfg.t_end) || cfg.t_end < 0.0) throw std::invalid_argument("--t-end must be >= 0");
  if (cfg.t_end / cfg.dt > 1e9) throw std::invalid_argument("--t-end / --dt exceeds 1e9 steps");
  parse_method(cfg.method);
  if (cfg.format != "json" && cfg.format != "csv") throw std::invalid_argument("--format must be json or csv");
  if (cfg.start != "bound" && cfg.start != "radial") throw std::invalid_argument("--start must be bound or radial");
  if (cfg.start == "radial" && cfg.mu != 0.0) throw std::invalid_argument("--start radial needs --mu 0");
  if (cfg.record_every == 0) throw std::invalid_argument("--record-every must be positive");
  if (cfg.jacobi != "auto" && cfg.jacobi != "full" && cfg.jacobi != "sampled") {
    throw std::invalid_argument("--jacobi must be auto, full or sampled");
  }
  if (cfg.zero_w && cfg.mu != 0.0) throw std::invalid_argument("--zero-w forces mu = 0");
}

CommandResult cmd_verify_algebra(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(default_tolerance("verify-algebra"));
  const ConformalAlgebra alg(cfg.n);
  CommandResult res;
  auto& rep = res.report;
  rep = header("verify-algebra", cfg, tol);

  // so*(4n) for n >= 2; H_1(H) = R, whose conformal algebra is sl(2, R)
  const std::size_t expected = cfg.n == 1 ? 3 : 2 * cfg.n * (4 * cfg.n - 1);
  const std::size_t expected_str = cfg.n == 1 ? 1 : 4 * cfg.n * cfg.n;
  rep["dimension"] = {{"dim_v", alg.dim_v()},
                      {"dim_str", alg.dim_str()},
                      {"dim", alg.dim()},
                      {"expected", expected},
                      {"pass", alg.dim() == expected && alg.dim_str() == expected_str}};

  rep["checks"] = ordered_json::array();
  const auto random = sample_max<1>(cfg.samples, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, stream::algebra, i);
    const auto a = random_element(alg, rng), b = random_element(alg, rng), c = random_element(alg, rng);
    return std::array<double, 1>{jacobi_residual(alg, a, b, c) / (a.norm() * b.norm() * c.norm())};
  });
  rep["checks"].push_back(check("jacobi_random", random[0], tol, cfg.samples));

  const bool full = cfg.jacobi == "full" || (cfg.jacobi == "auto" && cfg.n <= 3);
  if (full) {
    const JacobiSweep sweep = jacobi_generator_sweep(alg);
    rep["checks"].push_back(check("jacobi_generators", sweep.max_residual, tol, sweep.triples));
  }

  const auto gens = generators(alg);
  const std::size_t m = gens.size();
  const double closure = parallel_max(m, [&](std::size_t i) {
    ConformalElement out = alg.zero();
    double worst = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      alg.bracket_into(gens[i], gens[j], out);
      worst = std::max(worst, alg.str_projection_residual(out.s) / std::max(1.0, frobenius(out.s)));
    }
    return worst;
  });
  rep["checks"].push_back(check("closure", closure, tol, m * (m - 1) / 2));
  res.exit_code = close_report(rep);
  return res;
}

CommandResult cmd_verify_realization(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(default_tolerance("verify-realization"));
  const RealizationFamily fam = build_observables(cfg.n);
  const SoStarReport so = verify_so_star_relations(fam);
  const MomentRelationReport mr = verify_moment_relations(fam);
  CommandResult res;
  auto& rep = res.report;
  rep = header("verify-realization", cfg, tol);
  rep["checks"] = ordered_json::array();
  for (const auto& r : so.relations) rep["checks"].push_back(check(r.name, r.max_residual, tol, r.checks));
  rep["checks"].push_back(check("xi_coadjoint", mr.coadjoint, tol, 3));
  rep["checks"].push_back(check("xi_invariance", mr.invariance, tol, 3 * (2 * fam.dim() + fam.dim() * fam.dim())));
  // {xi^1, xi^2} = +xi^3; reported, not gated.
  rep["alternate_forms"] = ordered_json::array({check("xi_coadjoint_plus", mr.coadjoint_plus, tol, 3)});
  res.exit_code = close_report(rep);
  return res;
}

CommandResult cmd_verify_quadratic(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(default_tolerance("verify-quadratic"));
  const JordanBasis basis(cfg.n);
  const auto m = sample_max<10>(cfg.samples, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, stream::quadratic, i);
    PhasePoint p = sample_leaf({cfg.n, cfg.mu}, rng);
    if (cfg.zero_w) p = PhasePoint(p.Z, QVector(cfg.n));
    const RealizationValues v = realization_values(basis, p);
    const auto sec = secondary_quadratic_residuals(v);
    return std::array<double, 10>{primary_quadratic_residual(v),
                                  sec[0], sec[1], sec[2], sec[3], sec[4], sec[5],
                                  energy_formula_residual(v),
                                  relation_vi_complex_residual(v),
                                  energy_formula_complex_residual(v)};
  });
  CommandResult res;
  auto& rep = res.report;
  rep = header("verify-quadratic", cfg, tol);
  rep["mu"] = cfg.mu;
  rep["samples"] = cfg.samples;
  static const char* names[] = {"primary",       "secondary_i",  "secondary_ii", "secondary_iii",
                                "secondary_iv",  "secondary_v",  "secondary_vi", "energy_formula"};
  rep["checks"] = ordered_json::array();
  for (std::size_t k = 0; k < 8; ++k) rep["checks"].push_back(check(names[k], m[k], tol, cfg.samples));
  // Coefficients of the complex case; reported, not gated.
  rep["alternate_forms"] = ordered_json::array({check("secondary_vi_complex", m[8], tol, cfg.samples),
                                           check("energy_formula_complex", m[9], tol, cfg.samples)});
  res.exit_code = close_report(rep);
  return res;
}

CommandResult cmd_verify_pullback(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(default_tolerance("verify-pullback"));
  const auto m = sample_max<2>(cfg.samples, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, stream::pullback, i);
    QVector z = gaussian_qvector(cfg.n, rng);
    while (norm(z) <= kDomainEps) z = gaussian_qvector(cfg.n, rng);
    QVector w = cfg.zero_w ? QVector(cfg.n) : gaussian_qvector(cfg.n, rng);
    const PullbackResiduals r = pullback_check(z, w);
    return std::array<double, 2>{r.position, r.energy};
  });
  CommandResult res;
  auto& rep = res.report;
  rep = header("verify-pullback", cfg, tol);
  rep["samples"] = cfg.samples;
  rep["checks"] = ordered_json::array({check("position", m[0], tol, cfg.samples),
                                       check("energy", m[1], tol, cfg.samples)});
  res.exit_code = close_report(rep);
  return res;
}

namespace {

ordered_json conserved_json(const ConservedReport& cr, double tol) {
  ordered_json d;
  const std::pair<const char*, double> drifts[] = {{"H", cr.drift_H},   {"rho", cr.drift_rho}, {"mu", cr.drift_mu},
                                                   {"L", cr.drift_L},   {"A", cr.drift_A},     {"L2", cr.drift_L2},
                                                   {"A2", cr.drift_A2}};
  ordered_json checks = ordered_json::array();
  for (const auto& [name, v] : drifts) checks.push_back(check(std::string("drift_") + name, v, tol, cr.series.size()));
  checks.push_back(check("energy_formula", cr.max_energy_residual, tol, cr.series.size()));
  d["checks"] = checks;
  d["alternate_forms"] = ordered_json::array({check("energy_formula_complex", cr.max_energy_residual_complex, tol, cr.series.size())});
  ordered_json trace = ordered_json::array();
  for (const auto& s : cr.series) trace.push_back({s.t, s.H, s.energy_residual});
  d["trace_columns"] = {"t", "H", "energy_formula_residual"};
  d["trace"] = trace;
  return d;
}

}  // namespace

CommandResult cmd_simulate(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(default_tolerance("simulate"));
  PhasePoint p0;
  if (cfg.start == "radial") {
    p0 = radial_infall_start(cfg.n, 1.0);
  } else {
    Rng rng = make_rng(cfg.seed, stream::simulate);
    p0 = bound_orbit_start(cfg.n, cfg.mu, rng);
  }
  IntegratorOptions opt;
  opt.dt = cfg.dt;
  opt.t_end = cfg.t_end;
  opt.method = parse_method(cfg.method);
  opt.record_every = cfg.record_every;
  opt.seed = cfg.seed;

  CommandResult res;
  auto& rep = res.report;
  rep = header("simulate", cfg, tol);
  rep["mu"] = cfg.mu;
  rep["integrator"] = cfg.method;
  rep["dt"] = cfg.dt;
  rep["t_end"] = cfg.t_end;
  rep["record_every"] = cfg.record_every;
  rep["start"] = cfg.start;
  rep["initial"] = {{"Z", qvector_json(p0.Z)},
                    {"W", qvector_json(p0.W)},
                    {"H", hamiltonian_upstairs(p0)},
                    {"mu", magnetic_charge(p0)}};

  Trajectory tr;
  try {
    tr = integrate(p0, opt);
    rep["status"] = "completed";
  } catch (const NearCollision& e) {
    tr = e.partial();
    rep["status"] = "near_collision";
    rep["diagnostic"] = e.what();
    rep["abort_time"] = e.time();
  } catch (const ConvergenceFailure& e) {
    rep["status"] = "no_convergence";
    rep["diagnostic"] = e.what();
    res.exit_code = exit_code::abort;
    rep["pass"] = false;
    return res;
  }
  rep["samples"] = tr.samples.size();
  const ordered_json cj = conserved_json(conserved_report(tr), tol);
  for (auto it = cj.begin(); it != cj.end(); ++it) rep[it.key()] = it.value();
  res.csv = tr.to_csv();
  if (rep["status"] != "completed") {
    rep["pass"] = false;
    res.exit_code = exit_code::abort;
    return res;
  }
  res.exit_code = close_report(rep);
  return res;
}

CommandResult run_command(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.command == "verify-algebra") return cmd_verify_algebra(cfg);
  if (cfg.command == "verify-realization") return cmd_verify_realization(cfg);
  if (cfg.command == "verify-quadratic") return cmd_verify_quadratic(cfg);
  if (cfg.command == "verify-pullback") return cmd_verify_pullback(cfg);
  return cmd_simulate(cfg);
}

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
    os << contents;
    os.flush();
    if (!os) throw std::runtime_error("write to " + tmp + " failed");
  }
  std::filesystem::rename(tmp, path);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson realization of so*(4n) on the Sp(1)-Kepler phase spaces", "sp1kepler"};
  app.require_subcommand(1);
  RunConfig cfg;
  double tol = 0.0;
  std::vector<CLI::Option*> tol_opts;

  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--n", cfg.n, "order of the Jordan algebra H_n(H)")->capture_default_str();
    s->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
    tol_opts.push_back(s->add_option("--tol", tol, "pass threshold (command default when omitted)"));
    s->add_option("--output", cfg.output, "output path (simulate: prefix for .json and .csv)");
    s->add_option("--format", cfg.format, "json or csv")->capture_default_str();
    return s;
  };

  CLI::App* alg = sub("verify-algebra", "Jacobi, closure and dimension checks of co = V + str + V*");
  alg->add_option("--samples", cfg.samples, "random Jacobi triples")->capture_default_str();
  alg->add_option("--jacobi", cfg.jacobi, "generator triples: auto (n <= 3), full or sampled")->capture_default_str();

  sub("verify-realization", "bracket relations of X, Y, S as exact quadratic-form identities");

  CLI::App* quad = sub("verify-quadratic", "primary, secondary and energy relations on sampled leaf points");
  quad->add_option("--mu", cfg.mu, "magnetic charge")->capture_default_str();
  quad->add_option("--samples", cfg.samples, "leaf points")->capture_default_str();
  quad->add_flag("--zero-w", cfg.zero_w, "sample with W = 0");

  CLI::App* pull = sub("verify-pullback", "pullback identities through (x, pi)");
  pull->add_option("--samples", cfg.samples, "random points")->capture_default_str();
  pull->add_flag("--zero-w", cfg.zero_w, "sample with W = 0");

  CLI::App* sim = sub("simulate", "integrate the Sp(1)-Kepler flow and report conserved quantities");
  sim->add_option("--mu", cfg.mu, "magnetic charge")->capture_default_str();
  sim->add_option("--dt", cfg.dt, "step")->capture_default_str();
  sim->add_option("--t-end", cfg.t_end, "final time")->capture_default_str();
  sim->add_option("--method", cfg.method, "rk4 or midpoint")->capture_default_str();
  sim->add_option("--start", cfg.start, "bound or radial")->capture_default_str();
  sim->add_option("--record-every", cfg.record_every, "keep every k-th step")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code::usage;
  }
  for (const auto* o : tol_opts)
    if (o->count() > 0) cfg.tol = tol;
  for (const auto* s : app.get_subcommands()) cfg.command = s->get_name();

  CommandResult res;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    res = run_command(cfg);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::abort;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  err << cfg.command << ": " << (res.report.value("pass", false) ? "pass" : "FAIL") << " (runtime " << secs
      << " s, kernels " << simd::kernels().name << ")\n";
  if (res.report.contains("diagnostic")) err << "diagnostic: " << res.report["diagnostic"].get<std::string>() << "\n";

  const std::string json = res.report.dump(2) + "\n";
  try {
    if (cfg.command == "simulate") {
      if (!cfg.output.empty()) {
        write_atomic(cfg.output + ".csv", res.csv);
        write_atomic(cfg.output + ".json", json);
      } else {
        out << (cfg.format == "csv" ? res.csv : json);
      }
    } else {
      const std::string body = cfg.format == "csv" ? checks_csv(res.report) : json;
      if (!cfg.output.empty()) write_atomic(cfg.output, body);
      else out << body;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::abort;
  }
  return res.exit_code;
}

}  // namespace sp1kepler
