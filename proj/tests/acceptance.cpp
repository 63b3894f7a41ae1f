// Acceptance run: one PASS/FAIL line per criterion, details indented below.
//
// Criteria 3, 5 and 8 are evaluated with the relations exactly as stated
// (coadjoint sign, complex-case coefficients in (vi) and the energy formula).
// Those forms do not hold for Sp(1), so their lines read FAIL; the corrected
// forms are measured alongside. The exit status is nonzero when any other
// criterion fails or when a corrected form fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sp1kepler/conformal.hpp"
#include "sp1kepler/dynamics.hpp"
#include "sp1kepler/parallel.hpp"
#include "sp1kepler/realization.hpp"
#include "sp1kepler/simd/kernels.hpp"
#include "sp1kepler/sternberg.hpp"

using namespace sp1kepler;

namespace {

constexpr std::uint64_t kSeed = 7;

// pinned tolerances
constexpr double kJacobiTol = 1e-10;
constexpr double kAlgebraSeconds = 30;
constexpr double kExactTol = 1e-12;
constexpr double kRealizationSeconds = 120;
constexpr double kPrimaryTol = 1e-10;
constexpr double kSecondaryTol = 1e-9;
constexpr double kPullbackTol = 1e-9;
constexpr double kOracleTol = 1e-6;
constexpr double kOracleStep = 1e-5;
constexpr double kDriftTol = 1e-8;
constexpr double kDynamicsSeconds = 60;
constexpr double kConservationTol = 1e-6;

constexpr std::size_t kJacobiTriples = 1000;
constexpr std::size_t kLeafPoints = 1000;
constexpr std::size_t kPullbackPoints = 1000;
constexpr std::size_t kOraclePairs = 500;
constexpr std::size_t kGradientPoints = 100;
constexpr std::size_t kConservationPoints = 100;

const std::size_t kGridN[] = {2, 3, 4, 5};
const double kGridMu[] = {0.0, 0.5, 1.0, 3.0};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  int id;
  bool pass;
  bool known_unattainable = false;  // stated form fails, corrected form measured
  bool corrected_pass = true;
};

std::vector<Outcome> outcomes;

void headline(int id, bool pass, const std::string& title) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", title.c_str());
  std::fflush(stdout);
}

template <class... Args>
void detail(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

ConformalElement random_element(const ConformalAlgebra& co, Rng& rng) {
  const std::size_t n = co.order();
  ConformalElement a = co.X(random_hermitian(n, rng));
  a.y = co.Y(random_hermitian(n, rng)).y;
  a.s = co.S(random_hermitian(n, rng), random_hermitian(n, rng)).s;
  return a;
}

QuadObservable random_quadratic(std::size_t n, Rng& rng) {
  const std::size_t d = 8 * n;
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(d, d);
  std::vector<double> b(d);
  for (auto& x : a.values()) x = g(rng);
  for (auto& x : b) x = g(rng);
  return QuadObservable(n, a, b, g(rng));
}

PhasePoint random_point(std::size_t n, Rng& rng) {
  QVector z = gaussian_qvector(n, rng);
  while (norm(z) <= 1e-3) z = gaussian_qvector(n, rng);
  return PhasePoint(z, gaussian_qvector(n, rng));
}

void criterion1() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::vector<std::string> lines;
  for (std::size_t n : {2, 3}) {
    const ConformalAlgebra co(n);
    const double random = parallel_max(kJacobiTriples, [&](std::size_t i) {
      Rng rng = make_rng(kSeed, 1, n * 1000000 + i);
      const auto a = random_element(co, rng), b = random_element(co, rng), c = random_element(co, rng);
      return jacobi_residual(co, a, b, c) / (a.norm() * b.norm() * c.norm());
    });
    const auto sweep = jacobi_generator_sweep(co);
    const std::size_t expected = 2 * n * (4 * n - 1);
    pass = pass && random < kJacobiTol && sweep.max_residual < kJacobiTol && co.dim() == expected;
    char buf[256];
    std::snprintf(buf, sizeof buf, "n=%zu: dim co = %zu (expected %zu, dim str = %zu); random %zu triples %.2e; %zu generator triples %.2e",
                  n, co.dim(), expected, co.dim_str(), kJacobiTriples, random, sweep.triples, sweep.max_residual);
    lines.emplace_back(buf);
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < kAlgebraSeconds;
  headline(1, pass, "conformal algebra: dimension 2n(4n-1), Jacobi < 1e-10, n = 2, 3");
  for (const auto& l : lines) detail("%s", l.c_str());
  detail("runtime %.1f s (limit %.0f s)", secs, kAlgebraSeconds);
  outcomes.push_back({1, pass});
}

void criterion2() {
  bool pass = true;
  std::vector<std::string> lines;
  double n5_secs = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto t0 = Clock::now();
    const auto rep = verify_so_star_relations(n);
    const double secs = seconds_since(t0);
    if (n == 5) n5_secs = secs;
    std::string l = "n=" + std::to_string(n) + ":";
    for (const auto& r : rep.relations) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %s %.1e", r.name.c_str(), r.max_residual);
      l += buf;
      pass = pass && r.max_residual < kExactTol;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.1f s)", secs);
    lines.push_back(l + buf);
  }
  pass = pass && n5_secs < kRealizationSeconds;
  headline(2, pass, "so*(4n) bracket relations as exact quadratic-form identities < 1e-12, n = 2..5");
  for (const auto& l : lines) detail("%s", l.c_str());
  detail("n=5 runtime %.1f s (limit %.0f s)", n5_secs, kRealizationSeconds);
  outcomes.push_back({2, pass});
}

void criterion3() {
  double stated = 0, corrected = 0, invariance = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto rep = verify_moment_relations(build_observables(n));
    stated = std::max(stated, rep.coadjoint_plus);
    corrected = std::max(corrected, rep.coadjoint);
    invariance = std::max(invariance, rep.invariance);
  }
  const bool pass = stated < kExactTol;
  const bool corrected_pass = corrected < kExactTol && invariance < kExactTol;
  headline(3, pass, "coadjoint relations {xi1, xi2} = xi3 and cyclic, exact < 1e-12");
  detail("as stated {xi1, xi2} = +xi3: residual %.3e (n = 2..5)", stated);
  detail("sign-corrected {xi1, xi2} = -xi3: residual %.3e", corrected);
  detail("{xi^a, X_u} = {xi^a, Y_u} = {xi^a, S_uv} = 0: residual %.3e", invariance);
  outcomes.push_back({3, pass, true, corrected_pass});
}

struct GridCell {
  double primary = 0;
  std::array<double, 6> secondary{};  // (vi) in the Sp(1) form
  double vi_stated = 0;
  double energy = 0;
  double energy_stated = 0;
};

std::vector<GridCell> grid;

void fill_grid() {
  for (std::size_t n : kGridN)
    for (double mu : kGridMu) {
      const JordanBasis basis(n);
      std::vector<GridCell> per(kLeafPoints);
      parallel_for(kLeafPoints, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          Rng rng = make_rng(kSeed, 3, (n * 16 + static_cast<std::size_t>(mu * 2)) * 100000 + i);
          const auto v = realization_values(basis, sample_leaf({n, mu}, rng));
          per[i].primary = primary_quadratic_residual(v);
          per[i].secondary = secondary_quadratic_residuals(v);
          per[i].vi_stated = relation_vi_complex_residual(v);
          per[i].energy = energy_formula_residual(v);
          per[i].energy_stated = energy_formula_complex_residual(v);
        }
      });
      GridCell m;
      for (const auto& c : per) {
        m.primary = std::max(m.primary, c.primary);
        for (int k = 0; k < 6; ++k) m.secondary[k] = std::max(m.secondary[k], c.secondary[k]);
        m.vi_stated = std::max(m.vi_stated, c.vi_stated);
        m.energy = std::max(m.energy, c.energy);
        m.energy_stated = std::max(m.energy_stated, c.energy_stated);
      }
      grid.push_back(m);
    }
}

void criterion4() {
  bool pass = true;
  double worst = 0;
  for (const auto& c : grid) worst = std::max(worst, c.primary), pass = pass && c.primary < kPrimaryTol;
  headline(4, pass, "primary quadratic relation < 1e-10 on 1000 leaf points per (n, mu)");
  std::size_t k = 0;
  for (std::size_t n : kGridN) {
    std::string l = "n=" + std::to_string(n) + ":";
    for (double mu : kGridMu) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " mu=%g %.1e", mu, grid[k++].primary);
      l += buf;
    }
    detail("%s", l.c_str());
  }
  outcomes.push_back({4, pass});
}

void criterion5() {
  const char* roman[] = {"i", "ii", "iii", "iv", "v"};
  std::array<double, 5> sec{};
  double vi = 0, vi_stated = 0, energy = 0, energy_stated = 0;
  for (const auto& c : grid) {
    for (int k = 0; k < 5; ++k) sec[k] = std::max(sec[k], c.secondary[k]);
    vi = std::max(vi, c.secondary[5]);
    vi_stated = std::max(vi_stated, c.vi_stated);
    energy = std::max(energy, c.energy);
    energy_stated = std::max(energy_stated, c.energy_stated);
  }

  // Z = (1, 0), W = (2k, 0), n = 2
  const PhasePoint hand(QVector{Quaternion::one(), Quaternion{}}, QVector{Quaternion::k() * 2.0, Quaternion{}});
  const auto hv = realization_values(JordanBasis(2), hand);
  const double H = hamiltonian_from_realization(hv.Xe, hv.Ye);
  double lhs_v = 0;
  for (std::size_t a = 0; a < hv.dim; ++a) lhs_v += hv.X[a] * hv.Y[a];
  const double rhs_v = 2.0 * (hv.Le * hv.Le + hv.mu * hv.mu);
  const bool hand_ok = std::abs(H + 0.5) < 1e-15 && std::abs(lhs_v - 2.0) < 1e-14 && std::abs(rhs_v - 2.0) < 1e-14;

  bool first_five = hand_ok;
  for (double s : sec) first_five = first_five && s < kSecondaryTol;
  const bool pass = first_five && vi_stated < kSecondaryTol && energy_stated < kSecondaryTol;
  const bool corrected_pass = first_five && vi < kSecondaryTol && energy < kSecondaryTol;

  headline(5, pass, "secondary relations (i)-(vi) and energy formula < 1e-9 on the same grid");
  std::string l = "max over grid:";
  for (int k = 0; k < 5; ++k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, " (%s) %.1e", roman[k], sec[k]);
    l += buf;
  }
  detail("%s", l.c_str());
  detail("(vi) as stated, 4/n^3 and (n-2)/n mu^2: %.3e", vi_stated);
  detail("energy formula as stated, (n/2)^2 and n^2(n-1)mu^2/4: %.3e", energy_stated);
  detail("(vi) with Sp(1) coefficients 2/(n^2(n-1)) and mu^2: %.3e", vi);
  detail("energy formula with Sp(1) coefficients n(n-1)/2 and n^2(n-1)mu^2/2: %.3e", energy);
  detail("hand point Z=(1,0), W=(2k,0): H = %.17g, (v) lhs = %.17g, rhs = %.17g", H, lhs_v, rhs_v);
  outcomes.push_back({5, pass, true, corrected_pass});
}

void criterion6() {
  bool pass = true;
  std::vector<std::string> lines;
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<PullbackResiduals> r(kPullbackPoints);
    parallel_for(kPullbackPoints, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        Rng rng = make_rng(kSeed, 4, n * 100000 + i);
        const PhasePoint p = random_point(n, rng);
        r[i] = pullback_check(p.Z, p.W);
      }
    });
    double pos = 0, en = 0;
    for (const auto& x : r) pos = std::max(pos, x.position), en = std::max(en, x.energy);
    pass = pass && pos < kPullbackTol && en < kPullbackTol;
    char buf[160];
    std::snprintf(buf, sizeof buf, "n=%zu: <x|u> = <Z,uZ> %.2e; <x|pi^2> + mu^2/<e|x> = |W|^2/4 %.2e", n, pos, en);
    lines.emplace_back(buf);
  }
  headline(6, pass, "pullback identities < 1e-9 on 1000 points, n = 2..4");
  for (const auto& l : lines) detail("%s", l.c_str());
  outcomes.push_back({6, pass});
}

void criterion7() {
  double bracket = 0;
  for (std::size_t i = 0; i < kOraclePairs; ++i) {
    const std::size_t n = 2 + i % 3;
    Rng rng = make_rng(kSeed, 7, i);
    const auto f = random_quadratic(n, rng), g = random_quadratic(n, rng);
    const PhasePoint p = random_point(n, rng);
    const double exact = evaluate(bracket_exact(f, g), p);
    const double numeric = bracket_numeric(as_function(f), as_function(g), p, {kOracleStep, 1e-8});
    bracket = std::max(bracket, std::abs(exact - numeric));
  }

  double gradient = 0;
  const auto H = hamiltonian_function();
  for (std::size_t i = 0; i < kGradientPoints; ++i) {
    const std::size_t n = 2 + i % 3;
    Rng rng = make_rng(kSeed, 8, i);
    const PhasePoint p = random_point(n, rng);
    const auto g = hamiltonian_gradient(p);
    const auto fd = numeric_gradient(H, flatten(p), kOracleStep);
    for (std::size_t a = 0; a < n; ++a)
      for (int c = 0; c < 4; ++c) {
        gradient = std::max(gradient, std::abs(g.dZ[a][c] - fd[4 * a + c]));
        gradient = std::max(gradient, std::abs(g.dW[a][c] - fd[4 * n + 4 * a + c]));
      }
  }
  const bool pass = bracket < kOracleTol && gradient < kOracleTol;
  headline(7, pass, "exact vs finite-difference bracket and H gradient < 1e-6, h = 1e-5");
  detail("%zu random quadratic pairs, n = 2..4: max |exact - numeric| %.2e", kOraclePairs, bracket);
  detail("%zu points: max |analytic - finite difference| gradient %.2e", kGradientPoints, gradient);
  outcomes.push_back({7, pass});
}

void criterion8() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(kSeed, 5);
  const PhasePoint p0 = bound_orbit_start(2, 1.0, rng);
  IntegratorOptions opt;
  opt.dt = 1e-4;
  opt.t_end = 10;
  opt.method = Method::rk4;
  opt.record_every = 100;
  const auto tr = integrate(p0, opt);
  const auto rep = conserved_report(tr);
  const double reversal = time_reversal_error(p0, opt.dt, opt.t_end);
  const double secs = seconds_since(t0);

  const bool drifts = rep.drift_H < kDriftTol && rep.drift_rho < kDriftTol && rep.drift_L < kDriftTol &&
                      rep.drift_A < kDriftTol;
  const bool rest = reversal < kDriftTol && secs < kDynamicsSeconds && hamiltonian_upstairs(p0) < 0;
  const bool pass = drifts && rest && rep.max_energy_residual_complex < kDriftTol;
  const bool corrected_pass = drifts && rest && rep.max_energy_residual < kDriftTol;

  headline(8, pass, "bound orbit n=2, mu=1, rk4 dt=1e-4 to t=10: drifts, energy formula, reversal < 1e-8");
  detail("H0 = %.6f, %zu samples", hamiltonian_upstairs(p0), tr.samples.size());
  detail("relative drift: H %.1e, rho %.1e, L_ab %.1e, A_a %.1e (mu %.1e, L^2 %.1e, A^2 %.1e)", rep.drift_H,
         rep.drift_rho, rep.drift_L, rep.drift_A, rep.drift_mu, rep.drift_L2, rep.drift_A2);
  detail("energy formula as stated along the flow: %.3e", rep.max_energy_residual_complex);
  detail("energy formula with Sp(1) coefficients along the flow: %.3e", rep.max_energy_residual);
  detail("time-reversal return error %.2e; runtime %.1f s (limit %.0f s)", reversal, secs, kDynamicsSeconds);
  outcomes.push_back({8, pass, true, corrected_pass});
}

void criterion9() {
  const auto H = hamiltonian_function();
  bool pass = true;
  std::vector<std::string> lines;
  for (std::size_t n : {2, 3}) {
    const JordanBasis basis(n);
    const std::size_t d = basis.dim();
    std::vector<SmoothObservable> L, A;
    for (std::size_t a = 0; a < d; ++a) {
      A.push_back(lrl_function(basis[a]));
      for (std::size_t b = a + 1; b < d; ++b) L.push_back(angular_momentum_function(basis[a], basis[b]));
    }
    std::vector<std::array<double, 2>> worst(kConservationPoints);
    parallel_for(kConservationPoints, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        Rng rng = make_rng(kSeed, 9, n * 1000 + i);
        const PhasePoint p = sample_leaf({n, 0.5 * static_cast<double>(i % 4)}, rng);
        double l = 0, a = 0;
        for (const auto& f : L) l = std::max(l, std::abs(bracket_numeric(H, f, p, {kOracleStep, 1e-8})));
        for (const auto& f : A) a = std::max(a, std::abs(bracket_numeric(H, f, p, {kOracleStep, 1e-8})));
        worst[i] = {l, a};
      }
    });
    double l = 0, a = 0;
    for (const auto& w : worst) l = std::max(l, w[0]), a = std::max(a, w[1]);
    pass = pass && l < kConservationTol && a < kConservationTol;
    char buf[160];
    std::snprintf(buf, sizeof buf, "n=%zu: max |{H, L_ab}| %.2e over %zu pairs; max |{H, A_a}| %.2e over %zu", n, l,
                  L.size(), a, A.size());
    lines.emplace_back(buf);
  }
  headline(9, pass, "numeric brackets {H, L_uv}, {H, A_u} < 1e-6 at 100 points, n = 2, 3");
  for (const auto& l : lines) detail("%s", l.c_str());
  outcomes.push_back({9, pass});
}

}  // namespace

int main() {
  std::printf("acceptance (seed %llu, kernels %s, %zu workers)\n", static_cast<unsigned long long>(kSeed),
              std::string(simd::kernels().name).c_str(), worker_count());
  criterion1();
  criterion2();
  criterion3();
  fill_grid();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();

  int passed = 0;
  bool regression = false;
  std::string stated_fail;
  for (const auto& o : outcomes) {
    passed += o.pass;
    if (o.known_unattainable && !o.pass && o.corrected_pass) stated_fail += " " + std::to_string(o.id);
    if (!o.pass && !o.known_unattainable) regression = true;
    if (o.known_unattainable && !o.corrected_pass) regression = true;
  }
  std::printf("%d/%zu criteria pass", passed, outcomes.size());
  if (!stated_fail.empty()) std::printf("; failing as stated, corrected form passes:%s", stated_fail.c_str());
  std::printf("\n");
  return regression ? 1 : 0;
}
