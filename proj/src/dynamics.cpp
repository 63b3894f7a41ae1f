#include "sp1kepler/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>

#include "sp1kepler/realization.hpp"

namespace sp1kepler {

namespace {

constexpr double kCollisionRadius = 10.0 * kDomainEps;

double sum_sq(std::span<const double> v) {
  double s = 0.0;
  for (double t : v) s += t * t;
  return s;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double t : v) m = std::max(m, std::abs(t));
  return m;
}

struct Collision {
  double radius;
};

void kepler_gradient(std::span<const double> z, std::span<double> g) {
  const std::size_t half = z.size() / 2;
  const auto q = z.first(half), p = z.last(half);
  const double q2 = sum_sq(q), p2 = sum_sq(p);
  if (std::sqrt(q2) < kCollisionRadius) throw Collision{std::sqrt(q2)};
  const double cq = -p2 / (4.0 * q2 * q2) + 2.0 / (q2 * q2);
  const double cp = 1.0 / (4.0 * q2);
  for (std::size_t i = 0; i < half; ++i) {
    g[i] = cq * q[i];
    g[half + i] = cp * p[i];
  }
}

double kepler_energy(std::span<const double> z) {
  const std::size_t half = z.size() / 2;
  const double q2 = sum_sq(z.first(half)), p2 = sum_sq(z.last(half));
  if (std::sqrt(q2) < kCollisionRadius) throw Collision{std::sqrt(q2)};
  return p2 / (8.0 * q2) - 1.0 / q2;
}

// zdot = J grad H = (dH/dp, -dH/dq)
void vector_field(const HamiltonianSystem& sys, std::span<const double> z, std::span<double> grad,
                  std::span<double> out) {
  sys.gradient(z, grad);
  const std::size_t half = z.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    out[i] = grad[half + i];
    out[half + i] = -grad[i];
  }
}

class Stepper {
 public:
  Stepper(const HamiltonianSystem& sys, const IntegratorOptions& opt, std::size_t dim)
      : sys_(sys), opt_(opt), grad_(dim), k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim), next_(dim) {}

  void step(std::vector<double>& z, double h) {
    if (opt_.method == Method::rk4) rk4(z, h);
    else midpoint(z, h);
  }

 private:
  void rk4(std::vector<double>& z, double h) {
    const std::size_t d = z.size();
    vector_field(sys_, z, grad_, k1_);
    for (std::size_t i = 0; i < d; ++i) tmp_[i] = z[i] + 0.5 * h * k1_[i];
    vector_field(sys_, tmp_, grad_, k2_);
    for (std::size_t i = 0; i < d; ++i) tmp_[i] = z[i] + 0.5 * h * k2_[i];
    vector_field(sys_, tmp_, grad_, k3_);
    for (std::size_t i = 0; i < d; ++i) tmp_[i] = z[i] + h * k3_[i];
    vector_field(sys_, tmp_, grad_, k4_);
    for (std::size_t i = 0; i < d; ++i) z[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

  void midpoint(std::vector<double>& z, double h) {
    const std::size_t d = z.size();
    vector_field(sys_, z, grad_, k1_);
    for (std::size_t i = 0; i < d; ++i) next_[i] = z[i] + h * k1_[i];
    for (int it = 0; it < opt_.midpoint_max_iter; ++it) {
      for (std::size_t i = 0; i < d; ++i) tmp_[i] = 0.5 * (z[i] + next_[i]);
      vector_field(sys_, tmp_, grad_, k1_);
      double delta = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double v = z[i] + h * k1_[i];
        delta = std::max(delta, std::abs(v - next_[i]));
        next_[i] = v;
      }
      if (delta <= opt_.midpoint_tol * std::max(1.0, inf_norm(next_))) {
        z = next_;
        return;
      }
    }
    throw ConvergenceFailure("implicit midpoint did not converge within " + std::to_string(opt_.midpoint_max_iter) +
                             " iterations");
  }

  const HamiltonianSystem& sys_;
  const IntegratorOptions& opt_;
  std::vector<double> grad_, k1_, k2_, k3_, k4_, tmp_, next_;
};

}  // namespace

double hamiltonian_upstairs(const PhasePoint& p) {
  const double z2 = norm2(p.Z);
  return norm2(p.W) / (8.0 * z2) - 1.0 / z2;
}

PhaseGradient hamiltonian_gradient(const PhasePoint& p) {
  const double z2 = norm2(p.Z);
  const double w2 = norm2(p.W);
  return {p.Z * (-w2 / (4.0 * z2 * z2) + 2.0 / (z2 * z2)), p.W * (1.0 / (4.0 * z2))};
}

HamiltonianSystem kepler_system() { return {"kepler", kepler_energy, kepler_gradient}; }

HamiltonianSystem free_system() {
  auto energy = [](std::span<const double> z) { return sum_sq(z.last(z.size() / 2)) / 8.0; };
  auto gradient = [](std::span<const double> z, std::span<double> g) {
    const std::size_t half = z.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      g[i] = 0.0;
      g[half + i] = 0.25 * z[half + i];
    }
  };
  return {"free", energy, gradient};
}

std::string method_name(Method m) { return m == Method::rk4 ? "rk4" : "midpoint"; }

Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::rk4;
  if (name == "midpoint") return Method::midpoint;
  throw std::invalid_argument("unknown integrator '" + name + "' (expected rk4 or midpoint)");
}

std::string Trajectory::to_csv() const {
  std::string out = "t";
  static const char* comp = "wxyz";
  for (const char* block : {"Z", "W"})
    for (std::size_t a = 0; a < n; ++a)
      for (int c = 0; c < 4; ++c) out += "," + std::string(block) + "_" + std::to_string(a) + comp[c];
  out += "\n";
  char buf[40];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    out += buf;
    for (double v : flatten(s.p)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

Trajectory integrate(const PhasePoint& p0, const IntegratorOptions& opt, const HamiltonianSystem& sys) {
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(opt.t_end >= 0.0) || !std::isfinite(opt.t_end)) throw std::invalid_argument("integrate: t_end must be >= 0");
  if (opt.record_every == 0) throw std::invalid_argument("integrate: record_every must be positive");

  Trajectory tr;
  tr.integrator = method_name(opt.method);
  tr.system = sys.name;
  tr.dt = opt.dt;
  tr.t_end = opt.t_end;
  tr.n = p0.order();
  tr.seed = opt.seed;
  tr.samples.push_back({0.0, p0});

  std::vector<double> z = flatten(p0);
  const auto steps = static_cast<std::size_t>(std::ceil(opt.t_end / opt.dt - 1e-9));
  Stepper stepper(sys, opt, z.size());
  double h_prev = 0.0;
  try {
    h_prev = sys.energy(z);
  } catch (const Collision& c) {
    throw NearCollision("initial |Z| = " + std::to_string(c.radius) + " is below the collision guard", tr, 0.0);
  }
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * opt.dt;
    const double t1 = k + 1 == steps ? opt.t_end : static_cast<double>(k + 1) * opt.dt;
    try {
      stepper.step(z, t1 - t0);
      const double h = sys.energy(z);
      const bool finite = std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); });
      if (!finite || std::abs(h - h_prev) > opt.energy_jump_tol * std::max(1.0, std::abs(h_prev))) {
        throw NearCollision("energy jump near Z = 0 at t = " + std::to_string(t1), tr, t1);
      }
      h_prev = h;
    } catch (const Collision& c) {
      throw NearCollision("|Z| = " + std::to_string(c.radius) + " below the collision guard at t = " +
                              std::to_string(t0),
                          tr, t0);
    }
    if ((k + 1) % opt.record_every == 0 || k + 1 == steps) tr.samples.push_back({t1, unflatten(z)});
  }
  return tr;
}

PhasePoint bound_orbit_start(std::size_t n, double mu, Rng& rng) {
  if (n == 0) throw std::invalid_argument("bound_orbit_start: n must be positive");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("bound_orbit_start: mu must be >= 0");
  const double lambda2 = (4.0 * mu * mu + 1.0) / 4.0;

  QVector z = gaussian_qvector(n, rng);
  while (norm(z) < 1e-6) z = gaussian_qvector(n, rng);
  z *= std::sqrt(lambda2) / norm(z);

  Quaternion omega;
  if (mu > 0.0) {
    Quaternion dir = im(gaussian_quaternion(rng));
    while (norm(dir) < 1e-6) dir = im(gaussian_quaternion(rng));
    omega = dir * (2.0 * mu / norm(dir));
  }

  std::uniform_real_distribution<double> angle(0.0, 0.5 * std::numbers::pi);
  double theta = angle(rng);
  QVector v = gaussian_qvector(n, rng);
  v -= z * (dagger_product(z, v) * (1.0 / lambda2));
  const double vn = norm(v);
  if (vn < 1e-6) theta = 0.0;
  else v *= std::sin(theta) / (std::sqrt(lambda2) * vn);
  if (theta == 0.0) v = QVector(n);

  const Quaternion beta = (Quaternion(std::cos(theta)) - omega) * (1.0 / lambda2);
  return PhasePoint(z, z * beta + v);
}

PhasePoint radial_infall_start(std::size_t n, double speed) {
  if (n == 0) throw std::invalid_argument("radial_infall_start: n must be positive");
  QVector z(n);
  z[0] = Quaternion::one();
  return PhasePoint(z, z * -speed);
}

ConservedReport conserved_report(const Trajectory& tr) {
  if (tr.samples.empty()) throw std::invalid_argument("conserved_report: empty trajectory");
  const JordanBasis basis(tr.n);
  const std::size_t d = basis.dim();

  ConservedReport rep;
  std::vector<double> L0, A0, rho0;
  double H0 = 0, mu0 = 0, L20 = 0, A20 = 0;
  auto rel = [](double v, double v0) { return std::abs(v - v0) / std::max(1.0, std::abs(v0)); };
  auto rel_family = [](const std::vector<double>& v, const std::vector<double>& v0) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      diff = std::max(diff, std::abs(v[i] - v0[i]));
      ref = std::max(ref, std::abs(v0[i]));
    }
    return diff / std::max(1.0, ref);
  };

  for (std::size_t s = 0; s < tr.samples.size(); ++s) {
    const auto& smp = tr.samples[s];
    const RealizationValues v = realization_values(basis, smp.p);
    ConservedSample c;
    c.t = smp.t;
    c.H = hamiltonian_from_realization(v.Xe, v.Ye);
    const Quaternion r = moment_rho(smp.p);
    c.rho = {r.x, r.y, r.z};
    c.mu = v.mu;
    c.L2 = angular_momentum_squared(v);
    c.A2 = lrl_squared(v);
    c.energy_residual = energy_formula_residual(v);
    c.energy_residual_complex = energy_formula_complex_residual(v);

    std::vector<double> L, A, rho(c.rho.begin(), c.rho.end());
    for (std::size_t a = 0; a < d; ++a) {
      A.push_back(lrl_from_realization(v.X[a], v.Y[a], v.Xe, v.Ye));
      for (std::size_t b = a + 1; b < d; ++b) L.push_back(v.Lpair(a, b));
    }
    if (s == 0) {
      L0 = L;
      A0 = A;
      rho0 = rho;
      H0 = c.H;
      mu0 = c.mu;
      L20 = c.L2;
      A20 = c.A2;
    }
    rep.drift_H = std::max(rep.drift_H, rel(c.H, H0));
    rep.drift_mu = std::max(rep.drift_mu, rel(c.mu, mu0));
    rep.drift_L2 = std::max(rep.drift_L2, rel(c.L2, L20));
    rep.drift_A2 = std::max(rep.drift_A2, rel(c.A2, A20));
    rep.drift_rho = std::max(rep.drift_rho, rel_family(rho, rho0));
    rep.drift_L = std::max(rep.drift_L, rel_family(L, L0));
    rep.drift_A = std::max(rep.drift_A, rel_family(A, A0));
    rep.max_energy_residual = std::max(rep.max_energy_residual, c.energy_residual);
    rep.max_energy_residual_complex = std::max(rep.max_energy_residual_complex, c.energy_residual_complex);
    rep.series.push_back(c);
  }
  return rep;
}

SmoothObservable hamiltonian_function() { return kepler_energy; }

SmoothObservable angular_momentum_function(const HermElement& u, const HermElement& v) {
  return as_function(0.5 * (s_observable(u, v) - s_observable(v, u)));
}

SmoothObservable lrl_function(const HermElement& u) {
  auto x = std::make_shared<QuadObservable>(x_observable(u));
  auto y = std::make_shared<QuadObservable>(y_observable(u));
  return [x, y](std::span<const double> z) {
    const std::size_t half = z.size() / 2;
    const double xe = 0.25 * sum_sq(z.last(half));
    const double ye = sum_sq(z.first(half));
    return lrl_from_realization(evaluate(*x, z), evaluate(*y, z), xe, ye);
  };
}

double time_reversal_error(const PhasePoint& p0, double dt, double t, Method method) {
  IntegratorOptions opt;
  opt.dt = dt;
  opt.t_end = t;
  opt.method = method;
  opt.record_every = std::numeric_limits<std::size_t>::max();
  const PhasePoint p1 = integrate(p0, opt).samples.back().p;
  const PhasePoint back = integrate(PhasePoint(p1.Z, p1.W * -1.0), opt).samples.back().p;
  const auto a = flatten(p0);
  const auto b = flatten(PhasePoint(back.Z, back.W * -1.0));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace sp1kepler
