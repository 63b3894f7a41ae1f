#pragma once

// Flow of H = 1/2 X_e / Y_e - 1 / Y_e = |W|^2 / (8 |Z|^2) - 1 / |Z|^2 on T*H^n_*,
// integrated in the flattened coordinates of poisson.hpp, plus monitoring of
// the quantities the realization says are conserved.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sp1kepler/jordan.hpp"
#include "sp1kepler/poisson.hpp"
#include "sp1kepler/random.hpp"

namespace sp1kepler {

double hamiltonian_upstairs(const PhasePoint& p);

struct PhaseGradient {
  QVector dZ;
  QVector dW;
};

PhaseGradient hamiltonian_gradient(const PhasePoint& p);

/// A Hamiltonian on flattened coordinates with its analytic gradient.
struct HamiltonianSystem {
  std::string name;
  std::function<double(std::span<const double>)> energy;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

/// The Sp(1)-Kepler Hamiltonian.
HamiltonianSystem kepler_system();
/// |W|^2 / 8: free motion.
HamiltonianSystem free_system();

enum class Method { rk4, midpoint };

std::string method_name(Method m);
/// Throws std::invalid_argument for anything but "rk4" / "midpoint".
Method parse_method(const std::string& name);

struct IntegratorOptions {
  double dt = 1e-4;
  double t_end = 10.0;
  Method method = Method::rk4;
  std::size_t record_every = 1;   // keep every k-th step (the last step is always kept)
  double midpoint_tol = 1e-12;
  int midpoint_max_iter = 50;
  double energy_jump_tol = 1e-6;  // relative per-step change of H treated as a collision
  std::uint64_t seed = 0;         // carried into the metadata only
};

struct Sample {
  double t = 0;
  PhasePoint p;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::string integrator;
  std::string system;
  double dt = 0;
  double t_end = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  /// Header t,Z_0w,...,W_{n-1}z and one row per sample, 17 significant digits.
  std::string to_csv() const;
};

class NearCollision : public std::runtime_error {
 public:
  NearCollision(const std::string& what, Trajectory partial, double t)
      : std::runtime_error(what), partial_(std::move(partial)), t_(t) {}
  const Trajectory& partial() const { return partial_; }
  double time() const { return t_; }

 private:
  Trajectory partial_;
  double t_;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument on dt <= 0 or t_end < 0, NearCollision when a
/// step comes within 10 kDomainEps of Z = 0 (or H jumps), ConvergenceFailure
/// when the implicit midpoint iteration does not settle.
Trajectory integrate(const PhasePoint& p0, const IntegratorOptions& options,
                     const HamiltonianSystem& system = kepler_system());

/// Bound start on the leaf |Im(W^dagger Z)| = 2 mu with H = -2 / (4 mu^2 + 1).
PhasePoint bound_orbit_start(std::size_t n, double mu, Rng& rng);
/// Z = e_0 direction scaled to |Z| = 1, W = -speed * Z: falls straight into Z = 0.
PhasePoint radial_infall_start(std::size_t n, double speed);

struct ConservedSample {
  double t = 0;
  double H = 0;
  std::array<double, 3> rho{};
  double mu = 0;
  double L2 = 0;
  double A2 = 0;
  double energy_residual = 0;
  double energy_residual_complex = 0;
};

struct ConservedReport {
  std::vector<ConservedSample> series;
  double drift_H = 0;
  double drift_rho = 0;
  double drift_mu = 0;
  double drift_L = 0;  // all L_{e_a,e_b}, a < b
  double drift_A = 0;  // all A_{e_a}
  double drift_L2 = 0;
  double drift_A2 = 0;
  double max_energy_residual = 0;
  double max_energy_residual_complex = 0;
};

/// Drift of a family is max_t |v(t) - v(0)|_inf / max(1, |v(0)|_inf).
ConservedReport conserved_report(const Trajectory& tr);

/// Flattened-coordinate versions for the numeric bracket.
SmoothObservable hamiltonian_function();
SmoothObservable angular_momentum_function(const HermElement& u, const HermElement& v);
SmoothObservable lrl_function(const HermElement& u);

/// |p1 - p0| in flattened coordinates after integrating for t, reversing W,
/// integrating for t again and reversing W back.
double time_reversal_error(const PhasePoint& p0, double dt, double t, Method method = Method::rk4);

}  // namespace sp1kepler
