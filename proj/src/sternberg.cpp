#include "sp1kepler/sternberg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sp1kepler/poisson.hpp"

namespace sp1kepler {

namespace {

constexpr double kDropTol = 1e-10;
constexpr double kTangentTol = 1e-8;

void require_nonzero(const QVector& z, const char* what) {
  if (z.size() == 0) throw std::invalid_argument(std::string(what) + ": empty vector");
  if (norm(z) <= kDomainEps) throw std::domain_error(std::string(what) + ": Z must be nonzero");
}

HermElement tangent_direction(const QVector& z, const QVector& v) {
  const double n = static_cast<double>(z.size());
  return hermitian_part((outer(v, z) + outer(z, v)) * n);
}

// Coefficients of xdot in the tangent basis and the norm of what is left over.
std::vector<double> project(const std::vector<HermElement>& basis, const HermElement& xdot, double& leftover) {
  std::vector<double> c(basis.size());
  HermElement rest = xdot;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c[i] = inner(basis[i], xdot);
    rest -= basis[i] * c[i];
  }
  leftover = std::sqrt(std::max(0.0, inner(rest, rest)));
  return c;
}

}  // namespace

ConePoint cone_point(const QVector& z) {
  require_nonzero(z, "cone_point");
  const double n = static_cast<double>(z.size());
  ConePoint p;
  p.x = hermitian_part(outer(z, z) * n);
  p.r = trace_re(p.x.mat()) / n;
  return p;
}

std::vector<HermElement> tangent_basis(const QVector& z) {
  require_nonzero(z, "tangent_basis");
  const std::size_t n = z.size();
  std::vector<HermElement> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (int c = 0; c < 4; ++c) {
      QVector v(n);
      v[a] = Quaternion::unit(c);
      HermElement t = tangent_direction(z, v);
      const double original = std::sqrt(inner(t, t));
      if (original == 0.0) continue;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : out) t -= q * inner(q, t);
      const double rest = std::sqrt(inner(t, t));
      if (rest <= kDropTol * original) continue;
      out.push_back(t * (1.0 / rest));
    }
  }
  return out;
}

QVector horizontal_lift(const QVector& z, const HermElement& xdot) {
  require_nonzero(z, "horizontal_lift");
  const std::size_t n = z.size();
  if (xdot.order() != n) throw std::invalid_argument("horizontal_lift: order mismatch");
  const auto basis = tangent_basis(z);
  double leftover = 0.0;
  const auto c = project(basis, xdot, leftover);
  const double scale = std::max(1.0, std::sqrt(inner(xdot, xdot)));
  if (leftover > kTangentTol * scale) throw std::invalid_argument("horizontal_lift: xdot is not tangent to the cone");
  HermElement t = HermElement::zero(n);
  for (std::size_t i = 0; i < basis.size(); ++i) t += basis[i] * c[i];

  const double z2 = norm2(z);
  const QVector tz = mat_apply(t.mat(), z);
  return (tz - z * (0.5 * trace_re(t.mat()))) * (1.0 / (static_cast<double>(n) * z2));
}

CotangentData pi_from_W(const QVector& z, const QVector& w) {
  require_nonzero(z, "pi_from_W");
  if (w.size() != z.size()) throw std::invalid_argument("pi_from_W: Z and W lengths differ");
  const std::size_t n = z.size();
  const auto basis = tangent_basis(z);
  const std::size_t m = basis.size();
  const double z2 = norm2(z);

  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) gram(i, j) = inner(basis[i], basis[j]);
    const QVector tz = mat_apply(basis[i].mat(), z);
    rhs(i) = vec_inner(w, tz - z * (0.5 * trace_re(basis[i].mat()))) / (static_cast<double>(n) * z2);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-8) {
    throw std::runtime_error("pi_from_W: tangent basis is ill-conditioned");
  }
  const Eigen::VectorXd c = ldlt.solve(rhs);

  CotangentData d;
  d.x = cone_point(z);
  d.pi = HermElement::zero(n);
  for (std::size_t i = 0; i < m; ++i) d.pi += basis[i] * c(static_cast<Eigen::Index>(i));
  d.Z = z;
  d.W = w;
  return d;
}

double sternberg_xe(const CotangentData& d, double mu) {
  const HermElement& x = d.x.x;
  const double ex = inner(HermElement::identity(x.order()), x);
  return inner(x, jordan_product(d.pi, d.pi)) + mu * mu / ex;
}

PullbackResiduals pullback_check(const QVector& z, const QVector& w) {
  const CotangentData d = pi_from_W(z, w);
  const std::size_t n = z.size();
  PullbackResiduals r;
  const JordanBasis basis(n);
  for (const auto& u : basis.elements()) {
    const double lhs = inner(d.x.x, u);
    const double rhs = vec_inner(z, mat_apply(u.mat(), z));
    r.position = std::max(r.position, std::abs(lhs - rhs));
  }
  const double mu = 0.5 * norm(im(dagger_product(w, z)));
  r.energy = std::abs(sternberg_xe(d, mu) - 0.25 * norm2(w));
  return r;
}

double hamiltonian_downstairs(const CotangentData& d, double mu) {
  const double r = d.x.r;
  if (!(r > 0.0)) throw std::domain_error("hamiltonian_downstairs: r must be positive");
  const double xpp = inner(d.x.x, jordan_product(d.pi, d.pi));
  return 0.5 * xpp / r + mu * mu / (2.0 * r * r) - 1.0 / r;
}

double lrl_downstairs(const CotangentData& d, double mu, const HermElement& u) {
  const HermElement e = HermElement::identity(d.x.x.order());
  const double ye = inner(d.x.x, e);
  if (!(ye > 0.0)) throw std::domain_error("lrl_downstairs: r must be positive");
  const double yu = inner(d.x.x, u);
  const double xe = sternberg_xe(d, mu);
  const double xu = 0.25 * vec_inner(d.W, mat_apply(u.mat(), d.W));
  return 0.5 * (xu - yu * xe / ye) + yu / ye;
}

}  // namespace sp1kepler
