#include "sp1kepler/realization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sp1kepler/parallel.hpp"

namespace sp1kepler {

namespace {

void require_order(std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": order must be at least 1");
}

// A(4n + r, c) = A(c, 4n + r) = k(r, c) for the bilinear form W^T k Z.
void set_bilinear_block(QuadObservable& out, std::size_t a, std::size_t b, const Matrix& k, double scale) {
  const std::size_t off = 4 * out.order();
  Matrix& A = out.mutable_A();
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double v = scale * k(r, c);
      A(off + 4 * a + r, 4 * b + c) = v;
      A(4 * b + c, off + 4 * a + r) = v;
    }
  }
}

double sq(double x) { return x * x; }

// |{f,g} - rhs| is measured against |f| |g|, floored at 1 where e_u e_v = 0 makes S_uv vanish.
double bracket_scale(double fn, double gn) { return std::max(1.0, fn * gn); }

}  // namespace

Matrix left_mult_matrix(const Quaternion& q) {
  Matrix m(4, 4);
  for (int s = 0; s < 4; ++s) {
    const Quaternion col = q * Quaternion::unit(s);
    for (int r = 0; r < 4; ++r) m(r, s) = col[r];
  }
  return m;
}

Matrix real_form(const QMatrix& m) {
  const std::size_t n = m.order();
  Matrix out(4 * n, 4 * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Matrix blk = left_mult_matrix(m(a, b));
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) out(4 * a + r, 4 * b + c) = blk(r, c);
    }
  }
  return out;
}

QuadObservable x_observable(const HermElement& u) {
  const std::size_t n = u.order();
  require_order(n, "x_observable");
  QuadObservable f(n);
  const Matrix r = real_form(u.mat());
  const std::size_t off = 4 * n;
  for (std::size_t i = 0; i < 4 * n; ++i)
    for (std::size_t j = 0; j < 4 * n; ++j) f.mutable_A()(off + i, off + j) = 0.5 * r(i, j);
  f.refresh();
  return f;
}

QuadObservable y_observable(const HermElement& v) {
  const std::size_t n = v.order();
  require_order(n, "y_observable");
  QuadObservable f(n);
  const Matrix r = real_form(v.mat());
  for (std::size_t i = 0; i < 4 * n; ++i)
    for (std::size_t j = 0; j < 4 * n; ++j) f.mutable_A()(i, j) = 2.0 * r(i, j);
  f.refresh();
  return f;
}

void bilinear_observable_into(const QMatrix& m, QuadObservable& out) {
  const std::size_t n = m.order();
  require_order(n, "bilinear_observable");
  if (out.order() != n) out = QuadObservable(n);
  out.mutable_A().set_zero();
  std::fill(out.mutable_b().begin(), out.mutable_b().end(), 0.0);
  out.set_c(0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (m(a, b) == Quaternion{}) continue;
      set_bilinear_block(out, a, b, left_mult_matrix(m(a, b)), 0.5);
    }
  out.refresh();
}

QuadObservable bilinear_observable(const QMatrix& m) {
  QuadObservable f(m.order());
  bilinear_observable_into(m, f);
  return f;
}

QuadObservable s_observable(const HermElement& u, const HermElement& v) {
  if (u.order() != v.order()) throw std::invalid_argument("s_observable: order mismatch");
  return bilinear_observable(mat_mul(u.mat(), v.mat()));
}

QuadObservable xi_observable(std::size_t n, int a) {
  require_order(n, "xi_observable");
  if (a < 1 || a > 3) throw std::invalid_argument("xi_observable: component must be 1, 2 or 3");
  // component a of conj(w) z as w^T C z
  Matrix c(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) c(r, s) = (conj(Quaternion::unit(r)) * Quaternion::unit(s))[a];
  QuadObservable f(n);
  for (std::size_t b = 0; b < n; ++b) set_bilinear_block(f, b, b, c, -0.5);
  f.refresh();
  return f;
}

QuadObservable RealizationFamily::L(std::size_t alpha) const {
  return s_observable(HermElement::identity(n), basis[alpha]);
}

QuadObservable RealizationFamily::L(std::size_t alpha, std::size_t beta) const {
  return 0.5 * (S(alpha, beta) - S(beta, alpha));
}

RealizationFamily build_observables(std::size_t n) {
  require_order(n, "build_observables");
  RealizationFamily fam;
  fam.n = n;
  fam.basis = JordanBasis(n);
  const std::size_t d = fam.basis.dim();
  fam.x_obs.reserve(d);
  fam.y_obs.reserve(d);
  for (const auto& e : fam.basis.elements()) {
    fam.x_obs.push_back(x_observable(e));
    fam.y_obs.push_back(y_observable(e));
  }
  fam.s_obs.resize(d * d);
  parallel_for(d, [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a)
      for (std::size_t b = 0; b < d; ++b) fam.s_obs[a * d + b] = s_observable(fam.basis[a], fam.basis[b]);
  });
  return fam;
}

double sp1_invariance_residual(const RealizationFamily& family, const PhasePoint& p, const Quaternion& g) {
  const PhasePoint pg(p.Z * g, p.W * g);
  const auto z0 = flatten(p);
  const auto z1 = flatten(pg);
  double worst = 0.0;
  auto check = [&](const QuadObservable& f) {
    const double v0 = evaluate(f, z0);
    worst = std::max(worst, std::abs(evaluate(f, z1) - v0) / std::max(1.0, std::abs(v0)));
  };
  for (const auto& f : family.x_obs) check(f);
  for (const auto& f : family.y_obs) check(f);
  for (const auto& f : family.s_obs) check(f);
  return worst;
}

double SoStarReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : relations) m = std::max(m, r.max_residual);
  return m;
}

SoStarReport verify_so_star_relations(const RealizationFamily& fam) {
  const std::size_t n = fam.n;
  const std::size_t d = fam.dim();
  const auto& basis = fam.basis;

  std::vector<double> xn(d), yn(d), sn(d * d);
  for (std::size_t a = 0; a < d; ++a) {
    xn[a] = fam.x_obs[a].norm();
    yn[a] = fam.y_obs[a].norm();
  }
  for (std::size_t i = 0; i < d * d; ++i) sn[i] = fam.s_obs[i].norm();

  // T[(u d + v) d + z] = {e_u e_v e_z}
  std::vector<QMatrix> T(d * d * d);
  parallel_for(d, [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u)
      for (std::size_t v = 0; v < d; ++v)
        for (std::size_t z = 0; z < d; ++z)
          T[(u * d + v) * d + z] = triple_product(basis[u], basis[v], basis[z]).mat();
  });
  auto tp = [&](std::size_t u, std::size_t v, std::size_t z) -> const QMatrix& { return T[(u * d + v) * d + z]; };

  SoStarReport rep;
  rep.n = n;

  auto pair_family = [&](const char* name, auto&& residual) {
    RelationResult r{name, d * d, 0.0};
    r.max_residual = parallel_max(d, [&](std::size_t a) {
      QuadObservable out(n);
      double worst = 0.0;
      for (std::size_t b = 0; b < d; ++b) worst = std::max(worst, residual(a, b, out));
      return worst;
    });
    rep.relations.push_back(r);
  };

  pair_family("XX", [&](std::size_t a, std::size_t b, QuadObservable& out) {
    bracket_exact_into(fam.x_obs[a], fam.x_obs[b], out);
    return out.norm() / bracket_scale(xn[a], xn[b]);
  });
  pair_family("YY", [&](std::size_t a, std::size_t b, QuadObservable& out) {
    bracket_exact_into(fam.y_obs[a], fam.y_obs[b], out);
    return out.norm() / bracket_scale(yn[a], yn[b]);
  });
  pair_family("XY", [&](std::size_t a, std::size_t b, QuadObservable& out) {
    bracket_exact_into(fam.x_obs[a], fam.y_obs[b], out);
    out += 2.0 * fam.S(a, b);
    return out.norm() / bracket_scale(xn[a], yn[b]);
  });

  auto triple_family = [&](const char* name, auto&& residual) {
    RelationResult r{name, d * d * d, 0.0};
    r.max_residual = parallel_max(d, [&](std::size_t u) {
      QuadObservable out(n);
      double worst = 0.0;
      for (std::size_t v = 0; v < d; ++v)
        for (std::size_t z = 0; z < d; ++z) worst = std::max(worst, residual(u, v, z, out));
      return worst;
    });
    rep.relations.push_back(r);
  };

  triple_family("SX", [&](std::size_t u, std::size_t v, std::size_t z, QuadObservable& out) {
    bracket_exact_into(fam.S(u, v), fam.x_obs[z], out);
    const QuadObservable rhs = x_observable(hermitian_part(tp(u, v, z)));
    return distance(out, rhs) / bracket_scale(sn[u * d + v], xn[z]);
  });
  triple_family("SY", [&](std::size_t u, std::size_t v, std::size_t z, QuadObservable& out) {
    bracket_exact_into(fam.S(u, v), fam.y_obs[z], out);
    const QuadObservable rhs = y_observable(hermitian_part(tp(v, u, z))) * -1.0;
    return distance(out, rhs) / bracket_scale(sn[u * d + v], yn[z]);
  });

  // {S_uv, S_zw} = S_{{uvz} w} - S_{z {vuw}} = 1/2 <W, ({uvz} w - z {vuw}) Z>
  {
    RelationResult r{"SS", d * d * d * d, 0.0};
    r.max_residual = parallel_max(d * d, [&](std::size_t uv) {
      const std::size_t u = uv / d, v = uv % d;
      QuadObservable out(n), rhs(n);
      QMatrix m1(n), m2(n);
      double worst = 0.0;
      for (std::size_t z = 0; z < d; ++z) {
        for (std::size_t w = 0; w < d; ++w) {
          bracket_exact_into(fam.S(u, v), fam.S(z, w), out);
          mat_mul_into(tp(u, v, z), basis[w].mat(), m1);
          mat_mul_into(basis[z].mat(), tp(v, u, w), m2);
          m1 -= m2;
          bilinear_observable_into(m1, rhs);
          worst = std::max(worst, distance(out, rhs) / bracket_scale(sn[uv], sn[z * d + w]));
        }
      }
      return worst;
    });
    rep.relations.push_back(r);
  }
  return rep;
}

SoStarReport verify_so_star_relations(std::size_t n) { return verify_so_star_relations(build_observables(n)); }

MomentRelationReport verify_moment_relations(const RealizationFamily& fam) {
  const std::size_t n = fam.n;
  const QuadObservable xi[3] = {xi_observable(n, 1), xi_observable(n, 2), xi_observable(n, 3)};
  MomentRelationReport rep;
  QuadObservable out(n);
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    bracket_exact_into(xi[a], xi[b], out);
    const double scale = bracket_scale(xi[a].norm(), xi[b].norm());
    rep.coadjoint_plus = std::max(rep.coadjoint_plus, distance(out, xi[c]) / scale);
    out += xi[c];
    rep.coadjoint = std::max(rep.coadjoint, out.norm() / scale);
  }
  auto invariance = [&](const QuadObservable& f) {
    for (const auto& x : xi) {
      bracket_exact_into(x, f, out);
      rep.invariance = std::max(rep.invariance, out.norm() / bracket_scale(x.norm(), f.norm()));
    }
  };
  for (const auto& f : fam.x_obs) invariance(f);
  for (const auto& f : fam.y_obs) invariance(f);
  for (const auto& f : fam.s_obs) invariance(f);
  return rep;
}

Quaternion moment_rho(const PhasePoint& p) { return -im(dagger_product(p.W, p.Z)); }

Quaternion moment_psi(const PhasePoint& p, const Quaternion& xi) {
  if (std::abs(xi.w) > 1e-12 * std::max(1.0, norm(xi))) {
    throw std::invalid_argument("moment_psi: xi must be imaginary");
  }
  return im(dagger_product(p.W, p.Z)) + 2.0 * im(xi);
}

double magnetic_charge(const PhasePoint& p) { return 0.5 * norm(im(dagger_product(p.W, p.Z))); }

PhasePoint shift_to_target(const QVector& z, const QVector& w, const Quaternion& tau) {
  if (tau.w != 0.0) throw std::invalid_argument("shift_to_target: target must be imaginary");
  const double z2 = norm2(z);
  if (std::sqrt(z2) <= kDomainEps) throw std::domain_error("shift_to_target: |Z| must exceed the domain guard");
  const Quaternion nu = im(dagger_product(w, z));
  const Quaternion alpha = (nu - tau) * (1.0 / z2);
  return PhasePoint(z, w + z * alpha);
}

PhasePoint sample_leaf(const LeafSpec& spec, Rng& rng) {
  require_order(spec.n, "sample_leaf");
  if (!(spec.mu >= 0.0) || !std::isfinite(spec.mu)) throw std::invalid_argument("sample_leaf: mu must be finite and >= 0");
  QVector z = gaussian_qvector(spec.n, rng);
  while (norm(z) <= kDomainEps) z = gaussian_qvector(spec.n, rng);
  const QVector w = gaussian_qvector(spec.n, rng);
  const Quaternion nu = im(dagger_product(w, z));
  const double nn = norm(nu);
  const Quaternion dir = nn > 0.0 ? nu * (1.0 / nn) : Quaternion::i();
  return shift_to_target(z, w, dir * (2.0 * spec.mu));
}

RealizationValues realization_values(const JordanBasis& basis, const PhasePoint& p) {
  const std::size_t n = basis.order();
  if (p.order() != n) throw std::invalid_argument("realization_values: order mismatch");
  const std::size_t d = basis.dim();
  RealizationValues v;
  v.n = n;
  v.dim = d;
  v.X.resize(d);
  v.Y.resize(d);
  v.L.resize(d);
  v.S.resize(d * d);
  std::vector<QVector> ez(d), ew(d);
  for (std::size_t a = 0; a < d; ++a) {
    ez[a] = mat_apply(basis[a].mat(), p.Z);
    ew[a] = mat_apply(basis[a].mat(), p.W);
    v.X[a] = 0.25 * vec_inner(p.W, ew[a]);
    v.Y[a] = vec_inner(p.Z, ez[a]);
    v.L[a] = 0.5 * vec_inner(p.W, ez[a]);
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) v.S[a * d + b] = 0.5 * vec_inner(ew[a], ez[b]);
  v.Xe = 0.25 * norm2(p.W);
  v.Ye = norm2(p.Z);
  v.Le = 0.5 * vec_inner(p.W, p.Z);
  v.mu = magnetic_charge(p);
  return v;
}

double hamiltonian_from_realization(double xe, double ye) {
  if (!(ye > 0.0)) throw std::domain_error("hamiltonian: Y_e must be positive");
  return 0.5 * xe / ye - 1.0 / ye;
}

double lrl_from_realization(double xu, double yu, double xe, double ye) {
  if (!(ye > 0.0)) throw std::domain_error("lrl: Y_e must be positive");
  return 0.5 * (xu - yu * xe / ye) + yu / ye;
}

double relative_residual(double lhs, double rhs, double scale) {
  const double diff = std::abs(lhs - rhs);
  return scale > 0.0 ? diff / scale : diff;
}

double primary_quadratic_residual(const RealizationValues& v) {
  double s = 0.0;
  for (double l : v.L) s += l * l;
  const double lhs = 2.0 / v.n * s;
  const double rhs = sq(v.Le) + v.Xe * v.Ye - sq(v.mu);
  return relative_residual(lhs, rhs, std::max(lhs, sq(v.Le) + std::abs(v.Xe * v.Ye) + sq(v.mu)));
}

double primary_quadratic_residual(const JordanBasis& basis, const PhasePoint& p) {
  return primary_quadratic_residual(realization_values(basis, p));
}

std::array<double, 6> secondary_quadratic_residuals(const RealizationValues& v) {
  const double n = static_cast<double>(v.n);
  const std::size_t d = v.dim;
  std::array<double, 6> r{};

  // (i)
  {
    double xl = 0, yl = 0, sxl = 0, syl = 0;
    for (std::size_t a = 0; a < d; ++a) {
      xl += v.X[a] * v.L[a];
      yl += v.Y[a] * v.L[a];
      sxl += std::abs(v.X[a] * v.L[a]);
      syl += std::abs(v.Y[a] * v.L[a]);
    }
    r[0] = std::max(relative_residual(xl, n * v.Xe * v.Le, std::max(sxl, n * std::abs(v.Xe * v.Le))),
                    relative_residual(yl, n * v.Ye * v.Le, std::max(syl, n * std::abs(v.Ye * v.Le))));
  }
  // (ii) and (iv), u = e_g
  for (std::size_t g = 0; g < d; ++g) {
    double s2 = 0, a2 = 0, s4x = 0, a4x = 0, s4y = 0, a4y = 0;
    for (std::size_t a = 0; a < d; ++a) {
      const double lp = v.Lpair(a, g);
      s2 += lp * v.L[a];
      a2 += std::abs(lp * v.L[a]);
      s4x += lp * v.X[a];
      a4x += std::abs(lp * v.X[a]);
      s4y += lp * v.Y[a];
      a4y += std::abs(lp * v.Y[a]);
    }
    const double l2 = 4.0 / n * s2, r2 = -v.X[g] * v.Ye + v.Xe * v.Y[g];
    r[1] = std::max(r[1], relative_residual(l2, r2, std::max(4.0 / n * a2, std::abs(v.X[g] * v.Ye) + std::abs(v.Xe * v.Y[g]))));
    const double l4x = 2.0 / n * s4x, r4x = -v.X[g] * v.Le + v.L[g] * v.Xe;
    const double l4y = 2.0 / n * s4y, r4y = v.Y[g] * v.Le - v.L[g] * v.Ye;
    r[3] = std::max(r[3], relative_residual(l4x, r4x, std::max(2.0 / n * a4x, std::abs(v.X[g] * v.Le) + std::abs(v.L[g] * v.Xe))));
    r[3] = std::max(r[3], relative_residual(l4y, r4y, std::max(2.0 / n * a4y, std::abs(v.Y[g] * v.Le) + std::abs(v.L[g] * v.Ye))));
  }
  // (iii)
  {
    double xx = 0, yy = 0;
    for (std::size_t a = 0; a < d; ++a) {
      xx += sq(v.X[a]);
      yy += sq(v.Y[a]);
    }
    r[2] = std::max(relative_residual(xx, n * sq(v.Xe), std::max(xx, n * sq(v.Xe))),
                    relative_residual(yy, n * sq(v.Ye), std::max(yy, n * sq(v.Ye))));
  }
  // (v)
  {
    double xy = 0, axy = 0;
    for (std::size_t a = 0; a < d; ++a) {
      xy += v.X[a] * v.Y[a];
      axy += std::abs(v.X[a] * v.Y[a]);
    }
    const double rhs = n * (sq(v.Le) + sq(v.mu));
    r[4] = relative_residual(xy, rhs, std::max(axy, rhs));
  }
  // (vi)
  {
    const double l2 = 2.0 * angular_momentum_squared(v);
    const double lhs = 2.0 / (n * n * (n - 1.0)) * l2;
    const double rhs = v.Xe * v.Ye - sq(v.Le) + sq(v.mu);
    r[5] = relative_residual(lhs, rhs, std::max(lhs, std::abs(v.Xe * v.Ye) + sq(v.Le) + sq(v.mu)));
  }
  return r;
}

std::array<double, 6> secondary_quadratic_residuals(const JordanBasis& basis, const PhasePoint& p) {
  return secondary_quadratic_residuals(realization_values(basis, p));
}

double relation_vi_complex_residual(const RealizationValues& v) {
  const double n = static_cast<double>(v.n);
  const double lhs = 4.0 / (n * n * n) * 2.0 * angular_momentum_squared(v);
  const double m2 = (n - 2.0) / n * sq(v.mu);
  const double rhs = v.Xe * v.Ye - sq(v.Le) + m2;
  return relative_residual(lhs, rhs, std::max(lhs, std::abs(v.Xe * v.Ye) + sq(v.Le) + std::abs(m2)));
}

double angular_momentum_squared(const RealizationValues& v) {
  double s = 0.0;
  for (std::size_t a = 0; a < v.dim; ++a)
    for (std::size_t b = 0; b < v.dim; ++b) s += sq(v.Lpair(a, b));
  return 0.5 * s;
}

double lrl_squared(const RealizationValues& v) {
  double s = -1.0;
  for (std::size_t a = 0; a < v.dim; ++a) s += sq(lrl_from_realization(v.X[a], v.Y[a], v.Xe, v.Ye));
  return s;
}

namespace {

double energy_residual(const RealizationValues& v, double mu_coeff, double rhs_coeff) {
  const double n = static_cast<double>(v.n);
  const double h = hamiltonian_from_realization(v.Xe, v.Ye);
  const double l2 = angular_momentum_squared(v);
  const double a2 = lrl_squared(v);
  const double m2 = mu_coeff * sq(v.mu);
  const double lhs = -2.0 * h * (l2 - m2);
  const double rhs = rhs_coeff * (n - 1.0 - a2);
  const double scale = std::max(2.0 * std::abs(h) * (l2 + m2), std::abs(rhs_coeff) * (n + a2 + 1.0));
  return relative_residual(lhs, rhs, scale);
}

}  // namespace

double energy_formula_residual(const RealizationValues& v) {
  const double n = static_cast<double>(v.n);
  return energy_residual(v, n * n * (n - 1.0) / 2.0, n * (n - 1.0) / 2.0);
}

double energy_formula_residual(const JordanBasis& basis, const PhasePoint& p) {
  return energy_formula_residual(realization_values(basis, p));
}

double energy_formula_complex_residual(const RealizationValues& v) {
  const double n = static_cast<double>(v.n);
  return energy_residual(v, n * n * (n - 1.0) / 4.0, sq(n / 2.0));
}

}  // namespace sp1kepler
