#include "sp1kepler/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sp1kepler/simd/kernels.hpp"

namespace sp1kepler {

namespace {

void require_same_order(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": order mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

bool block_nonzero(const Matrix& a, std::size_t d, std::size_t r0, std::size_t c0) {
  for (std::size_t r = r0; r < r0 + d; ++r)
    for (std::size_t c = c0; c < c0 + d; ++c)
      if (a(r, c) != 0.0) return true;
  return false;
}

double z_norm_from_flat(std::span<const double> z) {
  const std::size_t d = z.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += z[i] * z[i];
  return std::sqrt(s);
}

}  // namespace

PhasePoint::PhasePoint(QVector z, QVector w) : Z(std::move(z)), W(std::move(w)) {
  if (Z.size() != W.size()) throw std::invalid_argument("PhasePoint: Z and W lengths differ");
  if (Z.size() == 0) throw std::invalid_argument("PhasePoint: empty vectors");
  if (norm(Z) <= kDomainEps) throw std::domain_error("PhasePoint: |Z| must exceed the domain guard");
}

std::vector<double> flatten(const PhasePoint& p) {
  const std::size_t n = p.order();
  std::vector<double> z(8 * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (int c = 0; c < 4; ++c) {
      z[4 * a + c] = p.Z[a][c];
      z[4 * n + 4 * a + c] = p.W[a][c];
    }
  }
  return z;
}

PhasePoint unflatten(std::span<const double> z) {
  if (z.size() == 0 || z.size() % 8 != 0) throw std::invalid_argument("unflatten: length must be a positive multiple of 8");
  const std::size_t n = z.size() / 8;
  QVector zq(n), wq(n);
  for (std::size_t a = 0; a < n; ++a) {
    zq[a] = Quaternion(z[4 * a], z[4 * a + 1], z[4 * a + 2], z[4 * a + 3]);
    wq[a] = Quaternion(z[4 * n + 4 * a], z[4 * n + 4 * a + 1], z[4 * n + 4 * a + 2], z[4 * n + 4 * a + 3]);
  }
  return PhasePoint(std::move(zq), std::move(wq));
}

QuadObservable::QuadObservable(std::size_t n) : n_(n), a_(8 * n, 8 * n), b_(8 * n, 0.0) {}

QuadObservable::QuadObservable(std::size_t n, Matrix a, std::vector<double> b, double c)
    : n_(n), a_(std::move(a)), b_(std::move(b)), c_(c) {
  const std::size_t d = 8 * n;
  if (a_.rows() != d || a_.cols() != d || b_.size() != d) {
    throw std::invalid_argument("QuadObservable: data does not match order " + std::to_string(n));
  }
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c2 = r + 1; c2 < d; ++c2) {
      const double s = 0.5 * (a_(r, c2) + a_(c2, r));
      a_(r, c2) = s;
      a_(c2, r) = s;
    }
  }
  refresh();
}

void QuadObservable::refresh() {
  const std::size_t d = 4 * n_;
  blocks_ = {block_nonzero(a_, d, 0, 0), block_nonzero(a_, d, 0, d), block_nonzero(a_, d, d, 0),
             block_nonzero(a_, d, d, d)};
}

double QuadObservable::norm() const {
  const auto& k = simd::kernels();
  const std::size_t d = dim();
  return std::sqrt(k.dot(a_.data(), a_.data(), d * d) + k.dot(b_.data(), b_.data(), d) + c_ * c_);
}

QuadObservable& QuadObservable::operator+=(const QuadObservable& o) {
  require_same_order(n_, o.n_, "QuadObservable +=");
  a_ += o.a_;
  simd::kernels().axpy(1.0, o.b_.data(), b_.data(), b_.size());
  c_ += o.c_;
  refresh();
  return *this;
}

QuadObservable& QuadObservable::operator-=(const QuadObservable& o) {
  require_same_order(n_, o.n_, "QuadObservable -=");
  a_ -= o.a_;
  simd::kernels().axpy(-1.0, o.b_.data(), b_.data(), b_.size());
  c_ -= o.c_;
  refresh();
  return *this;
}

QuadObservable& QuadObservable::operator*=(double s) {
  a_ *= s;
  for (auto& v : b_) v *= s;
  c_ *= s;
  refresh();
  return *this;
}

QuadObservable operator+(QuadObservable a, const QuadObservable& b) { return a += b; }
QuadObservable operator-(QuadObservable a, const QuadObservable& b) { return a -= b; }
QuadObservable operator*(QuadObservable a, double s) { return a *= s; }
QuadObservable operator*(double s, QuadObservable a) { return a *= s; }

double distance(const QuadObservable& f, const QuadObservable& g) {
  require_same_order(f.order(), g.order(), "distance");
  const auto& k = simd::kernels();
  const std::size_t d = f.dim();
  const double dc = f.c() - g.c();
  return std::sqrt(k.sq_dist(f.A().data(), g.A().data(), d * d) + k.sq_dist(f.b().data(), g.b().data(), d) +
                   dc * dc);
}

double evaluate(const QuadObservable& f, std::span<const double> z) {
  const std::size_t d = f.dim();
  if (z.size() != d) throw std::invalid_argument("evaluate: dimension mismatch");
  const auto& k = simd::kernels();
  double quad = 0.0;
  for (std::size_t r = 0; r < d; ++r) quad += z[r] * k.dot(f.A().data() + r * d, z.data(), d);
  return 0.5 * quad + k.dot(f.b().data(), z.data(), d) + f.c();
}

double evaluate(const QuadObservable& f, const PhasePoint& p) {
  require_same_order(f.order(), p.order(), "evaluate");
  const auto z = flatten(p);
  return evaluate(f, z);
}

void bracket_exact_into(const QuadObservable& f, const QuadObservable& g, QuadObservable& out) {
  require_same_order(f.order(), g.order(), "bracket_exact");
  const std::size_t n = f.order();
  const std::size_t d = 4 * n;
  const std::size_t ld = 2 * d;
  if (out.order() != n) out = QuadObservable(n);

  Matrix& P = out.mutable_A();
  P.set_zero();
  const auto& k = simd::kernels();
  const double* A = f.A().data();
  const double* B = g.A().data();
  // Block views (row-major, leading dimension ld).
  const double* Aqq = A;
  const double* Aqp = A + d;
  const double* Apq = A + d * ld;
  const double* App = A + d * ld + d;
  const double* Bqq = B;
  const double* Bqp = B + d;
  const double* Bpq = B + d * ld;
  const double* Bpp = B + d * ld + d;
  const auto& fb = f.blocks();
  const auto& gb = g.blocks();
  enum { qq = 0, qp = 1, pq = 2, pp = 3 };
  double* Pqq = P.data();
  double* Pqp = P.data() + d;
  double* Ppq = P.data() + d * ld;
  double* Ppp = P.data() + d * ld + d;

  // P = (A J) B with A J = [[-Aqp, Aqq], [-App, Apq]].
  if (fb[qp] && gb[qq]) k.gemm_acc(d, d, d, -1.0, Aqp, ld, Bqq, ld, Pqq, ld);
  if (fb[qq] && gb[pq]) k.gemm_acc(d, d, d, 1.0, Aqq, ld, Bpq, ld, Pqq, ld);
  if (fb[qp] && gb[qp]) k.gemm_acc(d, d, d, -1.0, Aqp, ld, Bqp, ld, Pqp, ld);
  if (fb[qq] && gb[pp]) k.gemm_acc(d, d, d, 1.0, Aqq, ld, Bpp, ld, Pqp, ld);
  if (fb[pp] && gb[qq]) k.gemm_acc(d, d, d, -1.0, App, ld, Bqq, ld, Ppq, ld);
  if (fb[pq] && gb[pq]) k.gemm_acc(d, d, d, 1.0, Apq, ld, Bpq, ld, Ppq, ld);
  if (fb[pp] && gb[qp]) k.gemm_acc(d, d, d, -1.0, App, ld, Bqp, ld, Ppp, ld);
  if (fb[pq] && gb[pp]) k.gemm_acc(d, d, d, 1.0, Apq, ld, Bpp, ld, Ppp, ld);

  // A' = P + P^T = AJB - BJA  (B J A = -(A J B)^T since J^T = -J).
  for (std::size_t r = 0; r < ld; ++r) {
    P(r, r) *= 2.0;
    for (std::size_t c = r + 1; c < ld; ++c) {
      const double s = P(r, c) + P(c, r);
      P(r, c) = s;
      P(c, r) = s;
    }
  }

  // J v = (v_p, -v_q)
  const auto& bf = f.b();
  const auto& bg = g.b();
  std::vector<double>& bout = out.mutable_b();
  std::fill(bout.begin(), bout.end(), 0.0);
  std::vector<double> jb(ld);
  for (std::size_t i = 0; i < d; ++i) {
    jb[i] = bg[d + i];
    jb[d + i] = -bg[i];
  }
  for (std::size_t r = 0; r < ld; ++r) bout[r] += k.dot(A + r * ld, jb.data(), ld);
  for (std::size_t i = 0; i < d; ++i) {
    jb[i] = bf[d + i];
    jb[d + i] = -bf[i];
  }
  for (std::size_t r = 0; r < ld; ++r) bout[r] -= k.dot(B + r * ld, jb.data(), ld);

  double c = 0.0;
  for (std::size_t i = 0; i < d; ++i) c += bf[i] * bg[d + i] - bf[d + i] * bg[i];
  out.set_c(c);
  out.refresh();
}

QuadObservable bracket_exact(const QuadObservable& f, const QuadObservable& g) {
  QuadObservable out(f.order());
  bracket_exact_into(f, g, out);
  return out;
}

QuadObservable linear_position(const QVector& u) {
  const std::size_t n = u.size();
  std::vector<double> b(8 * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (int c = 0; c < 4; ++c) b[4 * a + c] = u[a][c];
  return QuadObservable(n, Matrix(8 * n, 8 * n), std::move(b), 0.0);
}

QuadObservable linear_momentum(const QVector& v) {
  const std::size_t n = v.size();
  std::vector<double> b(8 * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (int c = 0; c < 4; ++c) b[4 * n + 4 * a + c] = v[a][c];
  return QuadObservable(n, Matrix(8 * n, 8 * n), std::move(b), 0.0);
}

QuadObservable constant_observable(std::size_t n, double c) {
  QuadObservable f(n);
  f.set_c(c);
  return f;
}

SmoothObservable as_function(const QuadObservable& f) {
  return [f](std::span<const double> z) { return evaluate(f, z); };
}

std::vector<double> numeric_gradient(const SmoothObservable& f, std::span<const double> z, double h) {
  std::vector<double> probe(z.begin(), z.end());
  std::vector<double> grad(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + h;
    const double up = f(probe);
    probe[i] = saved - h;
    const double down = f(probe);
    probe[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

namespace {

std::vector<double> refined_gradient(const SmoothObservable& f, std::span<const double> z,
                                     const NumericBracketOptions& opt) {
  auto coarse = numeric_gradient(f, z, opt.h);
  const auto fine = numeric_gradient(f, z, opt.h / 2.0);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    diff = std::max(diff, std::abs(coarse[i] - fine[i]));
    scale = std::max(scale, std::abs(fine[i]));
  }
  if (diff <= opt.fallback_tol * std::max(1.0, scale)) return coarse;
  for (std::size_t i = 0; i < z.size(); ++i) coarse[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return coarse;
}

}  // namespace

double bracket_numeric(const SmoothObservable& f, const SmoothObservable& g, const PhasePoint& p,
                       const NumericBracketOptions& options) {
  const auto z = flatten(p);
  double zmax = 0.0;
  for (double v : z) zmax = std::max(zmax, std::abs(v));
  if (!(options.h > 0.0) || options.h < 1e-12 * std::max(1.0, zmax)) {
    throw std::invalid_argument("bracket_numeric: finite-difference step underflow");
  }
  if (z_norm_from_flat(z) < kDomainEps) throw std::domain_error("bracket_numeric: |Z| below the domain guard");

  const auto gf = refined_gradient(f, z, options);
  const auto gg = refined_gradient(g, z, options);
  const std::size_t d = z.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += gf[i] * gg[d + i] - gf[d + i] * gg[i];
  return s;
}

}  // namespace sp1kepler
