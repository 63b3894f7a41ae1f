#include "sp1kepler/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sp1kepler/parallel.hpp"
#include "sp1kepler/simd/kernels.hpp"

namespace sp1kepler {

namespace {

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double t) { return t == 0.0; });
}

double sq_norm(std::span<const double> v) { return simd::kernels().dot(v.data(), v.data(), v.size()); }

void require_compatible(const ConformalAlgebra& alg, const ConformalElement& e) {
  const std::size_t d = alg.dim_v();
  if (e.x.size() != d || e.y.size() != d || e.s.rows() != d || e.s.cols() != d) {
    throw std::invalid_argument("conformal: element dimension does not match the algebra");
  }
}

}  // namespace

double ConformalElement::norm() const {
  return std::sqrt(sq_norm(x) + sq_norm(s.values()) + sq_norm(y));
}

ConformalAlgebra::ConformalAlgebra(std::size_t n) : basis_(n) {
  const std::size_t d = basis_.dim();
  s_table_.reserve(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) s_table_.push_back(S_operator(basis_[a], basis_[b], basis_));

  // Modified Gram-Schmidt with one re-orthogonalization pass; the span of the
  // (overcomplete) S table is str.
  const auto& k = simd::kernels();
  const std::size_t len = d * d;
  for (const Matrix& s : s_table_) {
    std::vector<double> v(s.values().begin(), s.values().end());
    const double original = std::sqrt(k.dot(v.data(), v.data(), len));
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : str_basis_) k.axpy(-k.dot(q.data(), v.data(), len), q.data(), v.data(), len);
    }
    const double rest = std::sqrt(k.dot(v.data(), v.data(), len));
    if (rest <= kRankTol * original) continue;
    for (auto& t : v) t /= rest;
    str_basis_.push_back(std::move(v));
  }
}

void ConformalAlgebra::add_S_of(std::span<const double> u, std::span<const double> v, double scale,
                                Matrix& out) const {
  const std::size_t d = dim_v();
  const auto& k = simd::kernels();
  for (std::size_t a = 0; a < d; ++a) {
    if (u[a] == 0.0) continue;
    for (std::size_t b = 0; b < d; ++b) {
      if (v[b] == 0.0) continue;
      k.axpy(scale * u[a] * v[b], s_table_[a * d + b].data(), out.data(), d * d);
    }
  }
}

Matrix ConformalAlgebra::S_of(std::span<const double> u, std::span<const double> v) const {
  if (u.size() != dim_v() || v.size() != dim_v()) throw std::invalid_argument("S_of: coordinate count mismatch");
  Matrix out(dim_v(), dim_v());
  add_S_of(u, v, 1.0, out);
  return out;
}

ConformalElement ConformalAlgebra::zero() const {
  const std::size_t d = dim_v();
  return {std::vector<double>(d, 0.0), Matrix(d, d), std::vector<double>(d, 0.0)};
}

ConformalElement ConformalAlgebra::X(const HermElement& z) const {
  ConformalElement e = zero();
  e.x = basis_.coords(z);
  return e;
}

ConformalElement ConformalAlgebra::Y(const HermElement& w) const {
  ConformalElement e = zero();
  e.y = basis_.coords(w);
  return e;
}

ConformalElement ConformalAlgebra::S(const HermElement& u, const HermElement& v) const {
  ConformalElement e = zero();
  e.s = S_operator(u, v, basis_);
  return e;
}

ConformalElement ConformalAlgebra::X_basis(std::size_t alpha) const {
  ConformalElement e = zero();
  e.x.at(alpha) = 1.0;
  return e;
}

ConformalElement ConformalAlgebra::Y_basis(std::size_t alpha) const {
  ConformalElement e = zero();
  e.y.at(alpha) = 1.0;
  return e;
}

ConformalElement ConformalAlgebra::S_basis_element(std::size_t alpha, std::size_t beta) const {
  ConformalElement e = zero();
  e.s = S_basis(alpha, beta);
  return e;
}

double ConformalAlgebra::str_projection_residual(const Matrix& s) const {
  const std::size_t len = dim_v() * dim_v();
  if (s.rows() * s.cols() != len) throw std::invalid_argument("str_projection_residual: shape mismatch");
  const auto& k = simd::kernels();
  std::vector<double> v(s.values().begin(), s.values().end());
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : str_basis_) k.axpy(-k.dot(q.data(), v.data(), len), q.data(), v.data(), len);
  }
  return std::sqrt(k.dot(v.data(), v.data(), len));
}

void ConformalAlgebra::bracket_into(const ConformalElement& a, const ConformalElement& b, ConformalElement& out) const {
  require_compatible(*this, a);
  require_compatible(*this, b);
  const std::size_t d = dim_v();
  if (out.x.size() != d || out.y.size() != d || out.s.rows() != d || out.s.cols() != d) out = zero();
  std::fill(out.x.begin(), out.x.end(), 0.0);
  std::fill(out.y.begin(), out.y.end(), 0.0);
  out.s.set_zero();

  const auto& k = simd::kernels();
  const bool as = !all_zero(a.s.values()), bs = !all_zero(b.s.values());
  const bool ax = !all_zero(a.x), bx = !all_zero(b.x);
  const bool ay = !all_zero(a.y), by = !all_zero(b.y);

  // str part: [S, S'] and the X-Y cross terms.
  if (as && bs) {
    k.gemm_acc(d, d, d, 1.0, a.s.data(), d, b.s.data(), d, out.s.data(), d);
    k.gemm_acc(d, d, d, -1.0, b.s.data(), d, a.s.data(), d, out.s.data(), d);
  }
  if (ax && by) add_S_of(a.x, b.y, -2.0, out.s);
  if (bx && ay) add_S_of(b.x, a.y, 2.0, out.s);

  // X part: [S_a, X_{b.x}] - [S_b, X_{a.x}]
  if (as && bx) k.gemm_acc(d, 1, d, 1.0, a.s.data(), d, b.x.data(), 1, out.x.data(), 1);
  if (bs && ax) k.gemm_acc(d, 1, d, -1.0, b.s.data(), d, a.x.data(), 1, out.x.data(), 1);

  // Y part: -Y_{S_a^T b.y} + Y_{S_b^T a.y}
  if (as && by) {
    for (std::size_t r = 0; r < d; ++r)
      if (b.y[r] != 0.0) k.axpy(-b.y[r], a.s.data() + r * d, out.y.data(), d);
  }
  if (bs && ay) {
    for (std::size_t r = 0; r < d; ++r)
      if (a.y[r] != 0.0) k.axpy(a.y[r], b.s.data() + r * d, out.y.data(), d);
  }
}

ConformalElement ConformalAlgebra::bracket(const ConformalElement& a, const ConformalElement& b) const {
  ConformalElement out = zero();
  bracket_into(a, b, out);
  return out;
}

ConformalElement co_bracket(const ConformalAlgebra& algebra, const ConformalElement& a, const ConformalElement& b) {
  return algebra.bracket(a, b);
}

namespace {

struct Scratch {
  ConformalElement t1, t2, sum;
};

double component_max_norm(const ConformalElement& e) {
  return std::sqrt(std::max({sq_norm(e.x), sq_norm(e.s.values()), sq_norm(e.y)}));
}

void accumulate(ConformalElement& sum, const ConformalElement& t, double sign) {
  const auto& k = simd::kernels();
  k.axpy(sign, t.x.data(), sum.x.data(), t.x.size());
  k.axpy(sign, t.y.data(), sum.y.data(), t.y.size());
  k.axpy(sign, t.s.data(), sum.s.data(), t.s.rows() * t.s.cols());
}

void clear(ConformalElement& e) {
  std::fill(e.x.begin(), e.x.end(), 0.0);
  std::fill(e.y.begin(), e.y.end(), 0.0);
  e.s.set_zero();
}

}  // namespace

double jacobi_residual(const ConformalAlgebra& algebra, const ConformalElement& a, const ConformalElement& b,
                       const ConformalElement& c) {
  Scratch s{algebra.zero(), algebra.zero(), algebra.zero()};
  const ConformalElement* cyc[3][3] = {{&a, &b, &c}, {&b, &c, &a}, {&c, &a, &b}};
  for (auto& t : cyc) {
    algebra.bracket_into(*t[1], *t[2], s.t1);
    algebra.bracket_into(*t[0], s.t1, s.t2);
    accumulate(s.sum, s.t2, 1.0);
  }
  return component_max_norm(s.sum);
}

std::size_t co_dimension(std::size_t n) { return ConformalAlgebra(n).dim(); }

std::vector<ConformalElement> generators(const ConformalAlgebra& algebra) {
  const std::size_t d = algebra.dim_v();
  std::vector<ConformalElement> g;
  g.reserve(2 * d + d * d);
  for (std::size_t a = 0; a < d; ++a) g.push_back(algebra.X_basis(a));
  for (std::size_t a = 0; a < d; ++a) g.push_back(algebra.Y_basis(a));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) g.push_back(algebra.S_basis_element(a, b));
  return g;
}

JacobiSweep jacobi_generator_sweep(const ConformalAlgebra& algebra) {
  const auto gens = generators(algebra);
  const std::size_t m = gens.size();
  // pair[i][j] = [g_i, g_j] for i < j
  std::vector<ConformalElement> pair(m * m);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = i + 1; j < m; ++j) pair[i * m + j] = algebra.bracket(gens[i], gens[j]);
  });

  JacobiSweep out;
  out.triples = m < 3 ? 0 : m * (m - 1) * (m - 2) / 6;
  out.max_residual = parallel_max(m, [&](std::size_t i) {
    Scratch s{algebra.zero(), algebra.zero(), algebra.zero()};
    double worst = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        clear(s.sum);
        // [g_i,[g_j,g_k]] + [g_j,[g_k,g_i]] + [g_k,[g_i,g_j]], with [g_k,g_i] = -[g_i,g_k]
        algebra.bracket_into(gens[i], pair[j * m + k], s.t2);
        accumulate(s.sum, s.t2, 1.0);
        algebra.bracket_into(gens[j], pair[i * m + k], s.t2);
        accumulate(s.sum, s.t2, -1.0);
        algebra.bracket_into(gens[k], pair[i * m + j], s.t2);
        accumulate(s.sum, s.t2, 1.0);
        worst = std::max(worst, component_max_norm(s.sum));
      }
    }
    return worst;
  });
  return out;
}

}  // namespace sp1kepler
