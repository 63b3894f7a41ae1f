#include "support.hpp"

#include <Eigen/Dense>

#include "sp1kepler/conformal.hpp"

using namespace sp1kepler;
using sp1kepler::testing::kSeed;

namespace {

double component_norm(const ConformalElement& a) { return a.norm(); }

ConformalElement difference(const ConformalElement& a, const ConformalElement& b) {
  ConformalElement d = a;
  for (std::size_t i = 0; i < d.x.size(); ++i) d.x[i] -= b.x[i];
  for (std::size_t i = 0; i < d.y.size(); ++i) d.y[i] -= b.y[i];
  d.s -= b.s;
  return d;
}

ConformalElement scaled(ConformalElement a, double s) {
  for (auto& x : a.x) x *= s;
  for (auto& y : a.y) y *= s;
  a.s *= s;
  return a;
}

ConformalElement random_element(const ConformalAlgebra& co, Rng& rng) {
  const std::size_t n = co.order();
  ConformalElement a = co.X(random_hermitian(n, rng));
  const ConformalElement y = co.Y(random_hermitian(n, rng));
  const ConformalElement s = co.S(random_hermitian(n, rng), random_hermitian(n, rng));
  a.y = y.y;
  a.s = s.s;
  return a;
}

std::size_t eigen_rank(const ConformalAlgebra& co) {
  const std::size_t d = co.dim_v();
  Eigen::MatrixXd m(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const Matrix& s = co.S_basis(a, b);
      for (std::size_t k = 0; k < d * d; ++k) m(a * d + b, k) = s.data()[k];
    }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank());
}

}  // namespace

TEST_CASE("dimension of co is that of so*(4n)") {
  CHECK(co_dimension(2) == 28);
  CHECK(co_dimension(3) == 66);
  for (std::size_t n = 2; n <= 4; ++n) {
    const ConformalAlgebra co(n);
    CAPTURE(n);
    CHECK(co.dim_str() == 4 * n * n);
    CHECK(co.dim() == 2 * n * (4 * n - 1));
    CHECK(eigen_rank(co) == co.dim_str());
  }
  // H_1(H) = R: str = R and co = sl(2, R)
  const ConformalAlgebra co1(1);
  CHECK(co1.dim_str() == 1);
  CHECK(co1.dim() == 3);
}

TEST_CASE("bracket examples") {
  const ConformalAlgebra co(2);
  const auto e = HermElement::identity(2);
  const auto Se = co.S(e, e);

  CHECK(component_norm(difference(co_bracket(co, Se, co.X(e)), co.X(e))) < 1e-14);
  CHECK(component_norm(difference(co_bracket(co, Se, co.Y(e)), scaled(co.Y(e), -1.0))) < 1e-14);

  const auto xy = co_bracket(co, co.X(e), co.Y(e));
  CHECK(frobenius_diff(xy.s, Matrix::identity(co.dim_v()) * -2.0) < 1e-14);

  Rng rng = make_rng(kSeed, 400);
  const auto u = random_hermitian(2, rng), v = random_hermitian(2, rng);
  CHECK(component_norm(co_bracket(co, co.Y(u), co.Y(v))) == 0.0);
  CHECK(component_norm(co_bracket(co, co.X(u), co.X(v))) == 0.0);
  const auto xuyv = co_bracket(co, co.X(u), co.Y(v));
  CHECK(frobenius_diff(xuyv.s, S_operator(u, v, co.basis()) * -2.0) < 1e-12);
}

TEST_CASE("antisymmetry and the dual action on Y") {
  const ConformalAlgebra co(2);
  Rng rng = make_rng(kSeed, 401);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_element(co, rng), b = random_element(co, rng);
    const auto ab = co_bracket(co, a, b), ba = co_bracket(co, b, a);
    ConformalElement sum = ab;
    for (std::size_t i = 0; i < sum.x.size(); ++i) sum.x[i] += ba.x[i];
    for (std::size_t i = 0; i < sum.y.size(); ++i) sum.y[i] += ba.y[i];
    sum.s += ba.s;
    CHECK(component_norm(sum) < 1e-12 * std::max(1.0, component_norm(ab)));
    CHECK(jacobi_residual(co, a, a, b) < 1e-11 * std::max(1.0, a.norm() * a.norm() * b.norm()));

    // [S_uv, Y_w] = -Y_{vuw}
    const auto u = random_hermitian(2, rng), v = random_hermitian(2, rng), w = random_hermitian(2, rng);
    const auto lhs = co_bracket(co, co.S(u, v), co.Y(w));
    const auto rhs = scaled(co.Y(triple_product(v, u, w)), -1.0);
    CHECK(component_norm(difference(lhs, rhs)) < 1e-11 * std::max(1.0, component_norm(rhs)));
  }
}

TEST_CASE("jacobi identity on random triples") {
  for (std::size_t n : {2, 3}) {
    const ConformalAlgebra co(n);
    Rng rng = make_rng(kSeed, 402, n);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
      const auto a = random_element(co, rng), b = random_element(co, rng), c = random_element(co, rng);
      worst = std::max(worst, jacobi_residual(co, a, b, c) / (a.norm() * b.norm() * c.norm()));
    }
    CAPTURE(n);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("jacobi identity on all generator triples, n = 2") {
  const ConformalAlgebra co(2);
  const auto sweep = jacobi_generator_sweep(co);
  CHECK(sweep.triples > 0);
  CHECK(sweep.max_residual < 1e-10);
}

TEST_CASE("str closes under the commutator") {
  const ConformalAlgebra co(2);
  const std::size_t d = co.dim_v();
  double worst = 0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e)
          worst = std::max(worst, co.str_projection_residual(commutator(co.S_basis(a, b), co.S_basis(c, e))));
  CHECK(worst < 1e-10);

  // str has dimension 16 inside the 36-dimensional operator space
  CHECK(co.str_projection_residual(Matrix::identity(d)) < 1e-12);
  Rng rng = make_rng(kSeed, 403);
  Matrix m(d, d);
  for (auto& x : m.values()) x = gaussian_quaternion(rng).w;
  CHECK(co.str_projection_residual(m) > 0.1 * frobenius(m));
}
