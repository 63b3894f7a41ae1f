#include "support.hpp"

#include <stdexcept>

#include "sp1kepler/dynamics.hpp"
#include "sp1kepler/realization.hpp"

using namespace sp1kepler;
using sp1kepler::testing::kSeed;
using sp1kepler::testing::random_point;

namespace {

QuadObservable random_quadratic(std::size_t n, Rng& rng) {
  const std::size_t d = 8 * n;
  Matrix a(d, d);
  std::vector<double> b(d);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& x : a.values()) x = g(rng);
  for (auto& x : b) x = g(rng);
  return QuadObservable(n, a, b, g(rng));
}

}  // namespace

TEST_CASE("flatten layout and round trip") {
  const PhasePoint p(QVector{Quaternion::one(), Quaternion{}}, QVector(2));
  const auto z = flatten(p);
  REQUIRE(z.size() == 16);
  CHECK(z[0] == 1.0);
  for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i] == 0.0);

  Rng rng = make_rng(kSeed, 500);
  const PhasePoint q = random_point(3, rng);
  const PhasePoint back = unflatten(flatten(q));
  CHECK(back.Z == q.Z);
  CHECK(back.W == q.W);

  // Re(U^dagger V) is the dot product of the flattened halves
  const auto fz = flatten(q);
  double dot = 0;
  for (std::size_t i = 0; i < 12; ++i) dot += fz[i] * fz[12 + i];
  CHECK(dot == doctest::Approx(vec_inner(q.Z, q.W)).epsilon(1e-14));
}

TEST_CASE("phase point domain") {
  CHECK_THROWS_AS(PhasePoint(QVector(2), QVector(2)), std::domain_error);
  CHECK_THROWS_AS(PhasePoint(QVector{Quaternion::one()}, QVector(2)), std::invalid_argument);
  CHECK_THROWS_AS(unflatten(std::vector<double>(7)), std::invalid_argument);
}

TEST_CASE("evaluate") {
  Rng rng = make_rng(kSeed, 501);
  const PhasePoint p = random_point(2, rng);
  CHECK(evaluate(QuadObservable(2), p) == 0.0);
  CHECK(evaluate(constant_observable(2, 5.0), p) == 5.0);

  const PhasePoint unit(QVector{Quaternion::one(), Quaternion{}}, gaussian_qvector(2, rng));
  CHECK(evaluate(y_observable(HermElement::identity(2)), unit) == doctest::Approx(1.0));

  CHECK_THROWS_AS(evaluate(QuadObservable(3), p), std::invalid_argument);
}

TEST_CASE("basic relations") {
  Rng rng = make_rng(kSeed, 502);
  for (int t = 0; t < 20; ++t) {
    const QVector u = gaussian_qvector(2, rng), v = gaussian_qvector(2, rng);
    const auto zw = bracket_exact(linear_position(u), linear_momentum(v));
    CHECK(frobenius(zw.A()) == 0.0);
    CHECK(zw.c() == doctest::Approx(vec_inner(u, v)).epsilon(1e-14));

    const auto zz = bracket_exact(linear_position(u), linear_position(v));
    CHECK(zz.norm() == 0.0);
    const auto ww = bracket_exact(linear_momentum(u), linear_momentum(v));
    CHECK(ww.norm() == 0.0);
  }
}

TEST_CASE("exact bracket is antisymmetric and satisfies Jacobi") {
  Rng rng = make_rng(kSeed, 503);
  for (int t = 0; t < 30; ++t) {
    const auto f = random_quadratic(2, rng), g = random_quadratic(2, rng), h = random_quadratic(2, rng);
    CHECK(bracket_exact(f, f).norm() < 1e-12 * f.norm() * f.norm());
    CHECK(distance(bracket_exact(f, g), bracket_exact(g, f) * -1.0) < 1e-12 * f.norm() * g.norm());

    const auto jac = bracket_exact(f, bracket_exact(g, h)) + bracket_exact(g, bracket_exact(h, f)) +
                     bracket_exact(h, bracket_exact(f, g));
    CHECK(jac.norm() < 1e-12 * f.norm() * g.norm() * h.norm());
  }
}

TEST_CASE("block-sparse path agrees with the dense formula") {
  const std::size_t d = 16;
  Matrix J(d, d);
  for (std::size_t i = 0; i < d / 2; ++i) {
    J(i, d / 2 + i) = 1.0;
    J(d / 2 + i, i) = -1.0;
  }
  const auto dense_A = [&](const QuadObservable& f, const QuadObservable& g) {
    return f.A() * J * g.A() - g.A() * J * f.A();
  };

  Rng rng = make_rng(kSeed, 504);
  const auto x = x_observable(random_hermitian(2, rng));
  const auto y = y_observable(random_hermitian(2, rng));
  const auto s = s_observable(random_hermitian(2, rng), random_hermitian(2, rng));
  const auto r = random_quadratic(2, rng);
  for (const auto* f : {&x, &y, &s, &r})
    for (const auto* g : {&x, &y, &s, &r}) {
      const auto fast = bracket_exact(*f, *g);
      const Matrix ref = dense_A(*f, *g);
      CHECK(frobenius_diff(fast.A(), ref) < 1e-13 * std::max(1.0, frobenius(ref)));
    }
}

TEST_CASE("numeric bracket agrees with the exact engine") {
  Rng rng = make_rng(kSeed, 505);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const auto f = random_quadratic(2, rng), g = random_quadratic(2, rng);
    const PhasePoint p = random_point(2, rng);
    const double exact = evaluate(bracket_exact(f, g), p);
    const double numeric = bracket_numeric(as_function(f), as_function(g), p);
    worst = std::max(worst, std::abs(exact - numeric));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("numeric bracket on non-quadratic functions") {
  Rng rng = make_rng(kSeed, 506);
  const auto H = hamiltonian_function();
  for (int t = 0; t < 10; ++t) {
    const PhasePoint p = random_point(2, rng);
    CHECK(std::abs(bracket_numeric(H, H, p)) < 1e-9);
  }

  // Leibniz: {f, g h} = {f, g} h + g {f, h}
  for (int t = 0; t < 20; ++t) {
    const auto f = random_quadratic(2, rng), g = random_quadratic(2, rng), h = random_quadratic(2, rng);
    const PhasePoint p = random_point(2, rng);
    const auto gf = as_function(g), hf = as_function(h);
    const SmoothObservable gh = [&](std::span<const double> z) { return gf(z) * hf(z); };
    const double lhs = bracket_numeric(as_function(f), gh, p);
    const double rhs = evaluate(bracket_exact(f, g), p) * evaluate(h, p) + evaluate(g, p) * evaluate(bracket_exact(f, h), p);
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("numeric bracket error is second order in h") {
  Rng rng = make_rng(kSeed, 507);
  const PhasePoint p = random_point(2, rng);
  const auto H = hamiltonian_function();
  const auto A = lrl_function(random_hermitian(2, rng));
  // no Richardson fallback, so the truncation term is visible
  const auto at = [&](double h) { return bracket_numeric(H, A, p, {h, 1e300}); };
  const double ref = at(1e-4 / 8);
  const double e1 = std::abs(at(1e-2) - ref), e2 = std::abs(at(5e-3) - ref);
  CHECK(e1 > 0);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("numeric bracket guards") {
  Rng rng = make_rng(kSeed, 508);
  const PhasePoint p = random_point(2, rng);
  const auto f = as_function(random_quadratic(2, rng));
  CHECK_THROWS_AS(bracket_numeric(f, f, p, {1e-320, 1e-8}), std::invalid_argument);
  CHECK_THROWS_AS(bracket_numeric(f, f, p, {0.0, 1e-8}), std::invalid_argument);
}
