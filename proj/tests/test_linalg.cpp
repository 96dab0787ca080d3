#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spherecurv/linalg.hpp"
#include "spherecurv/rng.hpp"

using namespace spherecurv;

namespace {

Vec<double> gauss_vec(Sampler& rng, int n) {
  Vec<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

Skew<double> gauss_skew(Sampler& rng, int n) {
  Skew<double> s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s.set(i, j, rng.gaussian());
  return s;
}

}  // namespace

TEST_CASE("wedge basis case acts as e1^e2(e2) = e1") {
  auto e1 = Vec<double>::basis(3, 0), e2 = Vec<double>::basis(3, 1);
  auto w = wedge(e1, e2);
  auto r = w.apply(e2);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(0.0));
  CHECK(r[2] == doctest::Approx(0.0));
  // only the (1,2)/(2,1) entries are populated
  int nonzero = 0;
  for (const double& v : w.e)
    if (v != 0) ++nonzero;
  CHECK(nonzero == 2);
  CHECK(w(0, 1) == -w(1, 0));
}

TEST_CASE("wedge of equal vectors vanishes") {
  Sampler rng(1);
  auto x = gauss_vec(rng, 4);
  auto w = wedge(x, x);
  for (const double& v : w.e) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("wedge definition vs matrix action on all basis vectors") {
  // X = e1 + e2, Y = e2: (X^Y)(e1) = -e2, checked two ways
  Vec<double> x{1, 1, 0};
  auto y = Vec<double>::basis(3, 1);
  auto w = wedge(x, y);
  for (int k = 0; k < 3; ++k) {
    auto z = Vec<double>::basis(3, k);
    auto via_matrix = w.apply(z);
    auto via_def = dot(y, z) * x - dot(x, z) * y;
    for (int i = 0; i < 3; ++i) CHECK(via_matrix[i] == doctest::Approx(via_def[i]));
  }
  auto r = w.apply(Vec<double>::basis(3, 0));
  CHECK(r[1] == doctest::Approx(-1.0));
}

TEST_CASE("wedge is bilinear and alternating") {
  Sampler rng(2);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng.raw() % 4);
    auto x = gauss_vec(rng, n), y = gauss_vec(rng, n), z = gauss_vec(rng, n);
    double a = rng.gaussian(), b = rng.gaussian();
    auto lhs = wedge(a * x + b * y, z);
    auto rhs = a * wedge(x, z) + b * wedge(y, z);
    for (size_t i = 0; i < lhs.e.size(); ++i) CHECK(lhs.e[i] == doctest::Approx(rhs.e[i]));
    auto anti = wedge(x, y) + wedge(y, x);
    for (const double& v : anti.e) CHECK(v == doctest::Approx(0.0));
    CHECK(wedge(x, y).is_skew(1e-12));
  }
}

TEST_CASE("inner_k: tangent and skew parts are orthogonal") {
  Sampler rng(3);
  auto x = gauss_vec(rng, 3);
  auto g = gauss_skew(rng, 3);
  FiberVec<double> xi(x, Skew<double>(3));
  FiberVec<double> eta(Vec<double>(3), g);
  CHECK(inner_k(xi, eta, 0.7) == doctest::Approx(0.0));
}

TEST_CASE("inner_k: normalized wedge frame vector has unit length") {
  for (double k : {0.5, 1.0, 2.5}) {
    auto w = wedge(Vec<double>::basis(2, 0), Vec<double>::basis(2, 1));
    FiberVec<double> f(Vec<double>(2), (1.0 / std::sqrt(2 * k)) * w);
    CHECK(inner_k(f, f, k) == doctest::Approx(1.0));
  }
}

TEST_CASE("inner_k: trace oracle at k=1, F=G=e1^e2 in dimension 2") {
  // -tr(F o G) computed by explicit 2x2 product: F o G = -Id, trace -2
  auto w = wedge(Vec<double>::basis(2, 0), Vec<double>::basis(2, 1));
  double tr = trace_product(w, w);
  CHECK(tr == doctest::Approx(-2.0));
  FiberVec<double> f(Vec<double>(2), w);
  CHECK(inner_k(f, f, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("inner_k positive definite for k in (0, 10]") {
  Sampler rng(4);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + static_cast<int>(rng.raw() % 4);
    FiberVec<double> xi(gauss_vec(rng, n), gauss_skew(rng, n));
    double k = rng.uniform(1e-6, 10.0);
    if (inner_k(xi, xi, k) <= 0) {
      // only the zero vector may fail positivity
      CHECK(norm2(xi.t) + inner_k(FiberVec<double>(Vec<double>(n), xi.w),
                                  FiberVec<double>(Vec<double>(n), xi.w), k) ==
            doctest::Approx(0.0));
    }
  }
  CHECK_THROWS_AS(inner_k(FiberVec<double>::zero(2), FiberVec<double>::zero(2), -1.0),
                  std::invalid_argument);
}

TEST_CASE("exact mode: rationals with no precision loss") {
  using R = Rational;
  // three hand-computed cases with known denominators
  Vec<R> x{R(1, 3), R(1, 5)};
  Vec<R> y{R(2, 7), R(1, 2)};
  CHECK(dot(x, y) == R(1, 3) * R(2, 7) + R(1, 5) * R(1, 2));
  CHECK(dot(x, y) == R(41, 210));

  auto w = wedge(x, y);
  CHECK(w(0, 1) == R(1, 3) * R(1, 2) - R(2, 7) * R(1, 5));
  CHECK(w(0, 1) == R(23, 210));

  FiberVec<R> f(Vec<R>(2), w);
  CHECK(inner_k(f, f, R(1, 2)) == R(2) * R(1, 2) * w(0, 1) * w(0, 1));
  CHECK(inner_k(f, f, R(1, 2)) == R(529, 44100));
}

TEST_CASE("orthonormalize: idempotent on orthonormal input") {
  std::vector<Vec<double>> in{Vec<double>::basis(3, 0), Vec<double>::basis(3, 2)};
  auto out = orthonormalize<Vec<double>>(
      in, [](const Vec<double>& a, const Vec<double>& b) { return dot(a, b); });
  for (int i = 0; i < 3; ++i) {
    CHECK(out[0][i] == doctest::Approx(in[0][i]));
    CHECK(out[1][i] == doctest::Approx(in[1][i]));
  }
}

TEST_CASE("orthonormalize: one projection step") {
  std::vector<Vec<double>> in{Vec<double>::basis(2, 0), Vec<double>{1, 1}};
  auto out = orthonormalize<Vec<double>>(
      in, [](const Vec<double>& a, const Vec<double>& b) { return dot(a, b); });
  CHECK(out[1][0] == doctest::Approx(0.0));
  CHECK(out[1][1] == doctest::Approx(1.0));
}

TEST_CASE("orthonormalize: random input has identity Gram matrix") {
  Sampler rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<Vec<double>> in;
    for (int i = 0; i < 3; ++i) in.push_back(gauss_vec(rng, 5));
    auto inner = [](const Vec<double>& a, const Vec<double>& b) { return dot(a, b); };
    auto out = orthonormalize<Vec<double>>(in, inner);
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = 0; j < out.size(); ++j)
        CHECK(inner(out[i], out[j]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
  }
}

TEST_CASE("orthonormalize: rank deficiency throws") {
  std::vector<Vec<double>> in{Vec<double>{1, 2}, Vec<double>{2, 4}};
  CHECK_THROWS_AS(orthonormalize<Vec<double>>(
                      in, [](const Vec<double>& a, const Vec<double>& b) { return dot(a, b); }),
                  std::invalid_argument);
}

TEST_CASE("pair index enumeration is lexicographic and invertible") {
  for (int n = 2; n <= 6; ++n) {
    int s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++s) {
        CHECK(pair_index(n, i, j) == s);
        auto [a, b] = pair_from_index(n, s);
        CHECK(a == i);
        CHECK(b == j);
      }
    CHECK(s == pair_count(n));
  }
}

TEST_CASE("skew invariant maintained by commutator and scaling") {
  Sampler rng(6);
  for (int t = 0; t < 50; ++t) {
    auto a = gauss_skew(rng, 4), b = gauss_skew(rng, 4);
    CHECK(commutator(a, b).is_skew(1e-11));
    CHECK((2.5 * a + b).is_skew(1e-12));
  }
}

TEST_CASE("dimension mismatches throw") {
  CHECK_THROWS_AS(wedge(Vec<double>(2), Vec<double>(3)), std::invalid_argument);
  CHECK_THROWS_AS(dot(Vec<double>(2), Vec<double>(3)), std::invalid_argument);
}
