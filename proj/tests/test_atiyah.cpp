#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spherecurv/builtin_models.hpp"

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

FiberVec<double> gauss_fiber(Sampler& rng, int n) {
  return {gauss_vec(rng, n), gauss_skew(rng, n)};
}

void check_fiber_close(const FiberVec<double>& a, const FiberVec<double>& b, double eps = 1e-10) {
  for (int i = 0; i < a.t.dim(); ++i) CHECK(a.t[i] == doctest::Approx(b.t[i]).epsilon(eps));
  for (size_t i = 0; i < a.w.e.size(); ++i)
    CHECK(a.w.e[i] == doctest::Approx(b.w.e[i]).epsilon(eps));
}

}  // namespace

TEST_CASE("H vanishes over a flat base") {
  AtiyahSpec<double> spec{PointModel<double>{SpaceFormModel<double>{3, 0.0}}, 1.0};
  Sampler rng(1);
  auto h = h_operator(spec, gauss_vec(rng, 3), gauss_fiber(rng, 3));
  for (int i = 0; i < 3; ++i) CHECK(h.t[i] == doctest::Approx(0.0));
  for (const double& v : h.w.e) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("space form: H_X F = c k F(X)") {
  Sampler rng(2);
  for (double c : {1.0, -0.6}) {
    for (double k : {0.5, 1.0, 2.0}) {
      AtiyahSpec<double> spec{PointModel<double>{SpaceFormModel<double>{4, c}}, k};
      for (int t = 0; t < 20; ++t) {
        auto x = gauss_vec(rng, 4);
        auto f = gauss_skew(rng, 4);
        auto got = h_on_skew(spec, x, f);
        auto want = (c * k) * f.apply(x);
        for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]));
      }
    }
  }
}

TEST_CASE("symmetric space: H_X F = (k/2)[X, U(F)]") {
  auto sym = sym_sphere3<double>();
  AtiyahSpec<double> spec{PointModel<double>{sym}, 0.8};
  Sampler rng(3);
  for (int t = 0; t < 20; ++t) {
    auto x = gauss_vec(rng, 3);
    auto f = gauss_skew(rng, 3);
    auto got = h_on_skew(spec, x, f);
    // [X, U] = -[U, X] with U in k
    auto u = sym_u_of(sym, f);
    auto want = (-0.4) * sym_bracket_kp(sym, u, x);
    for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]));
  }
}

TEST_CASE("complex projective: H_X F = k(F(X) - tr(F J) JX - J F J X)") {
  ComplexProjectiveModel<double> cp{2, ComplexProjectiveModel<double>::canonical_J(2)};
  AtiyahSpec<double> spec{PointModel<double>{cp}, 1.3};
  Sampler rng(4);
  for (int t = 0; t < 20; ++t) {
    auto x = gauss_vec(rng, 4);
    auto f = gauss_skew(rng, 4);
    auto got = h_on_skew(spec, x, f);
    auto want = 1.3 * (f.apply(x) - trace_product(f, cp.J) * cp.J.apply(x) -
                       cp.J.apply(f.apply(cp.J.apply(x))));
    for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
  }
}

TEST_CASE("supra-curvature of a space form at the tuned k vanishes") {
  for (double k : {0.5, 1.0, 3.0}) {
    AtiyahSpec<double> spec{PointModel<double>{SpaceFormModel<double>{3, 2.0 / k}}, k};
    Sampler rng(5);
    for (int t = 0; t < 50; ++t) {
      auto r = supra_curvature(spec, gauss_vec(rng, 3), gauss_vec(rng, 3), gauss_fiber(rng, 3));
      CHECK(std::sqrt(inner_k(r, r, k)) < 1e-13);
    }
  }
}

TEST_CASE("supra-curvature of the round 3-sphere at k=1: R(e1,e2)e2 = -e1/2") {
  AtiyahSpec<double> spec{PointModel<double>{SpaceFormModel<double>{3, 1.0}}, 1.0};
  FiberVec<double> e2(Vec<double>::basis(3, 1), Skew<double>(3));
  auto r = supra_curvature(spec, Vec<double>::basis(3, 0), Vec<double>::basis(3, 1), e2);
  CHECK(r.t[0] == doctest::Approx(-0.5));
  CHECK(r.t[1] == doctest::Approx(0.0));
  CHECK(r.t[2] == doctest::Approx(0.0));
  for (const double& v : r.w.e) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("supra-curvature of a product vanishes when every factor is tuned") {
  ProductModel<double> prod;
  prod.factors.push_back(PointModel<double>{SpaceFormModel<double>{2, 0.0}});
  prod.factors.push_back(PointModel<double>{SpaceFormModel<double>{3, 2.0}});
  AtiyahSpec<double> spec{PointModel<double>{prod}, 1.0};
  Sampler rng(6);
  for (int t = 0; t < 50; ++t) {
    auto r = supra_curvature(spec, gauss_vec(rng, 5), gauss_vec(rng, 5), gauss_fiber(rng, 5));
    CHECK(std::sqrt(inner_k(r, r, 1.0)) < 1e-13);
  }
  CHECK(supra_vanishes(spec).vanishes);
}

TEST_CASE("surface with constant curvature matches the space-form closed form") {
  Surface2DModel<double> surf;
  surf.C = 1.4;  // grad = 0
  AtiyahSpec<double> surf_spec{PointModel<double>{surf}, 0.9};
  AtiyahSpec<double> sf_spec{PointModel<double>{SpaceFormModel<double>{2, 1.4}}, 0.9};
  Sampler rng(7);
  for (int t = 0; t < 50; ++t) {
    auto x = gauss_vec(rng, 2), y = gauss_vec(rng, 2);
    auto xi = gauss_fiber(rng, 2);
    check_fiber_close(supra_curvature(surf_spec, x, y, xi), supra_curvature(sf_spec, x, y, xi));
  }
}

TEST_CASE("closed forms agree with the assembled curvature on every model class") {
  Sampler rng(8);
  auto check_model = [&](PointModel<double> base, double k, int reps = 40) {
    AtiyahSpec<double> spec{base, k};
    int n = base.dim();
    for (int t = 0; t < reps; ++t) {
      auto x = gauss_vec(rng, n), y = gauss_vec(rng, n);
      auto xi = gauss_fiber(rng, n);
      check_fiber_close(supra_curvature(spec, x, y, xi), supra_curvature_assembled(spec, x, y, xi),
                        1e-9);
    }
  };
  check_model(PointModel<double>{SpaceFormModel<double>{3, 1.0}}, 0.7);
  check_model(PointModel<double>{SpaceFormModel<double>{4, -0.8}}, 1.6);
  check_model(PointModel<double>{sym_sphere2<double>()}, 0.6);
  check_model(PointModel<double>{sym_sphere3<double>()}, 1.1);
  check_model(PointModel<double>{
                  ComplexProjectiveModel<double>{2, ComplexProjectiveModel<double>::canonical_J(2)}},
              0.8);
  Surface2DModel<double> surf;
  surf.C = 1.3;
  surf.grad_c = Vec<double>{0.5, -0.2};
  check_model(PointModel<double>{surf}, 1.0);
  ProductModel<double> prod;
  prod.factors.push_back(PointModel<double>{SpaceFormModel<double>{2, 1.5}});
  prod.factors.push_back(PointModel<double>{SpaceFormModel<double>{2, -0.5}});
  check_model(PointModel<double>{prod}, 0.9);
}

TEST_CASE("symmetric space: statement form with the least-squares split agrees") {
  // R(X,Y)F = [Phi_[X,Y], Phi_{X^F + (k/4)U(F)}] + [Phi_[X,Y], F_perp]
  auto sym = sym_sphere3<double>();
  double k = 0.8;
  AtiyahSpec<double> spec{PointModel<double>{sym}, k};
  Sampler rng(9);
  for (int t = 0; t < 30; ++t) {
    auto x = gauss_vec(rng, 3), y = gauss_vec(rng, 3);
    auto f = gauss_skew(rng, 3);

    // least-squares split of F into Phi_k part and complement under -tr(AB)
    std::vector<Skew<double>> gens;
    for (int a = 0; a < sym.dim_k; ++a) gens.push_back(sym_phi(sym, Vec<double>::basis(3, a)));
    const int dk = sym.dim_k;
    std::vector<double> G(static_cast<size_t>(dk) * dk), rhs(dk);
    for (int a = 0; a < dk; ++a) {
      rhs[a] = -trace_product(gens[a], f);
      for (int b = 0; b < dk; ++b) G[a * dk + b] = -trace_product(gens[a], gens[b]);
    }
    // solve G xf = rhs by Gaussian elimination (G is positive definite here)
    std::vector<double> xf = rhs;
    {
      std::vector<double> A = G;
      for (int col = 0; col < dk; ++col) {
        int piv = col;
        for (int r2 = col + 1; r2 < dk; ++r2)
          if (std::abs(A[r2 * dk + col]) > std::abs(A[piv * dk + col])) piv = r2;
        for (int c2 = 0; c2 < dk; ++c2) std::swap(A[piv * dk + c2], A[col * dk + c2]);
        std::swap(xf[piv], xf[col]);
        for (int r2 = 0; r2 < dk; ++r2) {
          if (r2 == col) continue;
          double fct = A[r2 * dk + col] / A[col * dk + col];
          for (int c2 = 0; c2 < dk; ++c2) A[r2 * dk + c2] -= fct * A[col * dk + c2];
          xf[r2] -= fct * xf[col];
        }
      }
      for (int i = 0; i < dk; ++i) xf[i] /= A[i * dk + i];
    }
    Vec<double> xF(dk);
    for (int i = 0; i < dk; ++i) xF[i] = xf[i];
    Skew<double> phi_xF = sym_phi(sym, xF);
    Skew<double> f_perp = f - phi_xF;
    // residual orthogonal to every generator
    for (int a = 0; a < dk; ++a)
      CHECK(-trace_product(gens[a], f_perp) == doctest::Approx(0.0).epsilon(1e-9));

    Skew<double> phi_w = sym_phi(sym, sym_bracket_pp(sym, x, y));
    Vec<double> arg = xF + 0.25 * k * sym_u_of(sym, f);
    Skew<double> statement = commutator(phi_w, sym_phi(sym, arg)) + commutator(phi_w, f_perp);
    auto got = supra_curvature(spec, x, y, FiberVec<double>(Vec<double>(3), f));
    for (size_t i = 0; i < statement.e.size(); ++i)
      CHECK(got.w.e[i] == doctest::Approx(statement.e[i]).epsilon(1e-9));
    // the tangent component of R(X,Y)F vanishes over this locally symmetric base
    for (int i = 0; i < 3; ++i) CHECK(got.t[i] == doctest::Approx(0.0));
  }
}

TEST_CASE("supra-curvature is skew-adjoint for the k-metric") {
  Sampler rng(10);
  for_each_builtin_model([&](const std::string& name, const auto& model) {
    using B = typename std::decay_t<decltype(model)>::Bundle;
    if constexpr (std::is_same_v<B, AtiyahBundle<double>>) {
      const auto& spec = model.bundle.spec;
      int n = spec.base_dim();
      for (int t = 0; t < 25; ++t) {
        auto x = gauss_vec(rng, n), y = gauss_vec(rng, n);
        auto xi = gauss_fiber(rng, n), eta = gauss_fiber(rng, n);
        double s = inner_k(supra_curvature(spec, x, y, xi), eta, spec.k) +
                   inner_k(xi, supra_curvature(spec, x, y, eta), spec.k);
        CHECK(s == doctest::Approx(0.0).epsilon(1e-9));
      }
      (void)name;
    }
  });
}

TEST_CASE("vanishing verdicts") {
  for (double k : {0.5, 2.0}) {
    AtiyahSpec<double> tuned{PointModel<double>{SpaceFormModel<double>{3, 2.0 / k}}, k};
    CHECK(supra_vanishes(tuned).vanishes);
  }
  AtiyahSpec<double> off{PointModel<double>{SpaceFormModel<double>{3, 1.0}}, 1.0};
  auto v = supra_vanishes(off);
  CHECK_FALSE(v.vanishes);
  CHECK(v.witness.find("c = 1") != std::string::npos);

  AtiyahSpec<double> cp{PointModel<double>{ComplexProjectiveModel<double>{
                            2, ComplexProjectiveModel<double>::canonical_J(2)}},
                        1.0};
  CHECK_FALSE(supra_vanishes(cp).vanishes);  // sampled route

  ProductModel<double> prod;
  prod.factors.push_back(PointModel<double>{SpaceFormModel<double>{2, 2.0}});
  prod.factors.push_back(PointModel<double>{SpaceFormModel<double>{2, 1.0}});
  AtiyahSpec<double> pr{PointModel<double>{prod}, 1.0};
  auto pv = supra_vanishes(pr);
  CHECK_FALSE(pv.vanishes);
  CHECK(pv.witness.find("factor 1") != std::string::npos);
}

TEST_CASE("estimate constant: K = 8|varpi|") {
  AtiyahSpec<double> tuned{PointModel<double>{SpaceFormModel<double>{3, 2.0}}, 1.0};
  CHECK(supra_bound_K(tuned) == doctest::Approx(0.0));
  AtiyahSpec<double> s3{PointModel<double>{SpaceFormModel<double>{3, 1.0}}, 1.0};
  CHECK(supra_bound_K(s3) == doctest::Approx(2.0));
  AtiyahSpec<double> bad{PointModel<double>{sym_sphere2<double>()}, 1.0};
  CHECK_THROWS_AS(supra_bound_K(bad), std::invalid_argument);

  // sampled estimate over 10^4 draws
  Sampler rng(11);
  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    auto x = gauss_vec(rng, 3), y = gauss_vec(rng, 3);
    auto xi = gauss_fiber(rng, 3);
    auto r = supra_curvature(s3, x, y, xi);
    double bound = 2.0 * norm(x) * norm(y) * std::sqrt(inner_k(xi, xi, 1.0));
    worst = std::max(worst, std::sqrt(inner_k(r, r, 1.0)) / bound);
  }
  CHECK(worst <= 1.0);
}

TEST_CASE("derivative of the supra-curvature") {
  // locally symmetric: zero
  AtiyahSpec<double> s3{PointModel<double>{SpaceFormModel<double>{3, 1.0}}, 1.0};
  Sampler rng(12);
  auto d0 = nabla_supra(s3, gauss_vec(rng, 3), gauss_vec(rng, 3), gauss_vec(rng, 3),
                        gauss_fiber(rng, 3));
  CHECK(inner_k(d0, d0, 1.0) == doctest::Approx(0.0));

  // constant-curvature surface: zero
  Surface2DModel<double> flat;
  flat.C = 0.7;
  AtiyahSpec<double> fs{PointModel<double>{flat}, 1.0};
  auto d1 = nabla_supra(fs, gauss_vec(rng, 2), gauss_vec(rng, 2), gauss_vec(rng, 2),
                        gauss_fiber(rng, 2));
  CHECK(inner_k(d1, d1, 1.0) == doctest::Approx(0.0));

  // varying curvature: antisymmetric in the two curvature slots, linear in xi
  Surface2DModel<double> surf;
  surf.C = 0.7;
  surf.grad_c = Vec<double>{0.4, 0.1};
  surf.hess_c = {0.2, -0.1, 0.3};
  AtiyahSpec<double> vs{PointModel<double>{surf}, 1.2};
  for (int t = 0; t < 20; ++t) {
    auto w = gauss_vec(rng, 2), y = gauss_vec(rng, 2), z = gauss_vec(rng, 2);
    auto xi = gauss_fiber(rng, 2), eta = gauss_fiber(rng, 2);
    auto a = nabla_supra(vs, w, y, z, xi);
    auto b = nabla_supra(vs, w, z, y, xi);
    check_fiber_close(a, FiberVec<double>(-1.0 * b.t, -1.0 * b.w));
    auto lin = nabla_supra(vs, w, y, z, xi + eta);
    check_fiber_close(lin, a + nabla_supra(vs, w, y, z, eta));
  }

  // no derivative data for a generic base without tables
  GenericModel<double> gen;
  gen.n = 2;
  gen.R.push_back(Skew<double>(2));
  AtiyahSpec<double> gs{PointModel<double>{gen}, 1.0};
  CHECK_THROWS_AS(nabla_supra(gs, Vec<double>(2), Vec<double>(2), Vec<double>(2),
                              FiberVec<double>::zero(2)),
                  std::invalid_argument);
}
