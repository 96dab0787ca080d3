#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spherecurv/sphere_bundle.hpp"

namespace spherecurv {

// Reference model fixtures used by the verify suites and the test binaries.

// S^2 as SO(3)/SO(2): p = span(A_13, A_23), k = span(A_12). The pp table is
// scaled by c so the curvature [[X,Y],Z] matches a space form of curvature c.
template <class S>
SymmetricSpaceModel<S> sym_sphere2(const S& c = S(1)) {
  SymmetricSpaceModel<S> m;
  m.dim_p = 2;
  m.dim_k = 1;
  auto v1 = [&](S a) {
    Vec<S> v(1);
    v[0] = a;
    return v;
  };
  m.pp = {{v1(S(0)), v1(-c)}, {v1(c), v1(S(0))}};
  m.kp = {{Vec<S>{S(0), S(-1)}, Vec<S>{S(1), S(0)}}};
  m.kk = {{v1(S(0))}};
  return m;
}

// S^3 as SO(4)/SO(3): p = span(A_14, A_24, A_34), k = (A_12, A_13, A_23).
template <class S>
SymmetricSpaceModel<S> sym_sphere3() {
  SymmetricSpaceModel<S> m;
  m.dim_p = 3;
  m.dim_k = 3;
  auto v3 = [](int i, S s) {
    Vec<S> v(3);
    if (i >= 0) v[i] = s;
    return v;
  };
  Vec<S> z = v3(-1, S(0));
  m.pp = {{z, v3(0, S(-1)), v3(1, S(-1))},
          {v3(0, S(1)), z, v3(2, S(-1))},
          {v3(1, S(1)), v3(2, S(1)), z}};
  m.kp = {{v3(1, S(-1)), v3(0, S(1)), z},
          {v3(2, S(-1)), z, v3(0, S(1))},
          {z, v3(2, S(-1)), v3(1, S(1))}};
  m.kk = {{z, v3(2, S(-1)), v3(1, S(1))},
          {v3(2, S(1)), z, v3(0, S(-1))},
          {v3(1, S(-1)), v3(0, S(1)), z}};
  return m;
}

// Resample the evaluation point: random fiber vector rescaled to |a| = r.
template <class B>
SphereBundleModel<B> with_random_a(SphereBundleModel<B> m, Sampler& rng) {
  auto a = m.bundle.zero_fiber();
  for (int s = 0; s < m.bundle.rank(); ++s)
    a = a + (rng.gaussian() / std::sqrt(to_double(m.bundle.frame_norm2(s)))) *
                m.bundle.frame_raw(s);
  double na = std::sqrt(m.bundle.inner(a, a));
  if (na < 1e-9) return with_random_a(std::move(m), rng);
  m.a = (to_double(m.r) / na) * a;
  return m;
}

// The built-in roster: one model per base-geometry class, visited generically.
template <class Fn>
void for_each_builtin_model(Fn&& fn) {
  {
    PointModel<double> base{SpaceFormModel<double>{2, 1.0}};
    ClassicTangentBundle<double> b{base};
    fn("tangent/spaceform(2,1)", SphereBundleModel<ClassicTangentBundle<double>>{
                                     b, 1.0, Vec<double>::basis(2, 0)});
  }
  {
    PointModel<double> base{Unimodular3Model<double>{0.5, 1.0 / 3.0, 0.25}};
    ClassicTangentBundle<double> b{base};
    fn("tangent/unimodular3(1/2,1/3,1/4)", SphereBundleModel<ClassicTangentBundle<double>>{
                                               b, 1.0, Vec<double>::basis(3, 2)});
  }
  {
    PointModel<double> base{SpaceFormModel<double>{3, 1.0}};
    AtiyahBundle<double> b{AtiyahSpec<double>{base, 1.0}};
    auto a = FiberVec<double>::zero(3);
    a.t[0] = 0.9;
    fn("atiyah/spaceform(3,1)k=1",
       SphereBundleModel<AtiyahBundle<double>>{b, 0.9, a});
  }
  {
    PointModel<double> base{sym_sphere2<double>()};
    AtiyahBundle<double> b{AtiyahSpec<double>{base, 0.7}};
    auto a = FiberVec<double>::zero(2);
    a.t[0] = 1.1;
    fn("atiyah/symmetric-s2 k=0.7",
       SphereBundleModel<AtiyahBundle<double>>{b, 1.1, a});
  }
  {
    PointModel<double> base{
        ComplexProjectiveModel<double>{2, ComplexProjectiveModel<double>::canonical_J(2)}};
    AtiyahBundle<double> b{AtiyahSpec<double>{base, 0.8}};
    auto a = FiberVec<double>::zero(4);
    a.t[0] = 1.0;
    fn("atiyah/cpn(2) k=0.8", SphereBundleModel<AtiyahBundle<double>>{b, 1.0, a});
  }
  {
    Surface2DModel<double> surf;
    surf.C = 1.3;
    surf.grad_c = Vec<double>{0.2, -0.1};
    surf.hess_c = {0.05, -0.02, 0.04};
    PointModel<double> base{surf};
    AtiyahBundle<double> b{AtiyahSpec<double>{base, 1.0}};
    auto a = FiberVec<double>::zero(2);
    a.t[1] = 0.8;
    fn("atiyah/surface2d grad!=0", SphereBundleModel<AtiyahBundle<double>>{b, 0.8, a});
  }
  {
    // flat generic bundle of rank 4 over the round 3-sphere
    PointModel<double> base{SpaceFormModel<double>{3, 1.0}};
    GenericVecBundle<double> b;
    b.base = base;
    b.m = 4;
    b.curv_table.assign(static_cast<size_t>(pair_count(3)), std::vector<double>(16, 0.0));
    fn("generic/flat rank-4 over s3",
       SphereBundleModel<GenericVecBundle<double>>{b, 1.0, Vec<double>::basis(4, 0)});
  }
}

}  // namespace spherecurv
