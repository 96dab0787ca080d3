#pragma once

#include <optional>
#include <string>

#include "spherecurv/base_geometry.hpp"

namespace spherecurv {

// Atiyah Euclidean bundle E(M,k) = TM + so(TM) with fiber metric
// <X+F, Y+G>_k = <X,Y> - k tr(F o G) and the connection built from H. Its
// curvature ("supra-curvature") depends only on the base metric and k.

template <class S>
struct AtiyahSpec {
  PointModel<S> base;
  S k{1};

  int base_dim() const { return base.dim(); }
  int rank() const {
    int n = base_dim();
    return n + pair_count(n);
  }
};

// H_X applied to a full fiber element: the tangent part maps to the skew
// -1/2 R(X, xi_t), the skew part maps to the tangent vector defined by
// <H_X F, Y> = -k/2 tr(F o R(X,Y)).
template <class S>
Skew<S> h_on_tangent(const AtiyahSpec<S>& spec, const Vec<S>& x, const Vec<S>& z) {
  return scalar_from_fraction<S>(-1, 2) * riemann_endo(spec.base, x, z);
}

template <class S>
Vec<S> h_on_skew(const AtiyahSpec<S>& spec, const Vec<S>& x, const Skew<S>& f) {
  const int n = spec.base_dim();
  const S coeff = scalar_from_fraction<S>(-1, 2) * spec.k;
  Vec<S> out(n);
  for (int j = 0; j < n; ++j)
    out[j] = coeff * trace_product(f, riemann_endo(spec.base, x, Vec<S>::basis(n, j)));
  return out;
}

template <class S>
FiberVec<S> h_operator(const AtiyahSpec<S>& spec, const Vec<S>& x, const FiberVec<S>& xi) {
  return FiberVec<S>(h_on_skew(spec, x, xi.w), h_on_tangent(spec, x, xi.t));
}

// ---------------------------------------------------------------------------
// Supra-curvature R^{nabla^E}(X,Y) applied to a fiber element. The generic
// assembly composes H with itself and adds the curvature-derivative blocks:
//   on Z:  R(X,Y)Z + H_Y H_X Z - H_X H_Y Z   (tangent)
//          -1/2 (nabla_Z R)(X,Y)             (skew)
//   on F:  [R(X,Y), F] + H_Y H_X F - H_X H_Y F   (skew)
//          duality tangent part <.,Z> = -<R(X,Y)Z, F>_k
// Closed forms exist per model class and are used preferentially; the
// assembly backs the Generic route and the cross-check tests.

template <class S>
FiberVec<S> supra_curvature_assembled(const AtiyahSpec<S>& spec, const Vec<S>& x,
                                      const Vec<S>& y, const FiberVec<S>& xi) {
  const int n = spec.base_dim();
  const S half = scalar_from_fraction<S>(1, 2);
  Skew<S> rxy = riemann_endo(spec.base, x, y);

  // tangent input
  Vec<S> tz = rxy.apply(xi.t) + h_on_skew(spec, y, h_on_tangent(spec, x, xi.t)) -
              h_on_skew(spec, x, h_on_tangent(spec, y, xi.t));
  Skew<S> sz(n);
  const bool needs_deriv = !locally_symmetric(spec.base);
  if (needs_deriv) {
    if (!has_curvature_derivative(spec.base))
      throw std::invalid_argument("supra_curvature: base lacks curvature derivative data");
    sz = (-half) * nabla_riemann_endo(spec.base, xi.t, x, y);
  }

  // skew input
  Skew<S> sf = commutator(rxy, xi.w) + h_on_tangent(spec, y, h_on_skew(spec, x, xi.w)) -
               h_on_tangent(spec, x, h_on_skew(spec, y, xi.w));
  Vec<S> tf(n);
  if (needs_deriv) {
    // <(R(X,Y)F)_TM, e_j> = k tr( (-1/2 (nabla_{e_j} R)(X,Y)) o F )
    for (int j = 0; j < n; ++j) {
      Skew<S> d = (-half) * nabla_riemann_endo(spec.base, Vec<S>::basis(n, j), x, y);
      tf[j] = spec.k * trace_product(d, xi.w);
    }
  }
  return FiberVec<S>(tz + tf, sz + sf);
}

namespace detail {

template <class S>
FiberVec<S> supra_spaceform(const S& c, const S& k, const Vec<S>& x, const Vec<S>& y,
                            const FiberVec<S>& xi) {
  // coefficient -2*varpi with varpi = c(2-ck)/4
  S coeff = scalar_from_fraction<S>(-1, 2) * c * (S(2) - c * k);
  Skew<S> w = wedge(x, y);
  return FiberVec<S>(coeff * w.apply(xi.t), coeff * commutator(w, xi.w));
}

template <class S>
FiberVec<S> supra_symmetric(const SymmetricSpaceModel<S>& m, const S& k, const Vec<S>& x,
                            const Vec<S>& y, const FiberVec<S>& xi) {
  const S quarter_k = scalar_from_fraction<S>(1, 4) * k;
  Vec<S> w = sym_bracket_pp(m, x, y);
  // tangent slot: [[X,Y],Z] - k/4 ( [Y, U(Phi_[X,Z])] - [X, U(Phi_[Y,Z])] )
  Vec<S> uxz = sym_u_of(m, sym_phi(m, sym_bracket_pp(m, x, xi.t)));
  Vec<S> uyz = sym_u_of(m, sym_phi(m, sym_bracket_pp(m, y, xi.t)));
  // [Y, U] = -[U, Y] for U in k
  Vec<S> tz = sym_bracket_kp(m, w, xi.t) -
              quarter_k * ((-S(1)) * sym_bracket_kp(m, uxz, y) + sym_bracket_kp(m, uyz, x));
  // skew slot: [Phi_[X,Y], F] + k/4 [Phi_[X,Y], Phi_U(F)]
  Skew<S> phi_w = sym_phi(m, w);
  Skew<S> sf = commutator(phi_w, xi.w) + quarter_k * commutator(phi_w, sym_phi(m, sym_u_of(m, xi.w)));
  return FiberVec<S>(tz, sf);
}

template <class S>
FiberVec<S> supra_cpn(const ComplexProjectiveModel<S>& m, const S& k, const Vec<S>& x,
                      const Vec<S>& y, const FiberVec<S>& xi) {
  const int n2 = 2 * m.n_complex;
  Vec<S> jx = m.J.apply(x), jy = m.J.apply(y);
  S jyx = dot(jy, x);
  const Vec<S>& z = xi.t;
  Vec<S> jz = m.J.apply(z);
  // tangent slot
  Vec<S> tz = (k - S(1)) * (dot(y, z) * x - dot(x, z) * y + (S(2) * jyx) * jz) +
              (S(2 * m.n_complex + 3) * k - S(1)) * (dot(jz, x) * jy - dot(jz, y) * jx);
  // skew slot; the first bracket is [X^Y + JX^JY, F]
  Skew<S> w = wedge(x, y) + wedge(jx, jy);
  Skew<S> jfj(n2);
  {
    // J o F o J as a matrix
    for (int i = 0; i < n2; ++i) {
      Vec<S> col = m.J.apply(xi.w.apply(m.J.apply(Vec<S>::basis(n2, i))));
      for (int r = 0; r < n2; ++r) jfj.at(r, i) = col[r];
    }
  }
  const S half_k = scalar_from_fraction<S>(1, 2) * k;
  Vec<S> jfx = m.J.apply(xi.w.apply(x)), jfy = m.J.apply(xi.w.apply(y));
  Skew<S> sf = (half_k - S(1)) * commutator(w, xi.w) + (S(2) * jyx) * commutator(xi.w, m.J) +
               half_k * (commutator(jfj, wedge(x, y)) - wedge(jfx, jy) - wedge(jx, jfy));
  return FiberVec<S>(tz, sf);
}

template <class S>
FiberVec<S> supra_surface2d(const Surface2DModel<S>& m, const S& k, const Vec<S>& x,
                            const Vec<S>& y, const FiberVec<S>& xi) {
  // varpi = C(2-kC)/2 in the 2D convention
  S vp = scalar_from_fraction<S>(1, 2) * m.C * (S(2) - k * m.C);
  Skew<S> w = wedge(x, y);
  S half = scalar_from_fraction<S>(1, 2);
  Vec<S> tz = (-vp) * w.apply(xi.t) + (k * dot(xi.w.apply(x), y)) * m.grad_c;
  Skew<S> sz = (half * dot(m.grad_c, xi.t)) * w;
  Skew<S> sf = (-vp) * commutator(w, xi.w);
  return FiberVec<S>(tz, sz + sf);
}

}  // namespace detail

template <class S>
FiberVec<S> supra_curvature(const AtiyahSpec<S>& spec, const Vec<S>& x, const Vec<S>& y,
                            const FiberVec<S>& xi) {
  const int n = spec.base_dim();
  if (x.dim() != n || y.dim() != n || xi.t.dim() != n || xi.w.n != n)
    throw std::invalid_argument("supra_curvature: dimension mismatch");
  return std::visit(
      [&](const auto& m) -> FiberVec<S> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SpaceFormModel<S>>) {
          return detail::supra_spaceform(m.c, spec.k, x, y, xi);
        } else if constexpr (std::is_same_v<T, ProductModel<S>>) {
          FiberVec<S> out = FiberVec<S>::zero(n);
          int off = 0;
          for (const auto& f : m.factors) {
            int d = f.dim();
            Vec<S> xf(d), yf(d), zf(d);
            Skew<S> ff(d);
            for (int i = 0; i < d; ++i) {
              xf[i] = x[off + i];
              yf[i] = y[off + i];
              zf[i] = xi.t[off + i];
              for (int j = 0; j < d; ++j) ff.at(i, j) = xi.w(off + i, off + j);
            }
            AtiyahSpec<S> sub{f, spec.k};
            FiberVec<S> blk = supra_curvature(sub, xf, yf, FiberVec<S>(zf, ff));
            for (int i = 0; i < d; ++i) {
              out.t[off + i] += blk.t[i];
              for (int j = 0; j < d; ++j) out.w.at(off + i, off + j) = blk.w(i, j);
            }
            off += d;
          }
          return out;
        } else if constexpr (std::is_same_v<T, SymmetricSpaceModel<S>>) {
          return detail::supra_symmetric(m, spec.k, x, y, xi);
        } else if constexpr (std::is_same_v<T, ComplexProjectiveModel<S>>) {
          return detail::supra_cpn(m, spec.k, x, y, xi);
        } else if constexpr (std::is_same_v<T, Surface2DModel<S>>) {
          return detail::supra_surface2d(m, spec.k, x, y, xi);
        } else {
          return supra_curvature_assembled(spec, x, y, xi);
        }
      },
      spec.base.v);
}

// ---------------------------------------------------------------------------
// Derivative of the supra-curvature, nabla_W(R^{nabla^E})(Y,Z, xi). Vanishes
// over locally symmetric bases; over a surface it collects the dC terms, with
// second-order pieces fed by the optional Hessian.

template <class S>
FiberVec<S> nabla_supra(const AtiyahSpec<S>& spec, const Vec<S>& w, const Vec<S>& y,
                        const Vec<S>& z, const FiberVec<S>& xi) {
  const int n = spec.base_dim();
  if (locally_symmetric(spec.base)) return FiberVec<S>::zero(n);
  if (const auto* surf = std::get_if<Surface2DModel<S>>(&spec.base.v)) {
    const S half = scalar_from_fraction<S>(1, 2);
    S wc = dot(surf->grad_c, w);
    S dvp = S(1) - spec.k * surf->C;  // d(varpi)/dC
    Skew<S> wyz = wedge(y, z);
    Vec<S> hess_w(2);
    for (int j = 0; j < 2; ++j) hess_w[j] = surf->hess(0, j) * w[0] + surf->hess(1, j) * w[1];
    S hess_w_t = dot(hess_w, xi.t);
    Vec<S> tangent = (-dvp * wc) * wyz.apply(xi.t) + (spec.k * dot(xi.w.apply(y), z)) * hess_w;
    Skew<S> skew = (half * hess_w_t) * wyz + (-dvp * wc) * commutator(wyz, xi.w);
    return FiberVec<S>(tangent, skew);
  }
  throw std::invalid_argument("nabla_supra: no curvature-derivative data for this base");
}

// ---------------------------------------------------------------------------
// Vanishing test (analytic over space forms and their products, sampled
// otherwise) and the estimate constant for space forms.

struct VanishingVerdict {
  bool vanishes = false;
  std::string witness;  // empty when vanishes
};

template <class S>
VanishingVerdict supra_vanishes(const AtiyahSpec<S>& spec, double tol = kDefaultTol) {
  // analytic route: flatten products; every non-flat space-form factor needs c = 2/k
  std::function<std::optional<VanishingVerdict>(const PointModel<S>&, std::string)> analytic =
      [&](const PointModel<S>& model, std::string path) -> std::optional<VanishingVerdict> {
    if (const auto* sf = std::get_if<SpaceFormModel<S>>(&model.v)) {
      if (scalar_near<S>(sf->c, S(0), tol) || scalar_near<S>(sf->c * spec.k, S(2), tol))
        return VanishingVerdict{true, ""};
      return VanishingVerdict{
          false, path + "spaceform with c = " + format_scalar(sf->c) +
                     " (needs c = 0 or c = 2/k = " + format_scalar(S(2) / spec.k) + ")"};
    }
    if (const auto* pr = std::get_if<ProductModel<S>>(&model.v)) {
      for (size_t i = 0; i < pr->factors.size(); ++i) {
        auto sub = analytic(pr->factors[i], path + "factor " + std::to_string(i) + ": ");
        if (!sub) return std::nullopt;
        if (!sub->vanishes) return sub;
      }
      return VanishingVerdict{true, ""};
    }
    return std::nullopt;
  };
  if (auto v = analytic(spec.base, "")) return *v;

  // sampled fallback on the frame grid
  const int n = spec.base_dim();
  double worst = 0;
  std::string witness;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec<S> ei = Vec<S>::basis(n, i), ej = Vec<S>::basis(n, j);
      for (int s = 0; s < n + pair_count(n); ++s) {
        FiberVec<S> xi = FiberVec<S>::zero(n);
        if (s < n)
          xi.t = Vec<S>::basis(n, s);
        else {
          auto [a, b] = pair_from_index(n, s - n);
          xi.w = wedge(Vec<S>::basis(n, a), Vec<S>::basis(n, b));
        }
        FiberVec<S> r = supra_curvature(spec, ei, ej, xi);
        double mag = std::sqrt(std::abs(to_double(inner_k(r, r, spec.k))));
        if (mag > worst) {
          worst = mag;
          witness = "R(e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) +
                    ") on frame fiber " + std::to_string(s) + " has |.| = " + format_double(mag);
        }
      }
    }
  if (worst <= tol) return {true, ""};
  return {false, witness};
}

// Estimate constant K with |R^{nabla^E}(X,Y)xi| <= K |X||Y||xi| over a space
// form: K = 8|varpi|, varpi = c(2-ck)/4.
template <class S>
S supra_bound_K(const AtiyahSpec<S>& spec) {
  const auto* sf = std::get_if<SpaceFormModel<S>>(&spec.base.v);
  if (!sf) throw std::invalid_argument("supra_bound_K: base must be a space form");
  S vp = scalar_from_fraction<S>(1, 4) * sf->c * (S(2) - sf->c * spec.k);
  return S(8) * scalar_abs(vp);
}

}  // namespace spherecurv
