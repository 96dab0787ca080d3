#pragma once

#include "spherecurv/atiyah.hpp"

namespace spherecurv {

// The sphere-bundle engine is generic over a bundle policy supplying the
// fiber type, the fiber metric, the connection curvature and its derivative.
// Three policies cover the built-in bundle kinds.

// E = TM with the Levi-Civita connection.
template <class S>
struct ClassicTangentBundle {
  using Scalar = S;
  using Fiber = Vec<S>;

  PointModel<S> base;

  int base_dim() const { return base.dim(); }
  int rank() const { return base.dim(); }

  S inner(const Fiber& a, const Fiber& b) const { return dot(a, b); }
  Fiber zero_fiber() const { return Vec<S>(base_dim()); }

  Fiber curv(const Vec<S>& x, const Vec<S>& y, const Fiber& xi) const {
    return riemann(base, x, y, xi);
  }
  Fiber nabla_curv(const Vec<S>& w, const Vec<S>& y, const Vec<S>& z, const Fiber& xi) const {
    return nabla_riemann_endo(base, w, y, z).apply(xi);
  }
  bool nabla_curv_available() const {
    return locally_symmetric(base) || has_curvature_derivative(base);
  }

  Fiber frame_raw(int s) const { return Vec<S>::basis(base_dim(), s); }
  S frame_norm2(int) const { return S(1); }
};

// E = TM + so(TM) with the Atiyah connection.
template <class S>
struct AtiyahBundle {
  using Scalar = S;
  using Fiber = FiberVec<S>;

  AtiyahSpec<S> spec;

  int base_dim() const { return spec.base_dim(); }
  int rank() const { return spec.rank(); }
  const PointModel<S>& base() const { return spec.base; }

  S inner(const Fiber& a, const Fiber& b) const { return inner_k(a, b, spec.k); }
  Fiber zero_fiber() const { return FiberVec<S>::zero(base_dim()); }

  Fiber curv(const Vec<S>& x, const Vec<S>& y, const Fiber& xi) const {
    return supra_curvature(spec, x, y, xi);
  }
  Fiber nabla_curv(const Vec<S>& w, const Vec<S>& y, const Vec<S>& z, const Fiber& xi) const {
    return nabla_supra(spec, w, y, z, xi);
  }
  bool nabla_curv_available() const {
    return locally_symmetric(spec.base) ||
           std::holds_alternative<Surface2DModel<S>>(spec.base.v);
  }

  // frame: n tangent directions, then the wedge pairs in lexicographic order;
  // the wedge vectors are left unnormalized (norm^2 = 2k) so that exact-mode
  // Gram assembly stays rational.
  Fiber frame_raw(int s) const {
    const int n = base_dim();
    Fiber out = FiberVec<S>::zero(n);
    if (s < n) {
      out.t = Vec<S>::basis(n, s);
    } else {
      auto [i, j] = pair_from_index(n, s - n);
      out.w = wedge(Vec<S>::basis(n, i), Vec<S>::basis(n, j));
    }
    return out;
  }
  S frame_norm2(int s) const { return s < base_dim() ? S(1) : S(2) * spec.k; }
};

// Curvature given directly as fiber-frame tables; fiber metric is the
// standard one in that frame. Missing derivative tables are treated as zero.
template <class S>
struct GenericVecBundle {
  using Scalar = S;
  using Fiber = Vec<S>;

  PointModel<S> base;
  int m = 0;
  std::vector<std::vector<S>> curv_table;  // [pair(i,j)] row-major m x m, skew
  std::vector<std::vector<std::vector<S>>> nabla_table;  // [w][pair(i,j)], may be empty

  int base_dim() const { return base.dim(); }
  int rank() const { return m; }

  S inner(const Fiber& a, const Fiber& b) const { return dot(a, b); }
  Fiber zero_fiber() const { return Vec<S>(m); }

  Fiber apply_table(const std::vector<S>& t, const Fiber& xi) const {
    Fiber out(m);
    for (int i = 0; i < m; ++i) {
      S s(0);
      for (int j = 0; j < m; ++j) s += t[static_cast<size_t>(i) * m + j] * xi[j];
      out[i] = s;
    }
    return out;
  }

  Fiber curv(const Vec<S>& x, const Vec<S>& y, const Fiber& xi) const {
    const int n = base_dim();
    Fiber out(m);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        S coeff = x[i] * y[j] - x[j] * y[i];
        if (coeff == S(0)) continue;
        out = out + coeff * apply_table(curv_table[static_cast<size_t>(pair_index(n, i, j))], xi);
      }
    return out;
  }
  Fiber nabla_curv(const Vec<S>& w, const Vec<S>& y, const Vec<S>& z, const Fiber& xi) const {
    Fiber out(m);
    if (nabla_table.empty()) return out;
    const int n = base_dim();
    for (int d = 0; d < n; ++d) {
      if (w[d] == S(0)) continue;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          S coeff = w[d] * (y[i] * z[j] - y[j] * z[i]);
          if (coeff == S(0)) continue;
          out = out + coeff * apply_table(nabla_table[static_cast<size_t>(d)]
                                                     [static_cast<size_t>(pair_index(n, i, j))],
                                          xi);
        }
    }
    return out;
  }
  bool nabla_curv_available() const { return true; }

  Fiber frame_raw(int s) const { return Vec<S>::basis(m, s); }
  S frame_norm2(int) const { return S(1); }
};

template <class B>
const PointModel<typename B::Scalar>& bundle_base(const B& b) {
  if constexpr (requires { b.spec; })
    return b.spec.base;
  else
    return b.base;
}

// A sphere bundle E^(r) with its evaluation point (x, a), |a| = r.
template <class B>
struct SphereBundleModel {
  using Bundle = B;
  using Scalar = typename B::Scalar;
  using Fiber = typename B::Fiber;

  B bundle;
  Scalar r{1};
  Fiber a;

  void validate(double tol = kDefaultTol) const {
    if (!(to_double(r) > 0)) throw std::invalid_argument("sphere bundle: radius must be positive");
    if (bundle.rank() < 2) throw std::invalid_argument("sphere bundle: rank must be >= 2");
    Scalar na = bundle.inner(a, a);
    double scale = std::max(1.0, to_double(r) * to_double(r));
    if (!scalar_near<Scalar>(na, r * r, 100 * tol * scale))
      throw std::invalid_argument("sphere bundle: |a| != r");
  }
};

}  // namespace spherecurv
