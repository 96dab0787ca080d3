#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

#include "spherecurv/bundles.hpp"
#include "spherecurv/rng.hpp"

namespace spherecurv {

// Curvature of (E^(r), h) at the point (x, a) of the model. The tangent space
// splits into horizontal lifts X^h and tangential lifts alpha^t with
// <alpha, a> = 0; a tangent vector is stored as the pair (X, alpha).

template <class B>
struct TangentPoint {
  Vec<typename B::Scalar> X;
  typename B::Fiber alpha;
};

template <class B>
struct PlaneSpec {
  TangentPoint<B> u, v;
};

template <class B, class S = typename B::Scalar>
typename B::Fiber tangential_part(const SphereBundleModel<B>& m, const typename B::Fiber& w) {
  S c = m.bundle.inner(w, m.a) / (m.r * m.r);
  return w - c * m.a;
}

template <class B, class S = typename B::Scalar>
S h_inner(const SphereBundleModel<B>& m, const TangentPoint<B>& u, const TangentPoint<B>& v) {
  return dot(u.X, v.X) + m.bundle.inner(u.alpha, v.alpha);
}

// O'Neill shape tensor of the submersion E^(r) -> M.
// Vertical output: B_{X^h} Y^h = 1/2 (R(X,Y)a)^t.
template <class B, class S = typename B::Scalar>
typename B::Fiber oneill_vertical(const SphereBundleModel<B>& m, const Vec<S>& x,
                                  const Vec<S>& y) {
  auto w = m.bundle.curv(x, y, m.a);
  return scalar_from_fraction<S>(1, 2) * tangential_part(m, w);
}

// Horizontal output: B_{X^h} alpha^t = 1/2 sum_i <R(X, e_i) alpha, a> e_i^h.
template <class B, class S = typename B::Scalar>
Vec<S> oneill_horizontal(const SphereBundleModel<B>& m, const Vec<S>& x,
                         const typename B::Fiber& alpha) {
  const int n = m.bundle.base_dim();
  Vec<S> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = scalar_from_fraction<S>(1, 2) *
             m.bundle.inner(m.bundle.curv(x, Vec<S>::basis(n, i), alpha), m.a);
  return out;
}

// ---------------------------------------------------------------------------
// Plane normalization (float pipeline). Returns a basis of the same span with
//   |X|^2 + |alpha|^2 = |Y|^2 + |beta|^2 = 1, <X,Y> = 0, <alpha,beta> = 0,
// and, over rank-2 bundles, the second vector purely horizontal.

template <class B>
PlaneSpec<B> normalize_plane(const SphereBundleModel<B>& m, PlaneSpec<B> raw) {
  static_assert(std::is_same_v<typename B::Scalar, double>,
                "plane normalization runs in float mode");
  auto proj = [&](TangentPoint<B> t) {
    t.alpha = tangential_part(m, t.alpha);
    return t;
  };
  TangentPoint<B> u = proj(raw.u), v = proj(raw.v);

  auto scale = [&](double s, const TangentPoint<B>& t) {
    return TangentPoint<B>{s * t.X, s * t.alpha};
  };
  auto axpy = [&](double s, const TangentPoint<B>& x, const TangentPoint<B>& y) {
    return TangentPoint<B>{s * x.X + y.X, s * x.alpha + y.alpha};
  };

  if (m.bundle.rank() == 2) {
    // tangential directions at a form a line, so the plane meets the
    // horizontal space; peel off a horizontal second vector.
    double fu = m.bundle.inner(u.alpha, u.alpha);
    double fv = m.bundle.inner(v.alpha, v.alpha);
    if (fu < fv) std::swap(u, v), std::swap(fu, fv);
    TangentPoint<B> hor = v;
    if (fv > 1e-24 * std::max(1.0, fu)) {
      if (fu <= 0) throw std::invalid_argument("normalize_plane: degenerate plane");
      hor = axpy(-m.bundle.inner(v.alpha, u.alpha) / fu, u, v);
    }
    hor.alpha = m.bundle.zero_fiber();
    double ny = norm(hor.X);
    if (ny < 1e-12) throw std::invalid_argument("normalize_plane: degenerate plane");
    hor = scale(1.0 / ny, hor);
    TangentPoint<B> first = axpy(-dot(u.X, hor.X), hor, u);
    double nf = std::sqrt(h_inner(m, first, first));
    if (nf < 1e-12) throw std::invalid_argument("normalize_plane: degenerate plane");
    first = scale(1.0 / nf, first);
    return {first, hor};
  }

  double nu = std::sqrt(h_inner(m, u, u));
  if (nu < 1e-12) throw std::invalid_argument("normalize_plane: degenerate plane");
  u = scale(1.0 / nu, u);
  v = axpy(-h_inner(m, u, v), u, v);
  double nv = std::sqrt(h_inner(m, v, v));
  if (nv < 1e-12) throw std::invalid_argument("normalize_plane: degenerate plane");
  v = scale(1.0 / nv, v);

  // rotate within the plane until <X,Y> and <alpha,beta> vanish separately
  double num = dot(u.X, v.X);
  double den = 0.5 * (dot(u.X, u.X) - dot(v.X, v.X));
  double theta = (std::abs(num) > 0 || std::abs(den) > 0) ? 0.5 * std::atan2(num, den) : 0.0;
  double cs = std::cos(theta), sn = std::sin(theta);
  TangentPoint<B> U = axpy(cs, u, scale(sn, v));
  TangentPoint<B> V = axpy(-sn, u, scale(cs, v));
  return {U, V};
}

// ---------------------------------------------------------------------------
// Sectional curvature. The rank-2 and general formulas act on a normalized
// basis; sectional() normalizes internally. The frame argument lets property
// tests re-evaluate the internal sums over a different orthonormal frame.

template <class B, class S = typename B::Scalar>
std::vector<Vec<S>> canonical_frame(const SphereBundleModel<B>& m) {
  const int n = m.bundle.base_dim();
  std::vector<Vec<S>> f;
  f.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) f.push_back(Vec<S>::basis(n, i));
  return f;
}

template <class B, class S = typename B::Scalar>
S sectional_normalized(const SphereBundleModel<B>& m, const TangentPoint<B>& u,
                       const TangentPoint<B>& v, const std::vector<Vec<S>>& frame) {
  const auto& base = bundle_base(m.bundle);
  const Vec<S>&X = u.X, &Y = v.X;
  const auto &al = u.alpha, &be = v.alpha;
  const S q34 = scalar_from_fraction<S>(3, 4);
  const S q14 = scalar_from_fraction<S>(1, 4);

  S out = dot(riemann(base, X, Y, X), Y);
  auto ra = m.bundle.curv(X, Y, m.a);
  out -= q34 * m.bundle.inner(ra, ra);

  const bool rank2 = m.bundle.rank() == 2;
  if (!rank2) {
    out += m.bundle.inner(al, al) * m.bundle.inner(be, be) / (m.r * m.r);
    out += S(3) * m.bundle.inner(m.bundle.curv(X, Y, al), be);
  }
  for (const auto& e : frame) {
    S ya = m.bundle.inner(m.bundle.curv(Y, e, al), m.a);
    if (rank2) {
      out += q14 * ya * ya;
    } else {
      S xb = m.bundle.inner(m.bundle.curv(X, e, be), m.a);
      S xa = m.bundle.inner(m.bundle.curv(X, e, al), m.a);
      S yb = m.bundle.inner(m.bundle.curv(Y, e, be), m.a);
      out += q14 * (xb + ya) * (xb + ya) - xa * yb;
    }
  }
  if (m.bundle.nabla_curv_available()) {
    out += m.bundle.inner(m.bundle.nabla_curv(Y, X, Y, al), m.a);
    if (!rank2) out -= m.bundle.inner(m.bundle.nabla_curv(X, X, Y, be), m.a);
  } else {
    throw std::invalid_argument("sectional: curvature derivative unavailable for this model");
  }
  return out;
}

template <class B>
double sectional(const SphereBundleModel<B>& m, const PlaneSpec<B>& p) {
  auto np = normalize_plane(m, p);
  return sectional_normalized(m, np.u, np.v, canonical_frame(m));
}

// ---------------------------------------------------------------------------
// Ricci curvature of (E^(r), h) on tangent vectors u, v (fiber parts are
// projected tangent to the sphere first).

template <class B, class S = typename B::Scalar>
S ricci(const SphereBundleModel<B>& m, const TangentPoint<B>& u, const TangentPoint<B>& v) {
  const auto& base = bundle_base(m.bundle);
  const int n = m.bundle.base_dim();
  const int rank = m.bundle.rank();
  const S half = scalar_from_fraction<S>(1, 2);
  const S quarter = scalar_from_fraction<S>(1, 4);

  auto al = tangential_part(m, u.alpha);
  auto be = tangential_part(m, v.alpha);
  const Vec<S>&X = u.X, &Y = v.X;

  S out = scalar_from_int<S>(rank - 2) / (m.r * m.r) * m.bundle.inner(al, be);
  out += base_ricci(base, X, Y);
  for (int i = 0; i < n; ++i) {
    Vec<S> e = Vec<S>::basis(n, i);
    out -= half * m.bundle.inner(m.bundle.curv(X, e, m.a), m.bundle.curv(Y, e, m.a));
  }
  if (m.bundle.nabla_curv_available()) {
    for (int i = 0; i < n; ++i) {
      Vec<S> e = Vec<S>::basis(n, i);
      out -= half * (m.bundle.inner(m.bundle.nabla_curv(e, e, X, be), m.a) +
                     m.bundle.inner(m.bundle.nabla_curv(e, e, Y, al), m.a));
    }
  } else {
    throw std::invalid_argument("ricci: curvature derivative unavailable for this model");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto w = m.bundle.curv(Vec<S>::basis(n, i), Vec<S>::basis(n, j), m.a);
      out += quarter * m.bundle.inner(w, al) * m.bundle.inner(w, be);
    }
  return out;
}

// ---------------------------------------------------------------------------
// xi form and scalar curvature:
//   xi(a,b) = sum_{i,j} <R(e_i,e_j)a, R(e_i,e_j)b>,
//   tau = s^M + (m-1)(m-2)/r^2 - xi(a,a)/4.

template <class B, class S = typename B::Scalar>
S xi_form(const SphereBundleModel<B>& m, const typename B::Fiber& a,
          const typename B::Fiber& b) {
  const int n = m.bundle.base_dim();
  S out(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Vec<S> ei = Vec<S>::basis(n, i), ej = Vec<S>::basis(n, j);
      out += m.bundle.inner(m.bundle.curv(ei, ej, a), m.bundle.curv(ei, ej, b));
    }
  return out;
}

template <class B, class S = typename B::Scalar>
S scalar_curvature(const SphereBundleModel<B>& m) {
  const int rank = m.bundle.rank();
  S out = base_contractions(bundle_base(m.bundle)).scalar;
  out += scalar_from_int<S>((rank - 1) * (rank - 2)) / (m.r * m.r);
  out -= scalar_from_fraction<S>(1, 4) * xi_form(m, m.a, m.a);
  return out;
}

// |R|^2 = trace of xi over an orthonormal fiber frame.
template <class B, class S = typename B::Scalar>
S curv_norm2(const SphereBundleModel<B>& m) {
  S out(0);
  for (int s = 0; s < m.bundle.rank(); ++s) {
    auto e = m.bundle.frame_raw(s);
    out += xi_form(m, e, e) / m.bundle.frame_norm2(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verdict operations

struct EinsteinVerdict {
  bool einstein = false;
  double lambda = 0;
  double spread = 0;
  std::string detail;
};

template <class B>
bool bundle_curv_is_zero(const SphereBundleModel<B>& m, double tol) {
  if constexpr (std::is_same_v<B, AtiyahBundle<typename B::Scalar>>) {
    return supra_vanishes(m.bundle.spec, tol).vanishes;
  } else {
    using S = typename B::Scalar;
    const int n = m.bundle.base_dim();
    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int s = 0; s < m.bundle.rank(); ++s) {
          auto r = m.bundle.curv(Vec<S>::basis(n, i), Vec<S>::basis(n, j), m.bundle.frame_raw(s));
          worst = std::max(worst, std::abs(to_double(m.bundle.inner(r, r))) /
                                      to_double(m.bundle.frame_norm2(s)));
        }
    return std::sqrt(worst) <= tol;
  }
}

template <class B>
TangentPoint<B> random_tangent(const SphereBundleModel<B>& m, Sampler& rng) {
  static_assert(std::is_same_v<typename B::Scalar, double>);
  const int n = m.bundle.base_dim();
  Vec<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.gaussian();
  auto alpha = m.bundle.zero_fiber();
  for (int s = 0; s < m.bundle.rank(); ++s) {
    double c = rng.gaussian() / std::sqrt(to_double(m.bundle.frame_norm2(s)));
    alpha = alpha + c * m.bundle.frame_raw(s);
  }
  alpha = tangential_part(m, alpha);
  return {x, alpha};
}

// Einstein test. When the rank is large against the base dimension the
// classification is analytic: Einstein iff the bundle curvature vanishes and
// the base is Einstein with constant (m-2)/r^2. Otherwise sampled ratios
// ric(u,u)/h(u,u) decide.
template <class B>
EinsteinVerdict einstein_check(const SphereBundleModel<B>& m, int samples, Sampler& rng,
                               double tol = 1e-7) {
  const int n = m.bundle.base_dim();
  const int rank = m.bundle.rank();
  EinsteinVerdict out;

  if (rank - 1 > n * (n - 1) / 2) {
    double lambda = (rank - 2) / to_double(m.r * m.r);
    bool flat_bundle = bundle_curv_is_zero(m, tol);
    bool base_einstein = true;
    auto contr = base_contractions(bundle_base(m.bundle));
    double dev = 0;
    for (int i = 0; i < n && base_einstein; ++i)
      for (int j = 0; j < n; ++j) {
        double want = i == j ? lambda : 0.0;
        dev = std::max(dev, std::abs(to_double(contr.ricci[static_cast<size_t>(i)]
                                                          [static_cast<size_t>(j)]) -
                                     want));
      }
    base_einstein = dev <= tol * std::max(1.0, std::abs(lambda));
    out.einstein = flat_bundle && base_einstein;
    out.lambda = lambda;
    if (out.einstein) {
      out.detail = "bundle curvature vanishes and base is Einstein with (m-2)/r^2";
      return out;
    }
    out.detail = !flat_bundle ? "bundle curvature does not vanish"
                              : "base Ricci deviates from (m-2)/r^2 by " + format_double(dev);
  }

  // sampled ratio route (also produces the witness spread for the analytic no)
  double lo = 0, hi = 0;
  bool firstv = true;
  for (int s = 0; s < samples; ++s) {
    auto u = random_tangent(m, rng);
    double h = h_inner(m, u, u);
    if (h < 1e-12) continue;
    double ratio = ricci(m, u, u) / h;
    if (firstv) {
      lo = hi = ratio;
      firstv = false;
    } else {
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  out.spread = hi - lo;
  if (rank - 1 > n * (n - 1) / 2) return out;  // verdict made analytically above
  out.einstein = out.spread <= tol * std::max(1.0, std::abs(hi));
  out.lambda = 0.5 * (hi + lo);
  out.detail = out.einstein ? "sampled Ricci ratios constant"
                            : "sampled Ricci ratio spread " + format_double(out.spread);
  return out;
}

// Constant-scalar test at the point: xi must be proportional to the fiber
// metric with ratio |R|^2 / m. Exact comparisons in rational mode.
template <class S>
struct ConstScalarVerdict {
  bool s1_holds = false;
  S ratio{0};     // |R|^2 / m
  S s2_value{0};  // 4 m s^M - r^2 |R|^2
  double max_deviation = 0;
  std::string witness;
};

template <class B, class S = typename B::Scalar>
ConstScalarVerdict<S> constant_scalar_check(const SphereBundleModel<B>& m, double tol = 1e-7) {
  const int rank = m.bundle.rank();
  ConstScalarVerdict<S> out;
  S total = curv_norm2(m);
  out.ratio = total / scalar_from_int<S>(rank);
  out.s2_value = scalar_from_int<S>(4 * rank) * base_contractions(bundle_base(m.bundle)).scalar -
                 m.r * m.r * total;

  bool ok = true;
  double scale = std::max(1.0, std::abs(to_double(out.ratio)));
  for (int s = 0; s < rank && ok; ++s)
    for (int t = s; t < rank; ++t) {
      auto es = m.bundle.frame_raw(s);
      auto et = m.bundle.frame_raw(t);
      S val = xi_form(m, es, et);
      // normalized entries: diagonal entries divide by |e|^2, off-diagonal must vanish
      S want = (s == t) ? out.ratio * m.bundle.frame_norm2(s) : S(0);
      double dev = std::abs(to_double(val - want));
      if (s != t) dev /= std::sqrt(to_double(m.bundle.frame_norm2(s) * m.bundle.frame_norm2(t)));
      else dev /= to_double(m.bundle.frame_norm2(s));
      if (dev > out.max_deviation) out.max_deviation = dev;
      bool entry_ok = is_exact_v<S> ? (val == want) : dev <= tol * scale;
      if (!entry_ok) {
        ok = false;
        out.witness = "xi(e" + std::to_string(s + 1) + ",e" + std::to_string(t + 1) +
                      ") = " + format_scalar(val) + ", expected " + format_scalar(want);
      }
    }
  out.s1_holds = ok;
  return out;
}

// ---------------------------------------------------------------------------
// Sufficient-condition predicates on the radius. The rank-2 sectional bound
// and eqcurv1 are implemented exactly as printed; eqcurv1 mixes powers of K,
// which the report flags.

template <class S>
bool thek_rank2_pred(const S& C, const S& K, const S& r) {
  return S(3) * K * r * r <= S(4) * C;
}

template <class S>
bool thek_rank3_pred(const S& C, const S& K, int n, const S& r) {
  S r2 = r * r;
  S inner = S(4) + S(3) * r2 * scalar_from_int<S>(n - 2) * K +
            scalar_from_fraction<S>(3, 4) * r2 * r2 * scalar_from_int<S>((n - 2) * (n - 2)) * K * K;
  return C - scalar_from_fraction<S>(3, 4) * r2 * K * K * inner >= S(0);
}

template <class S>
bool thricci_pred(const S& rho, const S& K, int n, const S& r, bool strict) {
  S lhs = scalar_from_int<S>(n) * K * K * r * r;
  S rhs = S(2) * rho;
  return strict ? lhs < rhs : lhs <= rhs;
}

template <class S>
bool thriccib_pred(const S& eps, const S& L1, const S& L2, int n, int m, const S& r) {
  S A = eps - scalar_from_fraction<S>(1, 2) * r * r * scalar_from_int<S>(n) * L1 * L1;
  if (!(A > S(0))) return false;
  S Bc = r * scalar_from_int<S>(n) * L2;
  return scalar_from_int<S>(m - 2) / (r * r) - Bc * Bc / (S(4) * A) > S(0);
}

// Conservative scalar-curvature lower bound
//   tau >= (m-1)(m-2)/r^2 - n(n-1) L1 - r^2 n(n-1) L2^2 / 4.
template <class S>
S thscalar_lower_bound(const S& L1, const S& L2, int n, int m, const S& r) {
  return scalar_from_int<S>((m - 1) * (m - 2)) / (r * r) - scalar_from_int<S>(n * (n - 1)) * L1 -
         scalar_from_fraction<S>(1, 4) * r * r * scalar_from_int<S>(n * (n - 1)) * L2 * L2;
}

struct PositivityConstants {
  double K = 0;
  std::optional<double> C_sec, rho, L1, L2, eps;
};

struct BoundEntry {
  std::string name;
  bool applicable = false;
  bool holds_at_r = false;
  double r_max = 0;  // +inf encoded as infinity()
  std::string note;
};

struct PositivityReport {
  std::vector<BoundEntry> entries;
};

namespace detail {

// largest r with pred true, for predicates monotone (true below, false above)
template <class F>
double bisect_r_max(F pred, double r_hi_start = 1.0) {
  if (!pred(1e-9)) return 0;
  double hi = r_hi_start;
  int guard = 0;
  while (pred(hi) && guard++ < 2000) hi *= 2;
  if (guard >= 2000) return std::numeric_limits<double>::infinity();
  double lo = hi / 2;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

inline PositivityReport positivity_bounds(int n, int m, double r,
                                          const PositivityConstants& c) {
  PositivityReport rep;
  const double K = c.K;
  const double inf = std::numeric_limits<double>::infinity();

  {
    BoundEntry e{"sectional-rank2", m == 2 && c.C_sec.has_value(), false, 0, ""};
    if (e.applicable) {
      e.r_max = K > 0 ? std::sqrt(4 * *c.C_sec / (3 * K)) : inf;
      e.holds_at_r = thek_rank2_pred(*c.C_sec, K, r);
      e.note = "nonnegative sectional for r^2 <= 4C/(3K)";
    }
    rep.entries.push_back(e);
  }
  {
    BoundEntry e{"sectional-rank3", m >= 3 && c.C_sec.has_value(), false, 0, ""};
    if (e.applicable) {
      auto pred = [&](double rr) { return thek_rank3_pred(*c.C_sec, K, n, rr); };
      e.r_max = K > 0 ? detail::bisect_r_max(pred) : inf;
      e.holds_at_r = pred(r);
      e.note = "predicate transcribed as printed; note the mixed powers of K";
    }
    rep.entries.push_back(e);
  }
  {
    BoundEntry e{"ricci-symmetric", c.rho.has_value(), false, 0, ""};
    if (e.applicable) {
      e.r_max = K > 0 ? std::sqrt(2 * *c.rho / (n * K * K)) : inf;
      e.holds_at_r = thricci_pred(*c.rho, K, n, r, m > 2);
      e.note = m > 2 ? "positive Ricci for r^2 < 2rho/(nK^2)"
                     : "nonnegative Ricci for r^2 <= 2rho/(nK^2)";
    }
    rep.entries.push_back(e);
  }
  {
    BoundEntry e{"ricci-compact", m >= 3 && c.eps && c.L1 && c.L2, false, 0, ""};
    if (e.applicable) {
      auto pred = [&](double rr) { return thriccib_pred(*c.eps, *c.L1, *c.L2, n, m, rr); };
      e.r_max = detail::bisect_r_max(pred);
      e.holds_at_r = pred(r);
      e.note = "A = eps - r^2 n L1^2 / 2 > 0 and (m-2)/r^2 > B^2/(4A), B = r n L2";
    }
    rep.entries.push_back(e);
  }
  {
    BoundEntry e{"scalar-compact", c.L1 && c.L2, false, 0, ""};
    if (e.applicable) {
      auto pred = [&](double rr) { return thscalar_lower_bound(*c.L1, *c.L2, n, m, rr) > 0; };
      e.r_max = detail::bisect_r_max(pred);
      e.holds_at_r = pred(r);
      e.note = "conservative bound (m-1)(m-2)/r^2 - n(n-1)L1 - r^2 n(n-1)L2^2/4 > 0";
    }
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace spherecurv
