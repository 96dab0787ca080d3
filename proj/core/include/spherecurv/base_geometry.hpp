#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spherecurv/linalg.hpp"

namespace spherecurv {

// Pointwise models of the base manifold. The curvature sign convention is
//   R(X,Y) = nabla_[X,Y] - (nabla_X nabla_Y - nabla_Y nabla_X),
// under which a space form of curvature c satisfies R(X,Y)Z = -c (X^Y)(Z),
// the sectional curvature is <R(X,Y)X, Y> on orthonormal pairs, and
// ric(X,Y) = sum_i <R(X,e_i)Y, e_i>. Every model below is stored in a fixed
// orthonormal frame at the evaluation point.

template <class S>
struct PointModel;

template <class S>
struct SpaceFormModel {
  int n = 0;
  S c{0};
};

template <class S>
struct ProductModel {
  std::vector<PointModel<S>> factors;
};

// Reductive data of a symmetric pair g = k + p in orthonormal frames of p
// (dim_p) and k (dim_k). Curvature at the base point is R(X,Y)Z = [[X,Y],Z].
template <class S>
struct SymmetricSpaceModel {
  int dim_p = 0;
  int dim_k = 0;
  // pp[i][j] = k-frame coordinates of [P_i, P_j]
  std::vector<std::vector<Vec<S>>> pp;
  // kp[a][i] = p-frame coordinates of [K_a, P_i]
  std::vector<std::vector<Vec<S>>> kp;
  // kk[a][b] = k-frame coordinates of [K_a, K_b]
  std::vector<std::vector<Vec<S>>> kk;
};

// Complex projective space with holomorphic sectional curvature 4.
// J defaults to the canonical block structure J e_{2i} = e_{2i+1}.
template <class S>
struct ComplexProjectiveModel {
  int n_complex = 0;
  Skew<S> J;

  static Skew<S> canonical_J(int n_complex) {
    Skew<S> j(2 * n_complex);
    for (int i = 0; i < n_complex; ++i) j.set(2 * i + 1, 2 * i, S(1));
    return j;
  }
};

// Pointwise data of a 2D metric with R(X,Y) = -C X^Y. grad_c and the optional
// Hessian feed the curvature-derivative terms; both default to zero.
template <class S>
struct Surface2DModel {
  S C{0};
  Vec<S> grad_c{Vec<S>(2)};
  std::array<S, 3> hess_c{S(0), S(0), S(0)};  // (h11, h12, h22)

  S hess(int i, int j) const {
    if (i == 0 && j == 0) return hess_c[0];
    if (i == 1 && j == 1) return hess_c[2];
    return hess_c[1];
  }
};

// Milnor frame of a 3D unimodular Lie group:
//   [X1,X2] = m X3, [X1,X3] = n X2, [X2,X3] = p X1.
template <class S>
struct Unimodular3Model {
  S m{0}, n{0}, p{0};
};

// Curvature supplied as frame tables: R[pair(i,j)] is the endomorphism
// R(e_i, e_j) for i < j, skew-adjoint in the frame. nablaR, when present,
// holds (nabla_{e_w} R)(e_i, e_j) indexed [w][pair(i,j)].
template <class S>
struct GenericModel {
  int n = 0;
  std::vector<Skew<S>> R;
  std::optional<std::vector<std::vector<Skew<S>>>> nablaR;
};

template <class S>
struct PointModel {
  std::variant<SpaceFormModel<S>, ProductModel<S>, SymmetricSpaceModel<S>,
               ComplexProjectiveModel<S>, Surface2DModel<S>, Unimodular3Model<S>,
               GenericModel<S>>
      v;

  int dim() const;
};

template <class S>
int PointModel<S>::dim() const {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SpaceFormModel<S>>) return m.n;
        if constexpr (std::is_same_v<T, ProductModel<S>>) {
          int d = 0;
          for (const auto& f : m.factors) d += f.dim();
          return d;
        }
        if constexpr (std::is_same_v<T, SymmetricSpaceModel<S>>) return m.dim_p;
        if constexpr (std::is_same_v<T, ComplexProjectiveModel<S>>) return 2 * m.n_complex;
        if constexpr (std::is_same_v<T, Surface2DModel<S>>) return 2;
        if constexpr (std::is_same_v<T, Unimodular3Model<S>>) return 3;
        if constexpr (std::is_same_v<T, GenericModel<S>>) return m.n;
      },
      v);
}

// ---------------------------------------------------------------------------
// Symmetric space helpers

template <class S>
Vec<S> sym_bracket_pp(const SymmetricSpaceModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  Vec<S> out(m.dim_k);
  for (int i = 0; i < m.dim_p; ++i)
    for (int j = 0; j < m.dim_p; ++j) {
      S c = x[i] * y[j];
      if (c == S(0)) continue;
      out = out + c * m.pp[i][j];
    }
  return out;
}

template <class S>
Vec<S> sym_bracket_kp(const SymmetricSpaceModel<S>& m, const Vec<S>& w, const Vec<S>& x) {
  Vec<S> out(m.dim_p);
  for (int a = 0; a < m.dim_k; ++a)
    for (int i = 0; i < m.dim_p; ++i) {
      S c = w[a] * x[i];
      if (c == S(0)) continue;
      out = out + c * m.kp[a][i];
    }
  return out;
}

// ad_W restricted to p, as a matrix in the p-frame (W in k-frame coords).
template <class S>
Skew<S> sym_phi(const SymmetricSpaceModel<S>& m, const Vec<S>& w) {
  Skew<S> out(m.dim_p);
  for (int i = 0; i < m.dim_p; ++i) {
    Vec<S> col = sym_bracket_kp(m, w, Vec<S>::basis(m.dim_p, i));
    for (int r = 0; r < m.dim_p; ++r) out.at(r, i) = col[r];
  }
  return out;
}

// U(F) = sum_i [P_i, F(P_i)], an element of k.
template <class S>
Vec<S> sym_u_of(const SymmetricSpaceModel<S>& m, const Skew<S>& f) {
  Vec<S> out(m.dim_k);
  for (int i = 0; i < m.dim_p; ++i) {
    Vec<S> fi(m.dim_p);
    for (int r = 0; r < m.dim_p; ++r) fi[r] = f(r, i);
    out = out + sym_bracket_pp(m, Vec<S>::basis(m.dim_p, i), fi);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unimodular Lie group helpers

// Levi-Civita connection of the Milnor frame, one skew matrix per direction.
template <class S>
std::array<Skew<S>, 3> milnor_connection(const Unimodular3Model<S>& g) {
  const S half = scalar_from_fraction<S>(1, 2);
  S a = half * (-g.m + g.n + g.p);
  S b = half * (g.m + g.n + g.p);
  S c = half * (g.m + g.n - g.p);
  Vec<S> e1 = Vec<S>::basis(3, 0), e2 = Vec<S>::basis(3, 1), e3 = Vec<S>::basis(3, 2);
  return {a * wedge(e2, e3), b * wedge(e1, e3), c * wedge(e1, e2)};
}

// R(X_i, X_j) = mu_ij X_i ^ X_j with the constants below.
template <class S>
std::array<S, 3> milnor_mu(const Unimodular3Model<S>& g) {
  const S half = scalar_from_fraction<S>(1, 2);
  S a = half * (-g.m + g.n + g.p);
  S b = half * (g.m + g.n + g.p);
  S c = half * (g.m + g.n - g.p);
  return {g.m * c - a * b, g.n * b + a * c, g.p * a - b * c};
}

// Bracket [X, Y] in the Milnor frame.
template <class S>
Vec<S> milnor_bracket(const Unimodular3Model<S>& g, const Vec<S>& x, const Vec<S>& y) {
  Vec<S> out(3);
  out[2] = g.m * (x[0] * y[1] - x[1] * y[0]);
  out[1] = g.n * (x[0] * y[2] - x[2] * y[0]);
  out[0] = g.p * (x[1] * y[2] - x[2] * y[1]);
  return out;
}

// ---------------------------------------------------------------------------
// riemann: R(X,Y) as a skew-adjoint endomorphism, paper sign convention.

template <class S>
Skew<S> riemann_endo(const PointModel<S>& model, const Vec<S>& x, const Vec<S>& y);

namespace detail {

template <class S>
Skew<S> riemann_endo_impl(const SpaceFormModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  return (-m.c) * wedge(x, y);
}

template <class S>
Skew<S> riemann_endo_impl(const ProductModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  int total = 0;
  for (const auto& f : m.factors) total += f.dim();
  Skew<S> out(total);
  int off = 0;
  for (const auto& f : m.factors) {
    int d = f.dim();
    Vec<S> xf(d), yf(d);
    for (int i = 0; i < d; ++i) {
      xf[i] = x[off + i];
      yf[i] = y[off + i];
    }
    Skew<S> blk = riemann_endo(f, xf, yf);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.at(off + i, off + j) = blk(i, j);
    off += d;
  }
  return out;
}

template <class S>
Skew<S> riemann_endo_impl(const SymmetricSpaceModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  return sym_phi(m, sym_bracket_pp(m, x, y));
}

template <class S>
Skew<S> riemann_endo_impl(const ComplexProjectiveModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  // R(X,Y) = -X^Y - JX^JY - 2<JY,X> J
  Vec<S> jx = m.J.apply(x), jy = m.J.apply(y);
  S two_jyx = S(2) * dot(jy, x);
  return (-wedge(x, y)) + (-wedge(jx, jy)) + (-two_jyx) * m.J;
}

template <class S>
Skew<S> riemann_endo_impl(const Surface2DModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  return (-m.C) * wedge(x, y);
}

template <class S>
Skew<S> riemann_endo_impl(const Unimodular3Model<S>& m, const Vec<S>& x, const Vec<S>& y) {
  auto mu = milnor_mu(m);
  Skew<S> out(3);
  int idx = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j, ++idx) {
      S coeff = mu[static_cast<size_t>(idx)] * (x[i] * y[j] - x[j] * y[i]);
      out.at(i, j) += coeff;
      out.at(j, i) -= coeff;
    }
  return out;
}

template <class S>
Skew<S> riemann_endo_impl(const GenericModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  Skew<S> out(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) {
      S coeff = x[i] * y[j] - x[j] * y[i];
      if (coeff == S(0)) continue;
      out = out + coeff * m.R[static_cast<size_t>(pair_index(m.n, i, j))];
    }
  return out;
}

}  // namespace detail

template <class S>
Skew<S> riemann_endo(const PointModel<S>& model, const Vec<S>& x, const Vec<S>& y) {
  if (x.dim() != model.dim() || y.dim() != model.dim())
    throw std::invalid_argument("riemann: dimension mismatch");
  return std::visit([&](const auto& m) { return detail::riemann_endo_impl<S>(m, x, y); },
                    model.v);
}

template <class S>
Vec<S> riemann(const PointModel<S>& model, const Vec<S>& x, const Vec<S>& y, const Vec<S>& z) {
  return riemann_endo(model, x, y).apply(z);
}

// ---------------------------------------------------------------------------
// nabla_riemann: (nabla_W R)(X,Y) as an endomorphism. Zero for the locally
// symmetric models, assembled from the structure constants for Unimodular3,
// proportional to grad C for surfaces, and tabulated for Generic.

template <class S>
bool locally_symmetric(const PointModel<S>& model);

template <class S>
bool has_curvature_derivative(const PointModel<S>& model);

template <class S>
Skew<S> nabla_riemann_endo(const PointModel<S>& model, const Vec<S>& w, const Vec<S>& x,
                           const Vec<S>& y);

namespace detail {

template <class S>
Skew<S> nabla_riemann_unimodular(const Unimodular3Model<S>& g, const Vec<S>& w, const Vec<S>& x,
                                 const Vec<S>& y) {
  auto nab = milnor_connection(g);
  auto nab_vec = [&](const Vec<S>& dir, const Vec<S>& v) {
    Vec<S> out(3);
    for (int i = 0; i < 3; ++i)
      if (dir[i] != S(0)) out = out + dir[i] * nab[static_cast<size_t>(i)].apply(v);
    return out;
  };
  PointModel<S> pm{g};
  Skew<S> out(3);
  for (int col = 0; col < 3; ++col) {
    Vec<S> z = Vec<S>::basis(3, col);
    Vec<S> t = nab_vec(w, riemann(pm, x, y, z)) - riemann(pm, nab_vec(w, x), y, z) -
               riemann(pm, x, nab_vec(w, y), z) - riemann(pm, x, y, nab_vec(w, z));
    for (int r = 0; r < 3; ++r) out.at(r, col) = t[r];
  }
  return out;
}

}  // namespace detail

template <class S>
bool locally_symmetric(const PointModel<S>& model) {
  return std::visit(
      [](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SpaceFormModel<S>> ||
                      std::is_same_v<T, SymmetricSpaceModel<S>> ||
                      std::is_same_v<T, ComplexProjectiveModel<S>>)
          return true;
        if constexpr (std::is_same_v<T, ProductModel<S>>) {
          for (const auto& f : m.factors)
            if (!locally_symmetric(f)) return false;
          return true;
        }
        if constexpr (std::is_same_v<T, Surface2DModel<S>>) {
          return norm2(m.grad_c) == S(0) && m.hess_c[0] == S(0) && m.hess_c[1] == S(0) &&
                 m.hess_c[2] == S(0);
        }
        if constexpr (std::is_same_v<T, Unimodular3Model<S>>) {
          // check nabla R on the frame exactly
          Unimodular3Model<S> g = m;
          for (int w = 0; w < 3; ++w)
            for (int i = 0; i < 3; ++i)
              for (int j = i + 1; j < 3; ++j) {
                Skew<S> d = detail::nabla_riemann_unimodular(
                    g, Vec<S>::basis(3, w), Vec<S>::basis(3, i), Vec<S>::basis(3, j));
                for (const S& v : d.e)
                  if (!scalar_near<S>(v, S(0), 1e-14)) return false;
              }
          return true;
        }
        if constexpr (std::is_same_v<T, GenericModel<S>>) {
          if (!m.nablaR) return false;
          for (const auto& row : *m.nablaR)
            for (const auto& sk : row)
              for (const S& v : sk.e)
                if (!scalar_near<S>(v, S(0), 1e-14)) return false;
          return true;
        }
      },
      model.v);
}

template <class S>
bool has_curvature_derivative(const PointModel<S>& model) {
  return std::visit(
      [](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ProductModel<S>>) {
          for (const auto& f : m.factors)
            if (!has_curvature_derivative(f)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, GenericModel<S>>) {
          return m.nablaR.has_value();
        } else {
          return true;
        }
      },
      model.v);
}

template <class S>
Skew<S> nabla_riemann_endo(const PointModel<S>& model, const Vec<S>& w, const Vec<S>& x,
                           const Vec<S>& y) {
  const int n = model.dim();
  if (w.dim() != n || x.dim() != n || y.dim() != n)
    throw std::invalid_argument("nabla_riemann: dimension mismatch");
  return std::visit(
      [&](const auto& m) -> Skew<S> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SpaceFormModel<S>> ||
                      std::is_same_v<T, SymmetricSpaceModel<S>> ||
                      std::is_same_v<T, ComplexProjectiveModel<S>>) {
          return Skew<S>(n);
        } else if constexpr (std::is_same_v<T, ProductModel<S>>) {
          Skew<S> out(n);
          int off = 0;
          for (const auto& f : m.factors) {
            int d = f.dim();
            Vec<S> wf(d), xf(d), yf(d);
            for (int i = 0; i < d; ++i) {
              wf[i] = w[off + i];
              xf[i] = x[off + i];
              yf[i] = y[off + i];
            }
            Skew<S> blk = nabla_riemann_endo(f, wf, xf, yf);
            for (int i = 0; i < d; ++i)
              for (int j = 0; j < d; ++j) out.at(off + i, off + j) = blk(i, j);
            off += d;
          }
          return out;
        } else if constexpr (std::is_same_v<T, Surface2DModel<S>>) {
          return (-dot(m.grad_c, w)) * wedge(x, y);
        } else if constexpr (std::is_same_v<T, Unimodular3Model<S>>) {
          return detail::nabla_riemann_unimodular(m, w, x, y);
        } else {
          if (!m.nablaR)
            throw std::invalid_argument("nabla_riemann: generic model lacks derivative data");
          Skew<S> out(n);
          for (int d = 0; d < n; ++d) {
            if (w[d] == S(0)) continue;
            for (int i = 0; i < n; ++i)
              for (int j = i + 1; j < n; ++j) {
                S coeff = w[d] * (x[i] * y[j] - x[j] * y[i]);
                if (coeff == S(0)) continue;
                out = out + coeff *
                                (*m.nablaR)[static_cast<size_t>(d)]
                                           [static_cast<size_t>(pair_index(n, i, j))];
              }
          }
          return out;
        }
      },
      model.v);
}

// ---------------------------------------------------------------------------
// Contractions

template <class S>
struct BaseContractions {
  std::vector<std::vector<S>> ricci;  // ric(e_i, e_j)
  S scalar{0};
  std::optional<S> sectional_lower_bound;
};

template <class S>
S base_ricci(const PointModel<S>& model, const Vec<S>& x, const Vec<S>& y) {
  const int n = model.dim();
  S out(0);
  for (int i = 0; i < n; ++i) {
    Vec<S> ei = Vec<S>::basis(n, i);
    out += riemann(model, x, ei, y)[i];
  }
  return out;
}

template <class S>
BaseContractions<S> base_contractions(const PointModel<S>& model) {
  const int n = model.dim();
  BaseContractions<S> out;
  out.ricci.assign(static_cast<size_t>(n), std::vector<S>(static_cast<size_t>(n), S(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.ricci[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          base_ricci(model, Vec<S>::basis(n, i), Vec<S>::basis(n, j));
  out.scalar = S(0);
  for (int i = 0; i < n; ++i) out.scalar += out.ricci[static_cast<size_t>(i)][static_cast<size_t>(i)];

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SpaceFormModel<S>>) {
          out.sectional_lower_bound = m.c;
        } else if constexpr (std::is_same_v<T, Surface2DModel<S>>) {
          out.sectional_lower_bound = m.C;
        } else if constexpr (std::is_same_v<T, ComplexProjectiveModel<S>>) {
          out.sectional_lower_bound = m.n_complex == 1 ? S(4) : S(1);
        } else if constexpr (std::is_same_v<T, Unimodular3Model<S>>) {
          // in 3D every 2-plane is decomposable, so the frame planes are extremal
          auto mu = milnor_mu(m);
          S best = -mu[0];
          for (int i = 1; i < 3; ++i)
            if (-mu[static_cast<size_t>(i)] < best) best = -mu[static_cast<size_t>(i)];
          out.sectional_lower_bound = best;
        } else if constexpr (std::is_same_v<T, ProductModel<S>>) {
          bool all = true;
          std::optional<S> best;
          for (const auto& f : m.factors) {
            auto sub = base_contractions(f).sectional_lower_bound;
            if (!sub) {
              all = false;
              break;
            }
            if (!best || *sub < *best) best = sub;
          }
          if (all && best) {
            // mixed planes of a product are flat
            if (m.factors.size() > 1 && *best > S(0)) best = S(0);
            out.sectional_lower_bound = best;
          }
        }
      },
      model.v);
  return out;
}

// ---------------------------------------------------------------------------
// Validation of user-supplied model data.

template <class S>
void validate_model(const PointModel<S>& model, double tol = kDefaultTol);

namespace detail {

template <class S>
void validate_impl(const SpaceFormModel<S>& m, double) {
  if (m.n < 2) throw std::invalid_argument("spaceform: dimension must be >= 2");
}

template <class S>
void validate_impl(const ProductModel<S>& m, double tol) {
  if (m.factors.empty()) throw std::invalid_argument("product: needs at least one factor");
  for (const auto& f : m.factors) validate_model(f, tol);
}

template <class S>
void validate_impl(const SymmetricSpaceModel<S>& m, double tol) {
  if (m.dim_p < 2) throw std::invalid_argument("symmetric: dim_p must be >= 2");
  auto shape = [](const auto& tbl, int rows, int cols, int veclen) {
    if (static_cast<int>(tbl.size()) != rows) return false;
    for (const auto& row : tbl) {
      if (static_cast<int>(row.size()) != cols) return false;
      for (const auto& v : row)
        if (v.dim() != veclen) return false;
    }
    return true;
  };
  if (!shape(m.pp, m.dim_p, m.dim_p, m.dim_k) || !shape(m.kp, m.dim_k, m.dim_p, m.dim_p) ||
      !shape(m.kk, m.dim_k, m.dim_k, m.dim_k))
    throw std::invalid_argument("symmetric: bracket tables have wrong shape");
  // antisymmetry of the bracket tables
  for (int i = 0; i < m.dim_p; ++i)
    for (int j = 0; j < m.dim_p; ++j)
      for (int a = 0; a < m.dim_k; ++a)
        if (!scalar_near<S>(m.pp[i][j][a] + m.pp[j][i][a], S(0), tol))
          throw std::invalid_argument("symmetric: pp table not antisymmetric");
  for (int a = 0; a < m.dim_k; ++a)
    for (int b = 0; b < m.dim_k; ++b)
      for (int c = 0; c < m.dim_k; ++c)
        if (!scalar_near<S>(m.kk[a][b][c] + m.kk[b][a][c], S(0), tol))
          throw std::invalid_argument("symmetric: kk table not antisymmetric");
  // Jacobi identity over the graded algebra, checked on all frame triples
  auto bk_pp = [&](const Vec<S>& x, const Vec<S>& y) { return sym_bracket_pp(m, x, y); };
  auto bk_kp = [&](const Vec<S>& w, const Vec<S>& x) { return sym_bracket_kp(m, w, x); };
  auto bk_kk = [&](const Vec<S>& w, const Vec<S>& u) {
    Vec<S> out(m.dim_k);
    for (int a = 0; a < m.dim_k; ++a)
      for (int b = 0; b < m.dim_k; ++b) {
        S c = w[a] * u[b];
        if (c == S(0)) continue;
        out = out + c * m.kk[a][b];
      }
    return out;
  };
  auto P = [&](int i) { return Vec<S>::basis(m.dim_p, i); };
  auto K = [&](int a) { return Vec<S>::basis(m.dim_k, a); };
  auto near_zero = [&](const Vec<S>& v) {
    for (int i = 0; i < v.dim(); ++i)
      if (!scalar_near<S>(v[i], S(0), tol)) return false;
    return true;
  };
  // [p,p,p]: [[Pi,Pj],Pk] + cyc, lands in p
  for (int i = 0; i < m.dim_p; ++i)
    for (int j = 0; j < m.dim_p; ++j)
      for (int l = 0; l < m.dim_p; ++l) {
        Vec<S> s = bk_kp(bk_pp(P(i), P(j)), P(l)) + bk_kp(bk_pp(P(j), P(l)), P(i)) +
                   bk_kp(bk_pp(P(l), P(i)), P(j));
        if (!near_zero(s)) throw std::invalid_argument("symmetric: Jacobi fails on (p,p,p)");
      }
  // [k,p,p]: [[Ka,Pi],Pj] + [[Pi,Pj],Ka] + [[Pj,Ka],Pi], lands in k
  for (int a = 0; a < m.dim_k; ++a)
    for (int i = 0; i < m.dim_p; ++i)
      for (int j = 0; j < m.dim_p; ++j) {
        Vec<S> s = bk_pp(bk_kp(K(a), P(i)), P(j)) + bk_kk(bk_pp(P(i), P(j)), K(a)) +
                   (-S(1)) * bk_pp(bk_kp(K(a), P(j)), P(i));
        if (!near_zero(s)) throw std::invalid_argument("symmetric: Jacobi fails on (k,p,p)");
      }
  // [k,k,p]: [[Ka,Kb],Pi] + [[Kb,Pi],Ka] + [[Pi,Ka],Kb], lands in p
  for (int a = 0; a < m.dim_k; ++a)
    for (int b = 0; b < m.dim_k; ++b)
      for (int i = 0; i < m.dim_p; ++i) {
        Vec<S> s = bk_kp(bk_kk(K(a), K(b)), P(i)) + (-S(1)) * bk_kp(K(a), bk_kp(K(b), P(i))) +
                   bk_kp(K(b), bk_kp(K(a), P(i)));
        if (!near_zero(s)) throw std::invalid_argument("symmetric: Jacobi fails on (k,k,p)");
      }
  // curvature operator must be skew-adjoint in the orthonormal p-frame
  for (int i = 0; i < m.dim_p; ++i)
    for (int j = i + 1; j < m.dim_p; ++j) {
      Skew<S> r = sym_phi(m, sym_bracket_pp(m, P(i), P(j)));
      if (!r.is_skew(tol))
        throw std::invalid_argument("symmetric: ad_k does not act skew-adjointly on p");
    }
}

template <class S>
void validate_impl(const ComplexProjectiveModel<S>& m, double tol) {
  if (m.n_complex < 1) throw std::invalid_argument("cpn: complex dimension must be >= 1");
  const int n = 2 * m.n_complex;
  if (m.J.n != n) throw std::invalid_argument("cpn: J has wrong dimension");
  if (!m.J.is_skew(tol)) throw std::invalid_argument("cpn: J is not skew");
  for (int i = 0; i < n; ++i) {
    Vec<S> v = m.J.apply(m.J.apply(Vec<S>::basis(n, i)));
    for (int r = 0; r < n; ++r) {
      S want = (r == i) ? S(-1) : S(0);
      if (!scalar_near<S>(v[r], want, tol))
        throw std::invalid_argument("cpn: J*J != -Id");
    }
  }
}

template <class S>
void validate_impl(const Surface2DModel<S>& m, double) {
  if (m.grad_c.dim() != 2) throw std::invalid_argument("surface2d: grad must have dimension 2");
}

template <class S>
void validate_impl(const Unimodular3Model<S>&, double) {}

template <class S>
void validate_impl(const GenericModel<S>& m, double tol) {
  if (m.n < 2) throw std::invalid_argument("generic: dimension must be >= 2");
  if (static_cast<int>(m.R.size()) != pair_count(m.n))
    throw std::invalid_argument("generic: curvature table has wrong size");
  for (const auto& sk : m.R) {
    if (sk.n != m.n) throw std::invalid_argument("generic: curvature entry has wrong dimension");
    if (!sk.is_skew(tol))
      throw std::invalid_argument("generic: curvature table violates skew-adjointness");
  }
  if (m.nablaR) {
    if (static_cast<int>(m.nablaR->size()) != m.n)
      throw std::invalid_argument("generic: derivative table has wrong size");
    for (const auto& row : *m.nablaR) {
      if (static_cast<int>(row.size()) != pair_count(m.n))
        throw std::invalid_argument("generic: derivative table has wrong size");
      for (const auto& sk : row)
        if (sk.n != m.n || !sk.is_skew(tol))
          throw std::invalid_argument("generic: derivative table violates skew-adjointness");
    }
  }
}

}  // namespace detail

template <class S>
void validate_model(const PointModel<S>& model, double tol) {
  std::visit([&](const auto& m) { detail::validate_impl<S>(m, tol); }, model.v);
}

}  // namespace spherecurv
