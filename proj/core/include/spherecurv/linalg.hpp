#pragma once

#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spherecurv/scalar.hpp"

namespace spherecurv {

// Pointwise linear algebra in a fixed orthonormal frame of T_xM. Everything
// here is a value type; operations never mutate their inputs.

template <class S>
struct Vec {
  std::vector<S> c;

  Vec() = default;
  explicit Vec(int n) : c(static_cast<size_t>(n), S(0)) {}
  Vec(std::initializer_list<S> init) : c(init) {}

  int dim() const { return static_cast<int>(c.size()); }
  const S& operator[](int i) const { return c[static_cast<size_t>(i)]; }
  S& operator[](int i) { return c[static_cast<size_t>(i)]; }

  static Vec basis(int n, int i) {
    Vec v(n);
    v[i] = S(1);
    return v;
  }
};

template <class S>
Vec<S> operator+(const Vec<S>& a, const Vec<S>& b) {
  assert(a.dim() == b.dim());
  Vec<S> r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <class S>
Vec<S> operator-(const Vec<S>& a, const Vec<S>& b) {
  assert(a.dim() == b.dim());
  Vec<S> r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class S>
Vec<S> operator*(const S& s, const Vec<S>& a) {
  Vec<S> r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = s * a[i];
  return r;
}

template <class S>
Vec<S> operator-(const Vec<S>& a) {
  return S(-1) * a;
}

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dot: dimension mismatch");
  S s(0);
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

template <class S>
S norm2(const Vec<S>& a) {
  return dot(a, a);
}

inline double norm(const Vec<double>& a) { return std::sqrt(norm2(a)); }

// Skew-symmetric endomorphism of T_xM, stored as a full n x n matrix.
// entries[i][j] = -entries[j][i] is an invariant of every constructor.
template <class S>
struct Skew {
  int n = 0;
  std::vector<S> e;  // row-major

  Skew() = default;
  explicit Skew(int dim) : n(dim), e(static_cast<size_t>(dim) * dim, S(0)) {}

  const S& operator()(int i, int j) const { return e[static_cast<size_t>(i) * n + j]; }
  S& at(int i, int j) { return e[static_cast<size_t>(i) * n + j]; }

  void set(int i, int j, const S& v) {
    at(i, j) = v;
    at(j, i) = -v;
  }

  bool is_skew(double tol = 0) const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        if (!scalar_near<S>((*this)(i, j) + (*this)(j, i), S(0), tol)) return false;
    return true;
  }

  Vec<S> apply(const Vec<S>& v) const {
    if (v.dim() != n) throw std::invalid_argument("Skew::apply: dimension mismatch");
    Vec<S> r(n);
    for (int i = 0; i < n; ++i) {
      S s(0);
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }
};

template <class S>
Skew<S> operator+(const Skew<S>& a, const Skew<S>& b) {
  assert(a.n == b.n);
  Skew<S> r(a.n);
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] + b.e[i];
  return r;
}

template <class S>
Skew<S> operator-(const Skew<S>& a, const Skew<S>& b) {
  assert(a.n == b.n);
  Skew<S> r(a.n);
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] - b.e[i];
  return r;
}

template <class S>
Skew<S> operator*(const S& s, const Skew<S>& a) {
  Skew<S> r(a.n);
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = s * a.e[i];
  return r;
}

template <class S>
Skew<S> operator-(const Skew<S>& a) {
  return S(-1) * a;
}

// tr(A o B) for two endomorphisms given as matrices.
template <class S>
S trace_product(const Skew<S>& a, const Skew<S>& b) {
  if (a.n != b.n) throw std::invalid_argument("trace_product: dimension mismatch");
  S s(0);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) s += a(i, j) * b(j, i);
  return s;
}

// [A, B] = AB - BA; skew again.
template <class S>
Skew<S> commutator(const Skew<S>& a, const Skew<S>& b) {
  if (a.n != b.n) throw std::invalid_argument("commutator: dimension mismatch");
  Skew<S> r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      S s(0);
      for (int l = 0; l < a.n; ++l) s += a(i, l) * b(l, j) - b(i, l) * a(l, j);
      r.at(i, j) = s;
    }
  return r;
}

// X ^ Y : Z -> <Y,Z> X - <X,Z> Y.
template <class S>
Skew<S> wedge(const Vec<S>& x, const Vec<S>& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  Skew<S> r(x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) r.at(i, j) = x[i] * y[j] - y[i] * x[j];
  return r;
}

// Element of the Atiyah fiber E_x = T_xM + so(T_xM).
template <class S>
struct FiberVec {
  Vec<S> t;   // tangent part
  Skew<S> w;  // skew part

  FiberVec() = default;
  FiberVec(Vec<S> tangent, Skew<S> skew) : t(std::move(tangent)), w(std::move(skew)) {}
  static FiberVec zero(int n) { return FiberVec(Vec<S>(n), Skew<S>(n)); }

  int base_dim() const { return t.dim(); }
};

template <class S>
FiberVec<S> operator+(const FiberVec<S>& a, const FiberVec<S>& b) {
  return FiberVec<S>(a.t + b.t, a.w + b.w);
}

template <class S>
FiberVec<S> operator-(const FiberVec<S>& a, const FiberVec<S>& b) {
  return FiberVec<S>(a.t - b.t, a.w - b.w);
}

template <class S>
FiberVec<S> operator*(const S& s, const FiberVec<S>& a) {
  return FiberVec<S>(s * a.t, s * a.w);
}

// <X+F, Y+G>_k = <X,Y> - k tr(F o G).
template <class S>
S inner_k(const FiberVec<S>& a, const FiberVec<S>& b, const S& k) {
  if (!(k > S(0))) throw std::invalid_argument("inner_k: k must be positive");
  return dot(a.t, b.t) - k * trace_product(a.w, b.w);
}

// Lexicographic enumeration of the index pairs (i, j), i < j, that label the
// orthonormal skew frame (1/sqrt(2k)) X_i ^ X_j.
inline int pair_count(int n) { return n * (n - 1) / 2; }

inline std::pair<int, int> pair_from_index(int n, int s) {
  for (int i = 0; i < n; ++i) {
    int row = n - 1 - i;
    if (s < row) return {i, i + 1 + s};
    s -= row;
  }
  throw std::out_of_range("pair_from_index");
}

inline int pair_index(int n, int i, int j) {
  assert(i < j);
  int s = 0;
  for (int a = 0; a < i; ++a) s += n - 1 - a;
  return s + (j - i - 1);
}

// Gram-Schmidt with a caller-supplied inner product. Float pipeline only.
// Throws if the family is rank deficient below tol.
template <class V>
std::vector<V> orthonormalize(const std::vector<V>& input,
                              const std::function<double(const V&, const V&)>& inner,
                              double tol = 1e-12) {
  std::vector<V> out;
  for (const V& v0 : input) {
    V v = v0;
    for (const V& q : out) {
      double c = inner(v, q);
      v = v - c * q;
    }
    double n2 = inner(v, v);
    if (n2 <= tol) throw std::invalid_argument("orthonormalize: rank deficient input");
    v = (1.0 / std::sqrt(n2)) * v;
    out.push_back(v);
  }
  return out;
}

}  // namespace spherecurv
