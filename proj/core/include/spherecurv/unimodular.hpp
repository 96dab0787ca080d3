#pragma once

#include <ostream>
#include <vector>

#include "spherecurv/base_geometry.hpp"

namespace spherecurv {

// Exact-rational pipeline for 3D unimodular Lie groups in the Milnor frame.
// Everything here is arbitrary-precision rational; there is no float fallback.

struct MilnorConstants {
  Rational m, n, p;

  Unimodular3Model<Rational> model() const { return {m, n, p}; }
};

struct CurvatureConstants {
  Rational mu12, mu13, mu23;
  Rational lambda1, lambda2, lambda3;

  bool all_lambda_negative() const {
    return lambda1 < 0 && lambda2 < 0 && lambda3 < 0;
  }
};

// The three mu expressions transcribed literally, kept separate from the
// connection route so the two derivations can be compared term-free.
inline std::array<Rational, 3> mu_transcribed(const MilnorConstants& c) {
  const Rational &m = c.m, &n = c.n, &p = c.p;
  Rational q(1, 4);
  Rational mu12 = q * ((p + n + m) * (-n - p + m) + (-p + m + n) * (-n - p + m) +
                       (-p + n + m) * (p + n + m));
  Rational mu13 = -q * ((-p + n + m) * (-n - p + m) + (p + n + m) * (-n - p + m) -
                        (-p + m + n) * (p + n + m));
  Rational mu23 = -q * ((-p + m + n) * (p + n + m) - (-p + m + n) * (-n - p + m) +
                        (p + n + m) * (-n - p + m));
  return {mu12, mu13, mu23};
}

// mu rederived through the connection: R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y],
// reading the coefficient off R(X_i, X_j) = mu_ij X_i ^ X_j. Throws if the
// curvature fails to be diagonal in the wedge frame.
inline std::array<Rational, 3> mu_from_connection(const MilnorConstants& c) {
  Unimodular3Model<Rational> g = c.model();
  auto nab = milnor_connection(g);
  auto bracket_coeffs = [&](int i, int j) {
    return milnor_bracket(g, Vec<Rational>::basis(3, i), Vec<Rational>::basis(3, j));
  };
  std::array<Rational, 3> mu;
  int idx = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j, ++idx) {
      Vec<Rational> br = bracket_coeffs(i, j);
      Skew<Rational> r(3);
      for (int d = 0; d < 3; ++d)
        if (br[d] != 0) r = r + br[d] * nab[static_cast<size_t>(d)];
      r = r - commutator(nab[static_cast<size_t>(i)], nab[static_cast<size_t>(j)]);
      Skew<Rational> w = wedge(Vec<Rational>::basis(3, i), Vec<Rational>::basis(3, j));
      Rational coeff = r(i, j) / w(i, j);
      Skew<Rational> resid = r - coeff * w;
      for (const Rational& v : resid.e)
        if (v != 0)
          throw std::logic_error("mu_from_connection: curvature not diagonal in wedge frame");
      mu[static_cast<size_t>(idx)] = coeff;
    }
  return mu;
}

inline CurvatureConstants curvature_constants(const MilnorConstants& c) {
  auto mu = mu_transcribed(c);
  CurvatureConstants out;
  out.mu12 = mu[0];
  out.mu13 = mu[1];
  out.mu23 = mu[2];
  Rational s4 = 4 * (mu[0] + mu[1] + mu[2] - 1);
  out.lambda1 = mu[0] * mu[0] + mu[1] * mu[1] + s4;
  out.lambda2 = mu[0] * mu[0] + mu[2] * mu[2] + s4;
  out.lambda3 = mu[1] * mu[1] + mu[2] * mu[2] + s4;
  return out;
}

// tau of (T^(1)G, h) is positive everywhere iff all three lambda are negative:
// tau at the frame directions equals -lambda_i/2 and xi is diagonal in this
// frame, so the frame directions are extremal.
inline bool positive_scalar_verdict(const MilnorConstants& c) {
  return curvature_constants(c).all_lambda_negative();
}

// Exact xi(a,a) = 2[ a1^2(mu12^2+mu13^2) + a2^2(mu12^2+mu23^2) + a3^2(mu13^2+mu23^2) ].
inline Rational unimodular_xi(const CurvatureConstants& k, const Vec<Rational>& a) {
  Rational p1 = k.mu12 * k.mu12 + k.mu13 * k.mu13;
  Rational p2 = k.mu12 * k.mu12 + k.mu23 * k.mu23;
  Rational p3 = k.mu13 * k.mu13 + k.mu23 * k.mu23;
  return 2 * (a[0] * a[0] * p1 + a[1] * a[1] * p2 + a[2] * a[2] * p3);
}

// Scalar curvature of (T^(1)G, h) at a unit tangent vector a, exactly:
//   tau(a) = s^G + (m-1)(m-2)/r^2 - xi(a,a)/4  with  m = 3, r = 1,
//   s^G = -2(mu12 + mu13 + mu23).
inline Rational unimodular_scalar(const MilnorConstants& c, const Vec<Rational>& a) {
  if (a.dim() != 3) throw std::invalid_argument("unimodular_scalar: a must have dimension 3");
  if (dot(a, a) != Rational(1))
    throw std::invalid_argument("unimodular_scalar: a must be a unit vector");
  auto k = curvature_constants(c);
  Rational s_base = -2 * (k.mu12 + k.mu13 + k.mu23);
  return s_base + 2 - Rational(1, 4) * unimodular_xi(k, a);
}

// ---------------------------------------------------------------------------
// Parameter scanning

struct ScanRow {
  MilnorConstants params;
  CurvatureConstants constants;
  bool verdict = false;
};

struct ScanRange {
  Rational lo, hi, step;
};

inline std::vector<Rational> range_values(const ScanRange& r) {
  if (r.step <= 0) throw std::invalid_argument("scan: step must be positive");
  std::vector<Rational> out;
  for (Rational v = r.lo; v <= r.hi; v += r.step) out.push_back(v);
  return out;
}

// Exhaustive exact evaluation, rows in lexicographic (m, n, p) order.
inline std::vector<ScanRow> scan_parameters(const ScanRange& rm, const ScanRange& rn,
                                            const ScanRange& rp) {
  auto ms = range_values(rm), ns = range_values(rn), ps = range_values(rp);
  if (ms.empty() || ns.empty() || ps.empty())
    throw std::invalid_argument("scan: empty grid");
  std::vector<ScanRow> rows;
  rows.reserve(ms.size() * ns.size() * ps.size());
  for (const auto& m : ms)
    for (const auto& n : ns)
      for (const auto& p : ps) {
        MilnorConstants c{m, n, p};
        ScanRow row{c, curvature_constants(c), false};
        row.verdict = row.constants.all_lambda_negative();
        rows.push_back(std::move(row));
      }
  return rows;
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "m,n,p,mu12,mu13,mu23,lambda1,lambda2,lambda3,verdict\n";
  for (const auto& r : rows) {
    os << format_scalar(r.params.m) << ',' << format_scalar(r.params.n) << ','
       << format_scalar(r.params.p) << ',' << format_scalar(r.constants.mu12) << ','
       << format_scalar(r.constants.mu13) << ',' << format_scalar(r.constants.mu23) << ','
       << format_scalar(r.constants.lambda1) << ',' << format_scalar(r.constants.lambda2) << ','
       << format_scalar(r.constants.lambda3) << ',' << (r.verdict ? "true" : "false") << '\n';
  }
}

}  // namespace spherecurv
