#include "spherecurv/report.hpp"

#include <cmath>

#include "spherecurv/unimodular.hpp"

namespace spherecurv {

void Report::write(std::ostream& os) const {
  for (const auto& s : sections) {
    os << s.name << ":\n";
    for (const auto& [k, v] : s.rows) os << "  " << k << " = " << v << "\n";
  }
}

namespace {

template <class B>
void report_common(Report& rep, const SphereBundleModel<B>& m, const RunOptions& opts) {
  using S = typename B::Scalar;
  Sampler rng(opts.seed);
  const int n = m.bundle.base_dim();
  const int rank = m.bundle.rank();

  rep.put("inputs", "n", std::to_string(n));
  rep.put("inputs", "m", std::to_string(rank));
  rep.put("inputs", "r", to_double(m.r));
  rep.put("inputs", "samples", std::to_string(opts.samples));
  rep.put("inputs", "seed", std::to_string(opts.seed));
  rep.put("inputs", "tol", opts.tol);

  auto contr = base_contractions(bundle_base(m.bundle));
  rep.put("scalar", "s_base", to_double(contr.scalar));
  rep.put("scalar", "xi_aa", to_double(xi_form(m, m.a, m.a)));
  rep.put("scalar", "curv_norm2", to_double(curv_norm2(m)));
  rep.put("scalar", "tau", to_double(scalar_curvature(m)));

  // sampled sectional range over random planes
  double lo = 0, hi = 0;
  bool first = true;
  for (int s = 0; s < opts.samples; ++s) {
    auto u = random_tangent(m, rng);
    auto v = random_tangent(m, rng);
    double kp;
    try {
      kp = sectional(m, PlaneSpec<B>{u, v});
    } catch (const std::invalid_argument&) {
      continue;  // degenerate sample
    }
    if (first) {
      lo = hi = kp;
      first = false;
    } else {
      lo = std::min(lo, kp);
      hi = std::max(hi, kp);
    }
  }
  rep.put("sectional", "sampled_min", lo);
  rep.put("sectional", "sampled_max", hi);

  // sampled Ricci ratio spread
  double rlo = 0, rhi = 0;
  first = true;
  for (int s = 0; s < opts.samples; ++s) {
    auto u = random_tangent(m, rng);
    double h = h_inner(m, u, u);
    if (h < 1e-12) continue;
    double ratio = ricci(m, u, u) / h;
    if (first) {
      rlo = rhi = ratio;
      first = false;
    } else {
      rlo = std::min(rlo, ratio);
      rhi = std::max(rhi, ratio);
    }
  }
  rep.put("ricci", "ratio_min", rlo);
  rep.put("ricci", "ratio_max", rhi);
  rep.put("ricci", "ratio_spread", rhi - rlo);

  Sampler vrng(opts.seed + 1);
  auto ein = einstein_check(m, opts.samples, vrng, 1e-7);
  rep.put("verdicts", "einstein", ein.einstein ? "einstein" : "not_einstein");
  rep.put("verdicts", "einstein_lambda", ein.lambda);
  rep.put("verdicts", "einstein_detail", ein.detail);

  auto cs = constant_scalar_check(m, 1e-7);
  rep.put("verdicts", "constant_scalar_s1", cs.s1_holds ? "holds" : "fails");
  rep.put("verdicts", "constant_scalar_ratio", to_double(cs.ratio));
  rep.put("verdicts", "constant_scalar_s2", to_double(cs.s2_value));
  if (!cs.s1_holds) rep.put("verdicts", "constant_scalar_witness", cs.witness);

  if constexpr (std::is_same_v<B, AtiyahBundle<S>>) {
    auto van = supra_vanishes(m.bundle.spec, opts.tol);
    rep.put("verdicts", "supra_vanishes", van.vanishes ? "true" : "false");
    if (!van.vanishes) rep.put("verdicts", "supra_witness", van.witness);

    if (const auto* sf = std::get_if<SpaceFormModel<S>>(&m.bundle.spec.base.v)) {
      PositivityConstants pc;
      pc.K = to_double(supra_bound_K(m.bundle.spec));
      pc.C_sec = to_double(sf->c);
      auto rho = to_double(contr.ricci[0][0]);
      if (rho > 0) pc.rho = rho;
      rep.put("bounds", "K", pc.K);
      auto bounds = positivity_bounds(n, rank, to_double(m.r), pc);
      for (const auto& e : bounds.entries) {
        if (!e.applicable) continue;
        rep.put("bounds", e.name + "_holds_at_r", e.holds_at_r ? "true" : "false");
        rep.put("bounds", e.name + "_r_max", e.r_max);
      }
    }
  }
}

template <class B>
void report_exact(Report& rep, const SphereBundleModel<B>& m) {
  rep.put("exact", "s_base", base_contractions(bundle_base(m.bundle)).scalar);
  rep.put("exact", "xi_aa", xi_form(m, m.a, m.a));
  rep.put("exact", "tau", scalar_curvature(m));
  auto cs = constant_scalar_check(m);
  rep.put("exact", "constant_scalar_s1", cs.s1_holds ? "holds" : "fails");
  rep.put("exact", "constant_scalar_ratio", cs.ratio);
  rep.put("exact", "constant_scalar_s2", cs.s2_value);
}

}  // namespace

Report run_report(const BoundModel& model, const RunOptions& opts) {
  Report rep;
  rep.put("inputs", "mode", model.mode == NumericMode::Exact ? "exact" : "float");
  rep.put("inputs", "bundle", model.bundle_kind == BundleKind::Atiyah
                                  ? "atiyah"
                                  : model.bundle_kind == BundleKind::Tangent ? "tangent"
                                                                             : "generic");
  rep.put("inputs", "base", model.base_summary);
  std::visit([&](const auto& m) { report_common(rep, m, opts); }, model.fmodel);
  if (model.emodel) std::visit([&](const auto& m) { report_exact(rep, m); }, *model.emodel);
  return rep;
}

void run_scan(const ScanSpec& spec, std::ostream& csv_out) {
  if (const auto* g = std::get_if<MilnorGridSpec>(&spec)) {
    auto rows = scan_parameters({g->m_lo, g->m_hi, g->m_step}, {g->n_lo, g->n_hi, g->n_step},
                                {g->p_lo, g->p_hi, g->p_step});
    write_scan_csv(csv_out, rows);
    return;
  }
  const auto& sweep = std::get<BoundsSweepSpec>(spec);
  PointModel<double> base = bind_base<double>(sweep.base);
  validate_model(base);
  const auto* sf = std::get_if<SpaceFormModel<double>>(&base.v);
  if (!sf)
    throw std::invalid_argument("bounds sweep: base must be a space form (K = 8|varpi| route)");
  const int n = base.dim();
  const int m = n + pair_count(n);

  csv_out << "k,K,varpi,eqcurv1_holds_at_r,r_max\n";
  // fixed comparison grid; steps chosen to land exactly on binary fractions
  int steps = static_cast<int>(std::lround((sweep.k_hi - sweep.k_lo) / sweep.k_step));
  for (int i = 0; i <= steps; ++i) {
    double k = sweep.k_lo + i * sweep.k_step;
    AtiyahSpec<double> spec{base, k};
    double K = supra_bound_K(spec);
    double vp = 0.25 * sf->c * (2 - sf->c * k);
    PositivityConstants pc;
    pc.K = K;
    pc.C_sec = sf->c;
    auto rep = positivity_bounds(n, m, sweep.r, pc);
    const BoundEntry* rank3 = nullptr;
    for (const auto& e : rep.entries)
      if (e.name == "sectional-rank3") rank3 = &e;
    csv_out << format_double(k) << ',' << format_double(K) << ',' << format_double(vp) << ','
            << (rank3 && rank3->holds_at_r ? "true" : "false") << ','
            << format_double(rank3 ? rank3->r_max : 0) << '\n';
  }
}

}  // namespace spherecurv
