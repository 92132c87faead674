#pragma once

// The acceptance checks behind `verify-all` and the acceptance test binary.
// Every tolerance is pinned here.

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cantorcusp/cantor_geometry.hpp"
#include "cantorcusp/exponents.hpp"
#include "cantorcusp/grid.hpp"
#include "cantorcusp/reflection.hpp"
#include "cantorcusp/singular_integral.hpp"
#include "cantorcusp/testing/adaptive_quadrature.hpp"
#include "cantorcusp/witness.hpp"

namespace cantorcusp::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline constexpr unsigned kDefaultSeed = 20240901u;

namespace detail {

inline double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

// Criterion 1: exact middle-thirds combinatorics for generations 1..20.
inline CheckResult check_geometry_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult res{"geometry-exactness", true, ""};
  const int top = 20;
  std::vector<std::pair<int128, int128>> scaled;  // endpoints over 3^top
  int128 removed_scaled = 0;                      // total removed length over 3^top
  int128 pow2 = 1;                                // 2^n
  for (int n = 1; n <= top; ++n) {
    const auto ivs = removed_intervals(n);
    if (ivs.size() != (std::size_t{1} << (n - 1))) {
      res.pass = false;
      res.detail = "count mismatch at generation " + std::to_string(n);
      return res;
    }
    const int128 scale = pow3_128(top - n);
    for (const auto& iv : ivs) {
      if (iv.b.scaled_num(n) - iv.a.scaled_num(n) != 1) {
        res.pass = false;
        res.detail = "length mismatch at generation " + std::to_string(n);
        return res;
      }
      scaled.emplace_back(iv.a.scaled_num(n) * scale, iv.b.scaled_num(n) * scale);
      removed_scaled += scale;
    }
    // Total removed length so far is 1 - (2/3)^n, i.e. 3^top - 2^n 3^{top-n}
    // over the common denominator 3^top.
    pow2 *= 2;
    const int128 expect = (pow3_128(n) - pow2) * scale;
    if (removed_scaled != expect) {
      res.pass = false;
      res.detail = "removed-length identity fails at generation " + std::to_string(n);
      return res;
    }
  }
  std::sort(scaled.begin(), scaled.end());
  for (std::size_t i = 1; i < scaled.size(); ++i) {
    if (!(scaled[i - 1].second < scaled[i].first)) {
      res.pass = false;
      res.detail = "overlap between removed intervals";
      return res;
    }
  }
  if (detail::elapsed_s(t0) >= 1.0) {
    res.pass = false;
    res.detail = "runtime limit exceeded";
  } else {
    res.detail = std::to_string(scaled.size()) + " intervals exact";
  }
  return res;
}

// Criterion 2: involution R(R(x)) = x and graph fixed points.
inline CheckResult check_reflection_involution(double alpha, unsigned seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult res{"reflection-involution", true, ""};
  const CuspProfile profile(alpha);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(-1.0, 2.0), uy(-2.0, 2.0);
  double max_err = 0.0;
  int accepted = 0, uncertain = 0;
  while (accepted < 10000) {
    const PlanePoint p{ux(rng), uy(rng)};
    const CertifiedInterval ps = psi(profile, p.x1);
    if (p.x2 >= ps.lo - 1e-12 && p.x2 <= ps.hi + 1e-12) continue;  // on/near graph
    try {
      const PlanePoint r1 = reflect(profile, p);
      const PlanePoint r2 = reflect(profile, r1);
      max_err = std::max(max_err, std::max(std::abs(r2.x1 - p.x1), std::abs(r2.x2 - p.x2)));
      ++accepted;
    } catch (const UncertainZone&) {
      ++uncertain;
      if (uncertain > 1000) break;
    }
  }
  bool graph_fixed = true;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = u01(rng);
    const CertifiedInterval ps = psi(profile, x1);
    const PlanePoint p{x1, 0.5 * (ps.lo + ps.hi)};
    const PlanePoint r = reflect(profile, p);
    if (std::abs(r.x2 - p.x2) > ps.width() + 1e-12 || r.x1 != p.x1) graph_fixed = false;
  }
  res.pass =
      max_err < 1e-9 && graph_fixed && accepted == 10000 && detail::elapsed_s(t0) < 5.0;
  res.detail = "max |R(R(x))-x| = " + detail::fmt(max_err) + ", graph fixed: " +
               (graph_fixed ? "yes" : "no");
  return res;
}

// Criterion 3: analytic differential vs finite differences; exact Jacobians.
inline CheckResult check_differential_jacobian(double alpha, unsigned seed) {
  CheckResult res{"differential-jacobian", true, ""};
  const CuspProfile profile(alpha);
  std::mt19937 rng(seed + 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double h = 1e-7;
  double max_rel = 0.0, max_det_err = 0.0;
  int tested = 0;
  while (tested < 1000) {
    const double x1 = u01(rng);
    const LocateResult loc = locate(x1, profile.depth);
    if (loc.tag != LocateResult::Tag::InRemovedInterval) continue;
    const double a = loc.interval.a_d();
    const double b = loc.interval.b_d();
    const double q = static_cast<double>(loc.interval.midpoint());
    // Stay 1e-3 away from the kinks so the h = 1e-7 central differences never
    // straddle a branch boundary and the curvature term stays below 1e-5.
    if (std::min({x1 - a, b - x1, std::abs(x1 - q)}) < 1e-3) continue;
    const CertifiedInterval ps = psi(profile, x1);
    const double psim = 0.5 * (ps.lo + ps.hi);
    if (psim < 100.0 * h) continue;
    double x2;
    switch (tested % 3) {
      case 0: x2 = 1.5 * psim; break;         // upper rectangle
      case 1: x2 = -0.5 * psim; break;        // lower rectangle
      default: x2 = 3.0 * psim + 0.5; break;  // elsewhere
    }
    AffineJet jet;
    try {
      jet = reflect_jet(profile, {x1, x2});
    } catch (const UncertainZone&) {
      continue;
    } catch (const DerivativeUndefined&) {
      continue;
    }
    // Jacobians exact by zone.
    if (jet.jacobian_abs != 3.0 && jet.jacobian_abs != 1.0 / 3.0 && jet.jacobian_abs != 1.0) {
      res.pass = false;
      res.detail = "non-exact Jacobian value";
      return res;
    }
    PlanePoint pxp, pxm, pyp, pym;
    try {
      pxp = reflect(profile, {x1 + h, x2});
      pxm = reflect(profile, {x1 - h, x2});
      pyp = reflect(profile, {x1, x2 + h});
      pym = reflect(profile, {x1, x2 - h});
    } catch (const UncertainZone&) {
      continue;
    }
    const double fd[2][2] = {{(pxp.x1 - pxm.x1) / (2 * h), (pyp.x1 - pym.x1) / (2 * h)},
                             {(pxp.x2 - pxm.x2) / (2 * h), (pyp.x2 - pym.x2) / (2 * h)}};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const double an = jet.differential[r][c];
        const double rel = std::abs(fd[r][c] - an) / std::max(1.0, std::abs(an));
        max_rel = std::max(max_rel, rel);
      }
    }
    const double fd_det = std::abs(fd[0][0] * fd[1][1] - fd[0][1] * fd[1][0]);
    max_det_err = std::max(max_det_err, std::abs(fd_det - jet.jacobian_abs));
    ++tested;
  }
  res.pass = max_rel < 1e-5 && max_det_err < 1e-4;
  res.detail = "max entry rel err = " + detail::fmt(max_rel) +
               ", max |det| err = " + detail::fmt(max_det_err);
  return res;
}

// Criterion 4: series-ratio criterion matches the q threshold on a dense grid.
inline CheckResult check_threshold_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult res{"threshold-equivalence", true, ""};
  long checked = 0, mismatches = 0;
  for (double alpha : {0.4, 0.5, 0.7, 0.9}) {
    for (int ip = 0;; ++ip) {
      const double p = 1.05 + 0.05 * ip;
      if (p > 20.0 + 1e-9) break;
      const double qu = q_upper(alpha, p);
      for (int iq = 0;; ++iq) {
        const double q = 1.0 + 0.01 * iq;
        if (q > p - 0.01 + 1e-9) break;
        const double ratio = series_ratio(alpha, p, q);
        if (std::abs(ratio - 1.0) < 1e-12) continue;  // tie band
        ++checked;
        if ((ratio < 1.0) != (q < qu)) ++mismatches;
      }
    }
  }
  const double ref = 0.31546487678572871;  // log2 / (2 log3)
  const bool crit_ok = std::abs(alpha_critical() - ref) < 1e-12;
  res.pass = mismatches == 0 && crit_ok && detail::elapsed_s(t0) < 10.0;
  res.detail = std::to_string(checked) + " grid points, " + std::to_string(mismatches) +
               " mismatches, alpha_critical ok: " + (crit_ok ? "yes" : "no");
  return res;
}

// Criterion 5: closed forms vs the quadrature oracle; verdict equivalence.
inline CheckResult check_singular_integrals(unsigned seed) {
  CheckResult res{"singular-integrals", true, ""};
  std::mt19937 rng(seed + 2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double max_rel = 0.0;
  int cases = 0;
  while (cases < 10) {
    const double alpha = 0.4 + 0.55 * u01(rng);
    const double kap = 6.0 * u01(rng);
    const double e = alpha + (alpha - 1.0) * kap;
    if (e <= -0.9) continue;  // keep the oracle affordable
    const int n = 1 + static_cast<int>(6.0 * u01(rng));
    const double closed = per_interval_integral(alpha, kap, n);
    double half = 0.5;
    for (int i = 0; i < n; ++i) half /= 3.0;
    const double oracle =
        2.0 * testing::quadrature_power_singularity(
                  [e](double x) { return std::pow(x, e); }, half, 1e-12);
    max_rel = std::max(max_rel, std::abs(closed - oracle) / std::abs(closed));
    ++cases;
  }
  // Verdicts match the threshold predicate on a random subsample.
  int verdict_mismatch = 0;
  for (int i = 0; i < 100; ++i) {
    const double alphas[4] = {0.4, 0.5, 0.7, 0.9};
    const double alpha = alphas[i % 4];
    const double p = 1.05 + (20.0 - 1.05) * u01(rng);
    const double q = 1.0 + (p - 0.01 - 1.0) * u01(rng);
    if (q >= p - 1e-6 || q < 1.0) continue;
    const double ratio = series_ratio(alpha, p, q);
    if (std::abs(ratio - 1.0) < 1e-9) continue;
    const bool expect_finite = q < q_upper(alpha, p);
    const auto rp = cplus(alpha, p, q, 60);
    const auto rm = cminus(alpha, p, q, 60);
    const bool fp = rp.verdict == IntegralReport::Verdict::Finite;
    const bool fm = rm.verdict == IntegralReport::Verdict::Finite;
    if (fp != expect_finite || fm != expect_finite) ++verdict_mismatch;
  }
  res.pass = max_rel <= 1e-8 && verdict_mismatch == 0;
  res.detail = "oracle max rel err = " + detail::fmt(max_rel) + ", verdict mismatches = " +
               std::to_string(verdict_mismatch);
  return res;
}

// Criterion 6: identities at the sharp pair (beta_default, q_upper).
inline CheckResult check_sharp_pair_identities() {
  CheckResult res{"sharp-pair-identities", true, ""};
  double worst_g = 0.0, worst_aq = 0.0;
  for (double alpha : {0.4, 0.5, 0.7, 0.9}) {
    for (double p : {2.0, 3.0, 5.0}) {
      if (p <= p_lower(alpha)) continue;  // sharp pair needs the extension regime
      const long double qo = q_upper(alpha, p);
      const long double beta = beta_default(alpha, p);
      const long double a = alpha;
      const long double g = 2.0L * std::pow(3.0L, a * (beta * qo - 1.0L) + (qo - 1.0L));
      const long double aq = static_cast<long double>(alpha_p(alpha, p)) * qo;
      worst_g = std::max(worst_g, static_cast<double>(std::abs(g - 1.0L)));
      worst_aq = std::max(worst_aq, static_cast<double>(std::abs(aq - 1.0L)));
    }
  }
  res.pass = worst_g < 1e-10 && worst_aq < 1e-12;
  res.detail = "max |g-1| = " + detail::fmt(worst_g) + ", max |alpha_p q_o - 1| = " +
               detail::fmt(worst_aq);
  return res;
}

// Criterion 7: witness norm series converge; divergence witnesses certify.
inline CheckResult check_witness_series() {
  CheckResult res{"witness-series", true, ""};
  std::ostringstream detail_ss;
  bool ok = true;
  // Convergence with a comfortable margin below the beta constraint.
  for (auto [alpha, p] : {std::pair{0.7, 2.0}, {0.5, 3.0}, {0.9, 5.0}}) {
    WitnessParams w = WitnessParams::make(alpha, p, DomainSide::Upper, 60);
    w.beta -= 0.3;
    const auto rep = witness_sobolev_norm(w);
    const bool conv = rep.convergent &&
                      rep.value_series.tail_bound < 1e-6 * rep.value_series.sum &&
                      rep.gradient_series.tail_bound < 1e-6 * rep.gradient_series.sum;
    if (!conv) ok = false;
  }
  // Threshold divergence: t_n (n log n)^{alpha_p q} stays near 1.
  double worst_asym = 0.0;
  for (auto [alpha, p] : {std::pair{0.7, 2.0}, {0.5, 3.0}, {0.9, 5.0}}) {
    WitnessParams w = WitnessParams::make(alpha, p, DomainSide::Upper, 200);
    const double qo = q_upper(alpha, p);
    const auto rep = divergence_witness(w, qo);
    if (rep.verdict != SeriesReport::Verdict::Divergent) ok = false;
    const double s = rep.polylog_exponent;
    for (std::size_t i = 0; i < rep.indices.size(); ++i) {
      const int n = rep.indices[i];
      if (n < 50 || n > 200) continue;
      const double nl = n * std::log(static_cast<double>(n));
      const double scaled = rep.terms[i] * std::pow(nl, s);
      worst_asym = std::max(worst_asym, std::abs(scaled - 1.0));
      if (scaled < 0.9 || scaled > 1.1) ok = false;
    }
  }
  // Geometric divergence in the low-alpha and low-p regimes.
  WitnessParams w_low = WitnessParams::make(0.3, 5.0, DomainSide::Upper, 200);
  w_low.beta = -1.0;
  const auto rep_low = divergence_witness(w_low, 1.0);
  WitnessParams w_smallp = WitnessParams::make(0.7, 1.2, DomainSide::Upper, 200);
  const auto rep_smallp = divergence_witness(w_smallp, 1.0);
  if (!(rep_low.geometric_factor > 1.0) || !(rep_smallp.geometric_factor > 1.0)) ok = false;
  if (rep_low.verdict != SeriesReport::Verdict::Divergent ||
      rep_smallp.verdict != SeriesReport::Verdict::Divergent) {
    ok = false;
  }
  res.pass = ok;
  detail_ss << "max |t_n (n log n)^s - 1| = " << detail::fmt(worst_asym)
            << ", geometric factors " << detail::fmt(rep_low.geometric_factor) << ", "
            << detail::fmt(rep_smallp.geometric_factor);
  res.detail = detail_ss.str();
  return res;
}

// Criterion 8: grid refinement stability of the extension ratio, and the
// divergence trend of the witness gradient norm under truncation refinement.
inline CheckResult check_grid_extension(bool* executed = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult res{"grid-extension-stability", true, ""};
  if (executed) *executed = true;
  const double alpha = 0.7;
  const CuspProfile profile(alpha);
  const auto bump = [](const PlanePoint& p) {
    const double s = ((p.x1 - 0.5) * (p.x1 - 0.5) + (p.x2 - 0.3) * (p.x2 - 0.3)) / (0.8 * 0.8);
    return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0;
  };
  const BBox box{-0.5, 1.5, -0.5, 1.5};
  const double r8 = extension_ratio(profile, bump, 2.0, 1.2, box, std::ldexp(1.0, -8));
  const double r9 = extension_ratio(profile, bump, 2.0, 1.2, box, std::ldexp(1.0, -9));
  const double change = std::abs(r9 / r8 - 1.0);

  // Witness truncation study at q above the threshold.
  const double q = 1.5;
  const CuspIndex index(10);
  const BBox wbox{-0.05, 1.05, -0.65, 0.2};
  const double h = std::ldexp(1.0, -12);
  double gnorm[2] = {0.0, 0.0};
  int gi = 0;
  for (int gens : {6, 8}) {
    const WitnessParams w = WitnessParams::make(alpha, 2.0, DomainSide::Upper, gens);
    const auto u = [&](const PlanePoint& p) { return eval_u_plus(w, profile, index, p); };
    const GridFunction src = sample(profile, u, wbox, h, DomainSide::Upper);
    const GridFunction ext = extend(profile, src, DomainSide::Upper);
    const BBox window{-2.0, 2.0, -2.0, 2.0};
    gnorm[gi++] = sobolev_norm(ext, q, window).gradient_lp_norm;
  }
  const double growth = gnorm[1] / gnorm[0];
  // Exact series trend for the same truncations: generation n contributes
  // g^n (n log n)^{-alpha_p q} to the gradient q-energy, so the norm growth
  // from generation 6 to 8 is bounded by g^{2/q} ~ 1.31 regardless of grid
  // resolution; reported alongside the measured value for context.
  const double g = 2.0 * std::pow(3.0, alpha * (beta_default(alpha, 2.0) * q - 1.0) + (q - 1.0));
  const double s = alpha_p(alpha, 2.0) * q;
  double e6 = 0.0, e8 = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const double t = std::pow(g, n) * std::pow(n * std::log(static_cast<double>(n)), -s);
    if (n <= 6) e6 += t;
    e8 += t;
  }
  const double series_growth = std::pow(e8 / e6, 1.0 / q);
  res.pass = change < 0.25 && growth >= 1.5 && detail::elapsed_s(t0) < 300.0;
  res.detail = "ratio " + detail::fmt(r8) + " -> " + detail::fmt(r9) + " (change " +
               detail::fmt(change) + "), witness gradient norm growth x" + detail::fmt(growth) +
               " (exact series trend x" + detail::fmt(series_growth) + ", required x1.5)";
  return res;
}

inline std::vector<CheckResult> run_core_checks(double alpha, unsigned seed) {
  std::vector<CheckResult> out;
  out.push_back(check_geometry_exactness());
  out.push_back(check_reflection_involution(alpha, seed));
  out.push_back(check_differential_jacobian(alpha, seed));
  out.push_back(check_threshold_equivalence());
  out.push_back(check_singular_integrals(seed));
  out.push_back(check_sharp_pair_identities());
  out.push_back(check_witness_series());
  return out;
}

/// Deterministic JSON report over the core (non-grid) checks; byte-identical
/// across runs with the same inputs.
inline std::string core_report_json(double alpha, unsigned seed) {
  const auto checks = run_core_checks(alpha, seed);
  std::ostringstream os;
  os << "{\"alpha\":" << alpha << ",\"seed\":" << seed << ",\"criteria\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (i) os << ',';
    os << "{\"name\":\"" << checks[i].name << "\",\"pass\":" << (checks[i].pass ? "true" : "false")
       << ",\"detail\":\"" << checks[i].detail << "\"}";
  }
  os << "]}";
  return os.str();
}

// Criterion 9: two report generations agree byte for byte.
inline CheckResult check_determinism(double alpha, unsigned seed) {
  CheckResult res{"determinism", true, ""};
  const std::string a = core_report_json(alpha, seed);
  const std::string b = core_report_json(alpha, seed);
  res.pass = a == b;
  res.detail = res.pass ? "reports byte-identical" : "reports differ";
  return res;
}

}  // namespace cantorcusp::verify
