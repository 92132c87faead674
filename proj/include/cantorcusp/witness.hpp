#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cantorcusp/cusp_profile.hpp"
#include "cantorcusp/exponents.hpp"

namespace cantorcusp {

enum class DomainSide { Upper, Lower };

/// Parameters of the sharpness witnesses u_e^+/u_e^-.
struct WitnessParams {
  double alpha;
  double p;             // may be infinity
  double beta;          // must satisfy beta <= beta_default(alpha, p)
  DomainSide side = DomainSide::Upper;
  int generations = 200;

  static WitnessParams make(double alpha, double p, DomainSide side = DomainSide::Upper,
                            int generations = 200) {
    WitnessParams w;
    w.alpha = alpha;
    w.p = p;
    w.beta = beta_default(alpha, p);
    w.side = side;
    w.generations = generations;
    return w;
  }
};

struct SeriesReport {
  enum class Verdict { Convergent, Divergent };
  Verdict verdict = Verdict::Convergent;
  double geometric_factor = 0.0;  // g with terms t_n = g^n (n log n)^{-s}
  double polylog_exponent = 0.0;  // s
  double sum = 0.0;               // truncated sum
  double tail_bound = 0.0;        // rigorous majorant of the tail (Convergent)
  std::optional<double> asymptotic_constant;  // lim t_n (n log n)^s when g ~ 1
  std::vector<int> indices;
  std::vector<double> terms;
  std::vector<double> partial_sums;
};

/// Both series controlling the witness Sobolev norm: |u|^p and |Du|^p.
struct WitnessNormReport {
  SeriesReport value_series;
  SeriesReport gradient_series;
  bool convergent = false;
};

// --- geometry bookkeeping ---------------------------------------------------

/// Cached per-generation midpoints of the removed intervals, for resolving the
/// neighbor-cusp windows of the witness construction.
class CuspIndex {
 public:
  explicit CuspIndex(int max_generation) {
    if (max_generation < 1 || max_generation > 22) {
      throw std::out_of_range("CuspIndex: generation cap out of range");
    }
    mids_.resize(static_cast<std::size_t>(max_generation) + 1);
    for (int n = 1; n <= max_generation; ++n) {
      const auto ivs = removed_intervals(n);
      auto& m = mids_[static_cast<std::size_t>(n)];
      m.reserve(ivs.size());
      for (const auto& iv : ivs) m.push_back(static_cast<double>(iv.midpoint()));
    }
  }

  int max_generation() const { return static_cast<int>(mids_.size()) - 1; }

  const std::vector<double>& midpoints(int n) const {
    return mids_.at(static_cast<std::size_t>(n));
  }

  // Largest midpoint of any generation < n that lies strictly left of x1.
  std::optional<double> nearest_earlier_midpoint_left(int n, double x1) const {
    std::optional<double> best;
    for (int m = 1; m < n; ++m) {
      const auto& v = mids_[static_cast<std::size_t>(m)];
      auto it = std::lower_bound(v.begin(), v.end(), x1);
      if (it != v.begin()) {
        double cand = *(it - 1);
        if (!best || cand > *best) best = cand;
      }
    }
    return best;
  }

 private:
  std::vector<std::vector<double>> mids_;
};

namespace detail {

// T_n = (1/(2*3^n))^alpha, the top of the generation-n slab.
inline long double slab_top(double alpha, int n) {
  long double half = 0.5L;
  for (int i = 0; i < n; ++i) half /= 3.0L;
  return std::pow(half, static_cast<long double>(alpha));
}

// The slabs ((1/3)^a T_n, T_n] tile (0, T_2] across n >= 2. Returns 0 when x2
// falls outside all slabs up to max_generation.
inline int slab_generation(double alpha, double x2, int max_generation) {
  if (!(x2 > 0.0)) return 0;
  for (int n = 2; n <= max_generation; ++n) {
    long double top = slab_top(alpha, n);
    long double bottom = slab_top(alpha, n + 1);
    if (x2 <= static_cast<double>(top) && x2 > static_cast<double>(bottom)) return n;
    if (x2 > static_cast<double>(top)) return 0;  // above all remaining slabs
  }
  return 0;
}

inline double prefactor(double alpha, double p, double beta, int n) {
  const long double ap = alpha_p(alpha, p);
  const long double scale =
      std::pow(3.0L, static_cast<long double>(n) * alpha * beta);
  const long double nl = static_cast<long double>(n) * std::log(static_cast<long double>(n));
  return static_cast<double>(scale * std::pow(1.0L / nl, ap));
}

}  // namespace detail

// --- pointwise evaluation ---------------------------------------------------

/// The plateau profile v^+ on the left windows U^l_{n,k} (k >= 2): piecewise
/// affine in x2 between the slab bounds (1/3)^a T_n < x2 < T_n, zero elsewhere.
inline double eval_v_plus(const CuspProfile& profile, const CuspIndex& index,
                          const PlanePoint& x, int max_generation) {
  const int cap = std::min(max_generation, index.max_generation());
  const int n = detail::slab_generation(profile.alpha, x.x2, cap);
  if (n == 0) return 0.0;
  const auto& mids = index.midpoints(n);
  auto it = std::upper_bound(mids.begin(), mids.end(), x.x1);
  if (it == mids.end() || it == mids.begin()) return 0.0;  // no window, or k = 1
  const double mprev = *(it - 1);  // midpoint of I_n^{k-1}
  const auto qleft = index.nearest_earlier_midpoint_left(n, x.x1);
  // In the window iff the nearest earlier-generation cusp midpoint separates
  // x1 from the previous generation-n cusp.
  if (!qleft || *qleft <= mprev) return 0.0;
  // Membership in the upper domain.
  const CertifiedInterval ps = psi(profile, x.x1);
  if (!(x.x2 > ps.hi)) return 0.0;
  const long double top = detail::slab_top(profile.alpha, n);
  const long double a = profile.alpha;
  const long double c13 = std::pow(1.0L / 3.0L, a) * top;
  const long double c12 = std::pow(0.5L, a) * top;
  const long double c23 = std::pow(2.0L / 3.0L, a) * top;
  const long double y = x.x2;
  if (y >= top || y <= c13) return 0.0;
  if (y > c23) return static_cast<double>((top - y) / (top - c23));
  if (y >= c12) return 1.0;
  return static_cast<double>((y - c13) / (c12 - c13));
}

/// The plateau profile v_- on odd-generation cuspidal domains
/// 0 < x2 < psi(x1) over removed intervals: 1 above the (1/6)^a slab,
/// affine through the (1/9)^a..(1/6)^a band, zero below.
inline double eval_v_minus(const CuspProfile& profile, const PlanePoint& x, int max_generation) {
  if (!(x.x2 > 0.0)) return 0.0;
  const LocateResult loc = locate(x.x1, profile.depth);
  if (loc.tag != LocateResult::Tag::InRemovedInterval) return 0.0;
  const int n = loc.interval.n;
  if (n % 2 == 0 || n < 3 || n > max_generation) return 0.0;
  const CertifiedInterval ps = psi(profile, x.x1);
  if (!(x.x2 < ps.lo)) return 0.0;  // outside the cuspidal domain
  const long double a = profile.alpha;
  const long double top = detail::slab_top(profile.alpha, n);
  const long double c19 = std::pow(1.0L / 9.0L, a) * top;
  const long double c16 = std::pow(1.0L / 6.0L, a) * top;
  const long double y = x.x2;
  if (y > c16) return 1.0;
  if (y < c19) return 0.0;
  return static_cast<double>((y - c19) / (c16 - c19));
}

/// u_e^+ = 3^{n a beta} (1/(n log n))^{alpha_p} v^+, n resolved from the slab.
inline double eval_u_plus(const WitnessParams& params, const CuspProfile& profile,
                          const CuspIndex& index, const PlanePoint& x) {
  const int n = detail::slab_generation(
      profile.alpha, x.x2, std::min(params.generations, index.max_generation()));
  if (n < 2) return 0.0;
  const double v = eval_v_plus(profile, index, x, params.generations);
  if (v == 0.0) return 0.0;
  return detail::prefactor(params.alpha, params.p, params.beta, n) * v;
}

/// u_e^- = 3^{n a beta} (1/(n log n))^{alpha_p} v_-, n the generation of the
/// containing removed interval (odd n only).
inline double eval_u_minus(const WitnessParams& params, const CuspProfile& profile,
                           const PlanePoint& x) {
  const LocateResult loc = locate(x.x1, profile.depth);
  if (loc.tag != LocateResult::Tag::InRemovedInterval) return 0.0;
  const int n = loc.interval.n;
  if (n % 2 == 0 || n < 3 || n > params.generations) return 0.0;
  const double v = eval_v_minus(profile, x, params.generations);
  if (v == 0.0) return 0.0;
  return detail::prefactor(params.alpha, params.p, params.beta, n) * v;
}

/// Explicit bound for |Du_e^+| on the generation-n window, from the branch
/// slopes of v^+.
inline double witness_gradient_bound(const WitnessParams& params, int n) {
  const long double a = params.alpha;
  const long double slope_scale =
      1.0L / std::min(1.0L - std::pow(2.0L / 3.0L, a),
                      std::pow(0.5L, a) - std::pow(1.0L / 3.0L, a));
  const long double c = std::pow(2.0L, a) * slope_scale;
  // 1/T_n = (2*3^n)^a = 2^a 3^{n a}; combined with 3^{n a beta} prefactor.
  const long double ap = alpha_p(params.alpha, params.p);
  const long double nl = static_cast<long double>(n) * std::log(static_cast<long double>(n));
  return static_cast<double>(c *
                             std::pow(3.0L, static_cast<long double>(n) * a *
                                                (params.beta + 1.0L)) *
                             std::pow(1.0L / nl, ap));
}

/// Horizontal cross-section length of the cuspidal domain over I_n^k at
/// height x2: 3^{-n} - 2 x2^{1/alpha}, empty outside (0, (3^{-n}/2)^alpha).
inline double cusp_cross_section(int n, std::uint64_t /*k*/, double x2, double alpha) {
  if (n < 1) throw std::domain_error("cusp_cross_section: n >= 1 required");
  long double w = 1.0L;
  for (int i = 0; i < n; ++i) w /= 3.0L;
  const long double apex = std::pow(w / 2.0L, static_cast<long double>(alpha));
  if (!(x2 > 0.0) || x2 >= static_cast<double>(apex)) return 0.0;
  return static_cast<double>(
      w - 2.0L * std::pow(static_cast<long double>(x2), 1.0L / alpha));
}

// --- series verdicts --------------------------------------------------------

namespace detail {

// Sum of t_n = g^n (n log n)^{-s} for n in [start, generations] with the given
// stride (2 for odd-generation supports).
inline SeriesReport power_polylog_series(long double g, long double s, int start, int stride,
                                         int generations) {
  SeriesReport rep;
  rep.geometric_factor = static_cast<double>(g);
  rep.polylog_exponent = static_cast<double>(s);
  long double sum = 0.0L;
  long double last = 0.0L;
  for (int n = start; n <= generations; n += stride) {
    const long double nl = static_cast<long double>(n) * std::log(static_cast<long double>(n));
    const long double t = std::pow(g, static_cast<long double>(n)) * std::pow(nl, -s);
    sum += t;
    last = t;
    rep.indices.push_back(n);
    rep.terms.push_back(static_cast<double>(t));
    rep.partial_sums.push_back(static_cast<double>(sum));
    if (sum > 1e300L) break;
  }
  rep.sum = static_cast<double>(sum);
  const long double guard = 1e-10L;
  if (g < 1.0L - guard) {
    rep.verdict = SeriesReport::Verdict::Convergent;
    rep.tail_bound = static_cast<double>(last * g / (1.0L - g));
  } else if (g <= 1.0L + guard && s > 1.0L) {
    // Integral comparison for sum (n log n)^{-s} beyond N.
    rep.verdict = SeriesReport::Verdict::Convergent;
    const long double N = generations;
    rep.tail_bound = static_cast<double>(std::pow(N, 1.0L - s) /
                                         ((s - 1.0L) * std::pow(std::log(N), s)));
  } else {
    rep.verdict = SeriesReport::Verdict::Divergent;
    rep.tail_bound = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace detail

/// Truncated series for |u|^p and |Du|^p of the witness, with analytic tail
/// bounds. Convergent for every beta within the admissible constraint.
inline WitnessNormReport witness_sobolev_norm(const WitnessParams& params) {
  if (params.generations < 2) throw std::domain_error("witness_sobolev_norm: generations >= 2");
  const long double a = params.alpha;
  const long double b = params.beta;
  if (std::isinf(params.p)) {
    // Sup-norm regime: the scale factors 3^{n a beta} and 3^{n a (beta+1)}
    // must stay bounded, which needs beta <= -1.
    WitnessNormReport rep;
    rep.value_series = detail::power_polylog_series(std::pow(3.0L, a * b), 0.0L, 2, 1, 2);
    rep.gradient_series =
        detail::power_polylog_series(std::pow(3.0L, a * (b + 1.0L)), 0.0L, 2, 1, 2);
    rep.convergent = b <= -1.0;
    rep.value_series.verdict = rep.gradient_series.verdict =
        rep.convergent ? SeriesReport::Verdict::Convergent : SeriesReport::Verdict::Divergent;
    return rep;
  }
  const long double p = params.p;
  const long double s = alpha_p(params.alpha, params.p) * p;
  const long double gv = 2.0L * std::pow(3.0L, b * a * p - a - 1.0L);
  const long double gd = 2.0L * std::pow(3.0L, a * p * (b + 1.0L) - a - 1.0L);
  const int start = params.side == DomainSide::Upper ? 2 : 3;
  const int stride = params.side == DomainSide::Upper ? 1 : 2;
  WitnessNormReport rep;
  rep.value_series = detail::power_polylog_series(gv, s, start, stride, params.generations);
  rep.gradient_series = detail::power_polylog_series(gd, s, start, stride, params.generations);
  rep.convergent = rep.value_series.verdict == SeriesReport::Verdict::Convergent &&
                   rep.gradient_series.verdict == SeriesReport::Verdict::Convergent;
  return rep;
}

/// Lower-bound series for the gradient of any W^{1,q} extension of the
/// witness. Only valid in the sharpness regimes; the verdict is Divergent,
/// certified either by a geometric factor > 1 or, at the threshold, by the
/// term asymptotics t_n (n log n)^{alpha_p q} -> 1.
inline SeriesReport divergence_witness(const WitnessParams& params, double q) {
  const double crit = alpha_critical();
  const double guard = 1e-9;
  bool in_regime = false;
  if (params.alpha <= crit) {
    const double beta_min = 1.0 - std::log(2.0) / (params.alpha * std::log(3.0));
    in_regime = params.beta >= beta_min - guard && params.beta <= -1.0 + guard &&
                std::abs(q - 1.0) <= guard;
  } else if (!(std::isinf(params.p)) && params.p <= p_lower(params.alpha) * (1.0 + guard)) {
    in_regime = std::abs(q - 1.0) <= guard;
  } else {
    in_regime = q >= q_upper(params.alpha, params.p) * (1.0 - guard);
  }
  if (!in_regime) {
    throw std::domain_error("divergence_witness: (alpha, p, q) outside the sharpness regime");
  }
  const long double a = params.alpha;
  const long double g =
      2.0L * std::pow(3.0L, a * (params.beta * static_cast<long double>(q) - 1.0L) +
                                (static_cast<long double>(q) - 1.0L));
  const long double s = alpha_p(params.alpha, params.p) * q;
  const int start = params.side == DomainSide::Upper ? 2 : 3;
  const int stride = params.side == DomainSide::Upper ? 1 : 2;
  SeriesReport rep = detail::power_polylog_series(g, s, start, stride, params.generations);
  rep.verdict = SeriesReport::Verdict::Divergent;
  rep.tail_bound = std::numeric_limits<double>::infinity();
  if (std::abs(static_cast<double>(g) - 1.0) <= 1e-10) {
    // At the threshold the terms behave exactly like 1/(n log n)^s.
    long double acc = 0.0L;
    int count = 0;
    for (std::size_t i = 0; i < rep.indices.size(); ++i) {
      const int n = rep.indices[i];
      if (n < 50 || n > 200) continue;
      const long double nl =
          static_cast<long double>(n) * std::log(static_cast<long double>(n));
      acc += static_cast<long double>(rep.terms[i]) * std::pow(nl, s);
      ++count;
    }
    if (count > 0) rep.asymptotic_constant = static_cast<double>(acc / count);
  }
  return rep;
}

}  // namespace cantorcusp
