#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cantorcusp/exponents.hpp"

namespace cantorcusp {

/// Truncated series for the Jacobian-quotient integral over one family of
/// rectangles, with a geometric tail majorant when convergent.
struct IntegralReport {
  enum class Verdict { Finite, Divergent };
  Verdict verdict = Verdict::Finite;
  double value = 0.0;            // truncated sum with explicit constants
  double ratio = 0.0;            // generation-to-generation geometric ratio
  double tail_bound = 0.0;       // rigorous tail majorant (Finite only)
  double exponent_series = 0.0;  // constant-free series sum_n 2^n 3^{-n(1+alpha+(alpha-1)kappa)}
  std::vector<double> partial_sums;
  std::vector<double> exponent_partial_sums;
  int generations_used = 0;
};

enum class RectangleSide { Plus, Minus };

inline constexpr int kDefaultIntegralGenerations = 200;

namespace detail {

// Integral of x^e over (0, 1/(2*3^n)]: the per-half-interval closed form.
inline long double power_integral(long double e, int n) {
  long double half = 0.5L;
  for (int i = 0; i < n; ++i) half /= 3.0L;
  return std::pow(half, e + 1.0L) / (e + 1.0L);
}

}  // namespace detail

/// Closed-form cusp integral 2 * (1/(2*3^n))^{e+1} / (e+1) with
/// e = alpha + (alpha-1)*kappa, the two half-intervals of one removed
/// interval at unit height coefficient. +infinity when e <= -1 (the cusp
/// itself is non-integrable).
inline double per_interval_integral(double alpha, double kap, int n) {
  const long double e =
      static_cast<long double>(alpha) + (static_cast<long double>(alpha) - 1.0L) * kap;
  if (e <= -1.0L) return std::numeric_limits<double>::infinity();
  return static_cast<double>(2.0L * detail::power_integral(e, n));
}

namespace detail {

inline IntegralReport rectangle_integral(double alpha, double p, double q, int max_generation,
                                         RectangleSide side) {
  if (!(q >= 1.0 && q < p)) throw std::domain_error("rectangle integral: requires 1 <= q < p");
  if (max_generation < 1) throw std::domain_error("rectangle integral: generations < 1");
  const long double a = alpha;
  const long double kap = kappa(p, q);
  const long double e = a + (a - 1.0L) * kap;
  const long double jexp = std::isinf(p) ? 0.0L : kap / static_cast<long double>(p);
  // |J| = 3 on the plus side (divide), 1/3 on the minus side (multiply).
  const long double jfac = side == RectangleSide::Plus ? std::pow(3.0L, -jexp)
                                                       : std::pow(3.0L, jexp);
  // Dominant entry of the differential is 4|psi'| (plus) or (4/3)|psi'| (minus)
  // with |psi'| = alpha d^{alpha-1}; the remaining entries are bounded by 3
  // resp. 1. Rectangle height is psi (plus) or 3 psi (minus).
  const long double dom_coef =
      std::pow(side == RectangleSide::Plus ? 4.0L * a : 4.0L * a / 3.0L, kap);
  const long double rem_coef = side == RectangleSide::Plus ? std::pow(3.0L, kap) : 1.0L;
  const long double height = side == RectangleSide::Plus ? 1.0L : 3.0L;

  IntegralReport rep;
  rep.ratio = series_ratio(alpha, p, q);
  const bool finite = rep.ratio < 1.0 && e > -1.0L;
  rep.verdict = finite ? IntegralReport::Verdict::Finite : IntegralReport::Verdict::Divergent;

  long double sum = 0.0L;
  long double expo_sum = 0.0L;
  long double last_term = 0.0L;
  long double count = 1.0L;  // 2^{n-1}
  const long double expo_ratio = rep.ratio;
  long double expo_term = 2.0L * std::pow(3.0L, -(1.0L + a + (a - 1.0L) * kap));
  int n = 0;
  for (n = 1; n <= max_generation; ++n) {
    long double term;
    if (e <= -1.0L) {
      term = std::numeric_limits<long double>::infinity();
    } else {
      term = count * height * jfac *
             (dom_coef * 2.0L * power_integral(e, n) + rem_coef * 2.0L * power_integral(a, n));
    }
    sum += term;
    expo_sum += expo_term;
    last_term = term;
    rep.partial_sums.push_back(static_cast<double>(sum));
    rep.exponent_partial_sums.push_back(static_cast<double>(expo_sum));
    if (finite && term < sum * 1e-18L) break;       // numerically converged
    if (!finite && sum > 1e300L) break;             // growing without bound
    count *= 2.0L;
    expo_term *= expo_ratio;
  }
  rep.generations_used = std::min(n, max_generation);
  rep.value = static_cast<double>(sum);
  rep.exponent_series = static_cast<double>(expo_sum);
  if (finite) {
    // Consecutive terms shrink at least by the geometric ratio.
    rep.tail_bound =
        static_cast<double>(last_term * expo_ratio / (1.0L - expo_ratio));
  } else {
    rep.tail_bound = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace detail

/// C_+ : the Jacobian-quotient integral over the upper rectangles.
inline IntegralReport cplus(double alpha, double p, double q,
                            int max_generation = kDefaultIntegralGenerations) {
  return detail::rectangle_integral(alpha, p, q, max_generation, RectangleSide::Plus);
}

/// C_- : the Jacobian-quotient integral over the lower rectangles.
inline IntegralReport cminus(double alpha, double p, double q,
                             int max_generation = kDefaultIntegralGenerations) {
  return detail::rectangle_integral(alpha, p, q, max_generation, RectangleSide::Minus);
}

}  // namespace cantorcusp
