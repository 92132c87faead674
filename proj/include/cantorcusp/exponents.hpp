#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cantorcusp {

// All exponent arithmetic runs in long double (x87 extended on x86-64) with a
// relative guard band for threshold comparisons.
inline constexpr double kThresholdGuard = 1e-12;

inline long double log2_over_log3_l() {
  static const long double v = std::log(2.0L) / std::log(3.0L);
  return v;
}

/// log2 / (2 log3): below this Hoelder exponent no (p,q) pair works.
inline double alpha_critical() { return static_cast<double>(0.5L * log2_over_log3_l()); }

/// A = (1 + alpha) - log2/log3, the recurring threshold numerator.
inline long double threshold_numerator(double alpha) {
  return (1.0L + static_cast<long double>(alpha)) - log2_over_log3_l();
}

/// Lower admissibility threshold for p. Defined only for alpha above critical.
inline double p_lower(double alpha) {
  const long double den = 2.0L * static_cast<long double>(alpha) - log2_over_log3_l();
  if (den <= 0.0L) throw std::domain_error("p_lower: alpha at or below critical");
  return static_cast<double>(threshold_numerator(alpha) / den);
}

/// Upper admissibility threshold for q at (alpha, p); values <= 1 signal the
/// sharpness regime rather than an error. p may be infinity.
inline double q_upper(double alpha, double p) {
  const long double A = threshold_numerator(alpha);
  if (std::isinf(p)) return static_cast<double>(A / (1.0L - static_cast<long double>(alpha)));
  const long double pl = p;
  return static_cast<double>(A * pl / (A + (1.0L - static_cast<long double>(alpha)) * pl));
}

/// kappa = pq/(p-q); the exponent pairing of the Jacobian-quotient condition.
inline double kappa(double p, double q) {
  if (!(q < p)) throw std::domain_error("kappa: requires q < p");
  if (std::isinf(p)) return q;
  return static_cast<double>(static_cast<long double>(p) * q /
                             (static_cast<long double>(p) - q));
}

/// Ratio of consecutive terms of sum_n 2^n 3^{-n(1+alpha+(alpha-1)kappa)}.
/// The series converges iff this is < 1.
inline double series_ratio(double alpha, double p, double q) {
  const long double kap = kappa(p, q);
  const long double expo =
      1.0L + static_cast<long double>(alpha) + (static_cast<long double>(alpha) - 1.0L) * kap;
  return static_cast<double>(2.0L * std::pow(3.0L, -expo));
}

/// alpha_p: reciprocal of q_upper above the p threshold, 1 at or below it.
inline double alpha_p(double alpha, double p) {
  if (!(p > 1.0)) throw std::domain_error("alpha_p: requires p > 1");
  const double crit = alpha_critical();
  if (alpha > crit && p > p_lower(alpha)) {
    return static_cast<double>(1.0L / static_cast<long double>(q_upper(alpha, p)));
  }
  return 1.0;
}

/// Equality case of the beta constraint: A/(alpha p) - 1.
inline double beta_default(double alpha, double p) {
  if (!(p > 1.0)) throw std::domain_error("beta_default: requires p > 1");
  if (std::isinf(p)) return -1.0;
  return static_cast<double>(threshold_numerator(alpha) /
                                 (static_cast<long double>(alpha) * p) -
                             1.0L);
}

struct DerivedExponents {
  double alpha;
  double p;
  double q;
  double kappa;
  double A;  // (1+alpha) - log2/log3
  double p_lower;
  double q_upper;
  double alpha_p;
  double beta_max;
  double alpha_critical;
};

inline DerivedExponents derive_exponents(double alpha, double p, double q) {
  DerivedExponents d{};
  d.alpha = alpha;
  d.p = p;
  d.q = q;
  d.kappa = q < p ? kappa(p, q) : std::numeric_limits<double>::quiet_NaN();
  d.A = static_cast<double>(threshold_numerator(alpha));
  d.alpha_critical = alpha_critical();
  d.p_lower = alpha > d.alpha_critical ? p_lower(alpha)
                                       : std::numeric_limits<double>::infinity();
  d.q_upper = q_upper(alpha, p);
  d.alpha_p = p > 1.0 ? alpha_p(alpha, p) : 1.0;
  d.beta_max = p > 1.0 ? beta_default(alpha, p) : std::numeric_limits<double>::quiet_NaN();
  return d;
}

}  // namespace cantorcusp
