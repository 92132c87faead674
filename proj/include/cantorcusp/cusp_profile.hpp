#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "cantorcusp/cantor_geometry.hpp"

namespace cantorcusp {

/// Parameters of the cusp profile psi(x1) = d(x1, C)^alpha on (0,1), 0 elsewhere.
struct CuspProfile {
  double alpha;
  int depth;

  explicit CuspProfile(double a, int geometry_depth = kDefaultDepth)
      : alpha(a), depth(geometry_depth) {
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("CuspProfile: alpha must be in (0,1)");
    if (geometry_depth < 1 || geometry_depth > kMaxLevel) {
      throw std::out_of_range("CuspProfile: depth out of range");
    }
  }
};

struct PlanePoint {
  double x1 = 0.0;
  double x2 = 0.0;
};

enum class RegionTag { UpperDomain, LowerDomain, OnGraph };

/// Certified enclosure of psi(x1). Powers propagate through the monotone
/// map t -> t^alpha; endpoints are widened by one ulp.
inline CertifiedInterval psi(const CuspProfile& profile, double x1) {
  if (!std::isfinite(x1)) throw std::domain_error("psi: non-finite input");
  if (x1 <= 0.0 || x1 >= 1.0) return {0.0, 0.0};
  const CertifiedInterval d = dist_to_cantor(x1, profile.depth);
  const long double a = profile.alpha;
  double lo = d.lo == 0.0 ? 0.0
                          : static_cast<double>(std::pow(static_cast<long double>(d.lo), a));
  double hi = d.hi == 0.0 ? 0.0
                          : static_cast<double>(std::pow(static_cast<long double>(d.hi), a));
  if (lo > 0.0) lo = std::nextafter(lo, 0.0);
  if (hi > 0.0) hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
  return {lo, hi};
}

/// Derivative of psi on removed intervals; empty at midpoints, on C, at 0 and
/// 1, and at points undecided at the working depth.
inline std::optional<double> psi_derivative(const CuspProfile& profile, double x1) {
  if (!std::isfinite(x1)) throw std::domain_error("psi_derivative: non-finite input");
  if (x1 == 0.0 || x1 == 1.0) return std::nullopt;
  if (x1 < 0.0 || x1 > 1.0) return 0.0;
  const LocateResult loc = locate(x1, profile.depth);
  using Tag = LocateResult::Tag;
  if (loc.tag != Tag::InRemovedInterval) return std::nullopt;
  const long double q = loc.interval.midpoint();
  const long double x = x1;
  const long double a = profile.alpha;
  if (x == q) return std::nullopt;
  long double p3 = 1.0L;
  for (int i = 0; i < loc.interval.n; ++i) p3 *= 3.0L;
  if (x < q) {
    long double t = x - static_cast<long double>(loc.interval.a.scaled_num(loc.interval.n)) / p3;
    return static_cast<double>(a * std::pow(t, a - 1.0L));
  }
  long double t = static_cast<long double>(loc.interval.b.scaled_num(loc.interval.n)) / p3 - x;
  return static_cast<double>(-a * std::pow(t, a - 1.0L));
}

/// Classify a point against the graph of psi with tolerance tol >= 0.
inline RegionTag classify(const CuspProfile& profile, const PlanePoint& p, double tol = 0.0) {
  if (tol < 0.0) throw std::domain_error("classify: negative tolerance");
  const CertifiedInterval ps = psi(profile, p.x1);
  if (p.x2 > ps.hi + tol) return RegionTag::UpperDomain;
  if (p.x2 < ps.lo - tol) return RegionTag::LowerDomain;
  return RegionTag::OnGraph;
}

}  // namespace cantorcusp
