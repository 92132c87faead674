#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "cantorcusp/cusp_profile.hpp"

namespace cantorcusp {

/// Thrown when the certified psi enclosure at the working depth is too wide
/// to decide which branch of the reflection applies.
struct UncertainZone : std::runtime_error {
  UncertainZone() : std::runtime_error("zone undecidable at working depth; raise depth") {}
};

struct DerivativeUndefined : std::runtime_error {
  DerivativeUndefined() : std::runtime_error("psi derivative undefined at this abscissa") {}
};

struct ReflectionZone {
  enum class Tag { UpperRectangle, LowerRectangle, Elsewhere };
  Tag tag = Tag::Elsewhere;
  int n = 0;            // valid for rectangle tags
  std::uint64_t k = 0;  // valid for rectangle tags
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Image point with attached differential and Jacobian determinant.
struct AffineJet {
  PlanePoint image;
  Matrix2 differential;
  double jacobian_abs = 1.0;
};

/// Which reflection branch applies at p: the upper rectangle
/// psi < x2 < 2 psi over a removed interval, its lower mirror
/// -2 psi < x2 < psi, or the plain mirror elsewhere.
inline ReflectionZone zone(const CuspProfile& profile, const PlanePoint& p) {
  const LocateResult loc = locate(p.x1, profile.depth);
  using Tag = LocateResult::Tag;
  const CertifiedInterval ps = psi(profile, p.x1);
  ReflectionZone z;
  if (loc.tag == Tag::InCantorSet || loc.tag == Tag::OutsideUnitInterval) {
    z.tag = ReflectionZone::Tag::Elsewhere;
    return z;
  }
  if (loc.tag == Tag::UndecidedAtDepth) {
    // psi is in [0, ps.hi]; only far-out points are certain.
    if (p.x2 >= 2.0 * ps.hi || p.x2 <= -2.0 * ps.hi) {
      z.tag = ReflectionZone::Tag::Elsewhere;
      return z;
    }
    throw UncertainZone();
  }
  // Inside a removed interval: psi enclosure is a few ulps wide.
  if (p.x2 > ps.hi && p.x2 < 2.0 * ps.lo) {
    z.tag = ReflectionZone::Tag::UpperRectangle;
    z.n = loc.interval.n;
    z.k = loc.interval.k;
    return z;
  }
  if (p.x2 < ps.lo && p.x2 > -2.0 * ps.lo) {
    z.tag = ReflectionZone::Tag::LowerRectangle;
    z.n = loc.interval.n;
    z.k = loc.interval.k;
    return z;
  }
  if (p.x2 >= 2.0 * ps.hi || p.x2 <= -2.0 * ps.hi) {
    z.tag = ReflectionZone::Tag::Elsewhere;
    return z;
  }
  throw UncertainZone();
}

/// The reflection over the graph: -3 x2 + 4 psi in upper rectangles, its
/// inverse -x2/3 + 4 psi/3 in lower rectangles, plain mirror elsewhere.
/// Points on the graph are fixed.
inline PlanePoint reflect(const CuspProfile& profile, const PlanePoint& p) {
  const CertifiedInterval ps = psi(profile, p.x1);
  const double psi_mid = 0.5 * (ps.lo + ps.hi);
  if (p.x2 >= ps.lo && p.x2 <= ps.hi) return p;  // on the graph
  const ReflectionZone z = zone(profile, p);
  switch (z.tag) {
    case ReflectionZone::Tag::UpperRectangle:
      return {p.x1, -3.0 * p.x2 + 4.0 * psi_mid};
    case ReflectionZone::Tag::LowerRectangle:
      return {p.x1, -p.x2 / 3.0 + 4.0 * psi_mid / 3.0};
    case ReflectionZone::Tag::Elsewhere:
    default:
      return {p.x1, -p.x2};
  }
}

/// Reflection together with its differential and |det|. The Jacobian is
/// exactly 3 in upper rectangles, 1/3 in lower rectangles, 1 elsewhere.
inline AffineJet reflect_jet(const CuspProfile& profile, const PlanePoint& p) {
  const ReflectionZone z = zone(profile, p);
  AffineJet jet;
  jet.image = reflect(profile, p);
  if (z.tag == ReflectionZone::Tag::Elsewhere) {
    jet.differential = {{{1.0, 0.0}, {0.0, -1.0}}};
    jet.jacobian_abs = 1.0;
    return jet;
  }
  const std::optional<double> dpsi = psi_derivative(profile, p.x1);
  if (!dpsi) throw DerivativeUndefined();
  if (z.tag == ReflectionZone::Tag::UpperRectangle) {
    jet.differential = {{{1.0, 0.0}, {4.0 * *dpsi, -3.0}}};
    jet.jacobian_abs = 3.0;
  } else {
    jet.differential = {{{1.0, 0.0}, {4.0 * *dpsi / 3.0, -1.0 / 3.0}}};
    jet.jacobian_abs = 1.0 / 3.0;
  }
  return jet;
}

/// Explicit admissible bound for the operator norm of the differential over
/// a removed interval: 4 + 4 alpha d(x1,C)^{alpha-1} dominates all entries.
inline double operator_norm_bound(const CuspProfile& profile, double x1) {
  const LocateResult loc = locate(x1, profile.depth);
  if (loc.tag != LocateResult::Tag::InRemovedInterval) {
    throw std::domain_error("operator_norm_bound: x1 not inside a removed interval");
  }
  const CertifiedInterval d = dist_to_cantor(x1, profile.depth);
  const long double a = profile.alpha;
  const long double dd = 0.5L * (d.lo + d.hi);
  return static_cast<double>(4.0L + 4.0L * a * std::pow(dd, a - 1.0L));
}

}  // namespace cantorcusp
