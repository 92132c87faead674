#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cantorcusp/triadic.hpp"

namespace cantorcusp {

// Enumeration is capped well below kMaxLevel: generation n holds 2^{n-1}
// intervals, so a global cap keeps memory bounded.
inline constexpr int kMaxEnumerationGeneration = 30;
inline constexpr int kDefaultDepth = 40;

/// One removed open interval I_n^k = (a, b) of the middle-thirds construction.
/// b - a = 3^{-n} exactly; a and b survive in the Cantor set.
struct CantorInterval {
  int n = 0;             // generation, >= 1
  std::uint64_t k = 0;   // index in 1..2^{n-1}, left to right
  TriadicRational a;
  TriadicRational b;

  double a_d() const { return a.to_double(); }
  double b_d() const { return b.to_double(); }
  // Midpoint q_n^k = (a + b)/2; denominator 2*3^n, so not triadic itself.
  long double midpoint() const {
    long double an = static_cast<long double>(a.scaled_num(n));
    long double p3 = 1.0L;
    for (int i = 0; i < n; ++i) p3 *= 3.0L;
    return (2.0L * an + 1.0L) / (2.0L * p3);
  }
};

struct LocateResult {
  enum class Tag { InRemovedInterval, InCantorSet, OutsideUnitInterval, UndecidedAtDepth };
  Tag tag = Tag::UndecidedAtDepth;
  CantorInterval interval;        // valid iff tag == InRemovedInterval
  int depth = 0;                  // depth used for the query
  TriadicRational survivor_left;  // valid iff tag == UndecidedAtDepth: the
                                  // level-depth surviving interval is
                                  // [survivor_left, survivor_left + 3^{-depth}]
};

/// All removed intervals of generation n, sorted by left endpoint.
inline std::vector<CantorInterval> removed_intervals(int n) {
  if (n < 1 || n > kMaxEnumerationGeneration) {
    throw std::out_of_range("removed_intervals: generation out of range");
  }
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  std::vector<CantorInterval> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    // Bits of idx, most significant first, are the left/right choices down
    // the surviving intervals; digit 2 per right turn in base 3.
    int128 left = 0;
    for (int bit = n - 2; bit >= 0; --bit) {
      left = 3 * left + (((idx >> bit) & 1u) ? 2 : 0);
    }
    CantorInterval iv;
    iv.n = n;
    iv.k = idx + 1;
    iv.a = TriadicRational(3 * left + 1, n);
    iv.b = TriadicRational(3 * left + 2, n);
    out.push_back(iv);
  }
  return out;
}

namespace detail {

// Exact dyadic representation of a double in (0,1): x = mant / 2^exp2.
struct DyadicFraction {
  std::uint64_t mant = 0;
  int exp2 = 0;
};

inline DyadicFraction decompose_unit_double(double x) {
  int e = 0;
  double f = std::frexp(x, &e);  // x = f * 2^e, f in [0.5, 1)
  auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
  int exp2 = 53 - e;
  while ((m & 1u) == 0 && exp2 > 0) {
    m >>= 1;
    --exp2;
  }
  return {m, exp2};
}

// Ternary digit walk with exact state t = u / 2^E in [0,1), the position of x
// inside the current surviving interval. Returns via the visitor pattern:
// makes locate independent of the integer width backing u.
template <typename UInt>
LocateResult locate_walk(UInt u, const UInt& v, int depth) {
  LocateResult res;
  res.depth = depth;
  int128 left = 0;  // left endpoint numerator of surviving interval, over 3^gen
  std::uint64_t idx = 0;
  std::vector<UInt> seen;
  seen.reserve(static_cast<std::size_t>(depth));
  for (int gen = 0; gen < depth; ++gen) {
    seen.push_back(u);
    UInt u3 = u * 3;
    int digit = u3 >= v ? (u3 >= v + v ? 2 : 1) : 0;
    if (digit == 1) {
      if (u3 == v) {
        // x is exactly the left endpoint a of the removed middle interval.
        res.tag = LocateResult::Tag::InCantorSet;
        return res;
      }
      res.tag = LocateResult::Tag::InRemovedInterval;
      res.interval.n = gen + 1;
      res.interval.k = idx + 1;
      res.interval.a = TriadicRational(3 * left + 1, gen + 1);
      res.interval.b = TriadicRational(3 * left + 2, gen + 1);
      return res;
    }
    u = digit == 2 ? UInt(u3 - v - v) : u3;
    left = 3 * left + (digit == 2 ? 2 : 0);
    idx = 2 * idx + (digit == 2 ? 1 : 0);
    if (u == 0) {
      // Exact triadic point at the left end of a surviving interval.
      res.tag = LocateResult::Tag::InCantorSet;
      return res;
    }
    for (const UInt& s : seen) {
      if (s == u) {
        // Periodic ternary expansion with no digit 1: the point is in C.
        res.tag = LocateResult::Tag::InCantorSet;
        return res;
      }
    }
  }
  res.tag = LocateResult::Tag::UndecidedAtDepth;
  res.survivor_left = TriadicRational(left, depth);
  return res;
}

}  // namespace detail

/// Classify x against the removed intervals of generations <= depth.
/// All comparisons against the exact rational endpoints are exact.
inline LocateResult locate(double x, int depth = kDefaultDepth) {
  if (!std::isfinite(x)) throw std::domain_error("locate: non-finite input");
  if (depth < 1 || depth > kMaxLevel) throw std::out_of_range("locate: depth out of range");
  LocateResult res;
  res.depth = depth;
  if (x < 0.0 || x > 1.0) {
    res.tag = LocateResult::Tag::OutsideUnitInterval;
    return res;
  }
  if (x == 0.0 || x == 1.0) {
    res.tag = LocateResult::Tag::InCantorSet;
    return res;
  }
  const auto dy = detail::decompose_unit_double(x);
  if (dy.exp2 <= 125) {
    using U = unsigned __int128;
    U v = U{1} << dy.exp2;
    return detail::locate_walk<U>(U{dy.mant}, v, depth);
  }
  // Denormal-scale inputs: exact walk with arbitrary precision.
  using B = boost::multiprecision::cpp_int;
  B v = B{1} << dy.exp2;
  return detail::locate_walk<B>(B{dy.mant}, v, depth);
}

/// Certified enclosure [lo, hi] of a real quantity.
struct CertifiedInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Certified distance d(x, C) to the ternary Cantor set.
/// Decisive locations give a point enclosure; undecided ones return
/// [0, w] with w <= 3^{-depth}/2.
inline CertifiedInterval dist_to_cantor(double x, int depth = kDefaultDepth) {
  if (!std::isfinite(x)) throw std::domain_error("dist_to_cantor: non-finite input");
  const LocateResult loc = locate(x, depth);
  using Tag = LocateResult::Tag;
  switch (loc.tag) {
    case Tag::InCantorSet:
      return {0.0, 0.0};
    case Tag::OutsideUnitInterval: {
      double d = x < 0.0 ? -x : x - 1.0;
      return {d, d};
    }
    case Tag::InRemovedInterval: {
      long double a = static_cast<long double>(loc.interval.a.scaled_num(loc.interval.n));
      long double p3 = 1.0L;
      for (int i = 0; i < loc.interval.n; ++i) p3 *= 3.0L;
      a /= p3;
      long double b = a + 1.0L / p3;
      long double d = std::min(static_cast<long double>(x) - a, b - static_cast<long double>(x));
      double dd = static_cast<double>(d);
      return {dd, dd};
    }
    case Tag::UndecidedAtDepth:
    default: {
      long double lft = static_cast<long double>(loc.survivor_left.scaled_num(depth));
      long double p3 = 1.0L;
      for (int i = 0; i < depth; ++i) p3 *= 3.0L;
      long double half_width = 0.5L / p3;
      long double d = std::min(static_cast<long double>(x) - lft / p3,
                               (lft + 1.0L) / p3 - static_cast<long double>(x));
      double hi = static_cast<double>(std::min(d, half_width));
      return {0.0, hi};
    }
  }
}

/// CSV dump of intervals of generations 1..max_gen: n,k,a_num,b_num,level.
inline void write_intervals_csv(std::ostream& os, int max_gen) {
  os << "n,k,a_num,b_num,level\n";
  for (int n = 1; n <= max_gen; ++n) {
    for (const auto& iv : removed_intervals(n)) {
      os << iv.n << ',' << iv.k << ',' << int128_to_string(iv.a.scaled_num(n)) << ','
         << int128_to_string(iv.b.scaled_num(n)) << ',' << n << '\n';
    }
  }
}

}  // namespace cantorcusp
