#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cantorcusp {

using int128 = __int128;

// Largest level for which 3^level fits into a signed 128-bit integer with
// headroom for cross-multiplication (3^80 < 2^127).
inline constexpr int kMaxLevel = 80;

inline int128 pow3_128(int level) {
  if (level < 0 || level > kMaxLevel) {
    throw std::out_of_range("pow3_128: level out of range");
  }
  int128 r = 1;
  for (int i = 0; i < level; ++i) r *= 3;
  return r;
}

inline std::string int128_to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v)
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.insert(s.begin(), '-');
  return s;
}

/// Exact rational of the form numerator / 3^level.
///
/// Canonical form: the numerator is not divisible by 3 unless level == 0.
/// All arithmetic and comparisons are exact.
struct TriadicRational {
  int128 num = 0;
  int level = 0;

  TriadicRational() = default;
  TriadicRational(int128 numerator, int lvl) : num(numerator), level(lvl) {
    if (lvl < 0 || lvl > kMaxLevel) {
      throw std::out_of_range("TriadicRational: level out of range");
    }
    canonicalize();
  }

  void canonicalize() {
    while (level > 0 && num % 3 == 0) {
      num /= 3;
      --level;
    }
  }

  // Numerator when written over the common denominator 3^lvl (lvl >= level).
  int128 scaled_num(int lvl) const { return num * pow3_128(lvl - level); }

  friend TriadicRational operator+(const TriadicRational& a, const TriadicRational& b) {
    int lvl = a.level > b.level ? a.level : b.level;
    return TriadicRational(a.scaled_num(lvl) + b.scaled_num(lvl), lvl);
  }
  friend TriadicRational operator-(const TriadicRational& a, const TriadicRational& b) {
    int lvl = a.level > b.level ? a.level : b.level;
    return TriadicRational(a.scaled_num(lvl) - b.scaled_num(lvl), lvl);
  }
  friend bool operator==(const TriadicRational& a, const TriadicRational& b) {
    return a.num == b.num && a.level == b.level;
  }
  friend bool operator!=(const TriadicRational& a, const TriadicRational& b) {
    return !(a == b);
  }
  friend bool operator<(const TriadicRational& a, const TriadicRational& b) {
    int lvl = a.level > b.level ? a.level : b.level;
    return a.scaled_num(lvl) < b.scaled_num(lvl);
  }
  friend bool operator<=(const TriadicRational& a, const TriadicRational& b) {
    return a < b || a == b;
  }
  friend bool operator>(const TriadicRational& a, const TriadicRational& b) { return b < a; }
  friend bool operator>=(const TriadicRational& a, const TriadicRational& b) { return b <= a; }

  double to_double() const {
    long double d = static_cast<long double>(num);
    for (int i = 0; i < level; ++i) d /= 3.0L;
    return static_cast<double>(d);
  }
};

}  // namespace cantorcusp
