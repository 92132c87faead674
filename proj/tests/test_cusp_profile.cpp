#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cantorcusp/cusp_profile.hpp"

using namespace cantorcusp;

namespace {
double mid(const CertifiedInterval& c) { return 0.5 * (c.lo + c.hi); }
}  // namespace

TEST_CASE("psi at reference points") {
  const CuspProfile half(0.5);
  const auto at_center = psi(half, 0.5);
  CHECK(mid(at_center) == Catch::Approx(std::sqrt(1.0 / 6.0)).margin(1e-14));
  CHECK(at_center.width() < 1e-14);

  const CuspProfile p7(0.7);
  const auto outside = psi(p7, 2.0);
  CHECK(outside.lo == 0.0);
  CHECK(outside.hi == 0.0);
  CHECK(psi(p7, -0.3).hi == 0.0);

  // 1/4 lies in the Cantor set, so the cusp profile vanishes there.
  const auto on_c = psi(p7, 0.25);
  CHECK(on_c.lo == 0.0);
  CHECK(on_c.hi == 0.0);
}

TEST_CASE("left-half power law on removed intervals") {
  const CuspProfile p(0.5);
  // Inside (1/3, 2/3), left half: psi(1/3 + t) = t^alpha.
  for (double t : {0.01, 0.05, 0.1, 0.15}) {
    const double x = 1.0 / 3.0 + t;
    const auto ps = psi(p, x);
    const double want = std::pow(x - 1.0 / 3.0, 0.5);
    CHECK(mid(ps) == Catch::Approx(want).margin(1e-12));
  }
}

TEST_CASE("psi is bounded by the maximal distance power") {
  const CuspProfile p(0.7);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double cap = std::pow(0.5, 0.7);
  for (int i = 0; i < 5000; ++i) {
    const auto ps = psi(p, u01(rng));
    CHECK(ps.lo >= 0.0);
    CHECK(ps.hi <= cap);
  }
}

TEST_CASE("Hoelder estimate at desk scale") {
  const double alpha = 0.6;
  const CuspProfile p(alpha);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u01(rng), y = u01(rng);
    const auto px = psi(p, x), py = psi(p, y);
    const double diff = std::abs(mid(px) - mid(py));
    CHECK(diff <= std::pow(std::abs(x - y), alpha) + px.width() + py.width() + 1e-9);
  }
}

TEST_CASE("symmetry about one half") {
  const CuspProfile p(0.8);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = u01(rng);
    const auto a = psi(p, x), b = psi(p, 1.0 - x);
    CHECK(std::abs(mid(a) - mid(b)) < a.width() + b.width() + 1e-12);
  }
}

TEST_CASE("derivative closed form and undefined set") {
  const CuspProfile p(0.5);
  const auto d4 = psi_derivative(p, 0.4);
  REQUIRE(d4.has_value());
  CHECK(*d4 == Catch::Approx(0.5 * std::pow(1.0 / 15.0, -0.5)).margin(1e-9));

  const auto d6 = psi_derivative(p, 0.6);
  REQUIRE(d6.has_value());
  CHECK(*d6 == Catch::Approx(-0.5 * std::pow(1.0 / 15.0, -0.5)).margin(1e-9));

  CHECK_FALSE(psi_derivative(p, 0.5).has_value());   // midpoint kink
  CHECK_FALSE(psi_derivative(p, 0.25).has_value());  // Cantor point
  CHECK_FALSE(psi_derivative(p, 0.0).has_value());
  CHECK_FALSE(psi_derivative(p, 1.0).has_value());
  const auto flat = psi_derivative(p, -3.0);
  REQUIRE(flat.has_value());
  CHECK(*flat == 0.0);
}

TEST_CASE("derivative matches finite differences away from kinks") {
  const CuspProfile p(0.5);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double h = 1e-8;
  int tested = 0;
  while (tested < 1000) {
    const double x = u01(rng);
    const auto loc = locate(x, p.depth);
    if (loc.tag != LocateResult::Tag::InRemovedInterval) continue;
    const double a = loc.interval.a_d();
    const double b = loc.interval.b_d();
    const double q = static_cast<double>(loc.interval.midpoint());
    if (std::min({x - a, b - x, std::abs(x - q)}) < 1e-4) continue;
    const auto d = psi_derivative(p, x);
    REQUIRE(d.has_value());
    const double fd = (mid(psi(p, x + h)) - mid(psi(p, x - h))) / (2.0 * h);
    CHECK(std::abs(fd - *d) / std::abs(*d) < 1e-6);
    ++tested;
  }
}

TEST_CASE("classification of plane points") {
  const CuspProfile p(0.5);
  CHECK(classify(p, {0.4, 1.0}, 0.0) == RegionTag::UpperDomain);
  CHECK(classify(p, {-2.0, 0.0}, 0.0) == RegionTag::OnGraph);
  CHECK(classify(p, {0.4, -0.1}, 0.0) == RegionTag::LowerDomain);
  // Tolerance fattens the graph band.
  const double ps = mid(psi(p, 0.4));
  CHECK(classify(p, {0.4, ps + 0.005}, 0.01) == RegionTag::OnGraph);
  CHECK(classify(p, {0.4, ps + 0.05}, 0.01) == RegionTag::UpperDomain);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(CuspProfile(0.0), std::domain_error);
  CHECK_THROWS_AS(CuspProfile(1.0), std::domain_error);
  CHECK_THROWS_AS(CuspProfile(0.5, 0), std::out_of_range);
  const CuspProfile p(0.5);
  CHECK_THROWS_AS(classify(p, {0.0, 0.0}, -1.0), std::domain_error);
}
