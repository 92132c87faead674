#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "cantorcusp/grid.hpp"
#include "cantorcusp/grid_io.hpp"

using namespace cantorcusp;

namespace {
const BBox kAbove{0.0, 2.0, 1.0, 2.0};  // strictly above the graph everywhere
}

TEST_CASE("sampling fills the requested side") {
  const CuspProfile profile(0.5);
  const double h = 1.0 / 16.0;
  const auto g = sample(profile, [](const PlanePoint&) { return 1.0; }, kAbove, h,
                        DomainSide::Upper);
  REQUIRE(g.nx == 32);
  REQUIRE(g.ny == 16);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      CHECK(g.in_domain(ix, iy));
      CHECK(g.values[g.idx(ix, iy)] == 1.0);
    }
  }
  // The lower side of the same box is empty.
  const auto lower = sample(profile, [](const PlanePoint&) { return 1.0; }, kAbove, h,
                            DomainSide::Lower);
  for (std::size_t i = 0; i < lower.mask.size(); ++i) {
    CHECK(lower.tag(static_cast<int>(i % lower.nx), static_cast<int>(i / lower.nx)) !=
          CellTag::InDomain);
  }
}

TEST_CASE("masked area approximates the domain area") {
  const CuspProfile profile(0.5);
  const BBox box{0.0, 1.0, 0.0, 1.0};
  const double h = std::ldexp(1.0, -8);
  const auto g = sample(profile, [](const PlanePoint&) { return 1.0; }, box, h,
                        DomainSide::Upper);
  std::size_t cells = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (g.in_domain(ix, iy)) ++cells;
    }
  }
  const double area = cells * h * h;
  // Reference: 1 - integral of psi over (0,1). Per removed interval of length
  // l the cusp area is (4/3)(l/2)^{3/2}, so the integral is a geometric series
  // summing to about 0.147492 and the area to 0.852508. Cells near the graph
  // are tagged as band and dropped, shrinking the count by O(h).
  CHECK(area == Catch::Approx(0.852508).epsilon(0.01));
}

TEST_CASE("weak gradient on simple fields") {
  const CuspProfile profile(0.5);
  const double h = 1.0 / 32.0;
  const auto c = sample(profile, [](const PlanePoint&) { return 7.0; }, kAbove, h,
                        DomainSide::Upper);
  const auto [cgx, cgy] = weak_gradient(c);
  for (int iy = 0; iy < c.ny; ++iy) {
    for (int ix = 0; ix < c.nx; ++ix) {
      if (cgx.in_domain(ix, iy)) CHECK(cgx.values[cgx.idx(ix, iy)] == 0.0);
      if (cgy.in_domain(ix, iy)) CHECK(cgy.values[cgy.idx(ix, iy)] == 0.0);
    }
  }
  const auto lin = sample(profile, [](const PlanePoint& p) { return p.x1; }, kAbove, h,
                          DomainSide::Upper);
  const auto [lgx, lgy] = weak_gradient(lin);
  for (int iy = 0; iy < lin.ny; ++iy) {
    for (int ix = 0; ix < lin.nx; ++ix) {
      if (lgx.in_domain(ix, iy)) {
        CHECK(lgx.values[lgx.idx(ix, iy)] == Catch::Approx(1.0).margin(1e-12));
      }
      if (lgy.in_domain(ix, iy)) {
        CHECK(lgy.values[lgy.idx(ix, iy)] == Catch::Approx(0.0).margin(1e-12));
      }
    }
  }
}

TEST_CASE("central differences converge at second order") {
  const CuspProfile profile(0.5);
  const auto f = [](const PlanePoint& p) { return std::sin(p.x1) * std::cos(p.x2); };
  const auto fx = [](const PlanePoint& p) { return std::cos(p.x1) * std::cos(p.x2); };
  auto max_err = [&](double h) {
    const auto g = sample(profile, f, kAbove, h, DomainSide::Upper);
    const auto [gx, gy] = weak_gradient(g);
    double err = 0.0;
    for (int iy = 1; iy + 1 < g.ny; ++iy) {
      for (int ix = 1; ix + 1 < g.nx; ++ix) {
        if (!gx.in_domain(ix, iy)) continue;
        err = std::max(err, std::abs(gx.values[gx.idx(ix, iy)] - fx({g.cx(ix), g.cy(iy)})));
      }
    }
    return err;
  };
  const double e1 = max_err(1.0 / 64.0);
  const double e2 = max_err(1.0 / 128.0);
  CHECK(e1 / e2 == Catch::Approx(4.0).epsilon(0.35));
}

TEST_CASE("extension preserves constants and the abscissa") {
  const CuspProfile profile(0.5);
  const BBox box{-0.5, 1.5, -1.0, 1.0};
  const double h = std::ldexp(1.0, -7);
  const auto ones = sample(profile, [](const PlanePoint&) { return 1.0; }, box, h,
                           DomainSide::Upper);
  const auto eones = extend(profile, ones, DomainSide::Upper);
  const auto xs = sample(profile, [](const PlanePoint& p) { return p.x1; }, box, h,
                         DomainSide::Upper);
  const auto exs = extend(profile, xs, DomainSide::Upper);
  for (int iy = 0; iy < eones.ny; ++iy) {
    for (int ix = 0; ix < eones.nx; ++ix) {
      if (eones.in_domain(ix, iy)) {
        CHECK(eones.values[eones.idx(ix, iy)] == Catch::Approx(1.0).margin(1e-12));
      }
      if (exs.in_domain(ix, iy)) {
        CHECK(std::abs(exs.values[exs.idx(ix, iy)] - exs.cx(ix)) <= 2.0 * h);
      }
      // Restriction to the source side is an exact copy.
      if (ones.in_domain(ix, iy)) {
        CHECK(eones.values[eones.idx(ix, iy)] == 1.0);
        CHECK(exs.values[exs.idx(ix, iy)] == xs.values[xs.idx(ix, iy)]);
      }
    }
  }
}

TEST_CASE("extension pulls values through the reflection") {
  const CuspProfile profile(0.5);
  const BBox box{-0.5, 1.5, -1.0, 1.0};
  const double h = std::ldexp(1.0, -7);
  const auto g = sample(profile, [](const PlanePoint& p) { return p.x2; }, box, h,
                        DomainSide::Upper);
  const auto e = extend(profile, g, DomainSide::Upper);
  // Cell nearest to (0.4, 0.1): lower side, value must match the height of
  // the reflected point (Jacobian branch with factor 1/3).
  const int ix = static_cast<int>(std::floor((0.4 - box.x0) / h));
  const int iy = static_cast<int>(std::floor((0.1 - box.y0) / h));
  REQUIRE(e.in_domain(ix, iy));
  const PlanePoint center{e.cx(ix), e.cy(iy)};
  const PlanePoint r = reflect(profile, center);
  CHECK(e.values[e.idx(ix, iy)] == Catch::Approx(r.x2).margin(2.0 * h));
  // Deep mirror zone: reflect is the plain mirror.
  const int iy2 = static_cast<int>(std::floor((-0.8 - box.y0) / h));
  REQUIRE(e.in_domain(ix, iy2));
  CHECK(e.values[e.idx(ix, iy2)] == Catch::Approx(-e.cy(iy2)).margin(2.0 * h));
}

TEST_CASE("norms on boxes") {
  const CuspProfile profile(0.5);
  const double h = 1.0 / 64.0;
  const auto ones = sample(profile, [](const PlanePoint&) { return 1.0; }, kAbove, h,
                           DomainSide::Upper);
  const auto rep = sobolev_norm(ones, 2.0, kAbove);
  CHECK(rep.lp_norm == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
  CHECK(rep.gradient_lp_norm == Catch::Approx(0.0).margin(1e-12));
  CHECK(rep.sobolev_norm == rep.lp_norm + rep.gradient_lp_norm);
  // Monotone in the window.
  const auto part = sobolev_norm(ones, 2.0, BBox{0.0, 1.0, 1.0, 2.0});
  CHECK(part.lp_norm < rep.lp_norm);
  CHECK_THROWS_AS(sobolev_norm(ones, 2.0, BBox{5.0, 6.0, 5.0, 6.0}), std::domain_error);
  CHECK_THROWS_AS(sobolev_norm(ones, std::numeric_limits<double>::infinity(), kAbove),
                  std::domain_error);
}

TEST_CASE("grid file roundtrip") {
  const CuspProfile profile(0.6);
  const BBox box{-0.25, 1.25, -0.5, 0.5};
  const auto g = sample(profile, [](const PlanePoint& p) { return p.x1 * p.x2; }, box,
                        1.0 / 32.0, DomainSide::Upper);
  std::stringstream ss;
  write_grid(ss, g, 0.6, DomainSide::Upper);
  const GridFile back = read_grid(ss);
  CHECK(back.alpha == 0.6);
  CHECK(back.side == DomainSide::Upper);
  REQUIRE(back.grid.nx == g.nx);
  REQUIRE(back.grid.ny == g.ny);
  CHECK(back.grid.h == g.h);
  CHECK(back.grid.values == g.values);
  CHECK(back.grid.mask == g.mask);
}

TEST_CASE("extension ratio is finite for a smooth bump") {
  const CuspProfile profile(0.7);
  const auto bump = [](const PlanePoint& p) {
    const double s =
        ((p.x1 - 0.5) * (p.x1 - 0.5) + (p.x2 - 0.3) * (p.x2 - 0.3)) / (0.8 * 0.8);
    return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0;
  };
  const double r = extension_ratio(profile, bump, 2.0, 1.2, BBox{-0.5, 1.5, -0.5, 1.5},
                                   std::ldexp(1.0, -6));
  CHECK(std::isfinite(r));
  CHECK(r > 0.0);
}
