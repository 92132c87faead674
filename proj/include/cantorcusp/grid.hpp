#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cantorcusp/reflection.hpp"
#include "cantorcusp/witness.hpp"

namespace cantorcusp {

struct BBox {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

enum class CellTag : std::uint8_t { Outside = 0, InDomain = 1, GraphBand = 2 };

/// Samples of a scalar function on a uniform cell-centered grid with a
/// domain mask.
struct GridFunction {
  BBox bbox;
  double h = 0.0;
  int nx = 0, ny = 0;
  std::vector<double> values;      // row-major, iy * nx + ix
  std::vector<std::uint8_t> mask;  // CellTag per cell

  std::size_t idx(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(ix);
  }
  double cx(int ix) const { return bbox.x0 + (ix + 0.5) * h; }
  double cy(int iy) const { return bbox.y0 + (iy + 0.5) * h; }
  CellTag tag(int ix, int iy) const { return static_cast<CellTag>(mask[idx(ix, iy)]); }
  bool in_domain(int ix, int iy) const { return tag(ix, iy) == CellTag::InDomain; }

  static GridFunction empty_like(const BBox& bbox, double h) {
    GridFunction g;
    g.bbox = bbox;
    g.h = h;
    g.nx = static_cast<int>(std::ceil((bbox.x1 - bbox.x0) / h - 1e-12));
    g.ny = static_cast<int>(std::ceil((bbox.y1 - bbox.y0) / h - 1e-12));
    if (g.nx < 1 || g.ny < 1) throw std::domain_error("GridFunction: empty bbox");
    g.values.assign(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
    g.mask.assign(static_cast<std::size_t>(g.nx) * g.ny,
                  static_cast<std::uint8_t>(CellTag::Outside));
    return g;
  }
};

struct NormReport {
  double lp_norm = 0.0;
  double gradient_lp_norm = 0.0;
  double sobolev_norm = 0.0;
  double p = 0.0;
  BBox window;
};

/// Sample f at cell centers classified on the requested side of the graph;
/// cells within h of the graph are tagged GraphBand.
template <typename F>
GridFunction sample(const CuspProfile& profile, F&& f, const BBox& bbox, double h,
                    DomainSide side) {
  if (!(h > 0.0)) throw std::domain_error("sample: h must be positive");
  GridFunction g = GridFunction::empty_like(bbox, h);
  const RegionTag want = side == DomainSide::Upper ? RegionTag::UpperDomain : RegionTag::LowerDomain;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const PlanePoint p{g.cx(ix), g.cy(iy)};
      const RegionTag tag = classify(profile, p, h);
      const std::size_t i = g.idx(ix, iy);
      if (tag == RegionTag::OnGraph) {
        g.mask[i] = static_cast<std::uint8_t>(CellTag::GraphBand);
      } else if (tag == want) {
        g.mask[i] = static_cast<std::uint8_t>(CellTag::InDomain);
        g.values[i] = f(p);
      }
    }
  }
  return g;
}

/// Finite-difference weak gradient: central where both neighbors are in the
/// domain, one-sided otherwise, undefined (Outside) without any neighbor.
inline std::pair<GridFunction, GridFunction> weak_gradient(const GridFunction& g) {
  if (g.nx < 3 || g.ny < 3) throw std::domain_error("weak_gradient: need >= 3 cells per axis");
  GridFunction gx = GridFunction::empty_like(g.bbox, g.h);
  GridFunction gy = GridFunction::empty_like(g.bbox, g.h);
  auto axis_diff = [&](int ix, int iy, int dx, int dy) -> std::pair<bool, double> {
    const bool prev_ok = ix - dx >= 0 && iy - dy >= 0 && g.in_domain(ix - dx, iy - dy);
    const bool next_ok = ix + dx < g.nx && iy + dy < g.ny && g.in_domain(ix + dx, iy + dy);
    const std::size_t i = g.idx(ix, iy);
    if (prev_ok && next_ok) {
      return {true, (g.values[g.idx(ix + dx, iy + dy)] - g.values[g.idx(ix - dx, iy - dy)]) /
                        (2.0 * g.h)};
    }
    if (next_ok) return {true, (g.values[g.idx(ix + dx, iy + dy)] - g.values[i]) / g.h};
    if (prev_ok) return {true, (g.values[i] - g.values[g.idx(ix - dx, iy - dy)]) / g.h};
    return {false, 0.0};
  };
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!g.in_domain(ix, iy)) continue;
      const std::size_t i = g.idx(ix, iy);
      auto [okx, vx] = axis_diff(ix, iy, 1, 0);
      auto [oky, vy] = axis_diff(ix, iy, 0, 1);
      if (okx) {
        gx.values[i] = vx;
        gx.mask[i] = static_cast<std::uint8_t>(CellTag::InDomain);
      }
      if (oky) {
        gy.values[i] = vy;
        gy.mask[i] = static_cast<std::uint8_t>(CellTag::InDomain);
      }
    }
  }
  return {std::move(gx), std::move(gy)};
}

namespace detail {

// Nearest in-domain value within an expanding ring search.
inline bool nearest_value(const GridFunction& g, int ix, int iy, int max_radius, double* out) {
  for (int r = 1; r <= max_radius; ++r) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jx >= g.nx || jy < 0 || jy >= g.ny) continue;
        if (g.in_domain(jx, jy)) {
          *out = g.values[g.idx(jx, jy)];
          return true;
        }
      }
    }
  }
  return false;
}

// Bilinear interpolation at (x, y) restricted to in-domain corner cells.
inline bool interpolate(const GridFunction& g, double x, double y, double* out) {
  const double fx = (x - g.bbox.x0) / g.h - 0.5;
  const double fy = (y - g.bbox.y0) / g.h - 0.5;
  const int ix = static_cast<int>(std::floor(fx));
  const int iy = static_cast<int>(std::floor(fy));
  const double tx = fx - ix;
  const double ty = fy - iy;
  double wsum = 0.0, vsum = 0.0;
  for (int dy = 0; dy <= 1; ++dy) {
    for (int dx = 0; dx <= 1; ++dx) {
      const int jx = ix + dx, jy = iy + dy;
      if (jx < 0 || jx >= g.nx || jy < 0 || jy >= g.ny) continue;
      if (!g.in_domain(jx, jy)) continue;
      const double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty);
      wsum += w;
      vsum += w * g.values[g.idx(jx, jy)];
    }
  }
  if (wsum <= 0.0) {
    // All corners masked: fall back to the nearest valid cell.
    const int cx = std::clamp(ix, 0, g.nx - 1);
    const int cy = std::clamp(iy, 0, g.ny - 1);
    return nearest_value(g, cx, cy, 4, out);
  }
  *out = vsum / wsum;
  return true;
}

}  // namespace detail

/// Extension by composition with the reflection: the source side is copied,
/// the opposite side takes the interpolated source value at the reflected
/// point, graph-band cells take the nearest source value.
inline GridFunction extend(const CuspProfile& profile, const GridFunction& g, DomainSide side) {
  GridFunction out = GridFunction::empty_like(g.bbox, g.h);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t i = g.idx(ix, iy);
      const CellTag tag = g.tag(ix, iy);
      if (tag == CellTag::InDomain) {
        out.values[i] = g.values[i];
        out.mask[i] = static_cast<std::uint8_t>(CellTag::InDomain);
        continue;
      }
      if (tag == CellTag::GraphBand) {
        double v = 0.0;
        if (detail::nearest_value(g, ix, iy, 8, &v)) {
          out.values[i] = v;
          out.mask[i] = static_cast<std::uint8_t>(CellTag::InDomain);
        }
        continue;
      }
      // Opposite side: pull back through the reflection.
      const PlanePoint p{g.cx(ix), g.cy(iy)};
      PlanePoint r;
      try {
        r = reflect(profile, p);
      } catch (const UncertainZone&) {
        // Certification band around the graph at fractal abscissae; bounded
        // choice, vanishes from norms with h.
        double v = 0.0;
        if (detail::nearest_value(g, ix, iy, 8, &v)) {
          out.values[i] = v;
          out.mask[i] = static_cast<std::uint8_t>(CellTag::InDomain);
        }
        continue;
      }
      if (!g.bbox.contains(r.x1, r.x2)) continue;  // window mismatch: stays Outside
      double v = 0.0;
      if (detail::interpolate(g, r.x1, r.x2, &v)) {
        out.values[i] = v;
        out.mask[i] = static_cast<std::uint8_t>(CellTag::InDomain);
      }
    }
  }
  (void)side;
  return out;
}

/// Cell-sum W^{1,p} norm over an axis-aligned window.
inline NormReport sobolev_norm(const GridFunction& g, double p, const BBox& window) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::domain_error("sobolev_norm: need finite p >= 1");
  const auto [gx, gy] = weak_gradient(g);
  const double cell = g.h * g.h;
  long double lp = 0.0L, gp = 0.0L;
  std::size_t used = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.cy(iy);
    if (y < window.y0 || y > window.y1) continue;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.cx(ix);
      if (x < window.x0 || x > window.x1) continue;
      if (!g.in_domain(ix, iy)) continue;
      const std::size_t i = g.idx(ix, iy);
      ++used;
      lp += std::pow(std::abs(static_cast<long double>(g.values[i])), static_cast<long double>(p)) * cell;
      if (gx.in_domain(ix, iy) && gy.in_domain(ix, iy)) {
        const long double mag =
            std::hypot(static_cast<long double>(gx.values[i]), static_cast<long double>(gy.values[i]));
        gp += std::pow(mag, static_cast<long double>(p)) * cell;
      }
    }
  }
  if (used == 0) throw std::domain_error("sobolev_norm: empty mask in window");
  NormReport rep;
  rep.p = p;
  rep.window = window;
  rep.lp_norm = static_cast<double>(std::pow(lp, 1.0L / p));
  rep.gradient_lp_norm = static_cast<double>(std::pow(gp, 1.0L / p));
  rep.sobolev_norm = rep.lp_norm + rep.gradient_lp_norm;
  return rep;
}

/// Ratio of the extension W^{1,q} norm over the bbox to the source-side
/// W^{1,p} norm, for a function sampled on the upper side.
template <typename F>
double extension_ratio(const CuspProfile& profile, F&& f, double p, double q, const BBox& bbox,
                       double h) {
  const GridFunction src = sample(profile, std::forward<F>(f), bbox, h, DomainSide::Upper);
  const GridFunction ext = extend(profile, src, DomainSide::Upper);
  const double num = sobolev_norm(ext, q, bbox).sobolev_norm;
  const double den = sobolev_norm(src, p, bbox).sobolev_norm;
  return num / den;
}

}  // namespace cantorcusp
