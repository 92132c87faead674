#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cantorcusp/grid.hpp"

namespace cantorcusp {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Grid file format: one JSON header line {alpha, bbox, h, side, nx, ny},
/// then ny CSV lines of row-major values, then ny lines of mask characters
/// (O = outside, I = in domain, G = graph band).
inline void write_grid(std::ostream& os, const GridFunction& g, double alpha, DomainSide side) {
  nlohmann::json header;
  header["alpha"] = alpha;
  header["bbox"] = {g.bbox.x0, g.bbox.x1, g.bbox.y0, g.bbox.y1};
  header["h"] = g.h;
  header["side"] = side == DomainSide::Upper ? "upper" : "lower";
  header["nx"] = g.nx;
  header["ny"] = g.ny;
  os << header.dump() << '\n';
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (ix) os << ',';
      os << format_double(g.values[g.idx(ix, iy)]);
    }
    os << '\n';
  }
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      switch (g.tag(ix, iy)) {
        case CellTag::InDomain: os << 'I'; break;
        case CellTag::GraphBand: os << 'G'; break;
        default: os << 'O'; break;
      }
    }
    os << '\n';
  }
}

struct GridFile {
  GridFunction grid;
  double alpha = 0.0;
  DomainSide side = DomainSide::Upper;
};

inline GridFile read_grid(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("grid file: missing header");
  const nlohmann::json header = nlohmann::json::parse(line);
  GridFile gf;
  gf.alpha = header.at("alpha").get<double>();
  gf.side = header.at("side").get<std::string>() == "lower" ? DomainSide::Lower : DomainSide::Upper;
  const auto bb = header.at("bbox");
  BBox bbox{bb.at(0).get<double>(), bb.at(1).get<double>(), bb.at(2).get<double>(),
            bb.at(3).get<double>()};
  gf.grid = GridFunction::empty_like(bbox, header.at("h").get<double>());
  if (gf.grid.nx != header.at("nx").get<int>() || gf.grid.ny != header.at("ny").get<int>()) {
    throw std::runtime_error("grid file: inconsistent dimensions");
  }
  for (int iy = 0; iy < gf.grid.ny; ++iy) {
    if (!std::getline(is, line)) throw std::runtime_error("grid file: truncated values");
    std::istringstream ss(line);
    std::string tok;
    for (int ix = 0; ix < gf.grid.nx; ++ix) {
      if (!std::getline(ss, tok, ',')) throw std::runtime_error("grid file: short value row");
      gf.grid.values[gf.grid.idx(ix, iy)] = std::stod(tok);
    }
  }
  for (int iy = 0; iy < gf.grid.ny; ++iy) {
    if (!std::getline(is, line)) throw std::runtime_error("grid file: truncated mask");
    if (static_cast<int>(line.size()) < gf.grid.nx) throw std::runtime_error("grid file: short mask row");
    for (int ix = 0; ix < gf.grid.nx; ++ix) {
      CellTag t = CellTag::Outside;
      if (line[static_cast<std::size_t>(ix)] == 'I') t = CellTag::InDomain;
      else if (line[static_cast<std::size_t>(ix)] == 'G') t = CellTag::GraphBand;
      gf.grid.mask[gf.grid.idx(ix, iy)] = static_cast<std::uint8_t>(t);
    }
  }
  return gf;
}

}  // namespace cantorcusp
