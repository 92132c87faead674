// Command-line front end: geometry dumps, pointwise samplers, threshold
// sweeps, integral reports, grid extension, witness series, verification.
// All floating-point output goes through format_double (17 significant
// digits) so identical invocations produce byte-identical artifacts.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cantorcusp/cantor_geometry.hpp"
#include "cantorcusp/cusp_profile.hpp"
#include "cantorcusp/exponents.hpp"
#include "cantorcusp/grid.hpp"
#include "cantorcusp/grid_io.hpp"
#include "cantorcusp/reflection.hpp"
#include "cantorcusp/singular_integral.hpp"
#include "cantorcusp/verify.hpp"
#include "cantorcusp/witness.hpp"

namespace {

using namespace cantorcusp;

std::string fd(double v) { return format_double(v); }

// JSON has no literal for non-finite numbers; emit them as quoted strings.
std::string jnum(double v) {
  if (std::isfinite(v)) return fd(v);
  if (std::isnan(v)) return "\"nan\"";
  return v > 0 ? "\"inf\"" : "\"-inf\"";
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Output sink: file when a path is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<std::string> read_lines(const std::string& path) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) throw std::runtime_error("cannot open input file: " + path);
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

bool parse_colon_tuple(const std::string& s, std::vector<double>* out, std::size_t count) {
  std::istringstream ss(s);
  std::string tok;
  out->clear();
  while (std::getline(ss, tok, ':')) {
    try {
      out->push_back(std::stod(tok));
    } catch (...) {
      return false;
    }
  }
  return out->size() == count;
}

void series_report_json(std::ostream& os, const SeriesReport& rep) {
  os << "{\"verdict\":\""
     << (rep.verdict == SeriesReport::Verdict::Convergent ? "convergent" : "divergent")
     << "\",\"geometric_factor\":" << fd(rep.geometric_factor)
     << ",\"polylog_exponent\":" << fd(rep.polylog_exponent) << ",\"sum\":" << jnum(rep.sum)
     << ",\"tail_bound\":" << jnum(rep.tail_bound) << ",\"asymptotic_constant\":";
  if (rep.asymptotic_constant) {
    os << fd(*rep.asymptotic_constant);
  } else {
    os << "null";
  }
  os << ",\"indices\":[";
  for (std::size_t i = 0; i < rep.indices.size(); ++i) {
    if (i) os << ',';
    os << rep.indices[i];
  }
  os << "],\"terms\":[";
  for (std::size_t i = 0; i < rep.terms.size(); ++i) {
    if (i) os << ',';
    os << fd(rep.terms[i]);
  }
  os << "],\"partial_sums\":[";
  for (std::size_t i = 0; i < rep.partial_sums.size(); ++i) {
    if (i) os << ',';
    os << fd(rep.partial_sums[i]);
  }
  os << "]}";
}

void norm_report_json(std::ostream& os, const NormReport& rep) {
  os << "{\"p\":" << fd(rep.p) << ",\"lp_norm\":" << fd(rep.lp_norm)
     << ",\"gradient_lp_norm\":" << fd(rep.gradient_lp_norm)
     << ",\"sobolev_norm\":" << fd(rep.sobolev_norm) << ",\"window\":[" << fd(rep.window.x0)
     << ',' << fd(rep.window.x1) << ',' << fd(rep.window.y0) << ',' << fd(rep.window.y1)
     << "]}";
}

int run_geometry(int depth, const std::string& format, const std::string& output) {
  Sink sink(output);
  std::ostream& os = sink.os();
  if (format == "json") {
    os << "{\"intervals\":[";
    bool first = true;
    for (int n = 1; n <= depth; ++n) {
      for (const auto& iv : removed_intervals(n)) {
        if (!first) os << ',';
        first = false;
        os << "{\"n\":" << iv.n << ",\"k\":" << iv.k << ",\"a_num\":"
           << int128_to_string(iv.a.scaled_num(n)) << ",\"b_num\":"
           << int128_to_string(iv.b.scaled_num(n)) << ",\"level\":" << n << "}";
      }
    }
    os << "]}\n";
  } else {
    write_intervals_csv(os, depth);
  }
  return 0;
}

int run_psi(double alpha, int depth, const std::string& points, const std::string& output) {
  const CuspProfile profile(alpha, depth);
  const std::vector<std::string> lines = read_lines(points);
  Sink sink(output);
  std::ostream& os = sink.os();
  os << "x1,psi_lo,psi_hi,derivative_or_NA\n";
  for (const std::string& line : lines) {
    double x1 = 0.0;
    try {
      x1 = std::stod(line);
    } catch (...) {
      continue;  // header or blank token
    }
    const CertifiedInterval ps = psi(profile, x1);
    const auto d = psi_derivative(profile, x1);
    os << fd(x1) << ',' << fd(ps.lo) << ',' << fd(ps.hi) << ',' << (d ? fd(*d) : "NA") << '\n';
  }
  return 0;
}

int run_reflect(double alpha, int depth, const std::string& points, const std::string& output) {
  const CuspProfile profile(alpha, depth);
  const std::vector<std::string> lines = read_lines(points);
  Sink sink(output);
  std::ostream& os = sink.os();
  os << "x1,x2,rx1,rx2,zone,jacobian\n";
  for (const std::string& line : lines) {
    std::istringstream ss(line);
    std::string t1, t2;
    if (!std::getline(ss, t1, ',') || !std::getline(ss, t2, ',')) continue;
    PlanePoint p;
    try {
      p = {std::stod(t1), std::stod(t2)};
    } catch (...) {
      continue;
    }
    const CertifiedInterval ps = psi(profile, p.x1);
    if (p.x2 >= ps.lo && p.x2 <= ps.hi) {
      os << fd(p.x1) << ',' << fd(p.x2) << ',' << fd(p.x1) << ',' << fd(p.x2)
         << ",on_graph," << fd(1.0) << '\n';
      continue;
    }
    try {
      const ReflectionZone z = zone(profile, p);
      const PlanePoint r = reflect(profile, p);
      const char* name = z.tag == ReflectionZone::Tag::UpperRectangle   ? "upper_rectangle"
                         : z.tag == ReflectionZone::Tag::LowerRectangle ? "lower_rectangle"
                                                                        : "elsewhere";
      const double jac = z.tag == ReflectionZone::Tag::UpperRectangle   ? 3.0
                         : z.tag == ReflectionZone::Tag::LowerRectangle ? 1.0 / 3.0
                                                                        : 1.0;
      os << fd(p.x1) << ',' << fd(p.x2) << ',' << fd(r.x1) << ',' << fd(r.x2) << ',' << name
         << ',' << fd(jac) << '\n';
    } catch (const UncertainZone&) {
      os << fd(p.x1) << ',' << fd(p.x2) << ",NA,NA,uncertain,NA\n";
    }
  }
  return 0;
}

void thresholds_row(std::ostream& os, double alpha, double p, std::optional<double> q) {
  const DerivedExponents d = derive_exponents(alpha, p, q.value_or(p));
  os << fd(alpha) << ',' << fd(p) << ',' << fd(d.p_lower) << ',' << fd(d.q_upper) << ',';
  if (q && *q < p) {
    os << fd(series_ratio(alpha, p, *q));
  } else {
    os << "NA";
  }
  os << ',' << fd(d.alpha_p) << ',' << fd(d.beta_max) << ',';
  if (q && *q < p) {
    os << fd(kappa(p, *q));
  } else {
    os << "NA";
  }
  os << ',' << fd(d.alpha_critical) << '\n';
}

int run_thresholds(double alpha, std::optional<double> p, const std::string& p_grid,
                   std::optional<double> q, const std::string& output) {
  Sink sink(output);
  std::ostream& os = sink.os();
  os << "alpha,p,p_lower,q_upper,series_ratio_at_q,alpha_p,beta_max,kappa,alpha_critical\n";
  if (!p_grid.empty()) {
    std::vector<double> g;
    if (!parse_colon_tuple(p_grid, &g, 3) || !(g[2] > 0.0)) {
      throw std::runtime_error("--p-grid expects lo:hi:step with step > 0");
    }
    for (int i = 0;; ++i) {
      const double pv = g[0] + i * g[2];
      if (pv > g[1] + 1e-12) break;
      thresholds_row(os, alpha, pv, q);
    }
  } else if (p) {
    thresholds_row(os, alpha, *p, q);
  } else {
    throw std::runtime_error("thresholds: provide --p or --p-grid");
  }
  return 0;
}

int run_jacobian_integral(double alpha, double p, double q, const std::string& side,
                          int generations, const std::string& output) {
  const IntegralReport rep = side == "minus" ? cminus(alpha, p, q, generations)
                                             : cplus(alpha, p, q, generations);
  Sink sink(output);
  std::ostream& os = sink.os();
  os << "{\"side\":\"" << side << "\",\"verdict\":\""
     << (rep.verdict == IntegralReport::Verdict::Finite ? "finite" : "divergent")
     << "\",\"value\":" << jnum(rep.value) << ",\"ratio\":" << fd(rep.ratio)
     << ",\"tail_bound\":" << jnum(rep.tail_bound)
     << ",\"exponent_series\":" << jnum(rep.exponent_series)
     << ",\"generations_used\":" << rep.generations_used << ",\"partial_sums\":[";
  for (std::size_t i = 0; i < rep.partial_sums.size(); ++i) {
    if (i) os << ',';
    os << fd(rep.partial_sums[i]);
  }
  os << "]}\n";
  return 0;
}

int run_extend(double p, double q, const std::string& input, const std::string& window_spec,
               const std::string& grid_out, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open input file: " + input);
  const GridFile gf = read_grid(in);
  const CuspProfile profile(gf.alpha);
  BBox window = gf.grid.bbox;
  if (!window_spec.empty()) {
    std::vector<double> w;
    if (!parse_colon_tuple(window_spec, &w, 4)) {
      throw std::runtime_error("--window expects x0:x1:y0:y1");
    }
    window = {w[0], w[1], w[2], w[3]};
  }
  const GridFunction ext = extend(profile, gf.grid, gf.side);
  const NormReport src_norm = sobolev_norm(gf.grid, p, window);
  const NormReport ext_norm = sobolev_norm(ext, q, window);
  if (!grid_out.empty()) {
    std::ofstream go(grid_out);
    if (!go) throw std::runtime_error("cannot open output file: " + grid_out);
    write_grid(go, ext, gf.alpha, gf.side);
  }
  Sink sink(output);
  std::ostream& os = sink.os();
  os << "{\"source_norm\":";
  norm_report_json(os, src_norm);
  os << ",\"extension_norm\":";
  norm_report_json(os, ext_norm);
  os << ",\"extension_ratio\":" << jnum(ext_norm.sobolev_norm / src_norm.sobolev_norm) << "}\n";
  return 0;
}

int run_sharpness(double alpha, double p, std::optional<double> q, std::optional<double> beta,
                  const std::string& side, int generations, const std::string& output) {
  WitnessParams params = WitnessParams::make(
      alpha, p, side == "lower" ? DomainSide::Lower : DomainSide::Upper, generations);
  if (beta) params.beta = *beta;
  Sink sink(output);
  std::ostream& os = sink.os();
  if (q) {
    const SeriesReport rep = divergence_witness(params, *q);
    series_report_json(os, rep);
    os << '\n';
  } else {
    const WitnessNormReport rep = witness_sobolev_norm(params);
    os << "{\"convergent\":" << (rep.convergent ? "true" : "false") << ",\"value_series\":";
    series_report_json(os, rep.value_series);
    os << ",\"gradient_series\":";
    series_report_json(os, rep.gradient_series);
    os << "}\n";
  }
  return 0;
}

int run_witness_grid(double alpha, double p, std::optional<double> beta, const std::string& side,
                     int generations, const std::string& bbox_spec, double h,
                     const std::string& output) {
  WitnessParams params = WitnessParams::make(
      alpha, p, side == "lower" ? DomainSide::Lower : DomainSide::Upper, generations);
  if (beta) params.beta = *beta;
  std::vector<double> b;
  if (!parse_colon_tuple(bbox_spec, &b, 4)) {
    throw std::runtime_error("--bbox expects x0:x1:y0:y1");
  }
  const BBox bbox{b[0], b[1], b[2], b[3]};
  const CuspProfile profile(alpha);
  const CuspIndex index(std::min(generations, 22));
  GridFunction g;
  if (params.side == DomainSide::Upper) {
    g = sample(profile, [&](const PlanePoint& x) { return eval_u_plus(params, profile, index, x); },
               bbox, h, DomainSide::Upper);
  } else {
    g = sample(profile, [&](const PlanePoint& x) { return eval_u_minus(params, profile, x); },
               bbox, h, DomainSide::Lower);
  }
  Sink sink(output);
  write_grid(sink.os(), g, alpha, params.side);
  return 0;
}

int run_verify_all(double alpha, unsigned seed, bool with_grid, const std::string& output) {
  auto checks = verify::run_core_checks(alpha, seed);
  checks.push_back(verify::check_determinism(alpha, seed));
  if (with_grid) checks.push_back(verify::check_grid_extension());
  bool all = true;
  Sink sink(output);
  std::ostream& os = sink.os();
  os << "{\"alpha\":" << fd(alpha) << ",\"seed\":" << seed << ",\"criteria\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (i) os << ',';
    os << "{\"name\":\"" << checks[i].name << "\",\"pass\":"
       << (checks[i].pass ? "true" : "false") << ",\"detail\":\""
       << json_escape(checks[i].detail) << "\"}";
    all = all && checks[i].pass;
  }
  os << "],\"pass\":" << (all ? "true" : "false") << "}\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cantor-cuspidal graph toolkit: geometry, reflection, extension thresholds"};
  app.require_subcommand(1);

  double alpha = 0.7;
  int depth = cantorcusp::kDefaultDepth;
  int generations = 200;
  int wg_generations = 8;
  double h = 1.0 / 1024.0;
  std::optional<double> p_opt, q_opt, beta_opt;
  double p = 2.0, q = 1.2;
  std::string side_pm = "plus", side_ul = "upper";
  std::string points, input, output, grid_out, p_grid, window_spec, format = "csv";
  std::string bbox_spec = "-0.5:1.5:-0.5:1.5";
  unsigned seed = cantorcusp::verify::kDefaultSeed;
  bool with_grid = false;

  auto* geometry = app.add_subcommand("geometry", "dump removed intervals exactly");
  geometry->add_option("--depth", depth, "largest generation")->default_val(5);
  geometry->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  geometry->add_option("--output,-o", output, "output path (default stdout)");

  auto* psi_cmd = app.add_subcommand("psi", "sample the cusp profile and its derivative");
  psi_cmd->add_option("--alpha", alpha, "Hoelder exponent in (0,1)")->required();
  psi_cmd->add_option("--depth", depth, "geometry depth");
  psi_cmd->add_option("--points", points, "file with one x1 per line, - for stdin")->required();
  psi_cmd->add_option("--output,-o", output, "output path (default stdout)");

  auto* reflect_cmd = app.add_subcommand("reflect", "reflect points over the graph");
  reflect_cmd->add_option("--alpha", alpha)->required();
  reflect_cmd->add_option("--depth", depth);
  reflect_cmd->add_option("--points", points, "CSV x1,x2 per line, - for stdin")->required();
  reflect_cmd->add_option("--output,-o", output);

  auto* thresholds_cmd = app.add_subcommand("thresholds", "exponent thresholds and ratios");
  thresholds_cmd->add_option("--alpha", alpha)->required();
  thresholds_cmd->add_option("--p", p_opt, "single p value");
  thresholds_cmd->add_option("--p-grid", p_grid, "lo:hi:step sweep over p");
  thresholds_cmd->add_option("--q", q_opt, "q for the series-ratio column");
  thresholds_cmd->add_option("--output,-o", output);

  auto* ji = app.add_subcommand("jacobian-integral", "Jacobian-quotient integral report");
  ji->add_option("--alpha", alpha)->required();
  ji->add_option("--p", p)->required();
  ji->add_option("--q", q)->required();
  ji->add_option("--side", side_pm, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
  ji->add_option("--generations", generations)->capture_default_str();
  ji->add_option("--output,-o", output);

  auto* extend_cmd = app.add_subcommand("extend", "extend a sampled grid across the graph");
  extend_cmd->add_option("--p", p)->required();
  extend_cmd->add_option("--q", q)->required();
  extend_cmd->add_option("--input", input, "grid file")->required();
  extend_cmd->add_option("--window", window_spec, "x0:x1:y0:y1 (default full bbox)");
  extend_cmd->add_option("--grid-output", grid_out, "write the extended grid here");
  extend_cmd->add_option("--output,-o", output);

  auto* sharp = app.add_subcommand("sharpness", "witness norm series / divergence certificate");
  sharp->add_option("--alpha", alpha)->required();
  sharp->add_option("--p", p)->required();
  sharp->add_option("--q", q_opt, "extension exponent; triggers the divergence certificate");
  sharp->add_option("--beta", beta_opt, "scaling exponent (default beta_max)");
  sharp->add_option("--side", side_ul, "upper or lower")
      ->check(CLI::IsMember({"upper", "lower"}));
  sharp->add_option("--generations", generations)->capture_default_str();
  sharp->add_option("--output,-o", output);

  auto* wg = app.add_subcommand("witness-grid", "sample a witness onto a grid file");
  wg->add_option("--alpha", alpha)->required();
  wg->add_option("--p", p)->required();
  wg->add_option("--beta", beta_opt);
  wg->add_option("--side", side_ul)->check(CLI::IsMember({"upper", "lower"}));
  wg->add_option("--generations", wg_generations)->capture_default_str();
  wg->add_option("--bbox", bbox_spec, "x0:x1:y0:y1");
  wg->add_option("--spacing", h, "grid spacing");
  wg->add_option("--output,-o", output);

  auto* verify_cmd = app.add_subcommand("verify-all", "run the acceptance checks");
  verify_cmd->add_option("--alpha", alpha);
  verify_cmd->add_option("--seed", seed, "seed for randomized sampling");
  verify_cmd->add_flag("--with-grid", with_grid, "include the slow grid stability check");
  verify_cmd->add_option("--output,-o", output);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*geometry) return run_geometry(depth, format, output);
    if (*psi_cmd) return run_psi(alpha, depth, points, output);
    if (*reflect_cmd) return run_reflect(alpha, depth, points, output);
    if (*thresholds_cmd) return run_thresholds(alpha, p_opt, p_grid, q_opt, output);
    if (*ji) return run_jacobian_integral(alpha, p, q, side_pm, generations, output);
    if (*extend_cmd) return run_extend(p, q, input, window_spec, grid_out, output);
    if (*sharp) return run_sharpness(alpha, p, q_opt, beta_opt, side_ul, generations, output);
    if (*wg) return run_witness_grid(alpha, p, beta_opt, side_ul, wg_generations, bbox_spec, h, output);
    if (*verify_cmd) return run_verify_all(alpha, seed, with_grid, output);
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"" << json_escape(e.what()) << "\"}\n";
    return 2;
  }
  return 2;
}
