#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cantorcusp/witness.hpp"

using namespace cantorcusp;

namespace {

// A point inside the left window of the generation-2 slab for alpha = 0.7:
// x1 = 0.7 lies between the generation-1 cusp midpoint 1/2 and the
// generation-2 cusp midpoint 5/6, above the graph for slab-scale heights.
constexpr double kAlpha = 0.7;
constexpr double kX1 = 0.7;

double slab_top(int n) { return static_cast<double>(detail::slab_top(kAlpha, n)); }

}  // namespace

TEST_CASE("slabs tile the height axis by generation") {
  for (int n = 2; n <= 10; ++n) {
    const double inside = 0.5 * (slab_top(n) + slab_top(n + 1));
    CHECK(detail::slab_generation(kAlpha, inside, 15) == n);
  }
  CHECK(detail::slab_generation(kAlpha, 2.0 * slab_top(2), 15) == 0);  // above all slabs
  CHECK(detail::slab_generation(kAlpha, 0.0, 15) == 0);
  CHECK(detail::slab_generation(kAlpha, -0.1, 15) == 0);
}

TEST_CASE("plateau profile branches") {
  const CuspProfile profile(kAlpha);
  const CuspIndex index(10);
  const double top = slab_top(2);
  const double c13 = std::pow(1.0 / 3.0, kAlpha) * top;
  const double c12 = std::pow(0.5, kAlpha) * top;
  const double c23 = std::pow(2.0 / 3.0, kAlpha) * top;

  CHECK(eval_v_plus(profile, index, {kX1, c12}, 10) == 1.0);
  CHECK(eval_v_plus(profile, index, {kX1, 0.5 * (c12 + c23)}, 10) == 1.0);
  CHECK(eval_v_plus(profile, index, {kX1, 0.5 * (top + c23)}, 10) ==
        Catch::Approx(0.5).margin(1e-12));
  CHECK(eval_v_plus(profile, index, {kX1, 0.5 * (c13 + c12)}, 10) ==
        Catch::Approx(0.5).margin(1e-12));
  // Vanishes at the slab top and below the slab bottom branch.
  CHECK(eval_v_plus(profile, index, {kX1, top}, 10) == Catch::Approx(0.0).margin(1e-12));
  CHECK(eval_v_plus(profile, index, {kX1, c13 * 1.0000001}, 10) ==
        Catch::Approx(0.0).margin(1e-5));
  // Outside any window: no earlier-generation cusp midpoint to the left.
  CHECK(eval_v_plus(profile, index, {0.3, c12}, 10) == 0.0);
  // Below the graph: not in the upper domain.
  CHECK(eval_v_plus(profile, index, {0.5, c12}, 10) == 0.0);
}

TEST_CASE("witness scaling factor") {
  const CuspProfile profile(kAlpha);
  const CuspIndex index(10);
  const WitnessParams params = WitnessParams::make(kAlpha, 2.0, DomainSide::Upper, 10);
  const double c12 = std::pow(0.5, kAlpha) * slab_top(2);
  const double got = eval_u_plus(params, profile, index, {kX1, c12});
  const double ap = alpha_p(kAlpha, 2.0);
  const double want = std::pow(3.0, 2.0 * kAlpha * params.beta) *
                      std::pow(1.0 / (2.0 * std::log(2.0)), ap);
  CHECK(got == Catch::Approx(want).margin(1e-12));
}

TEST_CASE("lower witness lives on odd-generation cusps") {
  const CuspProfile profile(kAlpha);
  const double x1 = 1.0 / 18.0;  // midpoint of the generation-3 interval (1/27, 2/27)
  const double t3 = slab_top(3);
  const double c16 = std::pow(1.0 / 6.0, kAlpha) * t3;
  const double c19 = std::pow(1.0 / 9.0, kAlpha) * t3;
  CHECK(eval_v_minus(profile, {x1, 0.03}, 10) == 1.0);  // between (1/6)^a slab and the graph
  CHECK(eval_v_minus(profile, {x1, 0.5 * (c16 + c19)}, 10) == Catch::Approx(0.5).margin(1e-12));
  CHECK(eval_v_minus(profile, {x1, 0.5 * c19}, 10) == 0.0);
  CHECK(eval_v_minus(profile, {1.0 / 6.0, 0.01}, 10) == 0.0);  // generation 2 is even
  CHECK(eval_v_minus(profile, {0.5, 0.1}, 10) == 0.0);         // generation 1 excluded
  CHECK(eval_v_minus(profile, {x1, 0.2}, 10) == 0.0);          // above the graph
  const WitnessParams params = WitnessParams::make(kAlpha, 2.0, DomainSide::Lower, 10);
  const double ap = alpha_p(kAlpha, 2.0);
  const double want = std::pow(3.0, 3.0 * kAlpha * params.beta) *
                      std::pow(1.0 / (3.0 * std::log(3.0)), ap);
  CHECK(eval_u_minus(params, profile, {x1, 0.03}) == Catch::Approx(want).margin(1e-12));
}

TEST_CASE("witness support stays on its side of the graph") {
  const CuspProfile profile(kAlpha);
  const CuspIndex index(10);
  const WitnessParams up = WitnessParams::make(kAlpha, 2.0, DomainSide::Upper, 10);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uy(-0.3, 0.3);
  for (int i = 0; i < 10000; ++i) {
    const PlanePoint pt{ux(rng), uy(rng)};
    if (eval_u_plus(up, profile, index, pt) != 0.0) {
      CHECK(classify(profile, pt, 0.0) == RegionTag::UpperDomain);
    }
    if (eval_v_minus(profile, pt, 10) != 0.0) {
      CHECK(classify(profile, pt, 0.0) == RegionTag::LowerDomain);
      CHECK(pt.x2 > 0.0);
    }
  }
}

TEST_CASE("finite-difference slope obeys the explicit gradient bound") {
  const CuspProfile profile(kAlpha);
  const CuspIndex index(10);
  const WitnessParams params = WitnessParams::make(kAlpha, 2.0, DomainSide::Upper, 10);
  const double top = slab_top(2);
  const double c13 = std::pow(1.0 / 3.0, kAlpha) * top;
  const double c12 = std::pow(0.5, kAlpha) * top;
  const double y = 0.5 * (c13 + c12);
  const double h = 1e-8;
  const double fd = (eval_u_plus(params, profile, index, {kX1, y + h}) -
                     eval_u_plus(params, profile, index, {kX1, y - h})) /
                    (2.0 * h);
  CHECK(std::abs(fd) <= witness_gradient_bound(params, 2) * (1.0 + 1e-9));
  CHECK(std::abs(fd) > 0.0);
}

TEST_CASE("cusp cross sections") {
  CHECK(cusp_cross_section(1, 1, 0.2, 0.5) == Catch::Approx(1.0 / 3.0 - 0.08).margin(1e-12));
  CHECK(cusp_cross_section(2, 1, 1e-12, 0.5) == Catch::Approx(1.0 / 9.0).margin(1e-5));
  const double apex = std::pow(1.0 / 6.0, 0.5);
  CHECK(cusp_cross_section(1, 1, apex, 0.5) == 0.0);
  CHECK(cusp_cross_section(1, 1, -0.1, 0.5) == 0.0);
  CHECK_THROWS_AS(cusp_cross_section(0, 1, 0.1, 0.5), std::domain_error);
}

TEST_CASE("norm series at the admissible boundary") {
  const WitnessParams params = WitnessParams::make(0.7, 2.0, DomainSide::Upper, 120);
  const auto rep = witness_sobolev_norm(params);
  CHECK(rep.convergent);
  // At beta = beta_max the gradient factor collapses to exactly one.
  CHECK(std::abs(rep.gradient_series.geometric_factor - 1.0) < 1e-14);
  CHECK(rep.gradient_series.polylog_exponent ==
        Catch::Approx(alpha_p(0.7, 2.0) * 2.0).margin(1e-12));
  CHECK(rep.value_series.geometric_factor == Catch::Approx(std::pow(3.0, -1.4)).margin(1e-12));
  CHECK(rep.value_series.tail_bound < 1e-6 * rep.value_series.sum);

  WitnessParams margin = params;
  margin.beta -= 0.1;
  const auto rep2 = witness_sobolev_norm(margin);
  CHECK(rep2.convergent);
  CHECK(rep2.gradient_series.geometric_factor < 1.0);
  CHECK(rep2.gradient_series.tail_bound < 1e-6 * rep2.gradient_series.sum);
}

TEST_CASE("sup-norm regime below the critical exponent") {
  WitnessParams params =
      WitnessParams::make(0.3, std::numeric_limits<double>::infinity(), DomainSide::Upper, 50);
  CHECK(params.beta == -1.0);
  CHECK(witness_sobolev_norm(params).convergent);
  params.beta = -0.5;  // violates beta <= -1
  CHECK_FALSE(witness_sobolev_norm(params).convergent);
}

TEST_CASE("divergence certificate at the sharp exponent") {
  const WitnessParams params = WitnessParams::make(0.7, 2.0, DomainSide::Upper, 200);
  const double qo = q_upper(0.7, 2.0);
  const auto rep = divergence_witness(params, qo);
  CHECK(rep.verdict == SeriesReport::Verdict::Divergent);
  CHECK(std::abs(rep.geometric_factor - 1.0) < 1e-10);
  CHECK(rep.polylog_exponent == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(rep.asymptotic_constant.has_value());
  CHECK(*rep.asymptotic_constant == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("geometric divergence in the low regimes") {
  WitnessParams low = WitnessParams::make(0.3, 5.0, DomainSide::Upper, 200);
  low.beta = -1.0;
  const auto rep_low = divergence_witness(low, 1.0);
  CHECK(rep_low.verdict == SeriesReport::Verdict::Divergent);
  CHECK(rep_low.geometric_factor == Catch::Approx(2.0 * std::pow(3.0, -0.6)).margin(1e-12));
  CHECK(rep_low.geometric_factor > 1.0);

  const WitnessParams smallp = WitnessParams::make(0.7, 1.2, DomainSide::Upper, 200);
  const auto rep_smallp = divergence_witness(smallp, 1.0);
  CHECK(rep_smallp.verdict == SeriesReport::Verdict::Divergent);
  CHECK(rep_smallp.geometric_factor > 1.0);
}

TEST_CASE("regime guard rejects admissible exponent pairs") {
  const WitnessParams params = WitnessParams::make(0.7, 2.0, DomainSide::Upper, 100);
  CHECK_THROWS_AS(divergence_witness(params, 1.1), std::domain_error);
}

TEST_CASE("harmonic-log series diverges slowly") {
  long double s100 = 0.0L, s10000 = 0.0L;
  for (int n = 2; n <= 10000; ++n) {
    const long double t = 1.0L / (n * std::log(static_cast<long double>(n)));
    if (n <= 100) s100 += t;
    s10000 += t;
  }
  CHECK(static_cast<double>(s10000 - s100) > 0.5);
}
