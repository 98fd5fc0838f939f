#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zetadyn/pipeline.hpp"

using namespace zetadyn;
using mp::Complex;
using mp::Real;

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kTwoPi = 6.283185307179586;

// branch whose elements sit exactly on log r = m theta + b, theta stepping
// by pi/2
orbit::Branch synthetic_spiral(double m0, double b0, double th0, int n, const PrecisionContext& ctx) {
  orbit::Branch b;
  b.anchor.elements.push_back(ctx.complex(-1.25, 0.75));
  b.anchor.residual = ctx.real(0);
  b.digits = ctx.digits;
  for (int k = 0; k < n; ++k) {
    Real th = ctx.real(th0 + k * kHalfPi);
    Real r = mp::exp(ctx.real(m0) * th + ctx.real(b0));
    b.elements.push_back(b.anchor.elements[0] + Complex{r * mp::cos(th), r * mp::sin(th)});
    b.residuals.push_back(ctx.real(0));
  }
  b.root = b.elements[0];
  b.verified_len = n;
  return b;
}

}  // namespace

TEST_CASE("unwrap on synthetic data reproduces the angle progression") {
  PrecisionContext ctx = PrecisionContext::make(60);
  // spiral winds inward: decreasing radius, increasing theta
  orbit::Branch b = synthetic_spiral(-0.8, 0.45, -0.6, 24, ctx);
  auto p = spiralfit::unwrap(b, 0);
  REQUIRE(p.size() == 24);
  for (long k = 0; k < p.size(); ++k) CHECK(p.theta[k] == doctest::Approx(-0.6 + k * kHalfPi).epsilon(1e-12));
  for (long k = 1; k < p.size(); ++k) CHECK(p.theta[k] > p.theta[k - 1]);
  // theta congruent to arg mod 2 pi, recomputed in double precision from the
  // full-precision displacement
  for (long k = 0; k < p.size(); ++k) {
    Complex u = b.elements[k] - b.anchor.elements[0];
    double beta = std::atan2(u.im().to_double(), u.re().to_double());
    double diff = std::remainder(p.theta[k] - beta, kTwoPi);
    CHECK(std::abs(diff) < 1e-12);
  }
}

TEST_CASE("unwrap rejects anchor-coincident points") {
  PrecisionContext ctx = PrecisionContext::make(60);
  orbit::Branch b = synthetic_spiral(-0.8, 0.45, -0.6, 10, ctx);
  b.elements[4] = b.anchor.elements[0];
  CHECK_THROWS_AS(spiralfit::unwrap(b, 0), spiralfit::ZeroRadius);
}

TEST_CASE("log-linear fit recovers exact parameters and flags degeneracy") {
  PrecisionContext ctx = PrecisionContext::make(60);
  orbit::Branch b = synthetic_spiral(-0.8, 0.45, -0.6, 30, ctx);
  auto p = spiralfit::unwrap(b, 0);
  auto f = spiralfit::fit_log_linear(p);
  CHECK(f.m == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(f.b == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(f.residuals.size() == static_cast<std::size_t>(p.size()));

  // two points: exact interpolating line
  spiralfit::PolarSeries two;
  two.theta = {0.5, 1.5};
  two.logr = {1.0, 0.2};
  auto f2 = spiralfit::fit_log_linear(two);
  CHECK(f2.m == doctest::Approx(-0.8));
  CHECK(f2.b == doctest::Approx(1.4));

  spiralfit::PolarSeries degenerate;
  degenerate.theta = {1.0, 1.0, 1.0};
  degenerate.logr = {0.0, 0.1, 0.2};
  CHECK_THROWS_AS(spiralfit::fit_log_linear(degenerate), spiralfit::DegenerateAbscissa);
}

TEST_CASE("extended fit recovers a synthetic four-parameter model") {
  spiralfit::PolarSeries p;
  const double a0 = 0.3, b0 = -1.1, c0 = 0.4, d0 = 0.7;
  for (int k = 0; k < 40; ++k) {
    double th = -0.4 + 0.35 * k;
    p.theta.push_back(th);
    p.logr.push_back(a0 + b0 * th + c0 * std::exp(d0 * th));
  }
  auto f = spiralfit::fit_extended(p);
  CHECK_FALSE(f.no_improvement);
  CHECK(f.a == doctest::Approx(a0).epsilon(1e-6));
  CHECK(f.b == doctest::Approx(b0).epsilon(1e-6));
  CHECK(f.c == doctest::Approx(c0).epsilon(1e-6));
  CHECK(f.d == doctest::Approx(d0).epsilon(1e-6));
}

TEST_CASE("extended fit degenerates cleanly on exact linear data") {
  PrecisionContext ctx = PrecisionContext::make(60);
  orbit::Branch b = synthetic_spiral(-0.8, 0.45, -0.6, 30, ctx);
  auto p = spiralfit::unwrap(b, 0);
  auto f = spiralfit::fit_extended(p);
  CHECK((f.no_improvement || f.log10_abs_c < -8.0));
  CHECK(f.b == doctest::Approx(-0.8).epsilon(1e-7));
}

TEST_CASE("index-linear fit: exact recovery and the hand-computed chord mean") {
  PrecisionContext ctx = PrecisionContext::make(60);
  orbit::Branch g;
  g.anchor.elements.push_back(ctx.complex(0, 0));
  g.anchor.residual = ctx.real(0);
  g.digits = 60;
  for (int k = 0; k < 9; ++k) {
    Real r = mp::exp(ctx.real(-0.55 * k + 0.2));
    g.elements.push_back(Complex{r, ctx.real(0)});
    g.residuals.push_back(ctx.real(0));
  }
  g.root = g.elements[0];
  auto f = spiralfit::fit_index_linear(g);
  CHECK(f.m == doctest::Approx(-0.55).epsilon(1e-12));
  CHECK(f.b == doctest::Approx(0.2).epsilon(1e-12));

  // three points with unequal chords: means computed by hand
  orbit::Branch h = g;
  h.elements.clear();
  double lr[3] = {1.0, 0.4, -0.5};  // chords: -0.6 and -0.9
  for (int k = 0; k < 3; ++k) h.elements.push_back(Complex{mp::exp(ctx.real(lr[k])), ctx.real(0)});
  auto f3 = spiralfit::fit_index_linear(h);
  CHECK(f3.m == doctest::Approx(-0.75).epsilon(1e-12));
  // intercepts: 1.0 - (-0.6)*0 = 1.0 and 0.4 - (-0.9)*1 = 1.3
  CHECK(f3.b == doctest::Approx(1.15).epsilon(1e-12));
}

TEST_CASE("pairwise parameters are constant exactly on a log spiral") {
  PrecisionContext ctx = PrecisionContext::make(60);
  orbit::Branch b = synthetic_spiral(-0.8, 0.45, -0.6, 16, ctx);
  auto p = spiralfit::unwrap(b, 0);
  auto prs = spiralfit::pairwise_params(p);
  REQUIRE(prs.size() == 15);
  for (auto [a, bb] : prs) {
    CHECK(a == doctest::Approx(0.45).epsilon(1e-10));
    CHECK(bb == doctest::Approx(-0.8).epsilon(1e-10));
  }
  // 2-element series: pairwise equals the interpolating line fit
  spiralfit::PolarSeries two;
  two.theta = {p.theta[0], p.theta[1]};
  two.logr = {p.logr[0], p.logr[1]};
  auto lf = spiralfit::fit_log_linear(two);
  auto pp = spiralfit::pairwise_params(two);
  REQUIRE(pp.size() == 1);
  CHECK(pp[0].first == doctest::Approx(lf.b));
  CHECK(pp[0].second == doctest::Approx(lf.m));
}

TEST_CASE("deviations vanish on the exact spiral and scale as documented") {
  PrecisionContext ctx = PrecisionContext::make(60);
  orbit::Branch b = synthetic_spiral(-0.8, 0.45, -0.6, 30, ctx);
  auto p = spiralfit::unwrap(b, 0);
  auto f = spiralfit::fit_log_linear(p);
  auto dev = spiralfit::deviations(b, f, p, 5, true);
  CHECK(dev.max < 1e-10);
  // d_rel * r = d_abs by construction
  for (long k = 0; k < p.size(); ++k) {
    double r = std::exp(p.logr[k]);
    CHECK(dev.d_abs[k] == doctest::Approx(dev.d_rel[k] * r).epsilon(1e-12));
  }
  CHECK(dev.mean <= dev.max);
  CHECK(dev.mean_scaled == doctest::Approx(dev.mean * std::sqrt(5.0 / std::log(5.0))));
}

TEST_CASE("delta series: ray pattern and sum consistency") {
  PrecisionContext ctx = PrecisionContext::make(60);
  // points marching inward along a fixed ray from a real anchor
  orbit::Branch ray;
  ray.anchor.elements.push_back(ctx.complex(-20.13, 0));
  ray.anchor.residual = ctx.real(0);
  ray.digits = 60;
  for (int k = 0; k < 12; ++k) {
    Real r = mp::exp(ctx.real(-1.2 * k + 0.5));
    Real th = ctx.real(0.6);
    ray.elements.push_back(ray.anchor.elements[0] + Complex{r * mp::cos(th), r * mp::sin(th)});
    ray.residuals.push_back(ctx.real(0));
  }
  ray.root = ray.elements[0];
  auto ds = spiralfit::delta_series(ray, ray.anchor.elements[0]);  // c = 1 inferred (real anchor)
  for (double d : ds.delta) CHECK(d == doctest::Approx(kTwoPi).epsilon(1e-9));

  // sum of deltas telescopes to the total winding
  orbit::Branch b = synthetic_spiral(-0.8, 0.45, -0.6, 20, ctx);
  auto p = spiralfit::unwrap(b, 0);
  auto ds2 = spiralfit::delta_series(b, b.anchor.elements[0], 0);
  double sum = 0;
  for (double d : ds2.delta) sum += d;
  CHECK(std::abs(sum - (p.theta[19] - p.theta[0])) < 1e-9);
}

TEST_CASE("near-uniform check") {
  std::vector<double> geo;
  for (int k = 0; k < 24; ++k) geo.push_back(2.0 * std::exp(-0.3 * k) * (k % 2 ? 1 : -1));
  auto nu = spiralfit::near_uniform_check(geo);
  CHECK(nu.ok);
  CHECK(nu.A == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(nu.B == doctest::Approx(0.3).epsilon(1e-9));

  std::vector<double> flat(16, 0.7);
  auto nf = spiralfit::near_uniform_check(flat);
  CHECK_FALSE(nf.ok);

  std::vector<double> zeros(16, 0.0);
  CHECK(spiralfit::near_uniform_check(zeros).ok);
  CHECK_THROWS_AS(spiralfit::near_uniform_check(std::vector<double>(4, 1.0)), std::invalid_argument);
}

TEST_CASE("line deviation: collinear points and the zero-imaginary guard") {
  PrecisionContext ctx = PrecisionContext::make(60);
  Complex rho = ctx.complex(0.5, 14.0);
  Complex psi = ctx.complex(-20.0, 0.0);
  orbit::Branch b;
  b.anchor.elements.push_back(psi);
  b.anchor.residual = ctx.real(0);
  b.digits = 60;
  b.root = rho;
  // a_k on the segment, one of them exactly real
  for (int k = 0; k < 8; ++k) {
    Real t = mp::exp(ctx.real(-0.9 * k));
    Complex pt = psi + (rho - psi) * t;
    if (k == 5) pt = Complex{pt.re(), ctx.real(0)};
    b.elements.push_back(pt);
    b.residuals.push_back(ctx.real(0));
  }
  auto ld = spiralfit::line_deviation(b, rho, psi, 7);
  CHECK(ld.flagged[5]);
  for (long k = 1; k <= 7; ++k)
    if (!ld.flagged[k]) CHECK(ld.d_trivial[k] < 1e-12);
  CHECK(ld.mean < 1e-12);

  CHECK_THROWS_AS(spiralfit::line_deviation(b, ctx.complex(-20.0, 5.0), psi, 7),
                  spiralfit::VerticalLine);
}

TEST_CASE("model deviation: exact geometric decay and an injected outlier") {
  PrecisionContext ctx = PrecisionContext::make(60);
  orbit::Branch g;
  g.anchor.elements.push_back(ctx.complex(0, 0));
  g.anchor.residual = ctx.real(0);
  g.digits = 60;
  for (int k = 0; k < 10; ++k)
    g.elements.push_back(Complex{mp::exp(ctx.real(-0.5 * k + 0.4)), ctx.real(0)});
  g.root = g.elements[0];
  auto f = spiralfit::fit_index_linear(g);
  auto md = spiralfit::model_deviation(g, f, 9);
  CHECK(md.max < 1e-12);

  g.elements[6] = Complex{mp::exp(ctx.real(-0.5 * 6 + 0.9)), ctx.real(0)};
  auto md2 = spiralfit::model_deviation(g, spiralfit::IndexFit{-0.5, 0.4}, 9);
  double best = 0;
  long at = 0;
  for (long k = 1; k <= 9; ++k)
    if (md2.d_model[k] > best) { best = md2.d_model[k]; at = k; }
  CHECK(at == 6);
}

TEST_CASE("conjecture-4 statistics") {
  std::vector<double> rel(20, std::exp(-5.0)), abs(20, 0.2);
  auto rows = spiralfit::conjecture4_stats(rel, abs);
  REQUIRE(rows.size() == 20);
  for (const auto& r : rows) CHECK(r.D_rel == doctest::Approx(-5.0).epsilon(1e-12));
  // mean_abs = 0.2: inside (1/N, sqrt(1/N)) exactly for 6 <= N <= 24
  CHECK_FALSE(rows[0].abs_in_bounds);  // N = 1: 1 < 0.2 fails
  CHECK_FALSE(rows[4].abs_in_bounds);  // N = 5: 1/5 = 0.2 is not < 0.2
  CHECK(rows[9].abs_in_bounds);        // N = 10: 0.1 < 0.2 < 0.316
  CHECK(rows[19].abs_in_bounds);       // N = 20: 0.05 < 0.2 < 0.2236
}

TEST_CASE("rotation discrepancy identities on a synthetic-real branch") {
  PrecisionContext ctx = PrecisionContext::make(60);
  Complex rho = rootfind::refine_zero(14.134725, ctx);
  Complex rho2 = rootfind::refine_zero(21.022040, ctx);
  Complex psi = pipeline::find_psi_in_gap(rho, rho.im().to_double(), rho2.im().to_double(), ctx);
  orbit::Branch b = pipeline::make_branch(rho, psi, 10, ctx);

  auto d0 = spiralfit::rotation_discrepancy(b, psi, 0.0, ctx);
  for (const auto& z : d0) CHECK(mp::abs(z).is_zero());

  // conjugated branch relates the +theta and -theta series by conjugation
  rootfind::Cycle canchor;
  canchor.elements.push_back(mp::conj(psi));
  canchor.residual = ctx.real(0);
  orbit::Branch cb = orbit::backward_branch(mp::conj(rho), canchor, 10, ctx);
  auto dp = spiralfit::rotation_discrepancy(b, psi, 0.37, ctx);
  auto dm = spiralfit::rotation_discrepancy(cb, mp::conj(psi), -0.37, ctx);
  REQUIRE(dp.size() == dm.size());
  for (std::size_t k = 0; k < dp.size(); ++k)
    CHECK(mp::abs(dm[k] - mp::conj(dp[k])) < ctx.residual_tol());
}

TEST_CASE("nearly straight: exact line passes, genuine spiral fails") {
  PrecisionContext ctx = PrecisionContext::make(60);
  Complex rho = ctx.complex(0.5, 14.0);
  Complex psi = ctx.complex(-20.0, 0.0);
  orbit::Branch line;
  line.anchor.elements.push_back(psi);
  line.anchor.residual = ctx.real(0);
  line.digits = 60;
  line.root = rho;
  for (int k = 0; k < 12; ++k)
    line.elements.push_back(psi + (rho - psi) * mp::exp(ctx.real(-0.9 * k)));
  auto sc = spiralfit::nearly_straight_check(line, rho, psi);
  CHECK(sc.ok);

  orbit::Branch spiral = synthetic_spiral(-0.4, 0.3, -0.6, 16, ctx);
  auto sc2 = spiralfit::nearly_straight_check(spiral, spiral.root, spiral.anchor.elements[0]);
  CHECK_FALSE(sc2.ok);
}

TEST_CASE("pairwise parameters converge along a real branch") {
  PrecisionContext ctx = PrecisionContext::make(100);
  Complex rho = rootfind::refine_zero(14.134725, ctx);
  Complex rho2 = rootfind::refine_zero(21.022040, ctx);
  Complex psi = pipeline::find_psi_in_gap(rho, rho.im().to_double(), rho2.im().to_double(), ctx);
  orbit::Branch b = pipeline::make_branch(rho, psi, 34, ctx);
  auto p = spiralfit::unwrap(b, 0);
  auto prs = spiralfit::pairwise_params(p);
  REQUIRE(prs.size() >= 30);
  // parameters drift early and settle: successive steps shrink toward the tail
  auto step = [&](std::size_t k) {
    return std::abs(prs[k + 1].second - prs[k].second) + std::abs(prs[k + 1].first - prs[k].first);
  };
  CHECK(step(28) < 0.02 * step(2));

  // the underlying second differences of the unwrapped angles decay
  auto ds = spiralfit::delta_series(b, psi, 0);
  auto nu = spiralfit::near_uniform_check(ds.second_diffs);
  CHECK(nu.ok);
  CHECK(nu.B > 0.0);
}

TEST_CASE("trivial-zero derivative parity") {
  PrecisionContext ctx = PrecisionContext::make(40);
  auto a20 = spiralfit::arg_deriv_parity(10, ctx);
  CHECK(a20.residue_mod4 == 0);
  CHECK(a20.deriv > 0);
  CHECK(a20.cls == spiralfit::ArgClass::NearTwoPi);
  auto a22 = spiralfit::arg_deriv_parity(11, ctx);
  CHECK(a22.residue_mod4 == 2);
  CHECK(a22.deriv < 0);
  CHECK(a22.cls == spiralfit::ArgClass::NearPi);
}
