#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "zetadyn/zeta.hpp"

using namespace zetadyn;
using mp::Complex;
using mp::Real;

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log10_abs(const Real& a) {
  return a.is_zero() ? -9999.0 : mp::log10(mp::abs(a)).to_double();
}

}  // namespace

TEST_CASE("decimal serialization round-trips bit-exactly") {
  std::mt19937_64 rng(42);
  for (long digits : {30L, 50L, 200L, 500L}) {
    PrecisionContext ctx = PrecisionContext::make(digits);
    for (int i = 0; i < 10; ++i) {
      Real x = ctx.real((uniform01(rng) - 0.5) * 100.0);
      // stir in low-order bits so the value fills the precision
      x += ctx.real(uniform01(rng)) * mp::pow10(-digits + 5, ctx.prec());
      Real back(x.str(), x.prec());
      CHECK(mp::identical(x, back));
    }
  }
}

TEST_CASE("precision context invariants") {
  CHECK_THROWS_AS(PrecisionContext::make(10), std::invalid_argument);
  CHECK_THROWS_AS(PrecisionContext::make(50, 5), std::invalid_argument);
  PrecisionContext ctx = PrecisionContext::make(100);
  CHECK(ctx.tol_exp10() == -90);
  // residual_tol < 10^-(digits/2)
  CHECK(ctx.residual_tol() < mp::pow10(-50, 64));
}

TEST_CASE("zeta at closed-form points") {
  PrecisionContext ctx = PrecisionContext::make(100);
  Complex z2 = zeta(ctx.complex(2, 0), ctx);
  Real pi = mp::pi(ctx.prec());
  CHECK(log10_abs(mp::abs(z2 - Complex{pi * pi / 6L, ctx.real(0)})) < -95.0);

  Complex z0 = zeta(ctx.complex(0, 0), ctx);
  CHECK(mp::abs(z0 - ctx.complex(-0.5, 0)).is_zero());
}

TEST_CASE("conjugation symmetry") {
  PrecisionContext ctx = PrecisionContext::make(60);
  Complex s = ctx.complex(0.3, 5.0);
  CHECK(mp::abs(zeta(mp::conj(s), ctx) - mp::conj(zeta(s, ctx))) < ctx.residual_tol());
}

TEST_CASE("derivative agrees with the central difference oracle") {
  PrecisionContext ctx = PrecisionContext::make(50);
  Complex s = ctx.complex(2, 3);
  ValueDeriv vd = zeta_with_deriv(s, ctx);
  Real h = mp::pow10(-25, ctx.prec());
  Complex hh{h, ctx.real(0)};
  Complex fd = (zeta(s + hh, ctx) - zeta(s - hh, ctx)) / Complex{h * 2L, ctx.real(0)};
  // agreement to digits/2 - 5 places
  CHECK(log10_abs(mp::abs(vd.deriv - fd)) < -20.0);
  // and conj-symmetry of the derivative
  CHECK(mp::abs(zeta_deriv(mp::conj(s), ctx) - mp::conj(vd.deriv)) < ctx.residual_tol());
}

TEST_CASE("pole guard") {
  PrecisionContext ctx = PrecisionContext::make(50);
  CHECK_THROWS_AS(zeta(ctx.complex(1.0, 0.0), ctx), PoleAtOne);
  Complex near_pole = ctx.complex(1.0, 0.0) + Complex{ctx.residual_tol() / 2L, ctx.real(0)};
  CHECK_THROWS_AS(zeta(near_pole, ctx), PoleAtOne);
}

TEST_CASE("iterates: identity, composition, escape, pole") {
  PrecisionContext ctx = PrecisionContext::make(50);
  Complex s = ctx.complex(0.25, 0.5);
  CHECK(zeta_iter(s, 0, ctx) == s);

  Complex both = zeta_iter(s, 3, ctx);
  Complex split = zeta_iter(zeta_iter(s, 2, ctx), 1, ctx);
  CHECK(log10_abs(mp::abs(both - split)) < -(ctx.digits - ctx.guard));

  CHECK_THROWS_AS(zeta_iter(ctx.complex(2e6, 0), 1, ctx), OverflowEscape);
  CHECK_THROWS_AS(zeta_iter(ctx.complex(1.0, 0), 2, ctx), PoleEncountered);
}

TEST_CASE("precision monotonicity on a random sample") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 6; ++i) {
    double re = -30.0 + 40.0 * uniform01(rng);
    double im = 0.3 + 59.7 * uniform01(rng);
    PrecisionContext lo = PrecisionContext::make(50);
    PrecisionContext hi = PrecisionContext::make(100);
    Complex a = zeta(lo.complex(re, im), lo);
    Complex b = zeta(hi.complex(re, im), hi);
    Real rel = mp::abs(a - b) / mp::abs(b);
    CHECK(log10_abs(rel) < -50.0);
  }
}

TEST_CASE("functional equation oracle") {
  PrecisionContext ctx = PrecisionContext::make(50);
  for (auto [re, im] : {std::pair{0.5, 14.1}, {2.0, 2.0}, {-7.3, 9.0}}) {
    Real check = functional_equation_check(ctx.complex(re, im), ctx);
    CHECK(log10_abs(check) < -40.0);
  }
  // gamma(1-s) poles: non-positive integer arguments degenerate gracefully
  CHECK_THROWS_AS(functional_equation_check(ctx.complex(3.0, 0.0), ctx), GammaPole);
}

TEST_CASE("gamma spot values") {
  PrecisionContext ctx = PrecisionContext::make(50);
  CHECK(log10_abs(mp::abs(gamma(ctx.complex(5, 0), ctx) - ctx.complex(24, 0))) < -45.0);
  // reflection path: gamma(1/2) = sqrt(pi)
  Complex g = gamma(ctx.complex(-0.5, 0), ctx);
  Real expect = mp::sqrt(mp::pi(ctx.prec())) * -2L;  // gamma(-1/2) = -2 sqrt(pi)
  CHECK(log10_abs(mp::abs(g - Complex{expect, ctx.real(0)})) < -42.0);
  CHECK_THROWS_AS(gamma(ctx.complex(-3.0, 0.0), ctx), GammaPole);
}

TEST_CASE("complex pow helper") {
  PrecisionContext ctx = PrecisionContext::make(40);
  Complex z = ctx.complex(1.5, -0.5);
  Complex z5 = mp::pow_ui(z, 5);
  Complex manual = z * z * z * z * z;
  CHECK(log10_abs(mp::abs(z5 - manual)) < -35.0);
}
