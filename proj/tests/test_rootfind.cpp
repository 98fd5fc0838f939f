#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zetadyn/rootfind.hpp"

using namespace zetadyn;
using namespace zetadyn::rootfind;
using mp::Complex;
using mp::Real;

namespace {

double log10_abs(const Real& a) {
  return a.is_zero() ? -9999.0 : mp::log10(mp::abs(a)).to_double();
}

}  // namespace

TEST_CASE("quadrant classification per the coloring table") {
  PrecisionContext ctx = PrecisionContext::make(30, 10);
  CHECK(quadrant_class(ctx.complex(1, 1), 10.0).cls == QuadrantClass::RichI);
  CHECK(quadrant_class(ctx.complex(0, 5), 10.0).cls == QuadrantClass::Axes);
  CHECK(quadrant_class(ctx.complex(-20, -20), 10.0).cls == QuadrantClass::PaleIII);
  CHECK(quadrant_class(ctx.complex(-3, 4), 10.0).cls == QuadrantClass::RichII);
  CHECK(quadrant_class(ctx.complex(5, -50), 10.0).cls == QuadrantClass::PaleIV);
  // non-finite input: flagged, pale by sign convention
  Complex bad{Real(0.0 / 0.0, 64), Real(1.0, 64)};
  auto c = quadrant_class(bad, 10.0);
  CHECK(c.flagged);
  // axis band
  CHECK(quadrant_class(ctx.complex(1e-6, 3), 10.0, 1e-4).cls == QuadrantClass::Axes);
}

TEST_CASE("grid_localize finds the rho_1 junction and rejects empty boxes") {
  PrecisionContext ctx = PrecisionContext::make(40, 10);
  Box box{ctx.complex(0.5, 14.0), 2.0};
  auto cells = grid_localize(FunctionSpec::zeta(), ctx.complex(0, 0), box, 16, ctx);
  REQUIRE(!cells.empty());
  bool contains_rho1 = false;
  for (const auto& c : cells) {
    double dx = c.center.re().to_double() - 0.5;
    double dy = c.center.im().to_double() - 14.134725;
    if (std::abs(dx) < c.side && std::abs(dy) < c.side) contains_rho1 = true;
  }
  CHECK(contains_rho1);

  Box empty_box{ctx.complex(10, 10), 1.0};
  CHECK_THROWS_AS(grid_localize(FunctionSpec::zeta(), ctx.complex(0, 0), empty_box, 16, ctx),
                  NoJunctionFound);
  CHECK_THROWS_AS(grid_localize(FunctionSpec::zeta(), ctx.complex(0, 0), box, 4, ctx),
                  std::invalid_argument);
}

TEST_CASE("newton_polish solves a constructed preimage problem") {
  PrecisionContext ctx = PrecisionContext::make(80);
  Complex s0 = ctx.complex(0.4, 7.3);
  Complex target = zeta(s0, ctx);
  Complex seed = s0 + ctx.complex(1e-5, -1e-5);
  Complex u = newton_polish(FunctionSpec::zeta(), target, seed, ctx);
  CHECK(log10_abs(mp::abs(u - s0)) < -(ctx.digits - 12));

  // idempotence: polishing an already-polished root barely moves it
  Complex u2 = newton_polish(FunctionSpec::zeta(), target, u, ctx);
  CHECK(log10_abs(mp::abs(u2 - u)) < -(ctx.digits - 5));
}

TEST_CASE("newton_polish reports failure from a hopeless start") {
  PrecisionContext ctx = PrecisionContext::make(40);
  // flat derivative far from any zero: the solver must fail loudly, either
  // because progress stalls or because the derivative dies
  bool failed_cleanly = false;
  try {
    newton_polish(FunctionSpec::zeta(), ctx.complex(0, 0), ctx.complex(60.0, 0.0), ctx);
  } catch (const NoConvergence&) {
    failed_cleanly = true;
  } catch (const DerivativeVanished&) {
    failed_cleanly = true;
  }
  CHECK(failed_cleanly);
}

TEST_CASE("find_fixed_point: phi, and a non-primitive L = 2 hit") {
  PrecisionContext ctx = PrecisionContext::make(60);
  Box box{ctx.complex(-0.3, 0.0), 0.4};
  Cycle c1 = find_fixed_point(1, box, ctx);
  REQUIRE(c1.length() == 1);
  CHECK(std::abs(c1.elements[0].re().to_double() + 0.295905) < 1e-5);
  CHECK(c1.primitive);
  CHECK(c1.residual < ctx.residual_tol());

  // searching for a 2-cycle in the same box lands on the fixed point
  Cycle c2 = find_fixed_point(2, box, ctx);
  CHECK_FALSE(c2.primitive);
}

TEST_CASE("trivial fixed points: bracket, residual, parity") {
  PrecisionContext ctx = PrecisionContext::make(50);
  Complex psi20 = find_trivial_fixed_point(10, ctx);
  double x = psi20.re().to_double();
  CHECK(x > -21.0);
  CHECK(x < -19.0);
  CHECK(psi20.im().is_zero());
  CHECK(mp::abs(zeta(psi20, ctx) - psi20) < ctx.residual_tol());

  // side of -2n alternates with the parity of n
  double prev_side = x - (-20.0);
  for (long n = 11; n <= 13; ++n) {
    Complex psi = find_trivial_fixed_point(n, ctx);
    double side = psi.re().to_double() - (-2.0 * n);
    CHECK(side * prev_side < 0.0);
    prev_side = side;
  }
  CHECK_THROWS_AS(find_trivial_fixed_point(5, ctx), std::invalid_argument);
}

TEST_CASE("refine_zero pins zeros to the critical line") {
  PrecisionContext ctx = PrecisionContext::make(60);
  Complex rho1 = refine_zero(14.134725, ctx);
  CHECK(rho1.re() == ctx.real(0.5));
  CHECK(mp::abs(zeta(rho1, ctx)) < ctx.residual_tol());

  Complex rho2 = refine_zero(21.022040, ctx);
  CHECK(std::abs(rho2.im().to_double() - 21.0220396388) < 1e-9);

  // Schwarz reflection: the negative-height zero is the exact conjugate
  Complex rho1c = refine_zero(-14.134725, ctx);
  CHECK(mp::identical(rho1c.im(), (-rho1.im())));
  CHECK(mp::identical(rho1c.re(), rho1.re()));
}

TEST_CASE("cycle closure invariant") {
  PrecisionContext ctx = PrecisionContext::make(60);
  Cycle c = find_fixed_point(1, Box{ctx.complex(-2.4, 16.3), 2.0}, ctx);
  REQUIRE(c.length() == 1);
  // psi_rho_1 lives here
  CHECK(std::abs(c.elements[0].re().to_double() + 2.38593568) < 1e-6);
  CHECK(std::abs(c.elements[0].im().to_double() - 16.27098706) < 1e-6);
  Complex back = zeta_iter(c.elements[0], 1, ctx);
  CHECK(mp::abs(back - c.elements[0]) < ctx.residual_tol() * 2L);
}
