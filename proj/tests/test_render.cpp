#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zetadyn/render.hpp"

using namespace zetadyn;
using namespace zetadyn::render;
using mp::Complex;
using mp::Real;

namespace {

Evaluator constant_eval(double re, double im) {
  return [re, im](const Complex&, const PrecisionContext& ctx) { return ctx.complex(re, im); };
}

PrecisionContext rctx() { return PrecisionContext::make(30, 10); }

}  // namespace

TEST_CASE("constant function renders a uniform rich quadrant") {
  auto ctx = rctx();
  Box box{ctx.complex(0, 0), 4.0};
  auto img = quadrant_plot(constant_eval(2.0, 3.0), ctx.complex(0, 0), box, 16, 10.0, ctx);
  for (auto c : img.pixels) CHECK(c == rootfind::QuadrantClass::RichI);
}

TEST_CASE("pixel determinism and serial/parallel agreement") {
  auto ctx = rctx();
  Box box{ctx.complex(0.2, 14.0), 6.0};
  auto a = quadrant_plot(FunctionSpec::zeta(), ctx.complex(0, 0), box, 24, 10.0, ctx, Exec::Serial);
  auto b = quadrant_plot(FunctionSpec::zeta(), ctx.complex(0, 0), box, 24, 10.0, ctx, Exec::Parallel);
  CHECK(a.pixels == b.pixels);
  CHECK(a.error_mask == b.error_mask);
  auto c = quadrant_plot(FunctionSpec::zeta(), ctx.complex(0, 0), box, 24, 10.0, ctx, Exec::Parallel);
  CHECK(b.pixels == c.pixels);
}

TEST_CASE("quadrant grid commutes with exact pixel translations") {
  auto ctx = rctx();
  const long res = 16;
  const double side = 4.0;  // pixel = 0.25, exactly representable
  Box box{ctx.complex(0.0, 10.0), side};
  Box shifted{ctx.complex(0.25, 10.0), side};
  auto a = quadrant_plot(FunctionSpec::zeta(), ctx.complex(0, 0), box, res, 10.0, ctx);
  auto b = quadrant_plot(FunctionSpec::zeta(), ctx.complex(0, 0), shifted, res, 10.0, ctx);
  for (long j = 0; j < res; ++j)
    for (long i = 0; i + 1 < res; ++i) CHECK(a.at(i + 1, j) == b.at(i, j));
}

TEST_CASE("pole pixels render as errors, never abort") {
  auto ctx = rctx();
  // box centered on the pole with odd-ish pixel grid hitting s = 1 exactly
  Box box{ctx.complex(1.0, 0.0), 0.5};
  auto img = quadrant_plot(FunctionSpec::zeta(), ctx.complex(0, 0), box, 16, 10.0, ctx);
  long errors = 0;
  for (auto e : img.error_mask) errors += e;
  CHECK(errors >= 0);  // no exception escaped; mask well-formed
}

TEST_CASE("basin plot fates") {
  auto ctx = rctx();
  // the pull toward phi is linear at rate |zeta'(phi)| ~ 0.5, so allow ~100
  // iterations to cross the 1e-20 convergence tolerance
  auto img = basin_plot(Box{ctx.complex(-0.29, 0.0), 0.2}, 16, 120, ctx);
  long converged = 0;
  for (auto f : img.pixels) converged += f == orbit::Fate::ConvergedToPhi ? 1 : 0;
  CHECK(converged == img.width * img.height);  // tight box inside the immediate basin

  auto esc = basin_plot(Box{ctx.complex(3e6, 0.0), 1.0}, 16, 10, ctx);
  for (auto f : esc.pixels) CHECK(f == orbit::Fate::Escaped);
}

TEST_CASE("basin filament region mixes fates deterministically") {
  auto ctx = rctx();
  // the filament-decorated region: both basin membership and escape occur
  auto img = basin_plot(Box{ctx.complex(-5.0, 9.5), 8.0}, 24, 60, ctx);
  long conv = 0, esc = 0;
  for (auto f : img.pixels) {
    conv += f == orbit::Fate::ConvergedToPhi ? 1 : 0;
    esc += f == orbit::Fate::Escaped ? 1 : 0;
  }
  CHECK(conv > 0);
  CHECK(esc > 0);
  auto again = basin_plot(Box{ctx.complex(-5.0, 9.5), 8.0}, 24, 60, ctx, Exec::Serial);
  CHECK(img.pixels == again.pixels);
}

TEST_CASE("overlay blending endpoints and dimension guard") {
  auto ctx = rctx();
  Box box{ctx.complex(-0.3, 0.0), 1.0};
  auto basin = basin_plot(box, 16, 20, ctx);
  auto quad = quadrant_plot(FunctionSpec::iter_minus_identity(1), ctx.complex(0, 0), box, 16, 10.0, ctx);
  CHECK(overlay(basin, quad, 0.0) == colorize(basin));
  CHECK(overlay(basin, quad, 1.0) == colorize(quad));
  auto other = basin_plot(box, 24, 20, ctx);
  CHECK_THROWS_AS(overlay(other, quad, 0.5), DimensionMismatch);
}

TEST_CASE("everted plot basics") {
  spiralfit::PolarSeries p;
  p.theta = {0.4};
  p.logr = {-2.0};
  orbit::Branch b;
  PrecisionContext ctx = PrecisionContext::make(30, 10);
  b.anchor.elements.push_back(ctx.complex(0, 0));
  b.anchor.residual = ctx.real(0);
  b.elements.push_back(ctx.complex(1, 1));
  b.residuals.push_back(ctx.real(0));
  b.root = b.elements[0];
  b.digits = 30;
  auto spec = everted_plot(b, p, ChordMode::ZetaMap);
  REQUIRE(spec.series.size() == 1);
  CHECK(spec.series[0].points.size() == 1);
  CHECK(spec.chords.empty());
  // eversion: the plotted radius is log r (negative radius flips the point)
  auto [x, y] = spec.series[0].points[0];
  CHECK(x == doctest::Approx(-2.0 * std::cos(0.4)));
  CHECK(y == doctest::Approx(-2.0 * std::sin(0.4)));
}

TEST_CASE("ppm output is byte-identical across runs") {
  namespace fs = std::filesystem;
  auto ctx = rctx();
  Box box{ctx.complex(0.0, 14.0), 4.0};
  auto img = colorize(quadrant_plot(FunctionSpec::zeta(), ctx.complex(0, 0), box, 16, 10.0, ctx));
  fs::create_directories("render_test_out");
  write_ppm(img, "render_test_out/a.ppm");
  write_ppm(img, "render_test_out/b.ppm");
  std::ifstream fa("render_test_out/a.ppm", std::ios::binary), fb("render_test_out/b.ppm", std::ios::binary);
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().substr(0, 2) == "P6");
}
