#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "zetadyn/pipeline.hpp"

using namespace zetadyn;
using mp::Complex;
using mp::Real;

namespace {

double log10_abs(const Real& a) {
  return a.is_zero() ? -9999.0 : mp::log10(mp::abs(a)).to_double();
}

PrecisionContext ctx120() { return PrecisionContext::make(120); }

orbit::Branch reference_branch(long length, const PrecisionContext& ctx) {
  Complex rho1 = rootfind::refine_zero(14.134725, ctx);
  Complex rho2 = rootfind::refine_zero(21.022040, ctx);
  Complex psi = pipeline::find_psi_in_gap(rho1, rho1.im().to_double(), rho2.im().to_double(), ctx);
  rootfind::Cycle anchor;
  anchor.elements.push_back(psi);
  anchor.residual = mp::abs(zeta(psi, ctx) - psi);
  return orbit::backward_branch(rho1, anchor, length, ctx);
}

}  // namespace

TEST_CASE("forward classification fates") {
  PrecisionContext ctx = PrecisionContext::make(40);
  auto r0 = orbit::forward_classify(ctx.complex(0, 0), 80, ctx);
  CHECK(r0.fate == orbit::Fate::ConvergedToPhi);

  Complex phi = orbit::phi_fixed_point(ctx);
  auto rphi = orbit::forward_classify(phi, 5, ctx);
  CHECK(rphi.fate == orbit::Fate::ConvergedToPhi);
  CHECK(rphi.steps <= 1);

  auto resc = orbit::forward_classify(ctx.complex(2e6, 0), 5, ctx);
  CHECK(resc.fate == orbit::Fate::Escaped);
  CHECK(resc.steps == 0);

  // fate of s = 2 must agree with a brute iteration of the same map
  auto r2 = orbit::forward_classify(ctx.complex(2, 0), 60, ctx);
  Complex v = ctx.complex(2, 0);
  orbit::Fate expect = orbit::Fate::Undecided;
  for (int k = 0; k <= 60; ++k) {
    if (mp::abs(v - phi) < 1e-20) { expect = orbit::Fate::ConvergedToPhi; break; }
    if (mp::abs(v) > 1e6) { expect = orbit::Fate::Escaped; break; }
    if (k == 60) break;
    if (mp::abs(v - ctx.complex(1, 0)) < ctx.residual_tol()) { expect = orbit::Fate::PoleHit; break; }
    v = zeta(v, ctx);
  }
  CHECK(r2.fate == expect);
}

TEST_CASE("backward branch: defining recurrence, decay, monotone approach") {
  PrecisionContext ctx = ctx120();
  orbit::Branch b = reference_branch(42, ctx);
  REQUIRE(b.length() == 42);
  const Complex& psi = b.anchor.elements[0];

  for (long k = 1; k < b.length(); ++k) CHECK(b.residuals[k] < ctx.residual_tol());

  // geometric decay, stable slope between halves
  std::vector<double> ld;
  for (const auto& e : b.elements) ld.push_back(log10_abs(mp::abs(e - psi)));
  auto slope = [&](long lo, long hi) {
    double n = hi - lo, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (long k = lo; k < hi; ++k) {
      sx += k; sy += ld[k]; sxx += 1.0 * k * k; sxy += 1.0 * k * ld[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  double s1 = slope(1, 21), s2 = slope(21, 42);
  CHECK(s1 < 0.0);
  CHECK(std::abs(s1 - s2) < 0.1 * std::abs(s1));

  // monotone approach past the burn-in
  for (long k = 12; k < b.length(); ++k)
    CHECK(mp::abs(b.elements[k] - psi) < mp::abs(b.elements[k - 1] - psi));

  // minimal case
  orbit::Branch b2 = orbit::backward_branch(b.root, b.anchor, 2, ctx);
  CHECK(b2.length() == 2);
  CHECK(mp::abs(zeta(b2.elements[1], ctx) - b2.root) < ctx.residual_tol());
}

TEST_CASE("conjugated branch equals the conjugate branch") {
  PrecisionContext ctx = PrecisionContext::make(80);
  Complex rho1 = rootfind::refine_zero(14.134725, ctx);
  Complex rho2 = rootfind::refine_zero(21.022040, ctx);
  Complex psi = pipeline::find_psi_in_gap(rho1, rho1.im().to_double(), rho2.im().to_double(), ctx);

  rootfind::Cycle anchor;
  anchor.elements.push_back(psi);
  anchor.residual = ctx.real(0);
  orbit::Branch b = orbit::backward_branch(rho1, anchor, 12, ctx);

  rootfind::Cycle canchor;
  canchor.elements.push_back(mp::conj(psi));
  canchor.residual = ctx.real(0);
  orbit::Branch cb = orbit::backward_branch(mp::conj(rho1), canchor, 12, ctx);

  REQUIRE(cb.length() == b.length());
  for (long k = 0; k < b.length(); ++k)
    CHECK(mp::abs(cb.elements[k] - mp::conj(b.elements[k])) < ctx.residual_tol());
}

TEST_CASE("cycle branch splits into converging subsequences") {
  PrecisionContext ctx = PrecisionContext::make(120);
  Complex rho1 = rootfind::refine_zero(14.134725, ctx);
  rootfind::Box box{rho1 + ctx.complex(3.46, 0.103), 0.02};
  rootfind::Cycle cyc = rootfind::find_fixed_point(3, box, ctx);
  REQUIRE(cyc.length() == 3);
  CHECK(cyc.primitive);

  orbit::Branch b = orbit::cycle_branch(rho1, cyc, 31, ctx);
  REQUIRE(b.length() >= 25);

  // subsequence recurrence: zeta^3(b_j[m+1]) = b_j[m]
  for (long j = 0; j < 3; ++j) {
    auto idx = orbit::subsequence_indices(b, j);
    for (std::size_t m = 0; m + 1 < idx.size(); ++m) {
      Complex v = zeta_iter(b.elements[idx[m + 1]], 3, ctx);
      CHECK(log10_abs(mp::abs(v - b.elements[idx[m]])) < -(ctx.digits - 30));
    }
    // distances to the limit element eventually decrease
    long lim = orbit::subsequence_limit_index(b, j);
    const Complex& lam = b.anchor.elements[lim];
    auto tail = idx;
    for (std::size_t m = 3; m + 1 < tail.size(); ++m)
      CHECK(mp::abs(b.elements[tail[m + 1]] - lam) < mp::abs(b.elements[tail[m]] - lam));
  }
}

TEST_CASE("truncate_reliable keeps clean branches and cuts corrupted ones") {
  PrecisionContext ctx = ctx120();
  orbit::Branch b = reference_branch(30, ctx);
  orbit::Branch t = orbit::truncate_reliable(b, ctx);
  CHECK(t.verified_len == b.length());

  orbit::Branch corrupted = b;
  corrupted.elements[7] += ctx.complex(1e-20, 0);
  orbit::Branch tc = orbit::truncate_reliable(corrupted, ctx);
  CHECK(tc.verified_len <= 7);
}

TEST_CASE("truncate_reliable cuts low-precision branches where signal dies") {
  PrecisionContext lo = PrecisionContext::make(50);
  orbit::Branch b = reference_branch(60, lo);
  orbit::Branch t = orbit::truncate_reliable(b, lo);
  // at 50 digits the elements sink below the tolerance scale around k ~ 30
  CHECK(t.verified_len < 45);
  CHECK(t.verified_len > 10);
}

TEST_CASE("set_image_check") {
  PrecisionContext ctx = ctx120();
  orbit::Branch b = reference_branch(20, ctx);
  CHECK(orbit::set_image_check(b, ctx));

  // a branch rooted off the zero set fails the zeta(a_0) ~ 0 clause
  orbit::Branch off = orbit::backward_branch(b.root + ctx.complex(0.5, 0), b.anchor, 6, ctx);
  CHECK_FALSE(orbit::set_image_check(off, ctx));

  orbit::Branch two = orbit::backward_branch(b.root, b.anchor, 2, ctx);
  CHECK(orbit::set_image_check(two, ctx));
}
