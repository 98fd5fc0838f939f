#include "zetadyn/rootfind.hpp"

#include <algorithm>
#include <cmath>

namespace zetadyn::rootfind {

using mp::Complex;
using mp::Real;

Classification quadrant_class(const Complex& v, double disk_radius, double axis_eps) {
  if (!v.is_finite()) return {QuadrantClass::PaleI, true};

  const Real& re = v.re();
  const Real& im = v.im();
  bool on_re_axis = axis_eps > 0.0 ? mp::abs(im) <= axis_eps : im.is_zero();
  bool on_im_axis = axis_eps > 0.0 ? mp::abs(re) <= axis_eps : re.is_zero();
  if (on_re_axis || on_im_axis) return {QuadrantClass::Axes, false};

  int q;
  if (re.sign() > 0)
    q = im.sign() > 0 ? 0 : 3;
  else
    q = im.sign() > 0 ? 1 : 2;
  bool rich = mp::abs(v) <= disk_radius;
  static const QuadrantClass rich_map[4] = {QuadrantClass::RichI, QuadrantClass::RichII,
                                            QuadrantClass::RichIII, QuadrantClass::RichIV};
  static const QuadrantClass pale_map[4] = {QuadrantClass::PaleI, QuadrantClass::PaleII,
                                            QuadrantClass::PaleIII, QuadrantClass::PaleIV};
  return {rich ? rich_map[q] : pale_map[q], false};
}

namespace {

bool is_rich(QuadrantClass c) {
  return c == QuadrantClass::RichI || c == QuadrantClass::RichII ||
         c == QuadrantClass::RichIII || c == QuadrantClass::RichIV;
}

int rich_index(QuadrantClass c) {
  switch (c) {
    case QuadrantClass::RichI: return 0;
    case QuadrantClass::RichII: return 1;
    case QuadrantClass::RichIII: return 2;
    case QuadrantClass::RichIV: return 3;
    default: return -1;
  }
}

double log10_abs(const Complex& v) {
  if (!v.is_finite()) return 300.0;
  Real a = mp::abs(v);
  if (a.is_zero()) return -300.0;
  long exp2 = mpfr_get_exp(a.raw());
  return static_cast<double>(exp2) * 0.30102999566398120;
}

}  // namespace

std::vector<Box> grid_localize(const FunctionSpec& f, const Complex& target, const Box& box,
                               long grid_n, const PrecisionContext& ctx, double disk_radius,
                               Exec mode) {
  if (grid_n < 8) throw std::invalid_argument("grid_localize: grid_n must be >= 8");
  const long corners = (grid_n + 1) * (grid_n + 1);
  const mpfr_prec_t p = ctx.prec();
  const Real step = ctx.real(box.side) / grid_n;
  const Real x0 = box.center.re() - ctx.real(box.side / 2);
  const Real y0 = box.center.im() - ctx.real(box.side / 2);

  std::vector<Complex> values(corners, Complex(p));
  std::vector<bool> failed(corners, false);
  parallel_for(corners, mode, [&](long idx) {
    long i = idx % (grid_n + 1), j = idx / (grid_n + 1);
    Complex s{x0 + step * i, y0 + step * j};
    try {
      values[idx] = eval_map(f, s, ctx) - target;
    } catch (const Error&) {
      failed[idx] = true;
    }
  });

  double radius = disk_radius;
  if (radius <= 0.0) {
    // geometric mean of |g| over the corners separates zero-side from
    // pole-side magnitudes
    double acc = 0.0;
    long cnt = 0;
    for (long idx = 0; idx < corners; ++idx)
      if (!failed[idx]) { acc += log10_abs(values[idx]); ++cnt; }
    if (cnt == 0) throw NoJunctionFound();
    radius = std::pow(10.0, acc / cnt);
  }

  std::vector<QuadrantClass> cls(corners, QuadrantClass::Axes);
  std::vector<bool> usable(corners, false);
  for (long idx = 0; idx < corners; ++idx) {
    if (failed[idx]) continue;
    Classification c = quadrant_class(values[idx], radius);
    cls[idx] = c.cls;
    usable[idx] = !c.flagged;
  }

  // every corner of a size x size block of cells must be usable and rich,
  // and the block must show all four quadrant classes. Single cells go
  // first; 2 x 2 blocks catch junctions that sit on a grid line or hug a
  // cell corner, where no single cell winds through all four classes.
  auto scan = [&](long size) {
    std::vector<Box> hits;
    for (long j = 0; j + size <= grid_n; ++j) {
      for (long i = 0; i + size <= grid_n; ++i) {
        bool seen[4] = {false, false, false, false};
        bool ok = true;
        for (long dj = 0; ok && dj <= size; ++dj) {
          for (long di = 0; ok && di <= size; ++di) {
            long c = (j + dj) * (grid_n + 1) + (i + di);
            if (!usable[c]) { ok = false; break; }
            if (cls[c] == QuadrantClass::Axes) continue;  // exact axis hits are neutral
            int r = rich_index(cls[c]);
            if (r < 0) { ok = false; break; }
            seen[r] = true;
          }
        }
        if (ok && seen[0] && seen[1] && seen[2] && seen[3]) {
          Complex cc{x0 + step * i + step * size / 2L, y0 + step * j + step * size / 2L};
          hits.push_back(Box{cc, box.side * static_cast<double>(size) / static_cast<double>(grid_n)});
        }
      }
    }
    return hits;
  };

  std::vector<Box> out = scan(1);
  if (out.empty()) out = scan(2);
  if (out.empty()) throw NoJunctionFound();
  return out;
}

namespace {

// precision ladder: quadratic Newton convergence lets the early rungs run
// cheap and only the last couple of iterations pay full price
std::vector<long> digit_ladder(long digits) {
  std::vector<long> rungs;
  long d = 40;
  while (d < digits) {
    rungs.push_back(d);
    d *= 2;
  }
  rungs.push_back(digits);
  return rungs;
}

}  // namespace

Complex newton_polish(const FunctionSpec& f, const Complex& target, const Complex& seed,
                      const PrecisionContext& ctx) {
  const long max_iter = 200;
  const long max_halvings = 40;
  long used = 0;
  Complex u = seed;
  double last_resid = 0.0;

  for (long rung_digits : digit_ladder(ctx.digits)) {
    PrecisionContext rctx = PrecisionContext::make(rung_digits, ctx.guard);
    Real tol = rctx.residual_tol();
    Real deriv_floor = mp::pow10(-rung_digits, 64);

    // re-round the current iterate into this rung's precision
    Complex ur = rctx.complex(0.0, 0.0);
    mpfr_set(ur.re().raw(), u.re().raw(), MPFR_RNDN);
    mpfr_set(ur.im().raw(), u.im().raw(), MPFR_RNDN);
    u = ur;

    ValueDeriv vd = eval_map_with_deriv(f, u, rctx);
    Complex g = vd.value - target;
    Real gn = mp::abs(g);

    while (gn >= tol) {
      if (++used > max_iter) throw NoConvergence(used, log10_abs(g));
      if (mp::abs(vd.deriv) < deriv_floor) throw DerivativeVanished();
      Complex full_step = g / vd.deriv;
      // a trial that cannot be evaluated (pole, absurd magnitude) counts as
      // no progress and gets the step halved
      ValueDeriv tvd;
      Complex trial = u;
      Complex tg = g;
      Real tn = gn;
      long halvings = -1;
      bool improved = false;
      while (!improved && halvings < max_halvings) {
        ++halvings;
        trial = u - full_step;
        try {
          tvd = eval_map_with_deriv(f, trial, rctx);
          tg = tvd.value - target;
          tn = mp::abs(tg);
          improved = tn < gn;
        } catch (const Error&) {
        }
        if (!improved) full_step = full_step / 2L;
      }
      if (!improved) throw NoConvergence(used, log10_abs(g));
      u = trial;
      vd = tvd;
      g = tg;
      gn = tn;
    }
    last_resid = log10_abs(g);
  }
  (void)last_resid;
  return u;
}

Cycle find_fixed_point(long L, const Box& box, const PrecisionContext& ctx) {
  if (L < 1) throw std::invalid_argument("find_fixed_point: L must be >= 1");
  FunctionSpec f = FunctionSpec::iter_minus_identity(L);

  // classification only steers the seed; polishing happens at full precision
  PrecisionContext cls_ctx = PrecisionContext::make(std::min<long>(ctx.digits, 40), 10);
  Complex zero = cls_ctx.complex(0.0, 0.0);
  std::vector<Box> cells = grid_localize(f, zero, box, 16, cls_ctx);

  const Real tol = ctx.residual_tol();
  Complex root = ctx.complex(0.0, 0.0);
  bool found = false;
  for (const Box& cell : cells) {
    try {
      Complex u = newton_polish(f, ctx.complex(0.0, 0.0), cell.center, ctx);
      // stay inside the search box (with one cell of slack)
      double margin = box.side / 2.0 + cell.side;
      if (mp::abs(u.re() - box.center.re()) > margin) continue;
      if (mp::abs(u.im() - box.center.im()) > margin) continue;
      root = u;
      found = true;
      break;
    } catch (const NoConvergence&) {
    } catch (const DerivativeVanished&) {
    }
  }
  if (!found) throw NoConvergence(0, 0.0);

  Cycle cyc;
  cyc.elements.push_back(root);
  for (long k = 1; k < L; ++k) cyc.elements.push_back(zeta(cyc.elements.back(), ctx));
  Real resid = ctx.real(0.0);
  for (long k = 0; k < L; ++k) {
    Real r = mp::abs(zeta(cyc.elements[k], ctx) - cyc.elements[(k + 1) % L]);
    if (r > resid) resid = r;
  }
  cyc.residual = resid;

  for (long d = 1; d < L; ++d) {
    if (L % d != 0) continue;
    if (mp::abs(zeta_iter(root, d, ctx) - root) < tol) {
      cyc.primitive = false;
      break;
    }
  }
  return cyc;
}

Complex find_trivial_fixed_point(long n, const PrecisionContext& ctx) {
  if (2 * n < 20) throw std::invalid_argument("find_trivial_fixed_point: need 2n >= 20");
  const double center = -2.0 * static_cast<double>(n);
  const long scan = 64;

  auto h = [&](const Real& x) {
    Complex v = zeta(Complex(x, ctx.real(0.0)), ctx);
    return v.re() - x;
  };

  // bracket by sign change on a coarse scan of (-2n-1, -2n+1)
  PrecisionContext scan_ctx = PrecisionContext::make(std::min<long>(ctx.digits, 40), 10);
  double lo = 0, hi = 0;
  int prev_sign = 0;
  bool have = false;
  for (long i = 0; i <= scan; ++i) {
    double x = center - 1.0 + 2.0 * static_cast<double>(i) / scan;
    Complex v = zeta(scan_ctx.complex(x, 0.0), scan_ctx);
    int s = (v.re() - scan_ctx.real(x)).sign();
    if (i > 0 && s != 0 && prev_sign != 0 && s != prev_sign) {
      lo = center - 1.0 + 2.0 * static_cast<double>(i - 1) / scan;
      hi = x;
      have = true;
      break;
    }
    prev_sign = s;
  }
  if (!have) throw NoSignChange();

  // 1-D Newton from the bracket midpoint, on the precision ladder
  Real x = ctx.real((lo + hi) / 2);
  for (long rung_digits : digit_ladder(ctx.digits)) {
    PrecisionContext rctx = PrecisionContext::make(rung_digits, ctx.guard);
    Real tol = rctx.residual_tol();
    Real xr(rctx.prec());
    mpfr_set(xr.raw(), x.raw(), MPFR_RNDN);
    x = xr;
    for (long it = 0; it < 80; ++it) {
      ValueDeriv vd = zeta_with_deriv(Complex(x, rctx.real(0.0)), rctx);
      Real g = vd.value.re() - x;
      if (mp::abs(g) < tol) break;
      Real gp = vd.deriv.re() - 1L;
      x -= g / gp;
    }
  }
  Real check = h(x);
  if (mp::abs(check) >= ctx.residual_tol()) throw NoConvergence(0, log10_abs(Complex(check, ctx.real(0.0))));
  return Complex(x, ctx.real(0.0));
}

Complex refine_zero(const Real& height, const PrecisionContext& ctx) {
  Complex seed{ctx.real(0.5), height};
  Complex u = newton_polish(FunctionSpec::zeta(), ctx.complex(0.0, 0.0), seed, ctx);
  if (mp::abs(u.re() - ctx.real(0.5)) >= ctx.residual_tol())
    throw NoConvergence(0, u.re().to_double() - 0.5);

  // snap to the critical line and polish the ordinate: t <- t - Re(zeta/(i zeta'))
  Real t = u.im();
  const Real tol = ctx.residual_tol();
  for (long it = 0; it < 40; ++it) {
    Complex s{ctx.real(0.5), t};
    ValueDeriv vd = zeta_with_deriv(s, ctx);
    if (mp::abs(vd.value) < tol) return s;
    Complex step = vd.value / (Complex(ctx.real(0.0), ctx.real(1.0)) * vd.deriv);
    t -= step.re();
  }
  throw NoConvergence(40, 0.0);
}

Complex refine_zero(double height, const PrecisionContext& ctx) {
  return refine_zero(ctx.real(height), ctx);
}

}  // namespace zetadyn::rootfind
