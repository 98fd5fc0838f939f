#pragma once

#include <cstdint>
#include <vector>

#include "zetadyn/parallel.hpp"
#include "zetadyn/zeta.hpp"

namespace zetadyn::rootfind {

struct NoJunctionFound : Error {
  NoJunctionFound() : Error("grid_localize: no four-rich-color junction in the box") {}
};
struct NoConvergence : Error {
  NoConvergence(long it, double resid)
      : Error("newton_polish: no convergence after " + std::to_string(it) +
              " iterations (last residual ~ " + std::to_string(resid) + ")"),
        iterations(it), last_residual(resid) {}
  long iterations;
  double last_residual;
};
struct DerivativeVanished : Error {
  DerivativeVanished() : Error("newton_polish: derivative below 10^-digits at an iterate") {}
};
struct NoSignChange : Error {
  NoSignChange() : Error("find_trivial_fixed_point: no sign change of zeta(x) - x in the bracket") {}
};

/// Square search region.
struct Box {
  mp::Complex center;
  double side = 1.0;
};

/// Table-1 pixel classes: on-axes, or quadrant x {rich, pale} where rich
/// means the value lies in the disk |v| <= disk_radius.
enum class QuadrantClass : std::uint8_t {
  Axes, RichI, RichII, RichIII, RichIV, PaleI, PaleII, PaleIII, PaleIV
};

struct Classification {
  QuadrantClass cls = QuadrantClass::Axes;
  bool flagged = false;  // set for non-finite input, classified pale by sign convention
};

/// Total function; axis_eps widens the axis band (0 classifies only exact
/// zeros as on-axes).
Classification quadrant_class(const mp::Complex& v, double disk_radius, double axis_eps = 0.0);

/// Zeta L-cycle (L = 1 is a fixed point). elements realize the cycle map:
/// zeta(elements[k]) = elements[k+1 mod L] within residual_tol.
struct Cycle {
  std::vector<mp::Complex> elements;
  mp::Real residual;
  bool primitive = true;

  long length() const { return static_cast<long>(elements.size()); }
};

/// Subdivides the box grid_n x grid_n and returns the cells whose corners
/// show all four rich quadrant classes of g(s) = f(s) - target (the zoom
/// step of the zoom-and-solve procedure). Pale junctions (poles) are
/// rejected. disk_radius <= 0 selects the geometric-mean |g| scale over the
/// box corners. Corners evaluate in parallel.
std::vector<Box> grid_localize(const FunctionSpec& f, const mp::Complex& target, const Box& box,
                               long grid_n, const PrecisionContext& ctx, double disk_radius = 0.0,
                               Exec mode = Exec::Parallel);

/// Damped Newton on g(s) = f(s) - target from the given seed, run on an
/// escalating-precision ladder; the result satisfies |g| < residual_tol.
mp::Complex newton_polish(const FunctionSpec& f, const mp::Complex& target, const mp::Complex& seed,
                          const PrecisionContext& ctx);

/// Localize-and-polish a solution of zeta^L(s) = s in the box; returns the
/// full cycle (s*, zeta(s*), ..., zeta^(L-1)(s*)). `primitive` is cleared if
/// the minimal period properly divides L.
Cycle find_fixed_point(long L, const Box& box, const PrecisionContext& ctx);

/// Real repelling fixed point near the trivial zero -2n (2n >= 20), located
/// by a 1-D sign change of zeta(x) - x in (-2n-1, -2n+1). Imaginary part is
/// exactly zero.
mp::Complex find_trivial_fixed_point(long n, const PrecisionContext& ctx);

/// Polishes a nontrivial zero from an ordinate approximation; the search is
/// constrained to the critical line (2-D Newton must land at re = 1/2 within
/// tolerance, then a 1-D in-line polish pins the ordinate).
mp::Complex refine_zero(double height, const PrecisionContext& ctx);
mp::Complex refine_zero(const mp::Real& height, const PrecisionContext& ctx);

}  // namespace zetadyn::rootfind
