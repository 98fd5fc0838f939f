#pragma once

#include <memory>
#include <vector>

#include "zetadyn/mp.hpp"

namespace zetadyn {

struct PoleAtOne : Error {
  PoleAtOne() : Error("zeta: argument within residual tolerance of the pole s = 1") {}
};
struct PrecisionExhausted : Error {
  PrecisionExhausted() : Error("zeta: no Euler-Maclaurin parameters meet the error target") {}
};
struct PoleEncountered : Error {
  explicit PoleEncountered(long k) : Error("zeta iterate hit the pole at step " + std::to_string(k)), step(k) {}
  long step;
};
struct OverflowEscape : Error {
  explicit OverflowEscape(long k) : Error("zeta iterate escaped at step " + std::to_string(k)), step(k) {}
  long step;
};
struct GammaPole : Error {
  GammaPole() : Error("gamma: argument within tolerance of a non-positive integer") {}
};

/// The map under study: zeta itself, an L-fold iterate, or the fixed-point
/// form zeta^L(s) - s.
enum class MapKind { Zeta, ZetaIter, ZetaIterMinusIdentity };

struct FunctionSpec {
  MapKind kind = MapKind::Zeta;
  long iter = 1;

  static FunctionSpec zeta() { return {MapKind::Zeta, 1}; }
  static FunctionSpec zeta_iter(long L) { return validated({MapKind::ZetaIter, L}); }
  static FunctionSpec iter_minus_identity(long L) { return validated({MapKind::ZetaIterMinusIdentity, L}); }

 private:
  static FunctionSpec validated(FunctionSpec f) {
    if (f.iter < 1) throw std::invalid_argument("FunctionSpec: iterate count must be >= 1");
    return f;
  }
};

struct ValueDeriv {
  mp::Complex value;
  mp::Complex deriv;
};

inline constexpr double kEscapeBound = 1e6;

/// Riemann zeta by Euler-Maclaurin summation. Truncation is chosen from the
/// standard tail bound so the absolute error stays below
/// 10^-(digits+guard), and the working precision absorbs the cancellation of
/// the partial sums at negative real part.
mp::Complex zeta(const mp::Complex& s, const PrecisionContext& ctx);

/// zeta and dzeta/ds from one pass over the same expansion (the derivative is
/// the term-wise analytic derivative, sharing the n^-s table).
ValueDeriv zeta_with_deriv(const mp::Complex& s, const PrecisionContext& ctx);
mp::Complex zeta_deriv(const mp::Complex& s, const PrecisionContext& ctx);

mp::Complex zeta_iter(const mp::Complex& s, long n, const PrecisionContext& ctx,
                      double escape_bound = kEscapeBound);
ValueDeriv zeta_iter_with_deriv(const mp::Complex& s, long n, const PrecisionContext& ctx,
                                double escape_bound = kEscapeBound);

mp::Complex eval_map(const FunctionSpec& f, const mp::Complex& s, const PrecisionContext& ctx,
                     double escape_bound = kEscapeBound);
ValueDeriv eval_map_with_deriv(const FunctionSpec& f, const mp::Complex& s, const PrecisionContext& ctx,
                               double escape_bound = kEscapeBound);

/// Complex gamma (Spouge series, reflection for Re z < 1/2).
mp::Complex gamma(const mp::Complex& z, const PrecisionContext& ctx);

/// |zeta(s) - 2^s pi^(s-1) sin(pi s/2) gamma(1-s) zeta(1-s)| / |zeta(s)|.
/// Independent of the Euler-Maclaurin path through the gamma factor, so it
/// serves as the self-consistency oracle.
mp::Real functional_equation_check(const mp::Complex& s, const PrecisionContext& ctx);

namespace detail {
/// B_{2k}/(2k)! for k = 1..count (signed), cached per precision.
std::shared_ptr<const std::vector<mp::Real>> bernoulli_over_factorial(long count, mpfr_prec_t prec);
}  // namespace detail

}  // namespace zetadyn
