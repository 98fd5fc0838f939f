#include "zetadyn/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace zetadyn {

using mp::Complex;
using mp::Real;

namespace {

constexpr double kLn2Pi = 1.8378770664093454836;  // ln(2*pi)

struct EmParams {
  long n_terms = 0;   // sum runs n = 1 .. N-1
  long m_terms = 0;   // Bernoulli tail k = 1 .. M
  long extra_bits = 0;
};

// ln of the standard Euler-Maclaurin remainder bound after the k = 1..M tail
// terms:  |R| <= |B_{2M+2}/(2M+2)!| * |(s)_{2M+1}| * N^(-sigma-2M-1)
//               * |s+2M+1| / (sigma+2M+1),
// with |(s)_{2M+1}| bounded by prod (|s|+j) and |B/(2M+2)!| by 2.2/(2pi)^(2M+2).
class TailBound {
 public:
  TailBound(double abs_s, double sigma, double ln_n)
      : abs_s_(abs_s), sigma_(sigma), ln_n_(ln_n) {}

  // extends the Pochhammer log-sum as M grows; must be called with
  // non-decreasing M for the same N
  double ln_bound(long m) {
    while (upto_ < 2 * m + 1) {
      poch_ += std::log(abs_s_ + static_cast<double>(upto_));
      ++upto_;
    }
    double denom = sigma_ + 2 * m + 1;
    if (denom <= 0) return 1e300;
    return std::log(2.2) - (2 * m + 2) * kLn2Pi + poch_ -
           (sigma_ + 2 * m + 1) * ln_n_ + std::log(abs_s_ + 2 * m + 1) - std::log(denom);
  }

 private:
  double abs_s_;
  double sigma_;
  double ln_n_;
  double poch_ = 0.0;
  long upto_ = 0;
};

EmParams choose_params(double sigma, double abs_s, long target_digits) {
  const double ln_tol = -(static_cast<double>(target_digits) + 3) * 2.302585092994046;
  const long m_min = std::max(1L, static_cast<long>(std::ceil((3.0 - sigma) / 2.0)));

  EmParams best;
  double best_cost = 1e300;
  // cost model: a power n^-s is ~2x the work of one Bernoulli tail term
  const double pow_cost = 2.0, tail_cost = 1.0;

  const long n_cap = 4'000'000;  // memory guard; far outside the surveyed region
  long n = std::max<long>(8, static_cast<long>(std::min(abs_s / 4.0, 2.0 * n_cap)));
  for (int rounds = 0; rounds < 200 && n <= n_cap; ++rounds) {
    TailBound bound(abs_s, sigma, std::log(static_cast<double>(n)));
    long m_cap = static_cast<long>(3.2 * n) + m_min + 8;
    long m_found = -1;
    for (long m = m_min; m <= m_cap; ++m) {
      if (bound.ln_bound(m) < ln_tol) { m_found = m; break; }
    }
    if (m_found > 0) {
      double cost = pow_cost * n + tail_cost * m_found;
      if (cost < best_cost) {
        best_cost = cost;
        best = {n, m_found, 0};
      } else if (cost > 1.3 * best_cost) {
        break;  // past the optimum
      }
    }
    n = std::max(n + 1, static_cast<long>(n * 1.25));
  }
  if (best.n_terms == 0 || best.n_terms > n_cap) throw PrecisionExhausted();

  double extra = std::max(0.0, -sigma) * std::log2(static_cast<double>(best.n_terms));
  best.extra_bits = static_cast<long>(extra) +
                    static_cast<long>(std::log2(static_cast<double>(best.n_terms + 2 * best.m_terms + 4))) + 24;
  return best;
}

// smallest-prime-factor sieve; spf[1] = 1
std::vector<long> sieve_spf(long n) {
  std::vector<long> spf(n + 1, 0);
  for (long i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      for (long j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = i;
    }
  }
  if (n >= 1) spf[1] = 1;
  return spf;
}

struct EmResult {
  Complex value;
  Complex deriv;
};

// Core Euler-Maclaurin pass. Always produces the value; the derivative is
// accumulated term-wise when want_deriv is set.
EmResult euler_maclaurin(const Complex& s, const PrecisionContext& ctx, bool want_deriv) {
  {
    Real dist = mp::abs(s - ctx.complex(1.0, 0.0));
    if (dist < ctx.residual_tol()) throw PoleAtOne();
  }

  const double sigma = s.re().to_double();
  const double abs_s = mp::abs(s).to_double();
  EmParams par = choose_params(sigma, abs_s, ctx.digits + ctx.guard);
  const long N = par.n_terms, M = par.m_terms;
  const mpfr_prec_t pw = ctx.prec() + par.extra_bits;

  auto bern = detail::bernoulli_over_factorial(M, pw);

  // n^-s (and ln n) for n = 1..N via the prime factorization
  const auto spf = sieve_spf(N);
  std::vector<Complex> powers(N + 1, Complex(pw));
  std::vector<Real> logs(N + 1, Real(pw));
  Complex s_hi{Real(pw), Real(pw)};
  mpfr_set(s_hi.re().raw(), s.re().raw(), MPFR_RNDN);
  mpfr_set(s_hi.im().raw(), s.im().raw(), MPFR_RNDN);

  powers[1] = Complex(1.0, 0.0, pw);
  logs[1] = Real(0.0, pw);
  for (long n = 2; n <= N; ++n) {
    if (spf[n] == n) {
      Real ln(pw);
      mpfr_set_si(ln.raw(), n, MPFR_RNDN);
      mpfr_log(ln.raw(), ln.raw(), MPFR_RNDN);
      logs[n] = ln;
      powers[n] = mp::exp(Complex(-(s_hi.re() * ln), -(s_hi.im() * ln)));
    } else {
      long p = spf[n], q = n / p;
      logs[n] = logs[p] + logs[q];
      powers[n] = powers[p] * powers[q];
    }
  }

  Complex sum(Real(0.0, pw), Real(0.0, pw));
  Complex dsum(Real(0.0, pw), Real(0.0, pw));
  for (long n = 1; n < N; ++n) {
    sum += powers[n];
    if (want_deriv) dsum -= powers[n] * logs[n];
  }

  const Complex& Ns = powers[N];  // N^-s
  const Real& lnN = logs[N];
  Complex s_minus_1 = s_hi - Complex(1.0, 0.0, pw);

  // N^(1-s)/(s-1)
  Complex t1 = (Ns * Real(static_cast<double>(N), pw)) / s_minus_1;
  sum += t1;
  if (want_deriv) dsum -= t1 * lnN + t1 / s_minus_1;

  // N^-s / 2
  Complex t2 = Ns / Real(2.0, pw);
  sum += t2;
  if (want_deriv) dsum -= t2 * lnN;

  // Bernoulli tail: sum_k B_{2k}/(2k)! (s)_{2k-1} N^(-s-2k+1)
  Complex P = s_hi;                      // (s)_{2k-1}
  Complex Pd(Real(1.0, pw), Real(0.0, pw));  // d/ds of P
  Real invN2 = Real(1.0, pw) / (Real(static_cast<double>(N), pw) * Real(static_cast<double>(N), pw));
  Complex NP = Ns / Real(static_cast<double>(N), pw);  // N^(-s-2k+1), k = 1
  for (long k = 1; k <= M; ++k) {
    const Real& bc = (*bern)[k - 1];
    Complex common = NP * bc;
    sum += P * common;
    if (want_deriv) dsum += Pd * common - P * common * lnN;
    if (k < M) {
      Complex f1 = s_hi + Complex(static_cast<double>(2 * k - 1), 0.0, pw);
      Complex f2 = s_hi + Complex(static_cast<double>(2 * k), 0.0, pw);
      Complex f12 = f1 * f2;
      Pd = Pd * f12 + P * (f1 + f2);
      P = P * f12;
      NP = NP * invN2;
    }
  }

  // round down to the context precision
  EmResult out{Complex(ctx.prec()), Complex(ctx.prec())};
  mpfr_set(out.value.re().raw(), sum.re().raw(), MPFR_RNDN);
  mpfr_set(out.value.im().raw(), sum.im().raw(), MPFR_RNDN);
  if (want_deriv) {
    mpfr_set(out.deriv.re().raw(), dsum.re().raw(), MPFR_RNDN);
    mpfr_set(out.deriv.im().raw(), dsum.im().raw(), MPFR_RNDN);
  }
  return out;
}

}  // namespace

Complex zeta(const Complex& s, const PrecisionContext& ctx) {
  return euler_maclaurin(s, ctx, false).value;
}

ValueDeriv zeta_with_deriv(const Complex& s, const PrecisionContext& ctx) {
  EmResult r = euler_maclaurin(s, ctx, true);
  return {r.value, r.deriv};
}

Complex zeta_deriv(const Complex& s, const PrecisionContext& ctx) {
  return euler_maclaurin(s, ctx, true).deriv;
}

Complex zeta_iter(const Complex& s, long n, const PrecisionContext& ctx, double escape_bound) {
  if (n < 0) throw std::invalid_argument("zeta_iter: negative iterate count");
  Complex v = s;
  Real one = ctx.real(1.0);
  for (long k = 0; k < n; ++k) {
    if (mp::abs(v) > escape_bound) throw OverflowEscape(k);
    if (mp::abs(v - Complex(one, ctx.real(0.0))) < ctx.residual_tol()) throw PoleEncountered(k);
    v = zeta(v, ctx);
  }
  return v;
}

ValueDeriv zeta_iter_with_deriv(const Complex& s, long n, const PrecisionContext& ctx, double escape_bound) {
  Complex v = s;
  Complex d(ctx.real(1.0), ctx.real(0.0));
  Real one = ctx.real(1.0);
  for (long k = 0; k < n; ++k) {
    if (mp::abs(v) > escape_bound) throw OverflowEscape(k);
    if (mp::abs(v - Complex(one, ctx.real(0.0))) < ctx.residual_tol()) throw PoleEncountered(k);
    ValueDeriv vd = zeta_with_deriv(v, ctx);
    d = d * vd.deriv;
    v = vd.value;
  }
  return {v, d};
}

Complex eval_map(const FunctionSpec& f, const Complex& s, const PrecisionContext& ctx, double escape_bound) {
  switch (f.kind) {
    case MapKind::Zeta:
      return zeta(s, ctx);
    case MapKind::ZetaIter:
      return zeta_iter(s, f.iter, ctx, escape_bound);
    case MapKind::ZetaIterMinusIdentity:
      return zeta_iter(s, f.iter, ctx, escape_bound) - s;
  }
  throw std::logic_error("eval_map: bad kind");
}

ValueDeriv eval_map_with_deriv(const FunctionSpec& f, const Complex& s, const PrecisionContext& ctx,
                               double escape_bound) {
  switch (f.kind) {
    case MapKind::Zeta:
      return zeta_with_deriv(s, ctx);
    case MapKind::ZetaIter:
      return zeta_iter_with_deriv(s, f.iter, ctx, escape_bound);
    case MapKind::ZetaIterMinusIdentity: {
      ValueDeriv vd = zeta_iter_with_deriv(s, f.iter, ctx, escape_bound);
      return {vd.value - s, vd.deriv - Complex(ctx.real(1.0), ctx.real(0.0))};
    }
  }
  throw std::logic_error("eval_map_with_deriv: bad kind");
}

mp::Real functional_equation_check(const Complex& s, const PrecisionContext& ctx) {
  // gamma(1-s) must stay away from its poles, i.e. s away from {1, 2, 3, ...}
  Real re_round = mp::round(s.re());
  if (re_round >= 0.5 && mp::abs(s - Complex(re_round, ctx.real(0.0))) < ctx.residual_tol())
    throw GammaPole();

  const mpfr_prec_t p = ctx.prec();
  Complex one(1.0, 0.0, p);
  Complex zs = zeta(s, ctx);
  Complex z1s = zeta(one - s, ctx);

  Real ln2(p), lnpi(p);
  mpfr_set_ui(ln2.raw(), 2, MPFR_RNDN);
  mpfr_log(ln2.raw(), ln2.raw(), MPFR_RNDN);
  lnpi = mp::log(mp::pi(p));

  Complex two_s = mp::exp(s * Complex(ln2, Real(0.0, p)));
  Complex pi_s1 = mp::exp((s - one) * Complex(lnpi, Real(0.0, p)));
  Complex sin_f = mp::sin(s * Complex(mp::pi(p) / 2L, Real(0.0, p)));
  Complex gam = gamma(one - s, ctx);

  Complex rhs = two_s * pi_s1 * sin_f * gam * z1s;
  return mp::abs(zs - rhs) / mp::abs(zs);
}

}  // namespace zetadyn
