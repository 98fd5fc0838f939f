#include <map>
#include <mutex>

#include "zetadyn/zeta.hpp"

namespace zetadyn {

using mp::Complex;
using mp::Real;

namespace {

struct SpougeCoeffs {
  long a = 0;
  std::vector<Real> c;  // c_1 .. c_{a-1}; c_0 = sqrt(2 pi) is formed on the fly
};

std::mutex spouge_mutex;
std::map<mpfr_prec_t, std::shared_ptr<SpougeCoeffs>> spouge_cache;

// relative error of the Spouge series ~ a^(-1/2) (2 pi)^(-(a+1/2)), so
// a ~ digits * ln(10)/ln(2 pi) suffices
std::shared_ptr<const SpougeCoeffs> spouge_for(long digits, mpfr_prec_t prec) {
  long a = static_cast<long>(digits * 2.302585092994046 / 1.8378770664093455) + 4;
  std::lock_guard<std::mutex> lock(spouge_mutex);
  auto& slot = spouge_cache[prec];
  if (slot && slot->a >= a) return slot;

  auto sc = std::make_shared<SpougeCoeffs>();
  sc->a = a;
  sc->c.reserve(a - 1);
  const mpfr_prec_t p = prec + 32;
  Real fact(1.0, p);  // (k-1)!
  for (long k = 1; k < a; ++k) {
    if (k > 1) fact *= (k - 1);
    Real base(static_cast<double>(a - k), p);
    Real expo(static_cast<double>(k) - 0.5, p);
    Real ck = mp::exp(expo * mp::log(base) + base) / fact;  // (a-k)^(k-1/2) e^(a-k) / (k-1)!
    if (k % 2 == 0) ck = -ck;
    sc->c.push_back(std::move(ck));
  }
  slot = sc;
  return slot;
}

// Spouge series, valid for Re(z) >= 1/2
Complex spouge(const Complex& z, const PrecisionContext& ctx) {
  const mpfr_prec_t p = ctx.prec() + 32;
  auto sc = spouge_for(ctx.digits + ctx.guard, ctx.prec());
  const long a = sc->a;

  Complex w{Real(p), Real(p)};
  mpfr_set(w.re().raw(), z.re().raw(), MPFR_RNDN);
  mpfr_set(w.im().raw(), z.im().raw(), MPFR_RNDN);
  w -= Complex(1.0, 0.0, p);  // gamma(z) = gamma(w+1)

  Real two_pi = mp::pi(p) * 2L;
  Complex acc(mp::sqrt(two_pi), Real(0.0, p));
  for (long k = 1; k < a; ++k) {
    Complex den = w + Complex(static_cast<double>(k), 0.0, p);
    Real d2 = den.re() * den.re() + den.im() * den.im();
    acc += Complex(sc->c[k - 1] * den.re() / d2, -(sc->c[k - 1] * den.im() / d2));
  }

  Complex za = w + Complex(static_cast<double>(a), 0.0, p);
  Complex expo = (w + Complex(0.5, 0.0, p)) * mp::log(za) - za;
  Complex out = mp::exp(expo) * acc;

  Complex res(ctx.prec());
  mpfr_set(res.re().raw(), out.re().raw(), MPFR_RNDN);
  mpfr_set(res.im().raw(), out.im().raw(), MPFR_RNDN);
  return res;
}

}  // namespace

Complex gamma(const Complex& z, const PrecisionContext& ctx) {
  if (!(z.re() < 0.5)) return spouge(z, ctx);
  // poles at 0, -1, -2, ...
  Real nearest = mp::round(z.re());
  if (nearest <= 0.5 && mp::abs(z - Complex(nearest, ctx.real(0.0))) < ctx.residual_tol())
    throw GammaPole();
  // reflection: gamma(z) = pi / (sin(pi z) gamma(1 - z))
  const mpfr_prec_t p = ctx.prec();
  Complex one(1.0, 0.0, p);
  Complex spz = mp::sin(z * Complex(mp::pi(p), Real(0.0, p)));
  return Complex(mp::pi(p), Real(0.0, p)) / (spz * spouge(one - z, ctx));
}

}  // namespace zetadyn
