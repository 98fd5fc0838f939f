#include <gmp.h>

#include <map>
#include <mutex>

#include "zetadyn/zeta.hpp"

namespace zetadyn::detail {

namespace {

struct Mpz {
  mpz_t v;
  Mpz() { mpz_init(v); }
  Mpz(Mpz&& o) noexcept { mpz_init(v); mpz_swap(v, o.v); }
  Mpz& operator=(Mpz&& o) noexcept { mpz_swap(v, o.v); return *this; }
  Mpz(const Mpz&) = delete;
  Mpz& operator=(const Mpz&) = delete;
  ~Mpz() { mpz_clear(v); }
};

// Tangent numbers T_1, T_2, ... by the integer triangle recurrence
// (Brent & Harvey, "Fast computation of Bernoulli, Tangent and Secant
// numbers"). Grown on demand, never shrunk.
class TangentTable {
 public:
  void ensure(long n) {
    if (n <= static_cast<long>(t_.size())) return;
    t_.resize(n);
    // rebuild from scratch; the recurrence is quadratic but cheap at our sizes
    mpz_set_ui(t_[0].v, 1);
    for (long k = 2; k <= n; ++k) mpz_mul_ui(t_[k - 1].v, t_[k - 2].v, k - 1);
    Mpz tmp;
    for (long k = 2; k <= n; ++k) {
      for (long j = k; j <= n; ++j) {
        mpz_mul_ui(tmp.v, t_[j - 2].v, j - k);
        mpz_mul_ui(t_[j - 1].v, t_[j - 1].v, j - k + 2);
        mpz_add(t_[j - 1].v, t_[j - 1].v, tmp.v);
      }
    }
  }

  mpz_srcptr get(long k) const { return t_[k - 1].v; }

 private:
  std::vector<Mpz> t_;
};

std::mutex cache_mutex;
TangentTable tangent_table;
std::map<mpfr_prec_t, std::shared_ptr<std::vector<mp::Real>>> coeff_cache;

}  // namespace

std::shared_ptr<const std::vector<mp::Real>> bernoulli_over_factorial(long count, mpfr_prec_t prec) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = coeff_cache[prec];
  if (slot && static_cast<long>(slot->size()) >= count) return slot;

  tangent_table.ensure(count);
  auto vec = std::make_shared<std::vector<mp::Real>>();
  vec->reserve(count);

  // B_{2k}/(2k)! = (-1)^{k+1} T_k * 2k / ((16^k - 4^k) (2k)!)
  mpz_t den, fact, num;
  mpz_init(den);
  mpz_init(num);
  mpz_init_set_ui(fact, 2);  // (2k)! starting at k = 1
  for (long k = 1; k <= count; ++k) {
    if (k > 1) {
      mpz_mul_ui(fact, fact, 2 * k - 1);
      mpz_mul_ui(fact, fact, 2 * k);
    }
    mpz_set_ui(den, 1);
    mpz_mul_2exp(den, den, 4 * k);  // 16^k
    mpz_set_ui(num, 1);
    mpz_mul_2exp(num, num, 2 * k);  // 4^k
    mpz_sub(den, den, num);        // 16^k - 4^k
    mpz_mul(den, den, fact);

    mpz_mul_ui(num, tangent_table.get(k), 2 * k);

    mp::Real r(prec + 32);
    mpfr_set_z(r.raw(), num, MPFR_RNDN);
    mp::Real d(prec + 32);
    mpfr_set_z(d.raw(), den, MPFR_RNDN);
    r /= d;
    if (k % 2 == 0) r = -r;
    vec->push_back(std::move(r));
  }
  mpz_clear(den);
  mpz_clear(num);
  mpz_clear(fact);

  slot = vec;
  return slot;
}

}  // namespace zetadyn::detail
