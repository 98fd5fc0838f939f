#include "zetadyn/mp.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace zetadyn::mp {

std::string Real::str(std::size_t digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) < 0 ? "-inf" : "inf";
  std::size_t n = digits;
  if (n == 0) {
    // binary -> decimal -> binary identity needs prec*log10(2) + 2 digits
    n = static_cast<std::size_t>(std::ceil(prec() * 0.30102999566398120)) + 2;
  }
  char* out = nullptr;
  if (mpfr_asprintf(&out, "%.*Re", static_cast<int>(n - 1), v_) < 0)
    throw Error("Real::str: formatting failed");
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

Complex pow_ui(const Complex& z, unsigned long e) {
  Complex acc(Real(1L, z.prec()), Real(0L, z.prec()));
  Complex base = z;
  while (e > 0) {
    if (e & 1UL) acc *= base;
    base *= base;
    e >>= 1UL;
  }
  return acc;
}

}  // namespace zetadyn::mp
