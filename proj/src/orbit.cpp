#include "zetadyn/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace zetadyn::orbit {

using mp::Complex;
using mp::Real;
using rootfind::Cycle;

namespace {

std::mutex phi_mutex;
std::map<long, Complex> phi_cache;

double log10_real(const Real& a) {
  if (a.is_zero()) return -1e9;
  return static_cast<double>(mpfr_get_exp(a.raw())) * 0.30102999566398120;
}

Complex reround(const Complex& z, mpfr_prec_t p) {
  Complex out{Real(p), Real(p)};
  mpfr_set(out.re().raw(), z.re().raw(), MPFR_RNDN);
  mpfr_set(out.im().raw(), z.im().raw(), MPFR_RNDN);
  return out;
}

}  // namespace

Complex phi_fixed_point(const PrecisionContext& ctx) {
  {
    std::lock_guard<std::mutex> lock(phi_mutex);
    auto it = phi_cache.find(ctx.digits);
    if (it != phi_cache.end()) return it->second;
  }
  // 1-D Newton on zeta(x) - x from the known neighborhood of phi
  Real x = ctx.real(-0.2959);
  for (long it = 0; it < 120; ++it) {
    ValueDeriv vd = zeta_with_deriv(Complex(x, ctx.real(0.0)), ctx);
    Real g = vd.value.re() - x;
    if (mp::abs(g) < ctx.residual_tol()) break;
    x -= g / (vd.deriv.re() - 1L);
  }
  Complex phi{x, ctx.real(0.0)};
  std::lock_guard<std::mutex> lock(phi_mutex);
  phi_cache.emplace(ctx.digits, phi);
  return phi;
}

OrbitResult forward_classify(const Complex& s, long max_iter, const PrecisionContext& ctx,
                             double convergence_tol, double escape_bound) {
  if (max_iter < 1) throw std::invalid_argument("forward_classify: max_iter must be >= 1");
  Complex phi = phi_fixed_point(ctx);
  Complex one = ctx.complex(1.0, 0.0);
  Complex v = s;
  for (long k = 0; k <= max_iter; ++k) {
    if (mp::abs(v - phi) < convergence_tol) return {Fate::ConvergedToPhi, k, v};
    if (mp::abs(v) > escape_bound) return {Fate::Escaped, k, v};
    if (k == max_iter) break;
    if (mp::abs(v - one) < ctx.residual_tol()) return {Fate::PoleHit, k, v};
    v = zeta(v, ctx);
  }
  return {Fate::Undecided, max_iter, v};
}

namespace {

// linearized local inverse: solve zeta(z) = target for z near lambda, using
// zeta(z) ~ zeta(lambda) + zeta'(lambda)(z - lambda)
Complex linearized_seed(const Complex& lambda, const ValueDeriv& at_lambda, const Complex& target) {
  return lambda + (target - at_lambda.value) / at_lambda.deriv;
}

Branch build_branch(const Complex& root, const Cycle& anchor, long length, const PrecisionContext& ctx) {
  if (length < 2) throw std::invalid_argument("backward_branch: length must be >= 2");
  const long L = anchor.length();
  const mpfr_prec_t p = ctx.prec();

  Branch b;
  b.root = reround(root, p);
  b.anchor = anchor;
  b.digits = ctx.digits;
  b.elements.push_back(b.root);
  b.residuals.push_back(ctx.real(0.0));
  {
    ValueDeriv vd = zeta_with_deriv(b.root, ctx);
    b.deriv_log10.push_back(log10_real(mp::abs(vd.deriv)));
  }

  // value/derivative of zeta at every cycle element, for seeding
  std::vector<ValueDeriv> at_anchor;
  at_anchor.reserve(L);
  for (long i = 0; i < L; ++i) at_anchor.push_back(zeta_with_deriv(anchor.elements[i], ctx));

  const long burn_in = 10;
  const FunctionSpec fz = FunctionSpec::zeta();

  for (long k = 1; k < length; ++k) {
    const Complex target = b.elements.back();
    long idx;
    if (k == 1) {
      // choose the cycle element whose local preimage of the root is nearest
      long best = 0;
      double best_dist = 1e300;
      for (long i = 0; i < L; ++i) {
        Complex cand = linearized_seed(anchor.elements[i], at_anchor[i], target);
        double dist = log10_real(mp::abs(cand - anchor.elements[i]));
        if (dist < best_dist) { best_dist = dist; best = i; }
      }
      b.first_anchor_index = best;
      idx = best;
    } else {
      idx = b.anchor_index(k);
    }

    Complex seed = (k <= L) ? linearized_seed(anchor.elements[idx], at_anchor[idx], target)
                            : b.elements[k - L];

    Complex u = ctx.complex(0.0, 0.0);
    bool solved = false;
    try {
      u = rootfind::newton_polish(fz, target, seed, ctx);
      solved = true;
    } catch (const Error&) {
      // cold fallback: localize the preimage around the anchor element
      try {
        rootfind::Box box{anchor.elements[idx], 2.0};
        PrecisionContext cls = PrecisionContext::make(std::min<long>(ctx.digits, 40), 10);
        auto cells = rootfind::grid_localize(fz, target, box, 24, cls);
        double best_dist = 1e300;
        Complex best_u = u;
        for (const auto& cell : cells) {
          try {
            Complex cand = rootfind::newton_polish(fz, target, cell.center, ctx);
            double dist = log10_real(mp::abs(cand - anchor.elements[idx]));
            if (dist < best_dist) { best_dist = dist; best_u = cand; solved = true; }
          } catch (const Error&) {
          }
        }
        u = best_u;
      } catch (const Error&) {
      }
    }
    if (!solved) {
      if (k == 1) throw SolverFailed(k);
      b.halt = Branch::Halt::SolverFailed;
      b.halted_at = k;
      break;  // keep the prefix built so far
    }

    // monotone approach to the anchor element past the burn-in
    if (k > burn_in + L) {
      Real d_new = mp::abs(u - anchor.elements[idx]);
      Real d_old = mp::abs(b.elements[k - L] - anchor.elements[idx]);
      if (!(d_new < d_old)) {
        b.halt = Branch::Halt::WrongBasin;
        b.halted_at = k;
        break;
      }
    }

    ValueDeriv vd = zeta_with_deriv(u, ctx);
    b.elements.push_back(u);
    b.residuals.push_back(mp::abs(vd.value - target));
    b.deriv_log10.push_back(log10_real(mp::abs(vd.deriv)));
  }

  b.verified_len = b.length();
  return b;
}

}  // namespace

Branch backward_branch(const Complex& root, const Cycle& anchor, long length, const PrecisionContext& ctx) {
  return build_branch(root, anchor, length, ctx);
}

Branch cycle_branch(const Complex& root, const Cycle& cycle, long length, const PrecisionContext& ctx) {
  if (cycle.length() < 2) throw std::invalid_argument("cycle_branch: cycle length must be >= 2");
  return build_branch(root, cycle, length, ctx);
}

std::vector<long> subsequence_indices(const Branch& b, long j) {
  const long L = b.anchor.length();
  if (j < 0 || j >= L) throw std::invalid_argument("subsequence_indices: j out of range");
  std::vector<long> idx;
  for (long k = j; k < b.length(); k += L) idx.push_back(k);
  return idx;
}

long subsequence_limit_index(const Branch& b, long j) {
  auto idx = subsequence_indices(b, j);
  if (idx.empty()) throw std::invalid_argument("subsequence_limit_index: empty subsequence");
  const Complex& tail = b.elements[idx.back()];
  long best = 0;
  Real best_d = mp::abs(tail - b.anchor.elements[0]);
  for (long i = 1; i < b.anchor.length(); ++i) {
    Real d = mp::abs(tail - b.anchor.elements[i]);
    if (d < best_d) { best_d = d; best = i; }
  }
  return best;
}

Branch truncate_reliable(const Branch& b, const PrecisionContext& ctx) {
  const long len = b.length();
  const Real tol = ctx.residual_tol();
  const double tol_log10 = static_cast<double>(ctx.tol_exp10());

  if (len == 0) return b;

  // recompute defining residuals and multipliers
  std::vector<double> dlog(len, 0.0);
  long ok_prefix = len;  // first failing index bounds the prefix
  {
    std::vector<Real> resid(len, ctx.real(0.0));
    std::vector<Complex> vals(len, ctx.complex(0.0, 0.0));
    for (long k = 0; k < len; ++k) {
      ValueDeriv vd = zeta_with_deriv(b.elements[k], ctx);
      vals[k] = vd.value;
      dlog[k] = log10_real(mp::abs(vd.deriv));
    }
    for (long k = 1; k < len; ++k) {
      if (!(mp::abs(vals[k] - b.elements[k - 1]) < tol)) { ok_prefix = k; break; }
    }
  }

  // scale separation: an element within 10^3 residual tolerances of its
  // anchor element carries no usable signal
  for (long k = 1; k < ok_prefix; ++k) {
    Real gap = mp::abs(b.elements[k] - b.anchor.elements[b.anchor_index(k)]);
    if (log10_real(gap) < tol_log10 + 3.0) { ok_prefix = k; break; }
  }

  // forward re-iteration on a geometric schedule. The tolerance amplifies
  // with the measured multipliers along the path; an absolute cap keeps the
  // test meaningful where the amplification exceeds the branch geometry.
  double anchor_scale = log10_real(mp::abs(b.root - b.anchor.elements[0]));
  const double cap_log10 = anchor_scale - 6.0;

  std::vector<long> schedule;
  for (long k = 1; k < ok_prefix && k <= 8; ++k) schedule.push_back(k);
  for (long k = 12; k < ok_prefix; k = static_cast<long>(std::ceil(k * 1.4)))
    schedule.push_back(k);
  if (ok_prefix > 1) schedule.push_back(ok_prefix - 1);

  long verified = ok_prefix;
  double amp = 0.0;  // log10 of product of max(1, |zeta'|) along the branch
  long amp_upto = 0;
  for (long k : schedule) {
    if (k >= verified) break;
    while (amp_upto < k) { ++amp_upto; amp += std::max(0.0, dlog[amp_upto]); }
    double thr_log10 = std::min(tol_log10 + std::log10(static_cast<double>(k)) + amp, cap_log10);
    Complex v = b.elements[k];
    bool hit_pole = false;
    for (long j = 0; j < k; ++j) {
      try {
        v = zeta(v, ctx);
      } catch (const PoleAtOne&) {
        hit_pole = true;
        break;
      }
    }
    double err_log10 = hit_pole ? 1e9 : log10_real(mp::abs(v - b.root));
    if (err_log10 >= thr_log10) { verified = k; break; }
  }

  Branch out = b;
  out.verified_len = verified;
  out.elements.resize(verified);
  out.residuals.resize(verified);
  out.deriv_log10.assign(dlog.begin(), dlog.begin() + verified);
  return out;
}

bool set_image_check(const Branch& b, const PrecisionContext& ctx) {
  const long len = b.length();
  if (len < 2) return false;
  const Real tol = ctx.residual_tol();

  if (!(mp::abs(zeta(b.root, ctx)) < tol)) return false;
  for (long k = 1; k < len; ++k) {
    if (!(mp::abs(zeta(b.elements[k], ctx) - b.elements[k - 1]) < tol)) return false;
  }
  for (long i = 0; i < len; ++i)
    for (long j = i + 1; j < len; ++j)
      if (mp::abs(b.elements[i] - b.elements[j]) < tol) return false;
  return true;
}

}  // namespace zetadyn::orbit
