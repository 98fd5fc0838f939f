#include "zetadyn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace zetadyn::pipeline {

using mp::Complex;
using mp::Real;

void RunConfig::validate() const {
  if (digits < 30) throw std::invalid_argument("RunConfig: digits must be >= 30");
  if (branch_length < 2) throw std::invalid_argument("RunConfig: branch_length must be >= 2");
  if (beta < 1) throw std::invalid_argument("RunConfig: beta must be >= 1");
  if (c_offset_override > 1) throw std::invalid_argument("RunConfig: c_offset must be 0, 1 or auto");
  if (output_dir.empty()) throw std::invalid_argument("RunConfig: output_dir required");
}

std::string RunConfig::canonical() const {
  // only the knobs that decide whether artifacts are interchangeable across
  // stages; stage-local settings (lengths, windows, input paths) are covered
  // by the per-file content hashes
  std::ostringstream ss;
  ss << "tool=" << io::kToolVersion << ";digits=" << digits << ";c=" << c_offset_override;
  return ss.str();
}

std::vector<io::ZeroEntry> ingest_zeros(const std::vector<std::string>& ordinates,
                                        const PrecisionContext& ctx, Exec mode) {
  std::vector<io::ZeroEntry> out(ordinates.size(), io::ZeroEntry{ctx.complex(0, 0), ctx.real(0)});
  parallel_for(static_cast<long>(ordinates.size()), mode, [&](long i) {
    Real t(ordinates[i], ctx.prec());
    Complex rho = rootfind::refine_zero(t, ctx);
    out[i] = {rho, mp::abs(zeta(rho, ctx))};
  });
  return out;
}

namespace {

// junction cells of zeta(s) - s on a rectangle grid (grid_localize covers
// squares; psi searches want tall thin strips)
std::vector<Complex> strip_junction_seeds(double re_lo, double re_hi, double t_lo, double t_hi,
                                          long nx, long ny) {
  PrecisionContext cls = PrecisionContext::make(30, 10);
  const mpfr_prec_t p = cls.prec();
  std::vector<int> quad((nx + 1) * (ny + 1), -1);
  parallel_for((nx + 1) * (ny + 1), Exec::Parallel, [&](long idx) {
    long i = idx % (nx + 1), j = idx / (nx + 1);
    Real x(re_lo + (re_hi - re_lo) * i / nx, p);
    Real y(t_lo + (t_hi - t_lo) * j / ny, p);
    Complex s{x, y};
    try {
      Complex v = zeta(s, cls) - s;
      auto c = rootfind::quadrant_class(v, 1e300);
      int r = -1;
      switch (c.cls) {
        case rootfind::QuadrantClass::RichI: r = 0; break;
        case rootfind::QuadrantClass::RichII: r = 1; break;
        case rootfind::QuadrantClass::RichIII: r = 2; break;
        case rootfind::QuadrantClass::RichIV: r = 3; break;
        default: r = -1;
      }
      quad[idx] = r;
    } catch (const Error&) {
    }
  });
  // 2 x 2 cell blocks with all nine corners classified; single-cell windows
  // miss junctions whose quadrant sectors straddle a grid line
  std::vector<Complex> seeds;
  for (long j = 0; j + 2 <= ny; ++j)
    for (long i = 0; i + 2 <= nx; ++i) {
      bool seen[4] = {false, false, false, false};
      bool ok = true;
      for (long dj = 0; ok && dj <= 2; ++dj)
        for (long di = 0; ok && di <= 2; ++di) {
          int q = quad[(j + dj) * (nx + 1) + (i + di)];
          if (q < 0) { ok = false; break; }
          seen[q] = true;
        }
      if (ok && seen[0] && seen[1] && seen[2] && seen[3]) {
        seeds.push_back(Complex(re_lo + (re_hi - re_lo) * (i + 1.0) / nx,
                                t_lo + (t_hi - t_lo) * (j + 1.0) / ny, p));
      }
    }
  return seeds;
}

}  // namespace

Complex find_psi_in_gap(const Complex& rho_n, double t_lo, double t_hi,
                        const PrecisionContext& ctx) {
  const FunctionSpec f = FunctionSpec::iter_minus_identity(1);
  struct Window {
    double re_lo, re_hi;
    long nx;
  };
  const double gap = t_hi - t_lo;
  const Window windows[2] = {{-4.2, 0.8, 26}, {-6.5, 1.5, 48}};
  for (int w = 0; w < 2; ++w) {
    long ny = std::max<long>(10, static_cast<long>(gap / (w == 0 ? 0.16 : 0.08)));
    auto seeds = strip_junction_seeds(windows[w].re_lo, windows[w].re_hi, t_lo, t_hi,
                                      windows[w].nx, ny);
    // polish cheaply, dedup, keep candidates inside the strip
    PrecisionContext mid = PrecisionContext::make(60, 20);
    std::vector<Complex> roots;
    for (const Complex& seed : seeds) {
      try {
        Complex u = rootfind::newton_polish(f, mid.complex(0, 0), seed, mid);
        double im = u.im().to_double();
        if (im <= t_lo || im >= t_hi) continue;
        bool dup = false;
        for (const Complex& r : roots)
          if (mp::abs(r - u) < 1e-6) { dup = true; break; }
        if (!dup) roots.push_back(u);
      } catch (const Error&) {
      }
    }
    if (roots.empty()) continue;
    // the strip holds one fixed point per zero gap in the surveyed region;
    // if the wide window caught extras, take the one nearest rho_n
    Complex best = roots[0];
    Real best_d = mp::abs(best - rho_n);
    for (const Complex& r : roots) {
      Real d = mp::abs(r - rho_n);
      if (d < best_d) { best_d = d; best = r; }
    }
    return rootfind::newton_polish(f, ctx.complex(0, 0), best, ctx);
  }
  throw rootfind::NoJunctionFound();
}

std::vector<Complex> find_psi_table(const std::vector<io::ZeroEntry>& zeros, long n_max,
                                    const PrecisionContext& ctx, Exec mode) {
  if (static_cast<long>(zeros.size()) < n_max + 1)
    throw std::invalid_argument("find_psi_table: need n_max + 1 zeros for the strip bound");

  // The fixed points mostly interlace the zero ordinates, but not always
  // (near t_19 one gap is empty and its neighbor holds two), so the pairing
  // is ordinal: sweep the whole strip, sort by height, index from 1.
  const double t_start = zeros[0].rho.im().to_double();
  const double t_end = zeros[n_max].rho.im().to_double();
  const FunctionSpec f = FunctionSpec::iter_minus_identity(1);
  PrecisionContext mid = PrecisionContext::make(60, 20);

  std::vector<Complex> roots;
  auto sweep = [&](double re_lo, double re_hi, long nx, double cell_h) {
    // segment by zero gaps with overlap so boundary-hugging junctions stay
    // inside some window
    for (long i = 0; i < n_max; ++i) {
      double t_lo = zeros[i].rho.im().to_double();
      double t_hi = zeros[i + 1].rho.im().to_double();
      double margin = 0.15 * (t_hi - t_lo);
      double lo = std::max(t_start - 1.0, t_lo - margin);
      double hi = t_hi + margin;
      long ny = std::max<long>(10, static_cast<long>((hi - lo) / cell_h));
      for (const Complex& seed : strip_junction_seeds(re_lo, re_hi, lo, hi, nx, ny)) {
        try {
          Complex u = rootfind::newton_polish(f, mid.complex(0, 0), seed, mid);
          double im = u.im().to_double();
          if (im < t_start - 0.5 || im > t_end + 0.01) continue;
          bool dup = false;
          for (const Complex& r : roots)
            if (mp::abs(r - u) < 1e-6) { dup = true; break; }
          if (!dup) roots.push_back(u);
        } catch (const Error&) {
        }
      }
    }
  };
  sweep(-4.2, 0.8, 26, 0.16);
  if (static_cast<long>(roots.size()) < n_max) sweep(-6.5, 1.5, 52, 0.08);
  if (static_cast<long>(roots.size()) < n_max) throw rootfind::NoJunctionFound();

  std::sort(roots.begin(), roots.end(),
            [](const Complex& a, const Complex& b) { return a.im() < b.im(); });
  roots.resize(n_max);

  std::vector<Complex> psi(n_max, ctx.complex(0, 0));
  parallel_for(n_max, mode, [&](long i) {
    psi[i] = rootfind::newton_polish(f, ctx.complex(0, 0), roots[i], ctx);
  });
  return psi;
}

orbit::Branch make_branch(const Complex& rho, const Complex& psi, long length,
                          const PrecisionContext& ctx) {
  rootfind::Cycle anchor;
  anchor.elements.push_back(psi);
  anchor.residual = mp::abs(zeta(psi, ctx) - psi);
  orbit::Branch b = orbit::backward_branch(rho, anchor, length, ctx);
  return orbit::truncate_reliable(b, ctx);
}

orbit::Branch make_cycle_branch(const Complex& rho, const rootfind::Cycle& cycle, long length,
                                const PrecisionContext& ctx) {
  orbit::Branch b = orbit::cycle_branch(rho, cycle, length, ctx);
  return orbit::truncate_reliable(b, ctx);
}

FitBundle fit_branch(const orbit::Branch& b, int c_override, long cap_elements) {
  FitBundle out;
  const Complex& psi = b.anchor.elements[0];
  out.c_offset = c_override >= 0 ? c_override : (mp::abs(psi.im()) < 0.5 ? 1 : 0);
  orbit::Branch head = b;
  if (cap_elements > 0 && cap_elements < b.length()) {
    head.elements.resize(cap_elements);
    head.residuals.resize(cap_elements);
    head.verified_len = std::min(head.verified_len, cap_elements);
  }
  out.series = spiralfit::unwrap(head, out.c_offset);
  out.linear = spiralfit::fit_log_linear(out.series);
  out.extended = spiralfit::fit_extended(out.series);
  return out;
}

void write_stats_csv(const spiralfit::PolarSeries& p, const spiralfit::DeviationReport& dev,
                     const std::string& path, const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw Error("write_stats_csv: cannot open " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "k,theta_k,logr_k,delta_k,d_rel_k,d_abs_k,log_d_rel_k,log_d_abs_k\n";
  out.precision(17);
  for (long k = 0; k < p.size(); ++k) {
    double delta = k + 1 < p.size() ? p.theta[k + 1] - p.theta[k] : 0.0;
    out << k << "," << p.theta[k] << "," << p.logr[k] << "," << delta << "," << dev.d_rel[k] << ","
        << dev.d_abs[k] << "," << dev.log_d_rel[k] << "," << dev.log_d_abs[k] << "\n";
  }
}

}  // namespace zetadyn::pipeline
