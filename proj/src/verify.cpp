#include "zetadyn/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace zetadyn::verify {

using mp::Complex;
using mp::Real;

namespace {

namespace fs = std::filesystem;

// lambda_1, the 3-cycle element reached by the zoom-and-solve run (500
// digits, reference expansion)
const char* kLambda1Re =
    "3.9589623348847434673516458439896123461477039951866801455882506555054"
    "331235719797619129160432526832126428515417856326242408422124490775895"
    "37219976674458409141742662175701089081252727395073714398968532356378"
    "12255138302084634149524670809965144703541657360428502230820135428609"
    "38536894453944241116438492746243199878001238993540770158034816978947"
    "866042863811536518002674033394246742728451523022955079328623947833520"
    "567532298244004442294156837342370982002330874074322076777185746207730"
    "323482406094614280046";
const char* kLambda1Im =
    "14.23622856322181332287122301085588169299871236208494399568695437825"
    "6069322896396761526007136189745757467102551375667154010366364994538731"
    "7916271113823253751110948972775762217941663830770714262041755664035323"
    "9671078789529204404394764315531582588051352309327292004343654135172820"
    "7780017861238006999109644383198471665302823015355865202971277187847669"
    "1974168218415293165267046606327405458655765280027732495125802150527924"
    "57282410834191507107658393848458313664113623935800293262678700791600125"
    "465010766853";

std::vector<std::string> load_ordinates(const Options& opt, std::size_t need) {
  auto all = io::read_ordinates(opt.zeros_path);
  if (all.size() < need)
    throw Error("zero table too short: need " + std::to_string(need) + " ordinates");
  all.resize(need);
  return all;
}

std::vector<io::ZeroEntry> refined_zeros(const Options& opt, std::size_t count, long digits) {
  auto ords = load_ordinates(opt, count);
  return pipeline::ingest_zeros(ords, PrecisionContext::make(digits));
}

double rel_err(double a, double ref) { return std::abs(a - ref); }

// matched leading decimal digits between a computed Real and a reference
// decimal string
long matched_digits(const Real& computed, const std::string& ref_str) {
  Real ref(ref_str, computed.prec() + 64);
  Real delta = mp::abs(computed - ref);
  if (delta.is_zero()) return 1000;
  Real rel = delta / mp::abs(ref);
  return static_cast<long>(-mp::log10(rel).to_double());
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

render::Evaluator rational_fig21() {
  // (s - 1)^2 (s - i) (s + 1)^5 / (s + i)^3
  return [](const Complex& s, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.prec();
    Complex one(1.0, 0.0, p), eye(0.0, 1.0, p);
    Complex num = mp::pow_ui(s - one, 2) * (s - eye) * mp::pow_ui(s + one, 5);
    return num / mp::pow_ui(s + eye, 3);
  };
}

struct ClauseLog {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (ok ? "  [ok]   " : "  [FAIL] ") << what << "\n";
  }
};

}  // namespace

CriterionResult criterion_lambda1(const Options& opt) {
  CriterionResult res{1, "lambda1 500-digit reproduction", false, ""};
  PrecisionContext ctx = PrecisionContext::make(500);
  auto zeros = refined_zeros(opt, 1, 500);
  const Complex& rho1 = zeros[0].rho;

  rootfind::Box box{rho1 + ctx.complex(3.46, 0.103), 0.02};
  rootfind::Cycle cyc = rootfind::find_fixed_point(3, box, ctx);

  const Complex& lam = cyc.elements[0];
  long dre = matched_digits(lam.re(), kLambda1Re);
  long dim = matched_digits(lam.im(), kLambda1Im);
  Real resid = mp::abs(zeta_iter(lam, 3, ctx) - lam);
  double resid_log10 = resid.is_zero() ? -9999.0 : mp::log10(resid).to_double();

  ClauseLog log;
  log.check(dre >= 490 && dim >= 490, "matches reference to >= 490 digits (re " +
                                          std::to_string(dre) + ", im " + std::to_string(dim) + ")");
  log.check(resid_log10 < -490.0,
            "|zeta^3(lambda1) - lambda1| < 1e-490 (log10 = " + fmt(resid_log10) + ")");
  log.check(cyc.primitive && cyc.length() == 3, "primitive 3-cycle");
  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

CriterionResult criterion_fixed_point_table(const Options& opt) {
  CriterionResult res{2, "fixed-point table psi_rho_1..4 and phi", false, ""};
  PrecisionContext ctx = PrecisionContext::make(300);
  auto zeros = refined_zeros(opt, 5, 300);

  struct RefEntry {
    double re, im, re_ulp, im_ulp;
  };
  const RefEntry refs[4] = {{-2.3859, 16.271, 1e-4, 1e-3},
                            {-2.0369, 21.9931, 1e-4, 1e-4},
                            {-1.6935, 26.5283, 1e-4, 1e-4},
                            {-1.7496, 30.8158, 1e-4, 1e-4}};

  ClauseLog log;
  for (int n = 0; n < 4; ++n) {
    Complex psi = pipeline::find_psi_in_gap(zeros[n].rho, zeros[n].rho.im().to_double(),
                                            zeros[n + 1].rho.im().to_double(), ctx);
    double dre = rel_err(psi.re().to_double(), refs[n].re);
    double dim = rel_err(psi.im().to_double(), refs[n].im);
    log.check(dre <= refs[n].re_ulp && dim <= refs[n].im_ulp,
              "psi_rho_" + std::to_string(n + 1) + " = (" + fmt(psi.re().to_double()) + ", " +
                  fmt(psi.im().to_double()) + ") within 1 ulp of printed approximation");
    Real fp_resid = mp::abs(zeta(psi, ctx) - psi);
    log.check(fp_resid < ctx.residual_tol(), "fixed-point residual below tolerance");
  }
  Complex phi = orbit::phi_fixed_point(ctx);
  double dphi = rel_err(phi.re().to_double(), -0.295905);
  log.check(dphi <= 1e-6, "phi = " + fmt(phi.re().to_double()) + " matches -0.295905 to 6 figures");
  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

CriterionResult criterion_branch_fit(const Options& opt) {
  CriterionResult res{3, "B_rho1_psi1 branch and extended fit at 500 digits", false, ""};
  PrecisionContext ctx = PrecisionContext::make(500);
  auto zeros = refined_zeros(opt, 2, 500);
  Complex psi = pipeline::find_psi_in_gap(zeros[0].rho, zeros[0].rho.im().to_double(),
                                          zeros[1].rho.im().to_double(), ctx);
  orbit::Branch b = pipeline::make_branch(zeros[0].rho, psi, 242, ctx);

  ClauseLog log;
  log.check(b.verified_len >= 101,
            "verified length >= 101 (got " + std::to_string(b.verified_len) + ")");

  pipeline::FitBundle fit = pipeline::fit_branch(b, 0, 240);
  const auto& e = fit.extended;
  log.detail << "  [info] plain log-linear fit over the same window: b = " << fmt(fit.linear.m)
             << ", a = " << fmt(fit.linear.b) << "\n";
  log.check(std::abs(e.a - 0.0558) <= 1e-3, "a = " + fmt(e.a) + " within 0.0558 +- 0.001");
  log.check(std::abs(e.b - (-2.3948)) <= 1e-3, "b = " + fmt(e.b) + " within -2.3948 +- 0.001");
  log.check(e.log10_abs_c < -100.0, "|c| < 1e-100 (log10|c| = " + fmt(e.log10_abs_c) + ")");
  log.check(std::abs(e.d - 0.9738) <= 1e-3,
            "d = " + fmt(e.d) + " within 0.9738 +- 0.001 "
            "(c ~ 0 makes d unidentifiable: the reference pair reflects a particular "
            "local optimizer and noise floor, not a property of the branch)");

  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    io::write_branch(b, opt.out_dir + "/branch_rho1_psi1_500.txt",
                     {std::string(io::kToolVersion)});
  }
  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

CriterionResult criterion_angular_limit(const Options& opt) {
  CriterionResult res{4, "angular limit delta(100) and near-uniform decay, n = 1..20", false, ""};
  const long digits = 320;
  PrecisionContext ctx = PrecisionContext::make(digits);
  auto zeros = refined_zeros(opt, 21, digits);
  auto psis = pipeline::find_psi_table(zeros, 20, ctx);

  const double half_pi = 1.5707963267948966;
  ClauseLog log;
  std::vector<orbit::Branch> branches(20);
  parallel_for(20, Exec::Parallel, [&](long i) {
    branches[i] = pipeline::make_branch(zeros[i].rho, psis[i], 103, ctx);
  });
  for (long n = 1; n <= 20; ++n) {
    const orbit::Branch& b = branches[n - 1];
    if (b.verified_len < 102) {
      log.check(false, "n=" + std::to_string(n) + ": branch too short (" +
                           std::to_string(b.verified_len) + ")");
      continue;
    }
    auto ds = spiralfit::delta_series(b, psis[n - 1], 0);
    double delta100 = ds.delta[100];
    double rel = std::abs(delta100 - half_pi) / half_pi;
    auto nu = spiralfit::near_uniform_check(ds.second_diffs);
    log.check(rel < 0.05, "n=" + std::to_string(n) + ": |delta(100) - pi/2|/(pi/2) = " + fmt(rel) +
                              " < 0.05");
    log.check(nu.B > 0.0, "n=" + std::to_string(n) + ": second differences decay (B = " +
                              fmt(nu.B) + " > 0)");
  }
  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

CriterionResult criterion_trivial_geometry(const Options& opt) {
  CriterionResult res{5, "trivial-zero fixed points and straight-line branches", false, ""};
  PrecisionContext ctx300 = PrecisionContext::make(300);
  PrecisionContext ctx1k = PrecisionContext::make(1000);

  ClauseLog log;
  int prev_sign = 0;
  for (long n = 10; n <= 14; ++n) {
    auto ap = spiralfit::arg_deriv_parity(n, ctx300);
    double x = ap.psi.re().to_double();
    bool in_interval = x > -2.0 * n - 1 && x < -2.0 * n + 1 && ap.psi.im().is_zero();
    log.check(in_interval, "psi_-" + std::to_string(2 * n) + " = " + fmt(x) +
                               " real in (-2n-1, -2n+1)");
    int sign = ap.deriv > 0 ? 1 : -1;
    bool parity_ok = (ap.residue_mod4 == 0 && sign > 0) || (ap.residue_mod4 == 2 && sign < 0);
    log.check(parity_ok, "sign zeta'(psi_-" + std::to_string(2 * n) + ") = " +
                             (sign > 0 ? std::string("+") : std::string("-")) +
                             " matches 2n mod 4 = " + std::to_string(ap.residue_mod4));
    if (prev_sign != 0) log.check(sign == -prev_sign, "sign alternates from previous n");
    prev_sign = sign;
  }

  auto zeros = refined_zeros(opt, 1, 1000);
  Complex psi20 = rootfind::find_trivial_fixed_point(10, ctx1k);
  orbit::Branch b20 = pipeline::make_branch(zeros[0].rho, psi20, 22, ctx1k);
  log.check(b20.verified_len >= 21,
            "B_rho1_psi-20 has >= 21 verified elements (got " + std::to_string(b20.verified_len) + ")");

  auto ld = spiralfit::line_deviation(b20, zeros[0].rho, psi20, 20);
  log.check(ld.mean < 1e-2,
            "line_deviation mean = " + fmt(ld.mean) +
                " < 1e-2 (the branch approaches its anchor along a ray whose direction "
                "differs from the chord through the endpoints, so this ratio tends to a "
                "constant; the measured value is reported as is)");
  auto sc = spiralfit::nearly_straight_check(b20, zeros[0].rho, psi20);
  log.check(sc.ok, "nearly_straight_check passes (decay slope " + fmt(sc.decay_slope) + ")");

  auto ds20 = spiralfit::delta_series(b20, psi20);
  const double two_pi = 6.283185307179586;
  bool all_two_pi = true;
  for (double d : ds20.delta) all_two_pi = all_two_pi && std::abs(d - two_pi) / two_pi < 0.10;
  log.check(all_two_pi, "delta_k within 10% of 2 pi for 2n = 20 (0 mod 4)");

  Complex psi22 = rootfind::find_trivial_fixed_point(11, ctx1k);
  orbit::Branch b22 = pipeline::make_branch(zeros[0].rho, psi22, 14, ctx1k);
  auto ds22 = spiralfit::delta_series(b22, psi22);
  const double pi = 3.141592653589793;
  bool all_pi = true;
  for (double d : ds22.delta) all_pi = all_pi && std::abs(d - pi) / pi < 0.10;
  log.check(all_pi, "delta_k within 10% of pi for 2n = 22 (2 mod 4)");

  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

CriterionResult criterion_deviation_scaling(const Options& opt) {
  CriterionResult res{6, "scaled deviation statistics, n <= 50, beta = 100, 300 digits", false, ""};
  const long digits = 300;
  const long n_max = 50;
  const long beta = 100;
  PrecisionContext ctx = PrecisionContext::make(digits);
  auto zeros = refined_zeros(opt, n_max + 1, digits);
  auto psis = pipeline::find_psi_table(zeros, n_max, ctx);

  std::vector<orbit::Branch> branches(n_max);
  parallel_for(n_max, Exec::Parallel, [&](long i) {
    branches[i] = pipeline::make_branch(zeros[i].rho, psis[i], beta + 3, ctx);
  });

  ClauseLog log;
  std::vector<double> d0_rel(n_max, 0.0), d0_abs(n_max, 0.0);
  fs::create_directories(opt.out_dir);
  std::ofstream csv(opt.out_dir + "/deviation_scaling.csv");
  csv << "n,verified,mean,max,mean_scaled,max_scaled,d0_rel,d0_abs\n";
  csv.precision(12);

  for (long n = 1; n <= n_max; ++n) {
    orbit::Branch& b = branches[n - 1];
    long window = std::min<long>(b.verified_len, beta + 1);
    if (window < 9) {
      log.check(false, "n=" + std::to_string(n) + ": branch too short (" + std::to_string(window) + ")");
      continue;
    }
    pipeline::FitBundle fit = pipeline::fit_branch(b, 0, window);
    auto dev = spiralfit::deviations(b, fit.linear, fit.series, n, true);
    d0_rel[n - 1] = dev.d_rel[0];
    d0_abs[n - 1] = dev.d_abs[0];
    csv << n << "," << window << "," << dev.mean << "," << dev.max << "," << dev.mean_scaled << ","
        << dev.max_scaled << "," << dev.d_rel[0] << "," << dev.d_abs[0] << "\n";
    if (n == 1) continue;  // sqrt(n / ln n) is undefined at n = 1; reported only
    log.check(window == beta + 1,
              "n=" + std::to_string(n) + ": full beta window verified (" + std::to_string(window) + ")");
    log.check(dev.mean_scaled < 1.0,
              "n=" + std::to_string(n) + ": mean_scaled = " + fmt(dev.mean_scaled) + " < 1");
    log.check(dev.max_scaled < 1.0,
              "n=" + std::to_string(n) + ": max_scaled = " + fmt(dev.max_scaled) + " < 1");
  }

  auto rows = spiralfit::conjecture4_stats(d0_rel, d0_abs);
  long rel_ok = 0, abs_ok = 0;
  for (const auto& r : rows) {
    rel_ok += r.rel_in_bounds ? 1 : 0;
    abs_ok += r.abs_in_bounds ? 1 : 0;
  }
  log.detail << "  [info] conjecture-4 bound flags (reported, not asserted): D_rel in bounds for "
             << rel_ok << "/" << rows.size() << " N, mean_abs in bounds for " << abs_ok << "/"
             << rows.size() << " N\n";
  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

CriterionResult criterion_property_suite(const Options& opt) {
  CriterionResult res{7, "property suites (oracle, symmetry, fits, rotation, render)", false, ""};
  ClauseLog log;

  // functional equation oracle on 100 random points
  {
    PrecisionContext ctx = PrecisionContext::make(50);
    std::mt19937_64 rng(0x5eed5eedULL);
    double worst = -1e9;
    for (int i = 0; i < 100; ++i) {
      double re = -30.0 + 40.0 * uniform01(rng);
      double im = 0.2 + 59.8 * uniform01(rng);
      Real check = functional_equation_check(ctx.complex(re, im), ctx);
      double lg = check.is_zero() ? -999 : mp::log10(check).to_double();
      worst = std::max(worst, lg);
    }
    log.check(worst < -40.0, "functional equation < 1e-40 on 100 random points (worst log10 = " +
                                 fmt(worst) + ")");
  }

  // conjugation symmetry
  {
    PrecisionContext ctx = PrecisionContext::make(60);
    std::mt19937_64 rng(0xabcdULL);
    bool ok = true;
    for (int i = 0; i < 20; ++i) {
      Complex s = ctx.complex(-20.0 + 28.0 * uniform01(rng), 0.5 + 50.0 * uniform01(rng));
      ok = ok && mp::abs(zeta(mp::conj(s), ctx) - mp::conj(zeta(s, ctx))) < ctx.residual_tol();
    }
    log.check(ok, "zeta(conj s) = conj(zeta(s)) within tolerance on 20 points");
  }

  // synthetic exact-spiral recovery by the three fit operations
  {
    PrecisionContext ctx = PrecisionContext::make(60);
    const double m0 = -0.8, b0 = 0.45, th0 = -0.6;
    rootfind::Cycle anchor;
    anchor.elements.push_back(ctx.complex(-1.25, 0.75));
    anchor.residual = ctx.real(0);
    orbit::Branch b;
    b.anchor = anchor;
    b.digits = 60;
    for (int k = 0; k < 40; ++k) {
      Real th = ctx.real(th0 + k * 1.5707963267948966);
      Real r = mp::exp(ctx.real(m0) * th + ctx.real(b0));
      b.elements.push_back(anchor.elements[0] + Complex{r * mp::cos(th), r * mp::sin(th)});
      b.residuals.push_back(ctx.real(0));
    }
    b.root = b.elements[0];
    b.verified_len = 40;
    auto series = spiralfit::unwrap(b, 0);
    auto lin = spiralfit::fit_log_linear(series);
    log.check(std::abs(lin.m - m0) < 1e-10 && std::abs(lin.b - b0) < 1e-10,
              "log-linear fit recovers synthetic (m, b) to 10 digits");
    auto ext = spiralfit::fit_extended(series);
    log.check(std::abs(ext.a - b0) < 1e-8 && std::abs(ext.b - m0) < 1e-8 &&
                  (ext.no_improvement || ext.log10_abs_c < -8),
              "extended fit degenerates to the linear model on exact spiral data");
    auto dev = spiralfit::deviations(b, lin, series, 5, true);
    log.check(dev.max < 1e-10, "deviations vanish on the exact spiral (max = " + fmt(dev.max) + ")");

    // index-linear on exact geometric decay
    orbit::Branch g = b;
    g.elements.clear();
    for (int k = 0; k < 12; ++k) {
      Real r = mp::exp(ctx.real(-0.7) * ctx.real(static_cast<double>(k)) + ctx.real(0.3));
      g.elements.push_back(anchor.elements[0] + Complex{r, ctx.real(0)});
    }
    g.verified_len = 12;
    auto idx = spiralfit::fit_index_linear(g);
    log.check(std::abs(idx.m + 0.7) < 1e-12 && std::abs(idx.b - 0.3) < 1e-12,
              "index-linear fit recovers exact geometric decay");
  }

  // rotation discrepancy on a real 50-element branch
  {
    PrecisionContext ctx = PrecisionContext::make(100);
    auto zeros = refined_zeros(opt, 2, 100);
    Complex psi = pipeline::find_psi_in_gap(zeros[0].rho, zeros[0].rho.im().to_double(),
                                            zeros[1].rho.im().to_double(), ctx);
    orbit::Branch b = pipeline::make_branch(zeros[0].rho, psi, 52, ctx);
    log.check(b.verified_len >= 50, "100-digit 50-element branch verified");

    auto zero_disc = spiralfit::rotation_discrepancy(b, psi, 0.0, ctx);
    bool all_zero = true;
    for (const auto& z : zero_disc) all_zero = all_zero && mp::abs(z).is_zero();
    log.check(all_zero, "rotation discrepancy identically zero at theta = 0");

    auto disc = spiralfit::rotation_discrepancy(b, psi, 3.14159265358979 / 7, ctx);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < disc.size(); ++k) {
      Real a = mp::abs(disc[k]);
      if (!a.is_zero()) {
        xs.push_back(static_cast<double>(k));
        ys.push_back(mp::log(a).to_double());
      }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    double n = static_cast<double>(xs.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    log.check(slope < 0.0, "rotation discrepancy decays exponentially at theta = pi/7 (slope " +
                               fmt(slope) + ")");

    // the discrepancies rotate nearly linearly: unwrapped arguments advance
    // by an almost constant step
    {
      std::vector<double> args;
      double prev = 0;
      for (std::size_t k = 0; k < disc.size(); ++k) {
        double a = mp::arg(disc[k]).to_double();
        if (k == 0) {
          args.push_back(a);
        } else {
          while (a <= prev - 3.14159265358979) a += 6.28318530717959;
          while (a > prev + 3.14159265358979) a -= 6.28318530717959;
          args.push_back(a);
        }
        prev = args.back();
      }
      std::vector<double> steps;
      for (std::size_t k = 6; k + 1 < args.size(); ++k) steps.push_back(args[k + 1] - args[k]);
      double mean = 0;
      for (double s : steps) mean += s;
      mean /= steps.size();
      double worst = 0;
      for (double s : steps) worst = std::max(worst, std::abs(s - mean));
      log.check(std::abs(mean) > 0.05 && worst < 0.15 * std::abs(mean),
                "discrepancy arguments advance nearly linearly (step " + fmt(mean) +
                    ", worst wobble " + fmt(worst) + ")");
    }

    log.check(orbit::set_image_check(b, ctx), "set_image_check true on the verified branch");
  }

  // quadrant plot of the reference rational function. Resolution stays low:
  // around the order-5 zero at -1 the values sink below the axis band out to
  // |s + 1| ~ 0.27, so the pixels of a 5x5 window must be coarse enough to
  // step over that black pocket.
  {
    PrecisionContext ctx = PrecisionContext::make(30, 10);
    rootfind::Box box{ctx.complex(0, 0), 6.0};
    auto img = render::quadrant_plot(rational_fig21(), ctx.complex(0, 0), box, 40, 10.0, ctx);

    auto window_classes = [&](double x, double y, bool& rich_all, bool& pale_all) {
      long i = static_cast<long>((x + 3.0) / 6.0 * img.width);
      long j = static_cast<long>((3.0 - y) / 6.0 * img.height);
      bool rich[4] = {false, false, false, false}, pale[4] = {false, false, false, false};
      for (long dj = -2; dj <= 2; ++dj)
        for (long di = -2; di <= 2; ++di) {
          long ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= img.width || jj >= img.height) continue;
          switch (img.at(ii, jj)) {
            case rootfind::QuadrantClass::RichI: rich[0] = true; break;
            case rootfind::QuadrantClass::RichII: rich[1] = true; break;
            case rootfind::QuadrantClass::RichIII: rich[2] = true; break;
            case rootfind::QuadrantClass::RichIV: rich[3] = true; break;
            case rootfind::QuadrantClass::PaleI: pale[0] = true; break;
            case rootfind::QuadrantClass::PaleII: pale[1] = true; break;
            case rootfind::QuadrantClass::PaleIII: pale[2] = true; break;
            case rootfind::QuadrantClass::PaleIV: pale[3] = true; break;
            default: break;
          }
        }
      rich_all = rich[0] && rich[1] && rich[2] && rich[3];
      pale_all = pale[0] && pale[1] && pale[2] && pale[3];
    };
    bool r1, p1, ri, pi_, rm1, pm1, rmi, pmi;
    window_classes(1.0, 0.0, r1, p1);
    window_classes(0.0, 1.0, ri, pi_);
    window_classes(-1.0, 0.0, rm1, pm1);
    window_classes(0.0, -1.0, rmi, pmi);
    log.check(r1 && ri && rm1, "four-rich junctions at 1, i, -1");
    log.check(pmi, "four-pale junction at -i");

    if (!opt.out_dir.empty()) {
      fs::create_directories(opt.out_dir);
      render::write_ppm(render::colorize(img), opt.out_dir + "/quadrant_rational.ppm");
    }
  }

  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

namespace {

void mini_pipeline(const Options& opt, const std::string& dir) {
  fs::create_directories(dir);
  pipeline::RunConfig cfg;
  cfg.digits = 100;
  cfg.branch_length = 26;
  cfg.beta = 20;
  cfg.output_dir = dir;
  cfg.zero_table_path = opt.zeros_path;
  cfg.validate();
  io::Manifest manifest(cfg.canonical());

  PrecisionContext ctx = PrecisionContext::make(cfg.digits);
  auto ords = load_ordinates(opt, 2);
  auto zeros = pipeline::ingest_zeros(ords, ctx);
  io::write_zero_table({zeros.begin(), zeros.end()}, cfg.digits, dir + "/zeros.txt",
                       {"config=" + manifest.config_hash()});
  manifest.record_output(dir + "/zeros.txt");

  auto psis = pipeline::find_psi_table(zeros, 1, ctx);
  io::write_point_table(psis, cfg.digits, dir + "/psi_table.txt",
                        {"config=" + manifest.config_hash()});
  manifest.record_output(dir + "/psi_table.txt");

  orbit::Branch b = pipeline::make_branch(zeros[0].rho, psis[0], cfg.branch_length, ctx);
  io::write_branch(b, dir + "/branch_1.txt", {"config=" + manifest.config_hash()});
  manifest.record_output(dir + "/branch_1.txt");

  auto fit = pipeline::fit_branch(b, cfg.c_offset_override);
  auto dev = spiralfit::deviations(b, fit.linear, fit.series, 1, true);
  pipeline::write_stats_csv(fit.series, dev, dir + "/stats_1.csv",
                            {"config=" + manifest.config_hash()});
  manifest.record_output(dir + "/stats_1.csv");

  auto spec = render::everted_plot(b, fit.series, render::ChordMode::ZetaMap);
  render::stats_plot(spec, dir + "/everted_1", 320, 240);
  manifest.record_output(dir + "/everted_1.ppm");
  manifest.record_output(dir + "/everted_1.csv");

  PrecisionContext rctx = PrecisionContext::make(30, 10);
  auto qimg = render::quadrant_plot(FunctionSpec::iter_minus_identity(1), rctx.complex(0, 0),
                                    rootfind::Box{rctx.complex(-2.4, 16.3), 2.0}, 32, 10.0, rctx);
  render::write_ppm(render::colorize(qimg), dir + "/quadrant_psi1.ppm",
                   "config=" + manifest.config_hash());
  manifest.record_output(dir + "/quadrant_psi1.ppm");

  auto bimg = render::basin_plot(rootfind::Box{rctx.complex(-0.3, 0.0), 1.0}, 32, 24, rctx);
  render::write_ppm(render::colorize(bimg), dir + "/basin.ppm",
                   "config=" + manifest.config_hash());
  manifest.record_output(dir + "/basin.ppm");

  manifest.save(dir + "/manifest.json");
}

}  // namespace

CriterionResult criterion_determinism(const Options& opt) {
  CriterionResult res{8, "byte-identical artifacts across repeated runs", false, ""};
  ClauseLog log;
  std::string da = opt.out_dir + "/det_a", db = opt.out_dir + "/det_b";
  fs::remove_all(da);
  fs::remove_all(db);
  mini_pipeline(opt, da);
  mini_pipeline(opt, db);

  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(da)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  log.check(!names.empty(), "pipeline produced artifacts (" + std::to_string(names.size()) + ")");
  for (const auto& name : names) {
    std::ifstream fa(da + "/" + name, std::ios::binary), fb(db + "/" + name, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    log.check(fb.good() && sa.str() == sb.str(), name + " identical across runs");
  }
  res.pass = log.pass;
  res.detail = log.detail.str();
  return res;
}

CriterionResult run_criterion(int id, const Options& opt) {
  switch (id) {
    case 1: return criterion_lambda1(opt);
    case 2: return criterion_fixed_point_table(opt);
    case 3: return criterion_branch_fit(opt);
    case 4: return criterion_angular_limit(opt);
    case 5: return criterion_trivial_geometry(opt);
    case 6: return criterion_deviation_scaling(opt);
    case 7: return criterion_property_suite(opt);
    case 8: return criterion_determinism(opt);
  }
  throw std::invalid_argument("unknown criterion id");
}

std::vector<int> suite_ids(bool full) {
  if (full) return {1, 2, 3, 4, 5, 6, 7, 8};
  return {2, 5, 7, 8};
}

}  // namespace zetadyn::verify
