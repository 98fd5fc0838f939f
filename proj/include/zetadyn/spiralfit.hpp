#pragma once

#include <span>
#include <utility>
#include <vector>

#include "zetadyn/orbit.hpp"

namespace zetadyn::spiralfit {

struct ZeroRadius : Error {
  explicit ZeroRadius(long k) : Error("unwrap: element " + std::to_string(k) + " coincides with the anchor") {}
};
struct DegenerateAbscissa : Error {
  DegenerateAbscissa() : Error("fit: angle abscissa has no variance") {}
};
struct VerticalLine : Error {
  VerticalLine() : Error("line_deviation: endpoints share a real part") {}
};

/// Winding-unwrapped polar view of a branch: theta[k] is congruent to
/// arg(a_k - anchor) mod 2pi and is the least admissible value exceeding
/// c_offset + max of the earlier entries; logr is ln|a_k - anchor|. Angles
/// and radii are computed at full precision, then downcast.
struct PolarSeries {
  std::vector<double> theta;
  std::vector<double> logr;
  int c_offset = 0;

  long size() const { return static_cast<long>(theta.size()); }
};

PolarSeries unwrap(const orbit::Branch& b, int c_offset);
PolarSeries unwrap_points(std::span<const mp::Complex> pts, const mp::Complex& center, int c_offset,
                          const mp::Real& zero_tol);
/// Polar view of one subsequence b_j of a cycle branch, centered at its own
/// limit cycle element.
PolarSeries unwrap_subsequence(const orbit::Branch& b, long j, int c_offset);

/// log r = m theta + b
struct SpiralFit {
  double m = 0, b = 0;
  std::vector<double> residuals;
  double rss = 0;
};

/// log r = a + b theta + c exp(d theta)
struct ExtendedFit {
  double a = 0, b = 0, c = 0, d = 0;
  double log10_abs_c = -1e9;  // |c| in log10, safe against double underflow
  double rss = 0;
  bool no_improvement = false;  // extended fit fell back to the linear model
};

/// log r_k = m k + b with (m, b) the means of consecutive-chord slopes and
/// intercepts (not least squares)
struct IndexFit {
  double m = 0, b = 0;
};

SpiralFit fit_log_linear(const PolarSeries& p);
ExtendedFit fit_extended(const PolarSeries& p);
IndexFit fit_index_linear(const orbit::Branch& b);
/// (a_k, b_k) of the log-linear model through series points 0 and k, k >= 1.
std::vector<std::pair<double, double>> pairwise_params(const PolarSeries& p);

struct DeviationReport {
  std::vector<double> d_abs, d_rel;
  std::vector<double> log_d_abs, log_d_rel;  // natural logs, immune to underflow
  double mean = 0, max = 0;                  // over d_rel, k >= 1 when skip_zero
  double mean_scaled = 0, max_scaled = 0;    // x sqrt(n / ln n)
  long n_index = 0;
  bool skip_zero = true;
};

/// Radial deviations of the branch from the fitted logarithmic spiral:
/// d_abs[k] = |a_k - psi - exp(m theta_k + b) e^(i theta_k)|, d_rel relative
/// to |a_k - psi|. The model point shares theta_k, so the deviation is
/// purely radial.
DeviationReport deviations(const orbit::Branch& b, const SpiralFit& fit, const PolarSeries& p,
                           long n_index, bool skip_zero);

struct DeltaSeries {
  std::vector<double> delta;         // theta_{k+1} - theta_k
  std::vector<double> second_diffs;  // delta_{k+1} - delta_k
};

/// Angular increments from a full-precision unwrap (aliases near pi/2, pi,
/// 2pi stay distinguishable; entries tiny enough to underflow print as 0).
/// The offset c defaults to 1 for real anchors and 0 otherwise.
DeltaSeries delta_series(const orbit::Branch& b, const mp::Complex& anchor);
DeltaSeries delta_series(const orbit::Branch& b, const mp::Complex& anchor, int c_offset);

struct NearUniform {
  double A = 0, B = 0;
  bool ok = false;
};

/// Fits |second_diffs[k]| ~ A e^(-B k); ok requires B > 0 and every entry
/// under 1.5x the fitted envelope. Zero entries satisfy any envelope and are
/// excluded from the fit.
NearUniform near_uniform_check(const std::vector<double>& second_diffs);

struct LineDeviation {
  std::vector<double> d_trivial;
  std::vector<bool> flagged;  // excluded entries (vanishing imaginary part)
  double mean = 0, max = 0;
};

/// Relative vertical deviation of a_1..a_beta from the straight line through
/// rho and psi.
LineDeviation line_deviation(const orbit::Branch& b, const mp::Complex& rho, const mp::Complex& psi,
                             long beta);

struct ModelDeviation {
  std::vector<double> d_model;
  std::vector<bool> flagged;  // |log r_k| ~ 0, excluded
  double mean = 0, max = 0;
};

ModelDeviation model_deviation(const orbit::Branch& b, const IndexFit& fit, long beta);

struct Conjecture4Row {
  long N = 0;
  double D_rel = 0;     // ln of the running mean of d_rel(rho_n, psi_n, 0)
  double D_abs = 0;     // ln of the running mean of d_abs
  double mean_abs = 0;  // the running mean itself
  bool rel_in_bounds = false;  // between -(ln N)^e1 and -(ln N)^e2
  bool abs_in_bounds = false;  // 1/N < mean_abs < sqrt(1/N)
};

std::vector<Conjecture4Row> conjecture4_stats(const std::vector<double>& d0_rel,
                                              const std::vector<double>& d0_abs, double e1 = 0.8,
                                              double e2 = 0.85);

/// Entry k = R(zeta(a_k)) - zeta(R(a_k)) with R the rotation by theta about
/// psi, at full precision. theta = 0 is the exact identity.
std::vector<mp::Complex> rotation_discrepancy(const orbit::Branch& b, const mp::Complex& psi,
                                              double theta, const PrecisionContext& ctx);

struct StraightCheck {
  bool ok = false;
  double decay_slope = 0;
};

/// Tests whether the branch approaches its terminal point along a straight
/// line: relative vertical deviations (measured in the frame of the terminal
/// point, against the line of the tail direction) must decay exponentially.
StraightCheck nearly_straight_check(const orbit::Branch& b, const mp::Complex& rho,
                                    const mp::Complex& psi);

enum class ArgClass { NearTwoPi, NearPi };

struct ArgParity {
  double arg_value = 0;  // 0 (meaning 2 pi) or pi
  ArgClass cls = ArgClass::NearTwoPi;
  int residue_mod4 = 0;  // 2n mod 4
  mp::Complex psi;
  double deriv = 0;  // zeta'(psi), real
};

/// Finds psi_{-2n}, evaluates the (real) derivative there, and reports the
/// parity pattern of its sign.
ArgParity arg_deriv_parity(long n, const PrecisionContext& ctx);

}  // namespace zetadyn::spiralfit
