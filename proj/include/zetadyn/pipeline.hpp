#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zetadyn/branch_io.hpp"
#include "zetadyn/provenance.hpp"
#include "zetadyn/render.hpp"

namespace zetadyn::pipeline {

/// Run-level configuration, validated up front and serialized (canonically)
/// into every manifest for provenance.
struct RunConfig {
  long digits = 500;
  long branch_length = 200;
  long beta = 100;
  int c_offset_override = -1;  // -1 = auto (1 near trivial zeros, 0 otherwise)
  std::string output_dir = "out";
  std::string zero_table_path;
  long workers = 0;  // 0 = hardware default

  void validate() const;
  std::string canonical() const;
};

/// Refine raw ordinates to full-precision zeros on the critical line.
std::vector<io::ZeroEntry> ingest_zeros(const std::vector<std::string>& ordinates,
                                        const PrecisionContext& ctx, Exec mode = Exec::Parallel);

/// The zeta fixed point paired with rho_n: the unique solution of
/// zeta(s) = s in the strip between consecutive zero ordinates (fixed points
/// interlace the zeros in the region surveyed; the search widens once if the
/// first pass finds nothing).
mp::Complex find_psi_in_gap(const mp::Complex& rho_n, double t_lo, double t_hi,
                            const PrecisionContext& ctx);

/// psi_{rho_1} .. psi_{rho_{n_max}}; needs n_max + 1 zeros for the gap
/// boundaries. Entries compute independently in parallel.
std::vector<mp::Complex> find_psi_table(const std::vector<io::ZeroEntry>& zeros, long n_max,
                                        const PrecisionContext& ctx, Exec mode = Exec::Parallel);

/// Backward branch of rho anchored at the fixed point psi, reliability-
/// truncated.
orbit::Branch make_branch(const mp::Complex& rho, const mp::Complex& psi, long length,
                          const PrecisionContext& ctx);

/// As make_branch for a cycle anchor (L >= 2).
orbit::Branch make_cycle_branch(const mp::Complex& rho, const rootfind::Cycle& cycle, long length,
                                const PrecisionContext& ctx);

struct FitBundle {
  spiralfit::PolarSeries series;
  spiralfit::SpiralFit linear;
  spiralfit::ExtendedFit extended;
  int c_offset = 0;
};

/// Unwraps (c chosen by anchor kind unless overridden) and runs both spiral
/// fits over at most the first cap_elements elements.
FitBundle fit_branch(const orbit::Branch& b, int c_override = -1, long cap_elements = -1);

/// Per-element statistics CSV; columns follow the symbols used throughout:
/// k, theta_k, logr_k, delta_k, d_rel_k, d_abs_k, log_d_rel_k, log_d_abs_k.
void write_stats_csv(const spiralfit::PolarSeries& p, const spiralfit::DeviationReport& dev,
                     const std::string& path, const std::vector<std::string>& comments = {});

}  // namespace zetadyn::pipeline
