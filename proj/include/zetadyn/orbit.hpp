#pragma once

#include <vector>

#include "zetadyn/rootfind.hpp"

namespace zetadyn::orbit {

struct SolverFailed : Error {
  explicit SolverFailed(long k) : Error("backward branch: solver failed at step " + std::to_string(k)), step(k) {}
  long step;
};
struct WrongBasin : Error {
  explicit WrongBasin(long k)
      : Error("backward branch: monotone-approach check failed at step " + std::to_string(k)), step(k) {}
  long step;
};

enum class Fate { ConvergedToPhi, Escaped, PoleHit, Undecided };

struct OrbitResult {
  Fate fate = Fate::Undecided;
  long steps = 0;
  mp::Complex final;
};

/// Backward-orbit branch: elements (a_0, a_1, ...) with zeta(a_{k+1}) = a_k,
/// anchored at a repelling fixed point or cycle. residuals[k] is
/// |zeta(a_k) - a_{k-1}| (zero at k = 0); deriv_log10[k] records
/// log10 |zeta'(a_k)| for the reliability analysis.
struct Branch {
  enum class Halt { None, SolverFailed, WrongBasin };

  mp::Complex root;
  rootfind::Cycle anchor;
  std::vector<mp::Complex> elements;
  std::vector<mp::Real> residuals;
  std::vector<double> deriv_log10;
  long verified_len = 0;
  long digits = 0;
  Halt halt = Halt::None;  // why construction stopped before the requested length
  long halted_at = -1;

  long length() const { return static_cast<long>(elements.size()); }
  /// cycle element index targeted by elements[k] (0 for fixed-point anchors)
  long anchor_index(long k) const {
    long L = anchor.length();
    if (L <= 1) return 0;
    return ((first_anchor_index - (k - 1)) % L + L) % L;
  }
  long first_anchor_index = 0;  // cycle index of elements[1]
};

/// The attracting real fixed point phi (cached per precision).
mp::Complex phi_fixed_point(const PrecisionContext& ctx);

inline constexpr double kConvergenceTol = 1e-20;

/// Iterates zeta until the orbit reaches phi, escapes, hits the pole, or the
/// budget runs out.
OrbitResult forward_classify(const mp::Complex& s, long max_iter, const PrecisionContext& ctx,
                             double convergence_tol = kConvergenceTol,
                             double escape_bound = kEscapeBound);

/// Builds (a_0 = root, a_1, ...) by repeatedly solving zeta(z) = a_k near the
/// anchor. Newton is seeded by the local inverse linearization for the first
/// L elements and by the previous same-subsequence element afterwards. The
/// branch is cut short if the solver fails or an element leaves the basin
/// past the burn-in (throws only when no usable prefix exists).
Branch backward_branch(const mp::Complex& root, const rootfind::Cycle& anchor, long length,
                       const PrecisionContext& ctx);

/// As backward_branch with a cycle anchor (L >= 2); step k targets cycle
/// element index first_anchor_index - (k-1) mod L.
Branch cycle_branch(const mp::Complex& root, const rootfind::Cycle& cycle, long length,
                    const PrecisionContext& ctx);

/// Indices of the subsequence b_j = (a_j, a_{j+L}, a_{j+2L}, ...).
std::vector<long> subsequence_indices(const Branch& b, long j);

/// The cycle element a given subsequence converges to (nearest to its tail).
long subsequence_limit_index(const Branch& b, long j);

/// Reliability truncation: keeps the longest prefix on which
///  (i) every defining residual |zeta(a_{k+1}) - a_k| stays below tolerance,
///  (ii) forward re-iteration returns to the root within the repelling
///      amplification of the tolerance (checked on a geometric schedule), and
///  (iii) elements stay separated from the anchor by a safe margin.
/// Residuals and derivative magnitudes are recomputed, so the check is valid
/// for deserialized or tampered branches.
Branch truncate_reliable(const Branch& b, const PrecisionContext& ctx);

/// True iff zeta maps the branch-as-set onto itself plus {0}: zeta(a_0) ~ 0
/// and zeta(a_k) ~ a_{k-1}, with pairwise-distinct elements.
bool set_image_check(const Branch& b, const PrecisionContext& ctx);

}  // namespace zetadyn::orbit
