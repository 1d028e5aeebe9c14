#pragma once

#include "remmpc/matops.hpp"

namespace remmpc {
namespace pls {

/// Weighted least squares: argmin_eta (G eta - h)^T W (G eta - h).
struct WlsProblem {
  Mat G;  // n x m, full column rank for the unique-solution contract
  Vec h;  // n
  Mat W;  // n x n symmetric PD (PSD allowed with allow_psd_weight)
};

/// WlsProblem plus an equality constraint F eta = phi.
struct LseProblem {
  WlsProblem base;
  Mat F;    // k x m
  Vec phi;  // k
};

struct WlsOptions {
  /// When true, a PSD weight is handled through the pseudoinverse; otherwise
  /// a non-PD weight raises SingularWeightError.
  bool allow_psd_weight = false;
};

/// Unique minimizer of the weighted least squares problem. Production path is
/// the bordered (saddle-block) solve; the normal-equations form is
/// cross-asserted in debug builds.
Vec solve_wls(const WlsProblem& p, const WlsOptions& opts = {});

/// Method of weighting: stacks the constraint under G with weight mu*I and
/// solves the resulting WLS. Converges to solve_lse_exact as mu grows.
Vec solve_penalized(const LseProblem& p, double mu, const WlsOptions& opts = {});

/// Exact equality-constrained solution via the 3x3 saddle block, no penalty
/// parameter. Throws SingularKktError when the uniqueness condition fails
/// numerically.
Vec solve_lse_exact(const LseProblem& p, const WlsOptions& opts = {});

/// rank(F) = k and rank(col{G, F}) = m.
bool check_lse_uniqueness(const LseProblem& p, double tol = matops::kDefaultTol);

}  // namespace pls
}  // namespace remmpc
