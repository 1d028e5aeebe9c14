#include "remmpc/pls.hpp"

#include <cassert>

namespace remmpc {
namespace pls {

namespace {

// PD weights go through the bordered solve with W^{-1}; a PSD weight cannot
// (pinv(W) in the bordered block turns zero-weight rows into hard
// constraints instead of dropping them), so PSD callers take the
// normal-equations route.
bool weight_is_pd(const Mat& W, const WlsOptions& opts) {
  switch (matops::definiteness(W)) {
    case DefinitenessClass::PositiveDefinite:
      return true;
    case DefinitenessClass::PositiveSemidefinite:
      if (opts.allow_psd_weight) return false;
      throw SingularWeightError("pls: weight matrix is not PD (PSD path disabled)");
    default:
      throw SingularWeightError("pls: weight matrix is indefinite");
  }
}

}  // namespace

Vec solve_wls(const WlsProblem& p, const WlsOptions& opts) {
  const Index n = p.G.rows(), m = p.G.cols();
  if (p.h.size() != n || p.W.rows() != n || p.W.cols() != n) {
    throw DimensionMismatchError("solve_wls: inconsistent shapes");
  }
  if (matops::rank_of(p.G) < m) {
    throw RankDeficientError("solve_wls: G does not have full column rank");
  }
  if (!weight_is_pd(p.W, opts)) {
    const Mat theta = p.G.transpose() * p.W * p.G;
    if (matops::rank_of(theta) < m) {
      throw RankDeficientError("solve_wls: W^{1/2} G loses column rank");
    }
    return matops::solve(theta, Vec(p.G.transpose() * (p.W * p.h)));
  }

  // Bordered form of the normal equations; better conditioned than forming
  // G^T W G when W carries a large penalty block.
  Mat saddle = Mat::Zero(n + m, n + m);
  saddle.topLeftCorner(n, n) = matops::solve(p.W, Mat::Identity(n, n));
  saddle.topRightCorner(n, m) = p.G;
  saddle.bottomLeftCorner(m, n) = p.G.transpose();
  Vec rhs = Vec::Zero(n + m);
  rhs.head(n) = p.h;

  Vec eta;
  try {
    const Vec sol = matops::solve(saddle, rhs);
    eta = sol.tail(m);
  } catch (const SingularMatrixError& e) {
    throw SingularKktError(std::string("solve_wls: ") + e.what());
  }

#ifndef NDEBUG
  {
    const Mat theta1 = p.G.transpose() * p.W * p.G;
    const double rc = matops::rcond(theta1);
    if (rc > 1e-8) {
      const Vec eta_ne = matops::solve(theta1, Vec(p.G.transpose() * (p.W * p.h)));
      assert((eta - eta_ne).norm() <= 1e-9 * (1.0 + eta_ne.norm()) + 1e-7 * eta_ne.norm());
    }
  }
#endif
  return eta;
}

Vec solve_penalized(const LseProblem& p, double mu, const WlsOptions& opts) {
  if (!(mu > 0.0)) throw DimensionMismatchError("solve_penalized: mu must be positive");
  const Index n = p.base.G.rows(), m = p.base.G.cols(), k = p.F.rows();
  if (k == 0) return solve_wls(p.base, opts);
  if (p.F.cols() != m || p.phi.size() != k) {
    throw DimensionMismatchError("solve_penalized: constraint shapes inconsistent");
  }
  WlsProblem stacked;
  stacked.G = Mat(n + k, m);
  stacked.G << p.base.G, p.F;
  stacked.h = Vec(n + k);
  stacked.h << p.base.h, p.phi;
  stacked.W = Mat::Zero(n + k, n + k);
  stacked.W.topLeftCorner(n, n) = p.base.W;
  stacked.W.bottomRightCorner(k, k) = mu * Mat::Identity(k, k);
  return solve_wls(stacked, opts);
}

Vec solve_lse_exact(const LseProblem& p, const WlsOptions& opts) {
  const Index n = p.base.G.rows(), m = p.base.G.cols(), k = p.F.rows();
  if (p.base.h.size() != n || p.F.cols() != m || p.phi.size() != k) {
    throw DimensionMismatchError("solve_lse_exact: inconsistent shapes");
  }
  if (k == 0) return solve_wls(p.base, opts);

  if (!weight_is_pd(p.base.W, opts)) {
    // Normal-equations saddle: [[G^T W G, F^T], [F, 0]].
    Mat kkt = Mat::Zero(m + k, m + k);
    kkt.topLeftCorner(m, m) = p.base.G.transpose() * p.base.W * p.base.G;
    kkt.topRightCorner(m, k) = p.F.transpose();
    kkt.bottomLeftCorner(k, m) = p.F;
    Vec rhs2 = Vec::Zero(m + k);
    rhs2.head(m) = p.base.G.transpose() * (p.base.W * p.base.h);
    rhs2.tail(k) = p.phi;
    try {
      const Vec sol = matops::solve(kkt, rhs2);
      return sol.head(m);
    } catch (const SingularMatrixError&) {
      throw SingularKktError(
          "solve_lse_exact: KKT matrix numerically singular (uniqueness condition violated?)");
    }
  }

  Mat saddle = Mat::Zero(n + k + m, n + k + m);
  saddle.topLeftCorner(n, n) = matops::solve(p.base.W, Mat::Identity(n, n));
  saddle.block(0, n + k, n, m) = p.base.G;
  saddle.block(n, n + k, k, m) = p.F;
  saddle.block(n + k, 0, m, n) = p.base.G.transpose();
  saddle.block(n + k, n, m, k) = p.F.transpose();
  Vec rhs = Vec::Zero(n + k + m);
  rhs.head(n) = p.base.h;
  rhs.segment(n, k) = p.phi;

  try {
    const Vec sol = matops::solve(saddle, rhs);
    return sol.tail(m);
  } catch (const SingularMatrixError&) {
    throw SingularKktError(
        "solve_lse_exact: saddle matrix numerically singular (uniqueness condition violated?)");
  }
}

bool check_lse_uniqueness(const LseProblem& p, double tol) {
  const Index m = p.base.G.cols(), k = p.F.rows();
  if (k == 0) return matops::rank_of(p.base.G, tol) == m;
  if (matops::rank_of(p.F, tol) < k) return false;
  Mat stacked(p.base.G.rows() + k, m);
  stacked << p.base.G, p.F;
  return matops::rank_of(stacked, tol) == m;
}

}  // namespace pls
}  // namespace remmpc
