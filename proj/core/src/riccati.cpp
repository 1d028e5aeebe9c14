#include "remmpc/riccati.hpp"

#include <sstream>

namespace remmpc {
namespace riccati {

namespace {

GainMatrices split_gain(const StackedProblem& sp, const Mat& K) {
  GainMatrices g;
  g.K = K;
  g.K_X = K.topRows(sp.ln());
  g.K_U = K.bottomRows(sp.lm());
  return g;
}

Mat steady_state_map(const LtiSystem& sys, const CostSpec& cost, Index l, const Mat& P) {
  CostSpec iter_cost = cost;
  iter_cost.P_terminal = P;
  // mu is irrelevant for the exact map; any positive value builds the stacks.
  const StackedProblem sp = build_stacked(sys, iter_cost, P, l, 1.0);
  const Mat O = sp.B1_bar * matops::solve(sp.Q_bar, Mat(sp.B1_bar.transpose())) +
                sp.B2_bar * matops::solve(sp.R_bar, Mat(sp.B2_bar.transpose()));
  Mat Pn = sp.A_bar.transpose() * matops::solve(O, sp.A_bar) + cost.Q;
  return 0.5 * (Pn + Pn.transpose());
}

}  // namespace

GainMatrices gain_penalized(const StackedProblem& sp, double mu) {
  if (!(mu > 0.0)) throw DimensionMismatchError("gain_penalized: mu must be positive");
  const Index d = sp.decision_size();
  const Index n = sp.n, ln = sp.ln();
  const Index rows = sp.script_B.rows();  // d + n + ln

  // Inverse of the augmented weight blockdiag(H1, Q, mu*I), assembled
  // blockwise so the 1/mu block stays exact for very large mu.
  Mat Hinv = Mat::Zero(rows, rows);
  try {
    Hinv.topLeftCorner(d, d) = matops::solve(sp.H1, Mat::Identity(d, d));
  } catch (const SingularMatrixError&) {
    Hinv.topLeftCorner(d, d) = matops::pinv(sp.H1);
  }
  switch (matops::definiteness(sp.Q)) {
    case DefinitenessClass::PositiveDefinite:
      Hinv.block(d, d, n, n) = matops::solve(sp.Q, Mat::Identity(n, n));
      break;
    default:
      Hinv.block(d, d, n, n) = matops::pinv(sp.Q);
      break;
  }
  Hinv.bottomRightCorner(ln, ln) = (1.0 / mu) * Mat::Identity(ln, ln);

  Mat saddle = Mat::Zero(rows + d, rows + d);
  saddle.topLeftCorner(rows, rows) = Hinv;
  saddle.topRightCorner(rows, d) = sp.script_B;
  saddle.bottomLeftCorner(d, rows) = sp.script_B.transpose();
  Mat rhs = Mat::Zero(rows + d, sp.n);
  rhs.topRows(rows) = sp.script_A;

  Mat K;
  try {
    K = matops::solve(saddle, rhs).bottomRows(d);
  } catch (const SingularMatrixError&) {
    throw SingularKktError("gain_penalized: bordered system singular (rank failure of script_B)");
  }
  return split_gain(sp, K);
}

GainMatrices gain_exact(const StackedProblem& sp) {
  const Mat O = sp.B1_bar * matops::solve(sp.Q_bar, Mat(sp.B1_bar.transpose())) +
                sp.B2_bar * matops::solve(sp.R_bar, Mat(sp.B2_bar.transpose()));
  Mat lambda;
  try {
    lambda = matops::solve(O, sp.A_bar);  // O^{-1} Abar
  } catch (const SingularMatrixError&) {
    throw SingularKktError("gain_exact: O matrix singular (rank deficiency of [B1 -B2])");
  }
  GainMatrices g;
  g.K_X = matops::solve(sp.Q_bar, Mat(sp.B1_bar.transpose() * lambda));
  g.K_U = -matops::solve(sp.R_bar, Mat(sp.B2_bar.transpose() * lambda));
  g.K = Mat(sp.decision_size(), sp.n);
  g.K << g.K_X, g.K_U;
  return g;
}

RiccatiState update_design_matrix_penalized(const StackedProblem& sp,
                                            const GainMatrices& gains, double mu) {
  const Mat res = sp.B1_bar * gains.K_X - sp.B2_bar * gains.K_U - sp.A_bar;
  Mat P = gains.K.transpose() * sp.H1 * gains.K + sp.Q + mu * res.transpose() * res;
  P = 0.5 * (P + P.transpose());
  if (!matops::is_pd(P)) {
    throw NotPdError("update_design_matrix_penalized: updated P is not PD");
  }
  return {P, 1, res.norm()};
}

RiccatiState update_design_matrix_exact(const StackedProblem& sp,
                                        const GainMatrices& gains) {
  Mat P = gains.K_X.transpose() * sp.Q_bar * gains.K_X +
          gains.K_U.transpose() * sp.R_bar * gains.K_U + sp.Q;
  P = 0.5 * (P + P.transpose());
  if (!matops::is_pd(P)) {
    throw NotPdError("update_design_matrix_exact: updated P is not PD");
  }
  return {P, 1, 0.0};
}

RiccatiState solve_steady_state(const LtiSystem& sys, const CostSpec& cost, Index l,
                                double tol, int max_iter, const std::optional<Mat>& P0) {
  if (!check_controllability(sys)) {
    throw AssumptionViolatedError("solve_steady_state: system is not controllable");
  }
  if (!check_detectability(sys, cost.Q)) {
    throw AssumptionViolatedError("solve_steady_state: (A, Q) is not detectable");
  }
  Mat P = P0.value_or(cost.Q);
  if (!matops::is_pd(P)) {
    P = P + Mat::Identity(P.rows(), P.cols());
  }
  for (int it = 1; it <= max_iter; ++it) {
    const Mat Pn = steady_state_map(sys, cost, l, P);
    const double res = (Pn - P).norm();
    if (res <= tol * Pn.norm()) {
      if (!matops::is_pd(Pn)) {
        throw NotPdError("solve_steady_state: fixed point is not PD");
      }
      return {Pn, it, res};
    }
    P = Pn;
  }
  std::ostringstream oss;
  oss << "solve_steady_state: no convergence after " << max_iter << " iterations";
  throw NoConvergenceError(oss.str());
}

RiccatiState solve_dare(const LtiSystem& sys, const Mat& Q, const Mat& R, double tol,
                        int max_iter) {
  if (!check_controllability(sys)) {
    throw AssumptionViolatedError("solve_dare: system is not controllable");
  }
  if (!check_detectability(sys, Q)) {
    throw AssumptionViolatedError("solve_dare: (A, Q) is not detectable");
  }
  const Mat& A = sys.A;
  const Mat& B = sys.B;
  Mat P = Q;
  for (int it = 1; it <= max_iter; ++it) {
    const Mat BtP = B.transpose() * P;
    Mat Pn = A.transpose() * P * A -
             (BtP * A).transpose() * matops::solve(R + BtP * B, Mat(BtP * A)) + Q;
    Pn = 0.5 * (Pn + Pn.transpose());
    const double res = (Pn - P).norm();
    if (res <= tol * Pn.norm()) {
      if (!matops::is_pd(Pn)) {
        throw NotPdError("solve_dare: fixed point is not PD");
      }
      return {Pn, it, res};
    }
    P = Pn;
  }
  std::ostringstream oss;
  oss << "solve_dare: no convergence after " << max_iter << " iterations";
  throw NoConvergenceError(oss.str());
}

}  // namespace riccati
}  // namespace remmpc
