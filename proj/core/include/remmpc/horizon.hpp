#pragma once

#include <optional>

#include "remmpc/model.hpp"

namespace remmpc {

/// Predicted decision variables in the fixed layout col{X, U}: states first
/// (x_{k+1|k}..x_{k+l|k}), then inputs (u_{k|k}..u_{k+l-1|k}).
struct StackedDecision {
  Vec states;  // l*n
  Vec inputs;  // l*m

  Vec stacked() const {
    Vec v(states.size() + inputs.size());
    v << states, inputs;
    return v;
  }
};

/// All horizon-stacked matrices for one prediction window, built once per step.
///
/// Layout invariants:
///   A_bar  = col{A, 0, ..., 0}                        (l*n x n)
///   A_tilde: A blocks on the first block subdiagonal  (l*n x l*n)
///   B1_bar = I - A_tilde  (unit lower block-triangular, always full rank)
///   B2_bar = blockdiag(B, ..., B)
///   Q_bar  = blockdiag(Q, ..., Q, P_current), R_bar = blockdiag(R, ..., R)
///   H1 = blockdiag(Q_bar, R_bar), H2 = blockdiag(Q, mu*I)
///   Aeq = [B1_bar, -B2_bar], beq = A_bar * x
///   script_A = col{0, -I, A_bar}, script_B = col{I, [0 0; B1_bar -B2_bar]}
///   F_bar = blockdiag(I_l (x) F_x, I_l (x) F_u), g_bar = col{1_l (x) g_x, 1_l (x) g_u}
struct StackedProblem {
  Mat A_bar, A_tilde, B1_bar, B2_bar;
  Mat Q_bar, R_bar, H1, H2;
  Mat Aeq;
  Mat script_A, script_B;
  Mat F_bar;  // empty when no constraints
  Vec g_bar;
  Mat Q;  // stage weight, reused by the design-matrix updates
  Index l = 0, n = 0, m = 0;
  double mu = 0.0;
  bool has_constraints = false;

  Index ln() const { return l * n; }
  Index lm() const { return l * m; }
  Index decision_size() const { return ln() + lm(); }

  StackedDecision split(const Vec& ubar) const;
};

/// Builds every stacked matrix for one window; the terminal block of Q_bar is
/// P_current. Throws DimensionMismatchError on inconsistent shapes and
/// NotPdError when P_current fails the PD test.
StackedProblem build_stacked(const LtiSystem& sys, const CostSpec& cost,
                             const Mat& P_current, Index l, double mu,
                             const std::optional<BoxConstraints>& constraints = std::nullopt);

/// B1_bar * X - A_bar * x0 - B2_bar * U; zero iff the decision is a rollout of
/// the plant from x0.
Vec dynamics_residual(const StackedProblem& sp, const Vec& x0, const StackedDecision& d);

/// X^T Q_bar X + U^T R_bar U + x0^T Q x0 (the window objective).
double stage_cost(const StackedProblem& sp, const Vec& x0, const StackedDecision& d,
                  const Mat& Q);

}  // namespace remmpc
