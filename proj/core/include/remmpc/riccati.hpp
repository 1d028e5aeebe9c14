#pragma once

#include "remmpc/horizon.hpp"

namespace remmpc {
namespace riccati {

/// Feedback gain in the col{X, U} layout: Ubar* = K x.
struct GainMatrices {
  Mat K;    // (l*n + l*m) x n
  Mat K_X;  // l*n x n
  Mat K_U;  // l*m x n
};

struct RiccatiState {
  Mat P;               // n x n symmetric PD
  int iterations = 0;
  double residual = 0.0;
};

/// Penalty-form gain: bordered solve on the augmented script matrices with
/// weight blockdiag(H1, Q, mu*I). Dynamics are satisfied up to O(1/mu).
GainMatrices gain_penalized(const StackedProblem& sp, double mu);

/// mu-free closed form: K_X = Qbar^{-1} B1^T O^{-1} Abar,
/// K_U = -Rbar^{-1} B2^T O^{-1} Abar with O = B1 Qbar^{-1} B1^T + B2 Rbar^{-1} B2^T.
/// Satisfies the stacked dynamics exactly. Throws SingularOError via
/// SingularKktError when O is numerically singular.
GainMatrices gain_exact(const StackedProblem& sp);

/// Penalized design-matrix update:
/// P_new = K^T H1 K + Q + mu * Res^T Res with Res = B1 K_X - B2 K_U - Abar,
/// re-symmetrized. residual reports ||Res||_F.
RiccatiState update_design_matrix_penalized(const StackedProblem& sp,
                                            const GainMatrices& gains, double mu);

/// Residual-free update: P_new = K_X^T Qbar K_X + K_U^T Rbar K_U + Q.
RiccatiState update_design_matrix_exact(const StackedProblem& sp,
                                        const GainMatrices& gains);

/// Fixed point of the stacked steady-state map
///   P -> Abar^T (B1 Qbar(P)^{-1} B1^T + B2 Rbar^{-1} B2^T)^{-1} Abar + Q,
/// where Qbar(P) carries P in its terminal block. Iterated from P0 (default Q,
/// projected to PD) with a relative-residual stop.
RiccatiState solve_steady_state(const LtiSystem& sys, const CostSpec& cost, Index l,
                                double tol = 1e-10, int max_iter = 10000,
                                const std::optional<Mat>& P0 = std::nullopt);

/// Standard discrete algebraic Riccati fixed point
///   P = A^T P A - A^T P B (R + B^T P B)^{-1} B^T P A + Q,
/// iterated from P0 = Q.
RiccatiState solve_dare(const LtiSystem& sys, const Mat& Q, const Mat& R,
                        double tol = 1e-10, int max_iter = 10000);

}  // namespace riccati
}  // namespace remmpc
