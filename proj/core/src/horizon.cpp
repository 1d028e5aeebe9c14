#include "remmpc/horizon.hpp"

namespace remmpc {

StackedDecision StackedProblem::split(const Vec& ubar) const {
  if (ubar.size() != decision_size()) {
    throw DimensionMismatchError("split: decision vector has wrong length");
  }
  return {ubar.head(ln()), ubar.tail(lm())};
}

StackedProblem build_stacked(const LtiSystem& sys, const CostSpec& cost,
                             const Mat& P_current, Index l, double mu,
                             const std::optional<BoxConstraints>& constraints) {
  sys.validate();
  cost.validate(sys.n(), sys.m());
  if (l < 1) throw DimensionMismatchError("build_stacked: l must be >= 1");
  if (!(mu > 0.0)) throw DimensionMismatchError("build_stacked: mu must be positive");
  if (P_current.rows() != sys.n() || P_current.cols() != sys.n()) {
    throw DimensionMismatchError("build_stacked: P_current must be n x n");
  }
  if (!matops::is_pd(P_current)) {
    throw NotPdError("build_stacked: P_current must be symmetric positive definite");
  }

  StackedProblem sp;
  sp.l = l;
  sp.n = sys.n();
  sp.m = sys.m();
  sp.mu = mu;
  sp.Q = cost.Q;
  const Index n = sp.n, m = sp.m, ln = sp.ln(), lm = sp.lm();

  sp.A_bar = Mat::Zero(ln, n);
  sp.A_bar.topRows(n) = sys.A;

  sp.A_tilde = Mat::Zero(ln, ln);
  for (Index i = 1; i < l; ++i) {
    sp.A_tilde.block(i * n, (i - 1) * n, n, n) = sys.A;
  }
  sp.B1_bar = Mat::Identity(ln, ln) - sp.A_tilde;

  sp.B2_bar = Mat::Zero(ln, lm);
  for (Index i = 0; i < l; ++i) {
    sp.B2_bar.block(i * n, i * m, n, m) = sys.B;
  }

  sp.Q_bar = Mat::Zero(ln, ln);
  for (Index i = 0; i < l - 1; ++i) {
    sp.Q_bar.block(i * n, i * n, n, n) = cost.Q;
  }
  sp.Q_bar.bottomRightCorner(n, n) = P_current;

  sp.R_bar = Mat::Zero(lm, lm);
  for (Index i = 0; i < l; ++i) {
    sp.R_bar.block(i * m, i * m, m, m) = cost.R;
  }

  sp.H1 = Mat::Zero(ln + lm, ln + lm);
  sp.H1.topLeftCorner(ln, ln) = sp.Q_bar;
  sp.H1.bottomRightCorner(lm, lm) = sp.R_bar;

  sp.H2 = Mat::Zero(n + ln, n + ln);
  sp.H2.topLeftCorner(n, n) = cost.Q;
  sp.H2.bottomRightCorner(ln, ln) = mu * Mat::Identity(ln, ln);

  sp.Aeq = Mat(ln, ln + lm);
  sp.Aeq << sp.B1_bar, -sp.B2_bar;

  // script_A = col{0, -I, A_bar}; script_B = col{I, [0 0; B1_bar -B2_bar]}.
  sp.script_A = Mat::Zero(ln + lm + n + ln, n);
  sp.script_A.block(ln + lm, 0, n, n) = -Mat::Identity(n, n);
  sp.script_A.bottomRows(ln) = sp.A_bar;

  sp.script_B = Mat::Zero(ln + lm + n + ln, ln + lm);
  sp.script_B.topRows(ln + lm) = Mat::Identity(ln + lm, ln + lm);
  sp.script_B.bottomRows(ln) = sp.Aeq;

  if (constraints) {
    const Mat& Fx = constraints->F_x;
    const Mat& Fu = constraints->F_u;
    if (Fx.cols() != n || Fu.cols() != m) {
      throw DimensionMismatchError("build_stacked: constraint column counts do not match system");
    }
    const Index rx = Fx.rows(), ru = Fu.rows();
    sp.F_bar = Mat::Zero(l * (rx + ru), ln + lm);
    sp.g_bar = Vec(l * (rx + ru));
    for (Index i = 0; i < l; ++i) {
      sp.F_bar.block(i * rx, i * n, rx, n) = Fx;
      sp.g_bar.segment(i * rx, rx) = constraints->g_x;
    }
    for (Index i = 0; i < l; ++i) {
      sp.F_bar.block(l * rx + i * ru, ln + i * m, ru, m) = Fu;
      sp.g_bar.segment(l * rx + i * ru, ru) = constraints->g_u;
    }
    sp.has_constraints = true;
  }

  return sp;
}

Vec dynamics_residual(const StackedProblem& sp, const Vec& x0, const StackedDecision& d) {
  if (x0.size() != sp.n || d.states.size() != sp.ln() || d.inputs.size() != sp.lm()) {
    throw DimensionMismatchError("dynamics_residual: inconsistent shapes");
  }
  return sp.B1_bar * d.states - sp.A_bar * x0 - sp.B2_bar * d.inputs;
}

double stage_cost(const StackedProblem& sp, const Vec& x0, const StackedDecision& d,
                  const Mat& Q) {
  if (x0.size() != sp.n || d.states.size() != sp.ln() || d.inputs.size() != sp.lm()) {
    throw DimensionMismatchError("stage_cost: inconsistent shapes");
  }
  return d.states.dot(sp.Q_bar * d.states) + d.inputs.dot(sp.R_bar * d.inputs) +
         x0.dot(Q * x0);
}

}  // namespace remmpc
