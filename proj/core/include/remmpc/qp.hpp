#pragma once

#include <vector>

#include "remmpc/matops.hpp"

namespace remmpc {
namespace qp {

/// min ubar^T H ubar  s.t.  Aeq ubar = beq,  Fineq ubar <= gineq.
struct QpProblem {
  Mat H;  // symmetric PD
  Mat Aeq;
  Vec beq;
  Mat Fineq;
  Vec gineq;

  Index num_vars() const { return H.rows(); }
  Index num_eq() const { return Aeq.rows(); }
  Index num_ineq() const { return Fineq.rows(); }
};

enum class QpStatus { Optimal, Infeasible, IterationLimit };

struct QpSolution {
  Vec ubar;
  std::vector<Index> active_set;  // tight inequality rows, ascending
  double objective = 0.0;
  QpStatus status = QpStatus::Optimal;
  Vec eq_multipliers;
  Vec ineq_multipliers;  // full length, zero off the active set
  int iterations = 0;
};

struct SolverOptions {
  double feas_tol = 1e-9;    // absolute tolerance on constraint residuals
  double dual_tol = 1e-10;   // duals clamped at -dual_tol before sign tests
  double step_tol = 1e-12;
};

/// Equality-constrained minimizer via one symmetric-indefinite KKT solve.
/// Inequalities in p are ignored. Throws SingularKktError.
QpSolution solve_eq_qp(const QpProblem& p, const SolverOptions& opts = {});

/// Primal active-set method with a quadratic Phase 1; deterministic
/// (lowest-index tie-breaking). Iteration budget: 3 * num_ineq working-set
/// changes per phase.
class ActiveSetSolver {
 public:
  explicit ActiveSetSolver(SolverOptions opts = {}) : opts_(opts) {}

  QpSolution solve(const QpProblem& p,
                   const std::vector<Index>& warm_start_active_set = {}) const;

 private:
  SolverOptions opts_;
};

/// Convenience wrapper with default options.
QpSolution solve_qp(const QpProblem& p, const SolverOptions& opts = {});

/// Stationarity, primal and dual feasibility, and complementary slackness
/// of an Optimal solution, each within tol.
bool check_kkt(const QpProblem& p, const QpSolution& s, double tol);

}  // namespace qp
}  // namespace remmpc
