#include "remmpc/qp.hpp"

#include <algorithm>
#include <limits>

namespace remmpc {
namespace qp {

namespace {

// Solves [[2H, A^T], [A, 0]] [x; y] = [b1; b2].
// Returns false when the KKT matrix is numerically singular.
bool kkt_solve(const Mat& H, const Mat& A, const Vec& b1, const Vec& b2, Vec* x, Vec* y) {
  const Index nv = H.rows(), nc = A.rows();
  Mat kkt = Mat::Zero(nv + nc, nv + nc);
  kkt.topLeftCorner(nv, nv) = 2.0 * H;
  if (nc > 0) {
    kkt.topRightCorner(nv, nc) = A.transpose();
    kkt.bottomLeftCorner(nc, nv) = A;
  }
  Vec rhs(nv + nc);
  rhs.head(nv) = b1;
  rhs.tail(nc) = b2;
  try {
    const Vec sol = matops::solve(kkt, rhs);
    *x = sol.head(nv);
    *y = sol.tail(nc);
  } catch (const SingularMatrixError&) {
    return false;
  }
  return true;
}

struct CoreResult {
  Vec x;
  std::vector<Index> working;
  Vec eq_mult;
  Vec work_mult;  // aligned with `working`
  QpStatus status = QpStatus::Optimal;
  int iterations = 0;
};

Mat stack_rows(const Mat& Aeq, const Mat& F, const std::vector<Index>& working) {
  Mat A(Aeq.rows() + static_cast<Index>(working.size()), Aeq.cols());
  A.topRows(Aeq.rows()) = Aeq;
  for (size_t i = 0; i < working.size(); ++i) {
    A.row(Aeq.rows() + static_cast<Index>(i)) = F.row(working[i]);
  }
  return A;
}

// Primal active-set iteration from a feasible starting point.
CoreResult active_set_core(const Mat& H, const Mat& Aeq, const Mat& F, const Vec& g,
                           Vec x, std::vector<Index> working, const SolverOptions& opts) {
  const Index neq = Aeq.rows();
  const Index ni = F.rows();
  const int max_iter = std::max<int>(10, 3 * static_cast<int>(ni));

  CoreResult out;
  std::vector<bool> in_working(ni, false);
  for (Index i : working) in_working[i] = true;

  for (int iter = 1; iter <= max_iter; ++iter) {
    out.iterations = iter;
    const Mat A = stack_rows(Aeq, F, working);
    Vec d, y;
    if (!kkt_solve(H, A, Vec(-2.0 * H * x), Vec::Zero(A.rows()), &d, &y)) {
      throw SingularKktError("solve_qp: working-set KKT system singular");
    }
    const double step_scale = 1.0 + x.cwiseAbs().maxCoeff();
    if (d.cwiseAbs().maxCoeff() <= opts.step_tol * step_scale) {
      // Stationary on the working set; check dual feasibility.
      Index worst = -1;
      double worst_val = -opts.dual_tol;
      for (size_t i = 0; i < working.size(); ++i) {
        const double lam = y(neq + static_cast<Index>(i));
        if (lam < worst_val) {
          worst_val = lam;
          worst = static_cast<Index>(i);
        }
      }
      if (worst < 0) {
        out.x = x;
        out.working = working;
        out.eq_mult = y.head(neq);
        out.work_mult = y.tail(static_cast<Index>(working.size()));
        out.status = QpStatus::Optimal;
        return out;
      }
      in_working[working[worst]] = false;
      working.erase(working.begin() + worst);
      continue;
    }

    // Longest feasible step along d; lowest-index tie-breaking.
    double alpha = 1.0;
    Index blocking = -1;
    for (Index i = 0; i < ni; ++i) {
      if (in_working[i]) continue;
      const double fd = F.row(i).dot(d);
      if (fd <= opts.step_tol) continue;
      const double slack = g(i) - F.row(i).dot(x);
      const double a = std::max(slack, 0.0) / fd;
      if (a < alpha - 1e-14) {
        alpha = a;
        blocking = i;
      }
    }
    x += alpha * d;
    if (blocking >= 0) {
      // Keep [Aeq; F_W] full row rank; skip dependent additions.
      std::vector<Index> trial = working;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), blocking), blocking);
      const Mat A_trial = stack_rows(Aeq, F, trial);
      if (matops::rank_of(A_trial, 1e-12) == A_trial.rows()) {
        working = std::move(trial);
        in_working[blocking] = true;
      }
    }
  }
  out.x = x;
  out.working = working;
  out.eq_mult = Vec::Zero(neq);
  out.work_mult = Vec::Zero(static_cast<Index>(working.size()));
  out.status = QpStatus::IterationLimit;
  return out;
}

QpSolution finish(const QpProblem& p, const CoreResult& core) {
  QpSolution s;
  s.ubar = core.x;
  s.active_set = core.working;
  s.objective = core.x.dot(p.H * core.x);
  s.status = core.status;
  s.eq_multipliers = core.eq_mult;
  s.ineq_multipliers = Vec::Zero(p.num_ineq());
  for (size_t i = 0; i < core.working.size(); ++i) {
    s.ineq_multipliers(core.working[i]) = core.work_mult(static_cast<Index>(i));
  }
  s.iterations = core.iterations;
  return s;
}

}  // namespace

QpSolution solve_eq_qp(const QpProblem& p, const SolverOptions& opts) {
  const Index nv = p.num_vars();
  QpSolution s;
  if (p.num_eq() == 0) {
    s.ubar = Vec::Zero(nv);
    s.eq_multipliers = Vec(0);
  } else {
    Vec x, y;
    if (!kkt_solve(p.H, p.Aeq, Vec::Zero(nv), p.beq, &x, &y)) {
      throw SingularKktError("solve_eq_qp: KKT matrix singular");
    }
    s.ubar = x;
    s.eq_multipliers = y;
  }
  s.ineq_multipliers = Vec::Zero(p.num_ineq());
  s.objective = s.ubar.dot(p.H * s.ubar);
  s.status = QpStatus::Optimal;
  s.iterations = 1;
  (void)opts;
  return s;
}

QpSolution ActiveSetSolver::solve(const QpProblem& p,
                                  const std::vector<Index>& warm_start_active_set) const {
  const Index nv = p.num_vars();
  const Index ni = p.num_ineq();
  if (p.Aeq.rows() > 0 && p.Aeq.cols() != nv) {
    throw DimensionMismatchError("solve_qp: Aeq column count does not match H");
  }
  if (ni > 0 && p.Fineq.cols() != nv) {
    throw DimensionMismatchError("solve_qp: Fineq column count does not match H");
  }
  if (ni == 0) return solve_eq_qp(p, opts_);

  const auto violation = [&](const Vec& x) {
    return (p.Fineq * x - p.gineq).maxCoeff();
  };

  // Warm start: re-anchor on the previous active set when it still yields a
  // feasible stationary point.
  if (!warm_start_active_set.empty()) {
    std::vector<Index> ws;
    for (Index i : warm_start_active_set) {
      if (i < 0 || i >= ni) continue;
      std::vector<Index> trial = ws;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), i), i);
      const Mat A_trial = stack_rows(p.Aeq, p.Fineq, trial);
      if (matops::rank_of(A_trial, 1e-12) == A_trial.rows()) ws = std::move(trial);
    }
    const Mat A = stack_rows(p.Aeq, p.Fineq, ws);
    Vec rhs(A.rows());
    rhs.head(p.num_eq()) = p.beq;
    for (size_t i = 0; i < ws.size(); ++i) {
      rhs(p.num_eq() + static_cast<Index>(i)) = p.gineq(ws[i]);
    }
    Vec x, y;
    if (kkt_solve(p.H, A, Vec::Zero(nv), rhs, &x, &y) &&
        violation(x) <= opts_.feas_tol) {
      return finish(p, active_set_core(p.H, p.Aeq, p.Fineq, p.gineq, x, ws, opts_));
    }
  }

  // Cold start from the equality-constrained minimizer.
  Vec x0;
  {
    const QpSolution eq = solve_eq_qp(p, opts_);
    x0 = eq.ubar;
  }

  if (violation(x0) > opts_.feas_tol) {
    // Phase 1: minimize slack energy over Aeq x = beq, F x - s <= g.
    const Index nz = nv + ni;
    QpProblem ph;
    ph.H = Mat::Zero(nz, nz);
    // The x-block regularization must stay far below feas_tol: it biases the
    // phase-1 minimizer off the constraint surface by O(eps * |x|).
    ph.H.topLeftCorner(nv, nv) = 1e-12 * Mat::Identity(nv, nv);
    ph.H.bottomRightCorner(ni, ni) = Mat::Identity(ni, ni);
    ph.Aeq = Mat::Zero(p.num_eq(), nz);
    ph.Aeq.leftCols(nv) = p.Aeq;
    ph.beq = p.beq;
    ph.Fineq = Mat::Zero(ni, nz);
    ph.Fineq.leftCols(nv) = p.Fineq;
    ph.Fineq.rightCols(ni) = -Mat::Identity(ni, ni);
    ph.gineq = p.gineq;

    Vec z0 = Vec::Zero(nz);
    z0.head(nv) = x0;
    const Vec slack0 = (p.Fineq * x0 - p.gineq).cwiseMax(0.0).array() + 1.0;
    z0.tail(ni) = slack0;

    const CoreResult ph_res =
        active_set_core(ph.H, ph.Aeq, ph.Fineq, ph.gineq, z0, {}, opts_);
    x0 = ph_res.x.head(nv);
    const double v = violation(x0);
    if (v > opts_.feas_tol * (1.0 + p.gineq.cwiseAbs().maxCoeff())) {
      QpSolution s;
      s.ubar = x0;
      s.objective = std::numeric_limits<double>::quiet_NaN();
      s.status = QpStatus::Infeasible;
      s.eq_multipliers = Vec::Zero(p.num_eq());
      s.ineq_multipliers = Vec::Zero(ni);
      s.iterations = ph_res.iterations;
      return s;
    }
  }

  return finish(p, active_set_core(p.H, p.Aeq, p.Fineq, p.gineq, x0, {}, opts_));
}

QpSolution solve_qp(const QpProblem& p, const SolverOptions& opts) {
  return ActiveSetSolver(opts).solve(p);
}

bool check_kkt(const QpProblem& p, const QpSolution& s, double tol) {
  if (s.status != QpStatus::Optimal) return false;
  const Vec& x = s.ubar;
  const double scale = 1.0 + x.norm();

  Vec stat = 2.0 * p.H * x;
  if (p.num_eq() > 0) stat += p.Aeq.transpose() * s.eq_multipliers;
  if (p.num_ineq() > 0) stat += p.Fineq.transpose() * s.ineq_multipliers;
  if (stat.cwiseAbs().maxCoeff() > tol * scale) return false;

  if (p.num_eq() > 0 && (p.Aeq * x - p.beq).cwiseAbs().maxCoeff() > tol * scale) {
    return false;
  }
  if (p.num_ineq() > 0) {
    const Vec slack = p.gineq - p.Fineq * x;
    if (slack.minCoeff() < -tol * scale) return false;
    for (Index i = 0; i < p.num_ineq(); ++i) {
      if (s.ineq_multipliers(i) < -tol) return false;
      if (std::abs(s.ineq_multipliers(i) * slack(i)) > tol * scale) return false;
    }
  }
  return true;
}

}  // namespace qp
}  // namespace remmpc
