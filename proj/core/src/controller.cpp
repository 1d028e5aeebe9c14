#include "remmpc/controller.hpp"

#include <cmath>
#include <sstream>

namespace remmpc {
namespace controller {

ControllerOptions ControllerOptions::for_kind(ControllerKind kind, double mu) {
  ControllerOptions opts;
  opts.kind = kind;
  opts.mu = mu;
  opts.update_rule = (kind == ControllerKind::ReMpcPenalized)
                         ? UpdateRule::FromPenalizedGains
                         : UpdateRule::FromExactGains;
  return opts;
}

StepResult step(const Scenario& scenario, const ControllerOptions& opts, const Vec& x_k,
                const Mat& P_k, const std::vector<Index>& warm_active_set) {
  const LtiSystem& sys = scenario.system;
  const StackedProblem sp =
      build_stacked(sys, scenario.cost, P_k, scenario.l, opts.mu, scenario.constraints);
  const Index n = sp.n, m = sp.m, ln = sp.ln();

  StepResult out;
  out.diagnostics.h1_norm = sp.H1.norm();

  Vec ubar;
  if (sp.has_constraints) {
    qp::QpProblem prob;
    prob.H = sp.H1;
    prob.Aeq = sp.Aeq;
    prob.beq = sp.A_bar * x_k;
    prob.Fineq = sp.F_bar;
    prob.gineq = sp.g_bar;
    const qp::QpSolution sol =
        qp::ActiveSetSolver(opts.qp_options)
            .solve(prob, opts.warm_start ? warm_active_set : std::vector<Index>{});
    out.diagnostics.qp_status = sol.status;
    out.diagnostics.active_set_size = static_cast<int>(sol.active_set.size());
    out.diagnostics.active_set = sol.active_set;
    if (sol.status != qp::QpStatus::Optimal) {
      out.u = Vec::Zero(m);
      out.x_pred = Vec::Zero(n);
      out.P_next = P_k;
      return out;
    }
    ubar = sol.ubar;
  } else {
    const riccati::GainMatrices gains =
        (opts.kind == ControllerKind::ReMpcPenalized)
            ? riccati::gain_penalized(sp, opts.mu)
            : riccati::gain_exact(sp);
    ubar = gains.K * x_k;
  }

  out.u = ubar.segment(ln, m);
  out.x_pred = ubar.head(n);

  if (opts.kind == ControllerKind::ClassicalMpc) {
    out.P_next = P_k;
  } else if (opts.update_rule == UpdateRule::FromPenalizedGains) {
    const riccati::GainMatrices gains = riccati::gain_penalized(sp, opts.mu);
    const riccati::RiccatiState st =
        riccati::update_design_matrix_penalized(sp, gains, opts.mu);
    out.P_next = st.P;
    out.diagnostics.gain_residual = st.residual;
  } else {
    const riccati::GainMatrices gains = riccati::gain_exact(sp);
    const riccati::RiccatiState st = riccati::update_design_matrix_exact(sp, gains);
    out.P_next = st.P;
    out.diagnostics.gain_residual = st.residual;
  }
  return out;
}

ClosedLoopRun run_closed_loop(const Scenario& scenario, const ControllerOptions& opts,
                              ClosedLoopRun* partial_out) {
  scenario.validate();
  ClosedLoopRun local;
  ClosedLoopRun& run = partial_out ? *partial_out : local;
  run = ClosedLoopRun{};

  Vec x = scenario.x0;
  Mat P = scenario.cost.P_terminal;
  run.states.push_back(x);
  std::vector<Index> warm;

  for (int k = 0; k < scenario.t_f; ++k) {
    StepResult res;
    try {
      res = step(scenario, opts, x, P, warm);
    } catch (const Error& e) {
      std::ostringstream oss;
      oss << "closed loop failed at step " << k << ": " << e.what();
      throw SolverFailureError(oss.str(), k);
    }
    if (res.diagnostics.qp_status != qp::QpStatus::Optimal) {
      std::ostringstream oss;
      oss << "closed loop failed at step " << k << ": QP "
          << (res.diagnostics.qp_status == qp::QpStatus::Infeasible ? "infeasible"
                                                                    : "iteration limit");
      throw SolverFailureError(oss.str(), k);
    }
    run.p_history.push_back(P);
    run.h1_norms.push_back(res.diagnostics.h1_norm);
    run.solver_statuses.push_back(res.diagnostics.qp_status);
    run.active_set_sizes.push_back(res.diagnostics.active_set_size);
    run.per_step_cost.push_back(x.dot(scenario.cost.Q * x) +
                                res.u.dot(scenario.cost.R * res.u));
    warm = res.diagnostics.active_set;

    // The plant always propagates with the true model.
    x = scenario.system.A * x + scenario.system.B * res.u;
    run.inputs.push_back(res.u);
    run.states.push_back(x);
    P = res.P_next;
  }
  if (partial_out) return *partial_out;
  return run;
}

ClosedLoopRun run_closed_loop(const Scenario& scenario, const ControllerOptions& opts) {
  return run_closed_loop(scenario, opts, nullptr);
}

RunMetrics compute_metrics(const ClosedLoopRun& run, const CostSpec& cost,
                           const ClosedLoopRun* baseline) {
  RunMetrics m;
  m.steps = static_cast<int>(run.inputs.size());
  if (run.states.empty()) {
    m.mse_per_state = Vec();
    return m;
  }
  const Index n = run.states.front().size();
  m.mse_per_state = Vec::Zero(n);
  for (const Vec& x : run.states) {
    m.mse_per_state += x.cwiseAbs2();
    m.total_cost += x.dot(cost.Q * x);
  }
  m.mse_per_state /= static_cast<double>(run.states.size());
  for (const Vec& u : run.inputs) {
    m.total_cost += u.dot(cost.R * u);
  }

  if (baseline) {
    if (baseline->p_history.size() != run.p_history.size()) {
      throw LengthMismatchError("compute_metrics: baseline run length differs");
    }
    double acc = 0.0;
    for (size_t k = 0; k < run.p_history.size(); ++k) {
      // Stage blocks of H1 agree, so the deviation is the terminal block's.
      acc += (run.p_history[k] - baseline->p_history[k]).norm() / baseline->h1_norms[k];
    }
    if (!run.p_history.empty()) {
      m.rc_design_matrix = 100.0 * acc / static_cast<double>(run.p_history.size());
    }
  }
  return m;
}

SweepResult sweep_mu(const Scenario& scenario, const std::vector<double>& mus) {
  for (double mu : mus) {
    if (!(mu > 0.0)) throw DimensionMismatchError("sweep_mu: all mu values must be positive");
  }
  SweepResult result;
  result.baseline = run_closed_loop(
      scenario, ControllerOptions::for_kind(ControllerKind::ClassicalMpc));
  result.baseline_metrics = compute_metrics(result.baseline, scenario.cost);
  for (double mu : mus) {
    Scenario s = scenario;
    s.mu = mu;
    SweepPoint pt;
    pt.mu = mu;
    pt.run = run_closed_loop(
        s, ControllerOptions::for_kind(ControllerKind::ReMpcPenalized, mu));
    pt.metrics = compute_metrics(pt.run, scenario.cost, &result.baseline);
    result.points.push_back(std::move(pt));
  }
  return result;
}

}  // namespace controller
}  // namespace remmpc
