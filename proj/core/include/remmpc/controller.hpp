#pragma once

#include <vector>

#include "remmpc/qp.hpp"
#include "remmpc/riccati.hpp"

namespace remmpc {
namespace controller {

enum class ControllerKind { ReMpcExact, ReMpcPenalized, ClassicalMpc };

/// How the design matrix is advanced when the step was solved by the QP.
/// FromPenalizedGains applies the penalized update at the penalty-form gain
/// (Algorithm-style, the residual term carries weight mu); FromExactGains
/// applies the residual-free update at the closed-form gain.
enum class UpdateRule { FromPenalizedGains, FromExactGains };

struct ControllerOptions {
  ControllerKind kind = ControllerKind::ReMpcExact;
  double mu = 1e3;  // used by ReMpcPenalized and by FromPenalizedGains updates
  UpdateRule update_rule = UpdateRule::FromExactGains;
  bool warm_start = true;  // reuse the previous step's QP active set
  qp::SolverOptions qp_options{};

  static ControllerOptions for_kind(ControllerKind kind, double mu = 1e3);
};

struct StepDiagnostics {
  qp::QpStatus qp_status = qp::QpStatus::Optimal;
  int active_set_size = 0;
  double h1_norm = 0.0;       // Frobenius norm of the design matrix used
  double gain_residual = 0.0; // ||B1 K_X - B2 K_U - Abar||_F at the update gains
  std::vector<Index> active_set;
};

struct StepResult {
  Vec u;       // applied input u_{k|k}
  Vec x_pred;  // first predicted state x_{k+1|k}
  Mat P_next;
  StepDiagnostics diagnostics;
};

/// One receding-horizon step: build the window, solve it (gain path when
/// unconstrained, active-set QP otherwise), extract the first input and
/// predicted state, and advance the design matrix per the controller kind.
StepResult step(const Scenario& scenario, const ControllerOptions& opts, const Vec& x_k,
                const Mat& P_k, const std::vector<Index>& warm_active_set = {});

struct ClosedLoopRun {
  std::vector<Vec> states;           // t_f + 1 entries, states[0] = x0
  std::vector<Vec> inputs;           // t_f entries
  std::vector<Mat> p_history;        // terminal-weight snapshot used at each step
  std::vector<double> h1_norms;      // per step
  std::vector<double> per_step_cost; // ||x_k||_Q^2 + ||u_k||_R^2
  std::vector<qp::QpStatus> solver_statuses;
  std::vector<int> active_set_sizes;
};

/// Iterates step() t_f times from x0; the plant state is always advanced with
/// the true model and the applied input. Throws SolverFailureError carrying
/// the step index on solver failure.
ClosedLoopRun run_closed_loop(const Scenario& scenario, const ControllerOptions& opts);

/// As above, but streams progress into *partial_out so callers can flush what
/// completed before a failure.
ClosedLoopRun run_closed_loop(const Scenario& scenario, const ControllerOptions& opts,
                              ClosedLoopRun* partial_out);

struct RunMetrics {
  Vec mse_per_state;
  double total_cost = 0.0;
  double rc_design_matrix = 0.0;  // percent; 0 when no baseline given
  int steps = 0;
};

/// MSE and total cost over the whole trajectory including the initial state:
///   total_cost = sum_{k=0..t_f} ||x_k||_Q^2 + sum_{k=0..t_f-1} ||u_k||_R^2
///   mse[j] = (1/(t_f+1)) sum_{k=0..t_f} x_j(k)^2
/// rc_design_matrix = mean_k ||H1(k) - H1_baseline(k)||_F / ||H1_baseline(k)||_F * 100,
/// which reduces to the terminal-block deviation since the stage blocks agree.
RunMetrics compute_metrics(const ClosedLoopRun& run, const CostSpec& cost,
                           const ClosedLoopRun* baseline = nullptr);

struct SweepPoint {
  double mu = 0.0;
  RunMetrics metrics;
  ClosedLoopRun run;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // one penalized Re-MPC run per mu
  ClosedLoopRun baseline;          // classical MPC
  RunMetrics baseline_metrics;
};

SweepResult sweep_mu(const Scenario& scenario, const std::vector<double>& mus);

}  // namespace controller
}  // namespace remmpc
