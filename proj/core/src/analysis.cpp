#include "remmpc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace remmpc {
namespace analysis {

namespace {

std::string fmt(double v) {
  std::ostringstream oss;
  oss.precision(6);
  oss << v;
  return oss.str();
}

}  // namespace

Mat RandomSystemGenerator::random_matrix(Index rows, Index cols, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Mat M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = dist(rng);
  }
  return M;
}

Mat RandomSystemGenerator::random_spd(Index n, double shift) {
  const Mat G = random_matrix(n, n);
  return G * G.transpose() + shift * Mat::Identity(n, n);
}

Mat RandomSystemGenerator::random_a(Index n, double target_rho) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat A = random_matrix(n, n);
    const double rho = matops::spectral_radius(A);
    if (rho > 1e-8) return A * (target_rho / rho);
  }
  throw NoConvergenceError("random_a: could not draw a matrix with nonzero spectral radius");
}

LtiSystem RandomSystemGenerator::controllable_system(Index n, Index m, double target_rho) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    LtiSystem sys{random_a(n, target_rho), random_matrix(n, m)};
    if (check_controllability(sys)) return sys;
  }
  throw NoConvergenceError("controllable_system: could not draw a controllable pair");
}

CertificationReport certify_pd_fixed_point(const LtiSystem& sys, const CostSpec& cost,
                                           Index l, int trials, std::uint64_t seed,
                                           double rel_tol) {
  CertificationReport rep;
  rep.name = "pd_fixed_point";
  rep.seed = seed;
  RandomSystemGenerator gen(seed);

  double max_dev = 0.0;
  try {
    const riccati::RiccatiState ref = riccati::solve_steady_state(sys, cost, l);
    for (int t = 0; t < trials; ++t) {
      const Mat P0 = gen.random_spd(sys.n());
      const riccati::RiccatiState st = riccati::solve_steady_state(
          sys, cost, l, 1e-12, 20000, P0);
      if (!matops::is_pd(st.P)) {
        rep.summary = "trial " + std::to_string(t) + " returned a non-PD fixed point";
        return rep;
      }
      max_dev = std::max(max_dev, (st.P - ref.P).norm() / ref.P.norm());
    }
  } catch (const Error& e) {
    rep.summary = std::string("steady-state solve rejected: ") + e.what();
    return rep;
  }
  rep.passed = max_dev <= rel_tol;
  rep.summary = "max pairwise relative deviation " + fmt(max_dev) + " over " +
                std::to_string(trials) + " PD initializations (tol " + fmt(rel_tol) + ")";
  return rep;
}

CertificationReport certify_stability(const LtiSystem& sys, const CostSpec& cost, Index l) {
  CertificationReport rep;
  rep.name = "stability";

  riccati::RiccatiState ss;
  try {
    ss = riccati::solve_steady_state(sys, cost, l);
  } catch (const Error& e) {
    rep.summary = std::string("steady-state solve rejected: ") + e.what();
    return rep;
  }
  const Mat& P = ss.P;
  const Index n = sys.n();

  const Mat M = matops::solve(
      Mat(Mat::Identity(n, n) +
          sys.B * matops::solve(cost.R, Mat(sys.B.transpose())) * P),
      sys.A);
  double worst = matops::spectral_radius(M);
  rep.details.push_back("one-step closed-loop spectral radius " + fmt(worst));

  CostSpec ss_cost = cost;
  ss_cost.P_terminal = P;
  const StackedProblem sp = build_stacked(sys, ss_cost, P, l, 1.0);
  const riccati::GainMatrices gains = riccati::gain_exact(sp);
  for (Index j = 0; j < l; ++j) {
    const Mat block = gains.K_X.middleRows(j * n, n);
    const double rho = matops::spectral_radius(block);
    worst = std::max(worst, rho);
    rep.details.push_back("stacked gain block " + std::to_string(j + 1) +
                          " spectral radius " + fmt(rho));
  }
  rep.passed = worst < 1.0;
  rep.summary = "worst spectral radius " + fmt(worst) + ", margin " + fmt(1.0 - worst);
  return rep;
}

CertificationReport certify_mu_limit(const StackedProblem& sp,
                                     const std::vector<double>& mu_grid) {
  if (mu_grid.size() < 3) {
    throw DimensionMismatchError("certify_mu_limit: need at least 3 mu grid points");
  }
  CertificationReport rep;
  rep.name = "mu_limit";

  const riccati::GainMatrices exact = riccati::gain_exact(sp);
  std::vector<double> logs_mu, logs_err;
  double prev_res = std::numeric_limits<double>::infinity();
  bool residual_decreasing = true;
  for (double mu : mu_grid) {
    const riccati::GainMatrices pen = riccati::gain_penalized(sp, mu);
    const double err = (pen.K - exact.K).norm();
    const double res =
        (sp.B1_bar * pen.K_X - sp.B2_bar * pen.K_U - sp.A_bar).norm();
    rep.details.push_back("mu " + fmt(mu) + ": gain error " + fmt(err) +
                          ", dynamics residual " + fmt(res));
    if (res > prev_res * (1.0 + 1e-9)) residual_decreasing = false;
    prev_res = res;
    if (err > 1e-13) {
      logs_mu.push_back(std::log10(mu));
      logs_err.push_back(std::log10(err));
    }
  }
  if (logs_mu.size() < 3) {
    rep.passed = true;
    rep.summary = "gain error at or below numerical noise across the grid";
    return rep;
  }
  const double n = static_cast<double>(logs_mu.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < logs_mu.size(); ++i) {
    sx += logs_mu[i];
    sy += logs_err[i];
    sxx += logs_mu[i] * logs_mu[i];
    sxy += logs_mu[i] * logs_err[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.passed = slope >= -1.3 && slope <= -0.7 && residual_decreasing;
  rep.summary = "fitted log-log slope " + fmt(slope) +
                (residual_decreasing ? "" : " (residual not monotone in mu)");
  return rep;
}

}  // namespace analysis
}  // namespace remmpc
