#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "remmpc/riccati.hpp"

namespace remmpc {
namespace analysis {

struct CertificationReport {
  bool passed = false;
  std::string name;
  std::string summary;
  std::vector<std::string> details;
  std::uint64_t seed = 0;
};

/// Reproducible random-system generator used by the certifications and tests.
/// A has entries uniform in [-1, 1] rescaled to target_rho; B, Q, R are drawn
/// until the requested assumption class holds.
struct RandomSystemGenerator {
  std::mt19937_64 rng;

  explicit RandomSystemGenerator(std::uint64_t seed) : rng(seed) {}

  Mat random_matrix(Index rows, Index cols, double lo = -1.0, double hi = 1.0);
  Mat random_spd(Index n, double shift = 0.1);
  /// Square A rescaled so its spectral radius equals target_rho.
  Mat random_a(Index n, double target_rho);
  /// Controllable (A, B); redraws until the Kalman rank test passes.
  LtiSystem controllable_system(Index n, Index m, double target_rho);
};

/// Runs solve_steady_state from `trials` random PD initializations and checks
/// all converge to the same symmetric PD matrix within rel_tol.
CertificationReport certify_pd_fixed_point(const LtiSystem& sys, const CostSpec& cost,
                                           Index l, int trials = 20,
                                           std::uint64_t seed = 20240817,
                                           double rel_tol = 1e-7);

/// Computes the steady-state P, forms the closed-loop block gains of the
/// stacked solution, and asserts every spectral radius is below one.
CertificationReport certify_stability(const LtiSystem& sys, const CostSpec& cost, Index l);

/// Fits log||gain_penalized(mu) - gain_exact|| against log mu and asserts the
/// slope is in [-1.3, -0.7]; also requires the dynamics residual to shrink
/// with mu. Needs at least 3 grid points.
CertificationReport certify_mu_limit(const StackedProblem& sp,
                                     const std::vector<double>& mu_grid);

}  // namespace analysis
}  // namespace remmpc
