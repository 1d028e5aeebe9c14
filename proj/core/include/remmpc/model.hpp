#pragma once

#include <optional>
#include <utility>

#include "remmpc/matops.hpp"

namespace remmpc {

/// Discrete-time plant x[k+1] = A x[k] + B u[k].
struct LtiSystem {
  Mat A;  // n x n
  Mat B;  // n x m

  Index n() const { return A.rows(); }
  Index m() const { return B.cols(); }

  /// Throws DimensionMismatchError on inconsistent or non-finite data.
  void validate() const;
};

/// Stage and terminal weights of the quadratic cost.
struct CostSpec {
  Mat Q;           // n x n, symmetric PSD (PD in the paper's examples)
  Mat R;           // m x m, symmetric PD
  Mat P_terminal;  // n x n, symmetric PD

  /// Checks shapes and definiteness classes.
  void validate(Index n, Index m, double tol = matops::kDefaultTol) const;
};

/// Stacked-box polytopes F_x x <= g_x, F_u u <= g_u.
struct BoxConstraints {
  Mat F_x;  // 2n x n
  Vec g_x;  // 2n
  Mat F_u;  // 2m x m
  Vec g_u;  // 2m

  // Raw bounds kept for reporting when the polytope was built from a box.
  std::optional<Vec> x_lower, x_upper, u_lower, u_upper;

  static BoxConstraints from_bounds(const Vec& x_lower, const Vec& x_upper,
                                    const Vec& u_lower, const Vec& u_upper);

  bool state_feasible(const Vec& x, double tol) const;
  bool input_feasible(const Vec& u, double tol) const;
};

/// One benchmark instance: plant, cost, optional constraints, and run settings.
struct Scenario {
  LtiSystem system;
  CostSpec cost;
  std::optional<BoxConstraints> constraints;
  Vec x0;
  int t_f = 0;   // closed-loop steps
  int l = 1;     // prediction horizon
  double mu = 1e3;

  void validate() const;
};

/// {v : Fv <= g} = [lower, upper] with F = stack(I, -I), g = stack(upper, -lower).
/// Throws EmptyBoxError when any lower > upper.
std::pair<Mat, Vec> box_to_polytope(const Vec& lower, const Vec& upper);

/// Kalman rank test: rank([B, AB, ..., A^{n-1}B]) = n.
bool check_controllability(const LtiSystem& sys, double tol = matops::kDefaultTol);

/// PBH grid test over the eigenvalues of A: rank([zI - A, B]) = n for each
/// eigenvalue z of A. Agrees with the Kalman test; kept as a cross-check.
bool check_controllability_pbh(const LtiSystem& sys, double tol = matops::kDefaultTol);

/// Detectability of (A, Q): rank(stack(zI - A, Q)) = n for every eigenvalue z
/// of A with |z| >= 1.
bool check_detectability(const LtiSystem& sys, const Mat& Q,
                         double tol = matops::kDefaultTol);

}  // namespace remmpc
