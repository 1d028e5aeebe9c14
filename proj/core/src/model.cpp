#include "remmpc/model.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <sstream>

namespace remmpc {

void LtiSystem::validate() const {
  if (A.rows() != A.cols()) {
    throw DimensionMismatchError("LtiSystem: A must be square");
  }
  if (B.rows() != A.rows()) {
    throw DimensionMismatchError("LtiSystem: B row count must equal the state dimension");
  }
  if (!A.allFinite() || !B.allFinite()) {
    throw DimensionMismatchError("LtiSystem: matrices contain non-finite entries");
  }
}

void CostSpec::validate(Index n, Index m, double tol) const {
  if (Q.rows() != n || Q.cols() != n) {
    throw DimensionMismatchError("CostSpec: Q must be n x n");
  }
  if (R.rows() != m || R.cols() != m) {
    throw DimensionMismatchError("CostSpec: R must be m x m");
  }
  if (P_terminal.rows() != n || P_terminal.cols() != n) {
    throw DimensionMismatchError("CostSpec: P_terminal must be n x n");
  }
  if (matops::definiteness(Q, tol) == DefinitenessClass::Indefinite) {
    throw NotPdError("CostSpec: Q must be positive semidefinite");
  }
  if (!matops::is_pd(R, tol)) {
    throw NotPdError("CostSpec: R must be positive definite");
  }
  if (!matops::is_pd(P_terminal, tol)) {
    throw NotPdError("CostSpec: P_terminal must be positive definite");
  }
}

std::pair<Mat, Vec> box_to_polytope(const Vec& lower, const Vec& upper) {
  if (lower.size() != upper.size()) {
    throw DimensionMismatchError("box_to_polytope: bound vectors differ in length");
  }
  const Index d = lower.size();
  for (Index i = 0; i < d; ++i) {
    if (lower(i) > upper(i)) {
      std::ostringstream oss;
      oss << "box_to_polytope: empty box, lower(" << i << ") = " << lower(i)
          << " > upper(" << i << ") = " << upper(i);
      throw EmptyBoxError(oss.str());
    }
  }
  Mat F(2 * d, d);
  F << Mat::Identity(d, d), -Mat::Identity(d, d);
  Vec g(2 * d);
  g << upper, -lower;
  return {F, g};
}

BoxConstraints BoxConstraints::from_bounds(const Vec& x_lower, const Vec& x_upper,
                                           const Vec& u_lower, const Vec& u_upper) {
  BoxConstraints c;
  std::tie(c.F_x, c.g_x) = box_to_polytope(x_lower, x_upper);
  std::tie(c.F_u, c.g_u) = box_to_polytope(u_lower, u_upper);
  c.x_lower = x_lower;
  c.x_upper = x_upper;
  c.u_lower = u_lower;
  c.u_upper = u_upper;
  return c;
}

bool BoxConstraints::state_feasible(const Vec& x, double tol) const {
  return ((F_x * x - g_x).array() <= tol).all();
}

bool BoxConstraints::input_feasible(const Vec& u, double tol) const {
  return ((F_u * u - g_u).array() <= tol).all();
}

void Scenario::validate() const {
  system.validate();
  cost.validate(system.n(), system.m());
  if (x0.size() != system.n()) {
    throw DimensionMismatchError("Scenario: x0 length must equal the state dimension");
  }
  if (l < 1 || t_f < l) {
    throw DimensionMismatchError("Scenario: requires 0 < l <= t_f");
  }
  if (!(mu > 0.0)) {
    throw DimensionMismatchError("Scenario: mu must be positive");
  }
  if (constraints) {
    const Index n = system.n(), m = system.m();
    if (constraints->F_x.cols() != n || constraints->F_u.cols() != m ||
        constraints->F_x.rows() != constraints->g_x.size() ||
        constraints->F_u.rows() != constraints->g_u.size()) {
      throw DimensionMismatchError("Scenario: constraint shapes inconsistent with system");
    }
  }
}

bool check_controllability(const LtiSystem& sys, double tol) {
  sys.validate();
  const Index n = sys.n(), m = sys.m();
  Mat ctrb(n, n * m);
  Mat AkB = sys.B;
  for (Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * m, m) = AkB;
    AkB = sys.A * AkB;
  }
  return matops::rank_of(ctrb, tol) == n;
}

namespace {

using CMat = Eigen::MatrixXcd;

Index complex_rank(const CMat& M, double tol) {
  Eigen::JacobiSVD<CMat> svd(M);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

}  // namespace

bool check_controllability_pbh(const LtiSystem& sys, double tol) {
  sys.validate();
  const Index n = sys.n(), m = sys.m();
  Eigen::EigenSolver<Mat> es(sys.A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NoConvergenceError("check_controllability_pbh: eigenvalue computation failed");
  }
  for (Index i = 0; i < n; ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    CMat pencil(n, n + m);
    pencil << z * CMat::Identity(n, n) - sys.A.cast<std::complex<double>>(),
        sys.B.cast<std::complex<double>>();
    if (complex_rank(pencil, tol) < n) return false;
  }
  return true;
}

bool check_detectability(const LtiSystem& sys, const Mat& Q, double tol) {
  sys.validate();
  const Index n = sys.n();
  if (Q.rows() != n || Q.cols() != n) {
    throw DimensionMismatchError("check_detectability: Q must be n x n");
  }
  Eigen::EigenSolver<Mat> es(sys.A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NoConvergenceError("check_detectability: eigenvalue computation failed");
  }
  for (Index i = 0; i < n; ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z) < 1.0 - tol) continue;
    CMat pencil(2 * n, n);
    pencil << z * CMat::Identity(n, n) - sys.A.cast<std::complex<double>>(),
        Q.cast<std::complex<double>>();
    if (complex_rank(pencil, tol) < n) return false;
  }
  return true;
}

}  // namespace remmpc
