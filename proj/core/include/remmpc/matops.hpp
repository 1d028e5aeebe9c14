#pragma once

#include <Eigen/Dense>

#include "remmpc/errors.hpp"

namespace remmpc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

enum class DefinitenessClass { PositiveDefinite, PositiveSemidefinite, Indefinite };

namespace matops {

/// Default relative tolerance used across the dense kernel.
inline constexpr double kDefaultTol = 1e-10;

/// Reciprocal condition threshold below which factorizations are rejected.
inline constexpr double kSingularRcond = 1e-14;

/// Solves M X = RHS with a pivoted LU factorization.
/// Throws SingularMatrixError when the reciprocal condition estimate of M
/// falls below kSingularRcond.
Mat solve(const Mat& M, const Mat& rhs);

/// Moore-Penrose pseudoinverse via SVD with cutoff tol * sigma_max.
Mat pinv(const Mat& M, double tol = kDefaultTol);

/// Classifies a symmetric matrix by its eigenvalue signs.
/// PD iff a pivoted Cholesky succeeds with every pivot above the (scaled)
/// tolerance; PSD iff the minimum eigenvalue is >= -tol * scale.
/// Throws NotSymmetricError when ||M - M^T||_F > tol * ||M||_F.
DefinitenessClass definiteness(const Mat& M, double tol = kDefaultTol);

/// Convenience: true iff definiteness(M, tol) == PositiveDefinite.
bool is_pd(const Mat& M, double tol = kDefaultTol);

/// Maximum eigenvalue magnitude of a square matrix.
double spectral_radius(const Mat& M);

/// Number of singular values above tol * sigma_max.
Index rank_of(const Mat& M, double tol = kDefaultTol);

/// Reciprocal condition estimate from the extreme singular values.
double rcond(const Mat& M);

}  // namespace matops
}  // namespace remmpc
