#include "remmpc/matops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace remmpc {
namespace matops {

Mat solve(const Mat& M, const Mat& rhs) {
  if (M.rows() != M.cols()) {
    throw DimensionMismatchError("solve: matrix must be square");
  }
  if (rhs.rows() != M.rows()) {
    throw DimensionMismatchError("solve: rhs row count does not match matrix order");
  }
  Eigen::FullPivLU<Mat> lu(M);
  const Vec diag = lu.matrixLU().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  if (dmax <= 0.0 || dmin / dmax < kSingularRcond) {
    std::ostringstream oss;
    oss << "solve: matrix numerically singular (rcond estimate "
        << (dmax > 0.0 ? dmin / dmax : 0.0) << ")";
    throw SingularMatrixError(oss.str());
  }
  return lu.solve(rhs);
}

Mat pinv(const Mat& M, double tol) {
  if (M.size() == 0) return Mat(M.cols(), M.rows());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cutoff = tol * (s.size() > 0 ? s(0) : 0.0);
  Vec sinv = Vec::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) sinv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

DefinitenessClass definiteness(const Mat& M, double tol) {
  if (M.rows() != M.cols()) {
    throw DimensionMismatchError("definiteness: matrix must be square");
  }
  const double scale = std::max(M.norm(), 1.0);
  if ((M - M.transpose()).norm() > tol * scale) {
    throw NotSymmetricError("definiteness: matrix is not symmetric to tolerance");
  }
  const Mat S = 0.5 * (M + M.transpose());
  const Index n = S.rows();

  // Unpivoted Cholesky with an explicit pivot threshold.
  const double pivot_tol = tol * std::max(S.diagonal().cwiseAbs().maxCoeff(), 1.0);
  Mat L = Mat::Zero(n, n);
  bool pd = true;
  for (Index j = 0; j < n && pd; ++j) {
    double d = S(j, j) - L.row(j).head(j).squaredNorm();
    if (d <= pivot_tol) {
      pd = false;
      break;
    }
    L(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      L(i, j) = (S(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
  }
  if (pd) return DefinitenessClass::PositiveDefinite;

  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NoConvergenceError("definiteness: eigenvalue computation failed");
  }
  if (es.eigenvalues().minCoeff() >= -tol * scale) {
    return DefinitenessClass::PositiveSemidefinite;
  }
  return DefinitenessClass::Indefinite;
}

bool is_pd(const Mat& M, double tol) {
  return definiteness(M, tol) == DefinitenessClass::PositiveDefinite;
}

double spectral_radius(const Mat& M) {
  if (M.rows() != M.cols()) {
    throw DimensionMismatchError("spectral_radius: matrix must be square");
  }
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NoConvergenceError("spectral_radius: eigenvalue iteration did not converge");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Index rank_of(const Mat& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  const double cutoff = tol * s(0);
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++r;
  }
  return r;
}

double rcond(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  if (s(0) <= 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

}  // namespace matops
}  // namespace remmpc
