#include "mibbo/matrix.hpp"

#include <cmath>

namespace mibbo {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

SpdFactors factorize_spd(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(c));
  if (solver.info() != Eigen::Success)
    throw definiteness_error("eigendecomposition failed to converge",
                             std::nan(""));
  const Eigen::VectorXd& eig = solver.eigenvalues();
  const double min_eig = eig(0);
  const double max_eig = eig(eig.size() - 1);
  if (!(min_eig > 0.0))
    throw definiteness_error("covariance matrix is not positive definite",
                             min_eig);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  SpdFactors factors;
  factors.sqrt =
      symmetrized(v * eig.cwiseSqrt().asDiagonal() * v.transpose());
  factors.inv_sqrt =
      symmetrized(v * eig.cwiseSqrt().cwiseInverse().asDiagonal() *
                  v.transpose());
  factors.min_eigenvalue = min_eig;
  factors.max_eigenvalue = max_eig;
  return factors;
}

Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& c) {
  return factorize_spd(c).sqrt;
}

Eigen::MatrixXd matrix_inverse_sqrt(const Eigen::MatrixXd& c) {
  return factorize_spd(c).inv_sqrt;
}

std::pair<double, double> eigen_extremes(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(c),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw definiteness_error("eigendecomposition failed to converge",
                             std::nan(""));
  const Eigen::VectorXd& eig = solver.eigenvalues();
  const double min_eig = eig(0);
  const double max_eig = eig(eig.size() - 1);
  return {min_eig, max_eig / min_eig};
}

}  // namespace mibbo
