#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

namespace mibbo {

// Thrown when a covariance matrix has lost positive definiteness.
class definiteness_error : public std::runtime_error {
 public:
  definiteness_error(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// (M + M^T) / 2; keeps accumulated asymmetry from drifting into the solvers.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m);

// One eigendecomposition of an SPD matrix, shared by every consumer in an
// iteration: C^{1/2}, C^{-1/2} and the eigenvalue extremes.
struct SpdFactors {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
  double min_eigenvalue;
  double max_eigenvalue;

  double condition_number() const { return max_eigenvalue / min_eigenvalue; }
};

// Decomposes symmetrized(c).  Throws definiteness_error if any eigenvalue is
// not strictly positive.
SpdFactors factorize_spd(const Eigen::MatrixXd& c);

// Symmetric square root S with S * S ~ c.  Convenience wrappers over
// factorize_spd for callers that need a single factor.
Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& c);
Eigen::MatrixXd matrix_inverse_sqrt(const Eigen::MatrixXd& c);

// (min eigenvalue, condition number) of a symmetric matrix.  Does not require
// definiteness; a non-positive spectrum is reported as-is.
std::pair<double, double> eigen_extremes(const Eigen::MatrixXd& c);

}  // namespace mibbo
