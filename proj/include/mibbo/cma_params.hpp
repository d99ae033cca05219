#pragma once

#include <vector>

namespace mibbo {

// Strategy parameters of the de-facto standard CMA-ES plus the margin
// parameter alpha.  Populated by default_params; all fields are plain data so
// tests can construct variants directly.
struct CmaParams {
  int lambda = 0;
  int mu = 0;
  std::vector<double> weights;  // w_1..w_lambda, negative past mu
  double mu_w = 0.0;
  double mu_w_neg = 0.0;
  double c_m = 1.0;
  double c_sigma = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;
  double c_mu = 0.0;
  double d_sigma = 0.0;
  double alpha = 0.0;

  // Sum over all lambda weights; appears in the covariance decay coefficient.
  double sum_weights = 0.0;
  // Multiplier applied to the negative weight block at construction.
  double negative_weight_scale = 0.0;
};

// Default parameters for dimension n, margin parameter alpha = 1/(n*lambda).
CmaParams default_params(int n);
CmaParams default_params(int n, double alpha);

}  // namespace mibbo
