#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "mibbo/cma_params.hpp"
#include "mibbo/matrix.hpp"
#include "mibbo/rng.hpp"
#include "mibbo/space.hpp"

namespace mibbo {

// Eigen adapter over MixedIntegerSpace::encode.
Eigen::VectorXd encode_vector(const MixedIntegerSpace& space,
                              const Eigen::VectorXd& v);

enum class Termination {
  success,
  min_eigen,
  ill_conditioned,
  budget_exhausted,
  numerical_error,
};

const char* termination_name(Termination reason);

// Search distribution state.  A is the diagonal of the margin affine matrix;
// it stays at 1 on continuous dimensions and is only modified by the margin
// correction, so a vanilla run keeps A == ones.
struct CmaState {
  Eigen::VectorXd m;
  double sigma = 1.0;
  Eigen::MatrixXd C;
  Eigen::VectorXd p_sigma;
  Eigen::VectorXd p_c;
  Eigen::VectorXd A;
  long t = 0;

  int n() const { return static_cast<int>(m.size()); }
};

CmaState make_initial_state(const Eigen::VectorXd& m0, double sigma0);

// One sampled individual.  x is the point the distribution update sees
// (integer mutation, when active, is added onto x by the caller); v is the
// affinely transformed point whose encoding gets evaluated; y is the pure
// Gaussian step shared by both.
struct Candidate {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd v;
};

// Draws lambda candidates from N(m, sigma^2 C) using the supplied
// factorization of state.C.  y_i = C^{1/2} xi_i, x_i = m + sigma y_i,
// v_i = m + sigma A.*y_i.
std::vector<Candidate> sample_population(const CmaState& state,
                                         const CmaParams& params,
                                         const SpdFactors& factors,
                                         RngStream& rng);

// Ascending stable sort permutation: order[k] is the index of the k-th best
// individual.  Throws std::domain_error naming the individual on NaN.
std::vector<int> rank_by_fitness(const std::vector<double>& fitness);

// One full distribution update (mean, both paths, C, sigma).  `order` comes
// from rank_by_fitness; `factors` is the factorization of state.C that was
// used for sampling.  A non-empty sigma_mask switches the step-size rule to
// the masked variant: the path norm is taken over mask-1 coordinates and
// compared against the expected norm of that many coordinates (an all-zero
// mask leaves sigma unchanged).  Margin correction, when enabled, is applied
// by the caller afterwards.
CmaState update_step(const CmaState& state, const CmaParams& params,
                     const std::vector<Candidate>& population,
                     const std::vector<int>& order, const SpdFactors& factors,
                     std::span<const double> sigma_mask = {});

// Step-size multiplier of the (optionally masked) CSA rule.
double csa_sigma_multiplier(const CmaParams& params,
                            const Eigen::VectorXd& p_sigma_new,
                            std::span<const double> mask);

// Checked in order: success (best_f < 1e-10), minimum eigenvalue of
// sigma^2 C below 1e-30, condition number of C above 1e14, then whether the
// next iteration would exceed the evaluation budget.
std::optional<Termination> termination_check(const CmaState& state,
                                             const SpdFactors& factors,
                                             double best_f, long evals_done,
                                             long budget, int lambda);

}  // namespace mibbo
