#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "mibbo/cmaes.hpp"
#include "mibbo/space.hpp"

namespace mibbo {

// Diagonal of the granularity matrix S^int: 1 on discrete dimensions, 0 on
// continuous ones in the default configuration.
Eigen::VectorXd default_granularity(const MixedIntegerSpace& space);

// Randomly ordered indices j with 2 sigma sqrt(C_jj) < s_j.  Candidates are
// gathered in ascending j, then Fisher-Yates shuffled, so the rng consumption
// is max(0, |J| - 1) draws.
std::vector<int> mutation_index_set(const CmaState& state,
                                    const Eigen::VectorXd& s, RngStream& rng);

// Number of candidates receiving an integer mutation: 0 when J is empty,
// floor(lambda/2) when every dimension qualifies, otherwise
// min(floor(lambda/10) + |J| + 1, floor(lambda/2) - 1) clamped at 0.
int mutation_count(int j_count, int lambda, int n);

// Integer mutation vectors r_i, one per candidate, all-zero beyond
// lambda_int.  For i <= lambda_int: a one-hot at J[(i-1) mod |J|] plus a
// geometric(0.7^(1/|J|)) bump on every J dimension, with one sign flip per
// vector.  The last candidate instead receives the mean-shift vector
// floor(prev_best_x_j/s_j) - floor(m_j/s_j) on dimensions with s_j > 0, with
// an independent sign per dimension; it is zero at t = 0 when no previous
// best exists.  rng consumption per mutated candidate is |J| geometric draws
// in the order of J plus one sign draw; the mean-shift vector consumes one
// sign draw per s_j > 0 dimension.
std::vector<Eigen::VectorXd> integer_mutation(
    const CmaState& state, const std::vector<int>& J, int lambda_int,
    int lambda, const Eigen::VectorXd& s,
    const std::optional<Eigen::VectorXd>& prev_best_x, RngStream& rng);

// Step-size mask: 0 where 5 sigma sqrt(C_jj) / sqrt(c_sigma) < s_j, else 1.
// Evaluated on the pre-update state, matching the index of C in the rule.
Eigen::VectorXd csa_mask(const CmaState& state, const CmaParams& params,
                         const Eigen::VectorXd& s);

// Masked CSA: sigma multiplier from the mask-1 coordinates of the fresh
// p_sigma against the expected norm over that many coordinates; with every
// coordinate masked out sigma is left unchanged.
double masked_sigma_update(const CmaState& state, const CmaParams& params,
                           const Eigen::VectorXd& p_sigma_new,
                           const Eigen::VectorXd& s);

// Per-dimension optional closed intervals.
struct BoxConstraint {
  std::vector<std::optional<std::pair<double, double>>> bounds;

  bool empty() const { return bounds.empty(); }
};

// Clamps x into the box and returns (x_feasible, ||x_feasible - x||^2 / N).
// The penalized objective value f(encode(x_feasible)) + penalty is the
// evaluation result wherever the box variant is active.
std::pair<Eigen::VectorXd, double> box_penalty(const Eigen::VectorXd& x,
                                               const BoxConstraint& box);

}  // namespace mibbo
