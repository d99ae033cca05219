#include "mibbo/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mibbo/stats.hpp"

namespace mibbo {

Eigen::VectorXd encode_vector(const MixedIntegerSpace& space,
                              const Eigen::VectorXd& v) {
  const std::vector<double> encoded = space.encode(std::span<const double>(
      v.data(), static_cast<std::size_t>(v.size())));
  return Eigen::Map<const Eigen::VectorXd>(
      encoded.data(), static_cast<Eigen::Index>(encoded.size()));
}

const char* termination_name(Termination reason) {
  switch (reason) {
    case Termination::success: return "success";
    case Termination::min_eigen: return "min_eigen";
    case Termination::ill_conditioned: return "ill_conditioned";
    case Termination::budget_exhausted: return "budget_exhausted";
    case Termination::numerical_error: return "numerical_error";
  }
  return "unknown";
}

CmaState make_initial_state(const Eigen::VectorXd& m0, double sigma0) {
  if (!(sigma0 > 0.0))
    throw std::invalid_argument("make_initial_state: sigma0 must be positive");
  const auto n = m0.size();
  CmaState state;
  state.m = m0;
  state.sigma = sigma0;
  state.C = Eigen::MatrixXd::Identity(n, n);
  state.p_sigma = Eigen::VectorXd::Zero(n);
  state.p_c = Eigen::VectorXd::Zero(n);
  state.A = Eigen::VectorXd::Ones(n);
  state.t = 0;
  return state;
}

std::vector<Candidate> sample_population(const CmaState& state,
                                         const CmaParams& params,
                                         const SpdFactors& factors,
                                         RngStream& rng) {
  const int n = state.n();
  std::vector<Candidate> population;
  population.reserve(static_cast<std::size_t>(params.lambda));
  for (int i = 0; i < params.lambda; ++i) {
    const std::vector<double> draws = standard_normal_vector(rng, n);
    const Eigen::VectorXd xi =
        Eigen::Map<const Eigen::VectorXd>(draws.data(), n);
    Candidate cand;
    cand.y = factors.sqrt * xi;
    cand.x = state.m + state.sigma * cand.y;
    cand.v = state.m + state.sigma * state.A.cwiseProduct(cand.y);
    population.push_back(std::move(cand));
  }
  return population;
}

std::vector<int> rank_by_fitness(const std::vector<double>& fitness) {
  std::vector<int> order(fitness.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (std::isnan(fitness[i]))
      throw std::domain_error("rank_by_fitness: NaN fitness for individual " +
                              std::to_string(i));
    order[i] = static_cast<int>(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return fitness[static_cast<std::size_t>(a)] <
           fitness[static_cast<std::size_t>(b)];
  });
  return order;
}

double csa_sigma_multiplier(const CmaParams& params,
                            const Eigen::VectorXd& p_sigma_new,
                            std::span<const double> mask) {
  const int n = static_cast<int>(p_sigma_new.size());
  // One accumulation order for both paths, so an all-ones mask is bitwise
  // equivalent to no mask.
  double norm_sq = 0.0;
  int active = 0;
  for (int j = 0; j < n; ++j) {
    if (!mask.empty() && mask[static_cast<std::size_t>(j)] == 0.0) continue;
    norm_sq += p_sigma_new(j) * p_sigma_new(j);
    ++active;
  }
  if (active == 0) return 1.0;
  const double ratio = std::sqrt(norm_sq) / expected_norm(active);
  return std::exp(params.c_sigma / params.d_sigma * (ratio - 1.0));
}

CmaState update_step(const CmaState& state, const CmaParams& params,
                     const std::vector<Candidate>& population,
                     const std::vector<int>& order, const SpdFactors& factors,
                     std::span<const double> sigma_mask) {
  const int n = state.n();
  const int lambda = params.lambda;
  if (static_cast<int>(population.size()) != lambda ||
      static_cast<int>(order.size()) != lambda)
    throw std::invalid_argument("update_step: population size mismatch");

  CmaState next = state;

  // Recombination inputs: x for the mean, the pure Gaussian y for paths and C.
  Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd yw = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < params.mu; ++i) {
    const Candidate& cand =
        population[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    const double w = params.weights[static_cast<std::size_t>(i)];
    dx += w * (cand.x - state.m);
    yw += w * cand.y;
  }
  next.m = state.m + params.c_m * dx;

  next.p_sigma = (1.0 - params.c_sigma) * state.p_sigma +
                 std::sqrt(params.c_sigma * (2.0 - params.c_sigma) *
                           params.mu_w) *
                     (factors.inv_sqrt * yw);

  const double decay =
      1.0 - std::pow(1.0 - params.c_sigma, 2.0 * static_cast<double>(state.t + 1));
  const bool h_sigma =
      next.p_sigma.norm() <
      std::sqrt(decay) * (1.4 + 2.0 / (n + 1.0)) * expected_norm(n);

  next.p_c = (1.0 - params.c_c) * state.p_c;
  if (h_sigma)
    next.p_c += std::sqrt(params.c_c * (2.0 - params.c_c) * params.mu_w) * yw;

  const double stall_term =
      h_sigma ? 0.0 : params.c_1 * params.c_c * (2.0 - params.c_c);
  Eigen::MatrixXd c_new =
      (1.0 - params.c_1 - params.c_mu * params.sum_weights + stall_term) *
          state.C +
      params.c_1 * (next.p_c * next.p_c.transpose());
  for (int i = 0; i < lambda; ++i) {
    double w = params.weights[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    const Eigen::VectorXd& y =
        population[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]
            .y;
    if (w < 0.0) {
      const double len_sq = (factors.inv_sqrt * y).squaredNorm();
      if (len_sq <= 0.0) continue;  // zero step carries no rank-mu information
      w *= static_cast<double>(n) / len_sq;
    }
    c_new += params.c_mu * w * (y * y.transpose());
  }
  next.C = symmetrized(c_new);

  next.sigma =
      state.sigma * csa_sigma_multiplier(params, next.p_sigma, sigma_mask);
  next.t = state.t + 1;
  return next;
}

std::optional<Termination> termination_check(const CmaState& state,
                                             const SpdFactors& factors,
                                             double best_f, long evals_done,
                                             long budget, int lambda) {
  if (best_f < 1e-10) return Termination::success;
  if (state.sigma * state.sigma * factors.min_eigenvalue < 1e-30)
    return Termination::min_eigen;
  if (factors.condition_number() > 1e14) return Termination::ill_conditioned;
  if (evals_done + lambda > budget) return Termination::budget_exhausted;
  return std::nullopt;
}

}  // namespace mibbo
