#include "mibbo/im.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mibbo {

Eigen::VectorXd default_granularity(const MixedIntegerSpace& space) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(space.size());
  for (int j = 0; j < space.size(); ++j)
    if (space.is_discrete(j)) s(j) = 1.0;
  return s;
}

std::vector<int> mutation_index_set(const CmaState& state,
                                    const Eigen::VectorXd& s, RngStream& rng) {
  std::vector<int> J;
  for (int j = 0; j < state.n(); ++j) {
    if (2.0 * state.sigma * std::sqrt(state.C(j, j)) < s(j)) J.push_back(j);
  }
  shuffle(rng, J);
  return J;
}

int mutation_count(int j_count, int lambda, int n) {
  if (j_count == 0) return 0;
  if (j_count >= n) return lambda / 2;
  return std::max(0, std::min(lambda / 10 + j_count + 1, lambda / 2 - 1));
}

std::vector<Eigen::VectorXd> integer_mutation(
    const CmaState& state, const std::vector<int>& J, int lambda_int,
    int lambda, const Eigen::VectorXd& s,
    const std::optional<Eigen::VectorXd>& prev_best_x, RngStream& rng) {
  const int n = state.n();
  std::vector<Eigen::VectorXd> r(static_cast<std::size_t>(lambda),
                                 Eigen::VectorXd::Zero(n));
  if (lambda_int <= 0 || J.empty()) return r;

  const double p = std::pow(0.7, 1.0 / static_cast<double>(J.size()));
  for (int i = 0; i < lambda_int; ++i) {
    Eigen::VectorXd& ri = r[static_cast<std::size_t>(i)];
    const int hot = J[static_cast<std::size_t>(i) % J.size()];
    ri(hot) += 1.0;
    for (int j : J) ri(j) += static_cast<double>(geometric_sample(rng, p));
    if (rng.next_sign_bit()) ri = -ri;
  }

  if (prev_best_x) {
    Eigen::VectorXd& last = r[static_cast<std::size_t>(lambda - 1)];
    last.setZero();  // lambda_int < lambda, so no overlap with the loop above
    for (int j = 0; j < n; ++j) {
      if (!(s(j) > 0.0)) continue;
      const double step = std::floor((*prev_best_x)(j) / s(j)) -
                          std::floor(state.m(j) / s(j));
      last(j) = rng.next_sign_bit() ? -step : step;
    }
  }
  return r;
}

Eigen::VectorXd csa_mask(const CmaState& state, const CmaParams& params,
                         const Eigen::VectorXd& s) {
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(state.n());
  const double scale = 5.0 * state.sigma / std::sqrt(params.c_sigma);
  for (int j = 0; j < state.n(); ++j)
    if (scale * std::sqrt(state.C(j, j)) < s(j)) mask(j) = 0.0;
  return mask;
}

double masked_sigma_update(const CmaState& state, const CmaParams& params,
                           const Eigen::VectorXd& p_sigma_new,
                           const Eigen::VectorXd& s) {
  const Eigen::VectorXd mask = csa_mask(state, params, s);
  return state.sigma *
         csa_sigma_multiplier(params, p_sigma_new,
                              std::span<const double>(mask.data(),
                                                      static_cast<std::size_t>(
                                                          mask.size())));
}

std::pair<Eigen::VectorXd, double> box_penalty(const Eigen::VectorXd& x,
                                               const BoxConstraint& box) {
  Eigen::VectorXd feasible = x;
  if (!box.empty()) {
    if (box.bounds.size() != static_cast<std::size_t>(x.size()))
      throw std::invalid_argument("box_penalty: dimension mismatch");
    for (int j = 0; j < x.size(); ++j) {
      const auto& b = box.bounds[static_cast<std::size_t>(j)];
      if (b) feasible(j) = std::clamp(x(j), b->first, b->second);
    }
  }
  const double penalty =
      (feasible - x).squaredNorm() / static_cast<double>(x.size());
  return {std::move(feasible), penalty};
}

}  // namespace mibbo
