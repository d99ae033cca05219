#include "mibbo/cma_params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mibbo {

CmaParams default_params(int n) {
  CmaParams p = default_params(n, 0.0);
  p.alpha = 1.0 / (static_cast<double>(n) * p.lambda);
  return p;
}

CmaParams default_params(int n, double alpha) {
  if (n < 2) throw std::invalid_argument("default_params: n must be >= 2");
  const double nd = static_cast<double>(n);

  CmaParams p;
  p.lambda = 4 + static_cast<int>(std::floor(3.0 * std::log(nd)));
  p.mu = p.lambda / 2;
  p.alpha = alpha;

  std::vector<double> raw(static_cast<std::size_t>(p.lambda));
  const double mid = std::log((p.lambda + 1.0) / 2.0);
  for (int i = 0; i < p.lambda; ++i)
    raw[static_cast<std::size_t>(i)] = mid - std::log(i + 1.0);

  double pos_sum = 0.0, pos_sq = 0.0, neg_sum = 0.0, neg_sq = 0.0;
  for (int i = 0; i < p.lambda; ++i) {
    const double w = raw[static_cast<std::size_t>(i)];
    if (i < p.mu) {
      pos_sum += w;
      pos_sq += w * w;
    } else {
      neg_sum += w;
      neg_sq += w * w;
    }
  }
  p.mu_w = pos_sum * pos_sum / pos_sq;
  p.mu_w_neg = neg_sum * neg_sum / neg_sq;

  p.c_m = 1.0;
  p.c_sigma = (p.mu_w + 2.0) / (nd + p.mu_w + 5.0);
  p.c_c = (4.0 + p.mu_w / nd) / (nd + 4.0 + 2.0 * p.mu_w / nd);
  p.c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + p.mu_w);
  p.c_mu = std::min(1.0 - p.c_1, 2.0 * (p.mu_w - 2.0 + 1.0 / p.mu_w) /
                                     ((nd + 2.0) * (nd + 2.0) + p.mu_w));
  p.d_sigma = 1.0 + p.c_sigma +
              2.0 * std::max(0.0, std::sqrt((p.mu_w - 1.0) / (nd + 1.0)) - 1.0);

  p.negative_weight_scale =
      std::min({1.0 + p.c_1 / p.c_mu, 1.0 + 2.0 * p.mu_w_neg / (p.mu_w + 2.0),
                (1.0 - p.c_1 - p.c_mu) / (nd * p.c_mu)});

  p.weights.resize(static_cast<std::size_t>(p.lambda));
  const double neg_abs_sum = -neg_sum;  // raw weights past mu are <= 0
  for (int i = 0; i < p.lambda; ++i) {
    const double w = raw[static_cast<std::size_t>(i)];
    p.weights[static_cast<std::size_t>(i)] =
        (i < p.mu) ? w / pos_sum : w * p.negative_weight_scale / neg_abs_sum;
  }
  p.sum_weights = 0.0;
  for (double w : p.weights) p.sum_weights += w;
  return p;
}

}  // namespace mibbo
