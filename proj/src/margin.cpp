#include "mibbo/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mibbo/matrix.hpp"
#include "mibbo/stats.hpp"

namespace mibbo {
namespace {

// Tail probabilities are kept 1e-12 away from 0 so the quantile stays finite;
// the cap at 0.5 maps to a zero z-score.
constexpr double kTailFloor = 1e-12;

// z >= 0 with Phi(-z) = p, i.e. sqrt(chi2_ppf_1df(1 - 2p)) evaluated without
// forming 1 - 2p, which would lose the tail to cancellation.
double tail_z(double p) {
  return -normal_quantile(std::clamp(p, kTailFloor, 0.5));
}

double marginal_std(const MarginContext& ctx, int j) {
  const double sd = ctx.sigma * ctx.A(j) * std::sqrt(ctx.C(j, j));
  if (!(sd > 0.0))
    throw definiteness_error(
        "margin: non-positive marginal variance in dimension " +
            std::to_string(j),
        ctx.C(j, j));
  return sd;
}

}  // namespace

double confidence_halfwidth(const MarginContext& ctx, int j, double prob) {
  return std::sqrt(chi2_ppf_1df(prob)) * marginal_std(ctx, j);
}

double correct_binary_dim(const MarginContext& ctx,
                          const MixedIntegerSpace& space, int j, double m_j) {
  const double threshold = space.nearest_threshold(j, m_j);
  const double d = m_j - threshold;
  if (d == 0.0) return m_j;
  const double ci = tail_z(ctx.alpha) * marginal_std(ctx, j);
  const double magnitude = std::min(std::abs(d), ci);
  if (d > 0.0) {
    // Keep the corrected mean strictly above the threshold even when the
    // addition rounds back onto it, so the encoded cell is preserved.
    return std::max(threshold + magnitude,
                    std::nextafter(threshold, std::numeric_limits<double>::infinity()));
  }
  return threshold - magnitude;
}

std::pair<double, double> correct_integer_dim(const MarginContext& ctx,
                                              const MixedIntegerSpace& space,
                                              int j, double m_j) {
  const auto th = space.thresholds(j);
  if (m_j <= th.front() || m_j > th.back())
    return {correct_binary_dim(ctx, space, j, m_j), ctx.A(j)};

  const auto [l_low, l_up] = space.bracketing_thresholds(j, m_j);
  const double sd = marginal_std(ctx, j);
  const double p_low = normal_cdf((l_low - m_j) / sd);
  const double p_up = normal_cdf((m_j - l_up) / sd);
  const double half_alpha = 0.5 * ctx.alpha;
  if (p_low >= half_alpha && p_up >= half_alpha) return {m_j, ctx.A(j)};

  const double p_mid = 1.0 - p_low - p_up;
  const double pl = std::max(half_alpha, p_low);
  const double pu = std::max(half_alpha, p_up);
  // Affine rescaling toward the floors; restores pl + pu + p_mid' = 1 while
  // keeping both tails at or above alpha/2.
  const double shrink = (1.0 - pl - pu - p_mid) / (pl + pu + p_mid - 3.0 * half_alpha);
  const double pll = pl + shrink * (pl - half_alpha);
  const double puu = pu + shrink * (pu - half_alpha);

  const double z_low = tail_z(pll);
  const double z_up = tail_z(puu);
  double m_new = (l_low * z_up + l_up * z_low) / (z_low + z_up);
  const double a_new =
      (l_up - l_low) / (ctx.sigma * std::sqrt(ctx.C(j, j)) * (z_low + z_up));
  // The solve keeps m inside (l_low, l_up] mathematically; enforce the open
  // lower end against rounding so encoding is unaffected.
  m_new = std::min(m_new, l_up);
  m_new = std::max(m_new, std::nextafter(l_low, std::numeric_limits<double>::infinity()));
  return {m_new, a_new};
}

void margin_correction(Eigen::VectorXd& m, Eigen::VectorXd& A, double sigma,
                       const Eigen::MatrixXd& C, const MixedIntegerSpace& space,
                       double alpha) {
  if (alpha <= 0.0) return;
  if (alpha >= 0.5)
    throw std::invalid_argument("margin_correction: alpha must be below 0.5");
  if (m.size() != space.size() || A.size() != space.size())
    throw std::invalid_argument("margin_correction: dimension mismatch");

  const MarginContext ctx{sigma, C, A, alpha};
  // Each dimension only reads its own (m_j, A_j), so in-place writes are safe.
  for (int j = 0; j < space.size(); ++j) {
    const Dimension& dim = space.dim(j);
    if (dim.is_continuous()) continue;
    if (dim.is_binary()) {
      m(j) = correct_binary_dim(ctx, space, j, m(j));
    } else {
      const auto [m_new, a_new] = correct_integer_dim(ctx, space, j, m(j));
      m(j) = m_new;
      A(j) = a_new;
    }
  }
}

void margin_correction(CmaState& state, const MixedIntegerSpace& space,
                       double alpha) {
  margin_correction(state.m, state.A, state.sigma, state.C, space, alpha);
}

}  // namespace mibbo
