#pragma once

#include <Eigen/Dense>
#include <utility>

#include "mibbo/cmaes.hpp"
#include "mibbo/space.hpp"

namespace mibbo {

// Inputs of one margin correction pass: the post-update step-size and
// covariance together with the pre-correction affine diagonal.  Valid for
// 0 < alpha < 0.5; a two-sided bound with alpha >= 0.5 is infeasible.
struct MarginContext {
  double sigma;
  const Eigen::MatrixXd& C;
  const Eigen::VectorXd& A;
  double alpha;
};

// Half-width of the central confidence interval with coverage `prob` of the
// marginal distribution of v_j: sqrt(chi2_ppf_1df(prob) * sigma^2 A_j^2 C_jj).
// Throws definiteness_error when the marginal variance is not positive.
double confidence_halfwidth(const MarginContext& ctx, int j, double prob);

// Moves m_j toward its nearest threshold until the far-side tail mass is at
// least alpha; leaves A_j alone.  Also serves the exterior-integer case.  The
// sign convention sign(0) = 0 makes m_j == threshold a fixed point, and the
// retained side of the threshold never flips (the encoded value of m is
// invariant).
double correct_binary_dim(const MarginContext& ctx,
                          const MixedIntegerSpace& space, int j, double m_j);

// Integer-dimension correction.  Exterior means (at or beyond the extreme
// thresholds) are handled like the binary case against the nearest extreme
// threshold.  Interior means get the two-sided treatment: both crossing
// probabilities are floored at alpha/2, renormalized, and (m_j, A_j) are
// re-solved so the floored probabilities hold exactly.  When neither floor is
// active the inputs are returned untouched; the solve would only reproduce
// the same marginal with extra rounding.
std::pair<double, double> correct_integer_dim(const MarginContext& ctx,
                                              const MixedIntegerSpace& space,
                                              int j, double m_j);

// Full per-dimension pass of the correction: continuous dims untouched,
// binary dims move m only, integer dims may rescale A too.  alpha <= 0
// disables the correction entirely (the limiting behaviour); alpha >= 0.5
// is rejected.
void margin_correction(Eigen::VectorXd& m, Eigen::VectorXd& A, double sigma,
                       const Eigen::MatrixXd& C, const MixedIntegerSpace& space,
                       double alpha);

// Convenience overload for the single-objective driver; corrects state.m and
// state.A in place using the freshly updated sigma and C.
void margin_correction(CmaState& state, const MixedIntegerSpace& space,
                       double alpha);

}  // namespace mibbo
