#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "mibbo/rng.hpp"
#include "mibbo/space.hpp"

namespace mibbo {

// Elitist multi-objective CMA-ES with per-individual success-rule adaptation
// and per-individual margin correction. Bi-objective only.

struct MoIndividual {
  Eigen::VectorXd x;        // search point (margin correction moves this)
  Eigen::VectorXd v_bar;    // encoded evaluation point
  std::array<double, 2> f;  // objectives cached at v_bar
  double p_succ = 0.0;      // smoothed success probability
  double sigma = 1.0;
  Eigen::VectorXd p_c;
  Eigen::MatrixXd C;
  Eigen::VectorXd A;  // per-dimension margin scale, 1 on continuous dims
};

struct MoParams {
  int lambda = 0;  // parent population size; mu == lambda
  double d = 0.0;
  double p_target = 0.0;
  double c_p = 0.0;
  double c_c = 0.0;
  double c_cov = 0.0;
  double p_thresh = 0.44;
  double alpha = 0.0;  // <= 0 disables margin correction
  std::array<double, 2> reference_point{5.0, 5.0};
};

MoParams default_mo_params(int n, int lambda, double alpha);

using MoObjective =
    std::function<std::array<double, 2>(std::span<const double>)>;

// Pareto dominance for minimization: a <= b component-wise and a != b.
bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b);

// Fast non-dominated sort. Returns levels of original indices, level 0 being
// the non-dominated set; indices within a level are ascending.
std::vector<std::vector<int>> nondominated_sort(
    std::span<const std::array<double, 2>> objectives);

// Area dominated by `points` inside the box bounded by `ref` (staircase
// sweep). Points at or beyond the reference contribute nothing.
double hypervolume_2d(std::span<const std::array<double, 2>> points,
                      const std::array<double, 2>& ref);

// hypervolume(points) - hypervolume(points without element i).
double contributing_hypervolume(std::span<const std::array<double, 2>> points,
                                const std::array<double, 2>& ref, int i);

// Total order, best first: non-domination level, then contributing
// hypervolume (within the level) descending, then original index.
std::vector<int> rank_population(
    std::span<const std::array<double, 2>> objectives,
    const std::array<double, 2>& ref);

// Builds a starting individual: v_bar = encode(x0), objectives evaluated
// once, p_succ = p_target, p_c = 0, C = I, A = 1.
MoIndividual make_mo_individual(const Eigen::VectorXd& x0, double sigma0,
                                const MoParams& params,
                                const MixedIntegerSpace& space,
                                const MoObjective& objective);

// One generation: sample one offspring per parent, rank the combined 2*lambda
// set, apply the success-rule updates, margin-correct offspring and parent,
// keep the best lambda. Population is replaced in place.
void mo_step(std::vector<MoIndividual>& population, const MoParams& params,
             const MixedIntegerSpace& space, const MoObjective& objective,
             RngStream& rng);

// Hypervolume of the population's non-dominated front against `ref`.
double population_hypervolume(std::span<const MoIndividual> population,
                              const std::array<double, 2>& ref);

// Median over binary dimensions of min(Pr(bit=0), Pr(bit=1)) under the
// individual's marginal N(x_j, sigma^2 A_j^2 C_jj). NaN when the space has
// no binary dimensions.
double median_margin_probability(const MoIndividual& ind,
                                 const MixedIntegerSpace& space);

}  // namespace mibbo
