#include "mibbo/mo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "mibbo/margin.hpp"
#include "mibbo/matrix.hpp"
#include "mibbo/stats.hpp"

namespace mibbo {
namespace {

void check_finite_pair(const std::array<double, 2>& f, int individual) {
  if (!std::isfinite(f[0]) || !std::isfinite(f[1]))
    throw std::domain_error("mo_step: non-finite objective for individual " +
                            std::to_string(individual));
}

// Encoding must be bit-for-bit invariant under margin correction.
void corrected_in_place(MoIndividual& ind, const MixedIntegerSpace& space,
                        double alpha) {
  const Eigen::VectorXd before = encode_vector(space, ind.x);
  margin_correction(ind.x, ind.A, ind.sigma, ind.C, space, alpha);
  const Eigen::VectorXd after = encode_vector(space, ind.x);
  for (int j = 0; j < before.size(); ++j) {
    if (before(j) != after(j))
      throw std::logic_error(
          "margin correction moved the encoded point at dimension " +
          std::to_string(j));
  }
}

double median_of(std::vector<double> values) {
  return percentile(std::move(values), 0.5);
}

}  // namespace

MoParams default_mo_params(int n, int lambda, double alpha) {
  if (n < 1) throw std::invalid_argument("default_mo_params: n must be >= 1");
  if (lambda < 1)
    throw std::invalid_argument("default_mo_params: lambda must be >= 1");
  MoParams p;
  p.lambda = lambda;
  p.d = 1.0 + n / 2.0;
  p.p_target = 2.0 / 11.0;
  p.c_p = p.p_target / (2.0 + p.p_target);
  p.c_c = 2.0 / (n + 2.0);
  p.c_cov = 2.0 / (static_cast<double>(n) * n + 6.0);
  p.p_thresh = 0.44;
  p.alpha = alpha;
  p.reference_point = {5.0, 5.0};
  return p;
}

bool dominates(const std::array<double, 2>& a,
               const std::array<double, 2>& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

std::vector<std::vector<int>> nondominated_sort(
    std::span<const std::array<double, 2>> objectives) {
  const int n = static_cast<int>(objectives.size());
  std::vector<std::vector<int>> dominated_by(n);
  std::vector<int> domination_count(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dominates(objectives[i], objectives[j])) {
        dominated_by[i].push_back(j);
        ++domination_count[j];
      } else if (dominates(objectives[j], objectives[i])) {
        dominated_by[j].push_back(i);
        ++domination_count[i];
      }
    }
  }
  std::vector<std::vector<int>> levels;
  std::vector<int> current;
  for (int i = 0; i < n; ++i)
    if (domination_count[i] == 0) current.push_back(i);
  while (!current.empty()) {
    std::vector<int> next;
    for (int i : current)
      for (int j : dominated_by[i])
        if (--domination_count[j] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    levels.push_back(std::move(current));
    current = std::move(next);
  }
  return levels;
}

double hypervolume_2d(std::span<const std::array<double, 2>> points,
                      const std::array<double, 2>& ref) {
  std::vector<std::array<double, 2>> inside;
  for (const auto& p : points)
    if (p[0] < ref[0] && p[1] < ref[1]) inside.push_back(p);
  std::sort(inside.begin(), inside.end());
  double area = 0.0;
  double best_f2 = ref[1];
  for (const auto& p : inside) {
    if (p[1] < best_f2) {
      area += (ref[0] - p[0]) * (best_f2 - p[1]);
      best_f2 = p[1];
    }
  }
  return area;
}

double contributing_hypervolume(std::span<const std::array<double, 2>> points,
                                const std::array<double, 2>& ref, int i) {
  if (i < 0 || i >= static_cast<int>(points.size()))
    throw std::out_of_range("contributing_hypervolume: index out of range");
  std::vector<std::array<double, 2>> rest;
  rest.reserve(points.size() - 1);
  for (int k = 0; k < static_cast<int>(points.size()); ++k)
    if (k != i) rest.push_back(points[k]);
  return hypervolume_2d(points, ref) - hypervolume_2d(rest, ref);
}

std::vector<int> rank_population(
    std::span<const std::array<double, 2>> objectives,
    const std::array<double, 2>& ref) {
  std::vector<int> order;
  order.reserve(objectives.size());
  for (const auto& level : nondominated_sort(objectives)) {
    std::vector<std::array<double, 2>> level_points;
    level_points.reserve(level.size());
    for (int idx : level) level_points.push_back(objectives[idx]);
    std::vector<std::pair<double, int>> scored;  // (contribution, index)
    scored.reserve(level.size());
    for (int k = 0; k < static_cast<int>(level.size()); ++k)
      scored.emplace_back(contributing_hypervolume(level_points, ref, k),
                          level[k]);
    // Stable: equal contributions keep ascending-index order from the level.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) {
                       return a.first > b.first;
                     });
    for (const auto& [contribution, idx] : scored) order.push_back(idx);
  }
  return order;
}

MoIndividual make_mo_individual(const Eigen::VectorXd& x0, double sigma0,
                                const MoParams& params,
                                const MixedIntegerSpace& space,
                                const MoObjective& objective) {
  if (x0.size() != space.size())
    throw std::invalid_argument(
        "make_mo_individual: point size does not match the space");
  if (!(sigma0 > 0.0))
    throw std::invalid_argument("make_mo_individual: sigma0 must be > 0");
  const int n = space.size();
  MoIndividual ind;
  ind.x = x0;
  ind.v_bar = encode_vector(space, x0);
  ind.f = objective(std::span<const double>(ind.v_bar.data(),
                                            static_cast<std::size_t>(n)));
  check_finite_pair(ind.f, 0);
  ind.p_succ = params.p_target;
  ind.sigma = sigma0;
  ind.p_c = Eigen::VectorXd::Zero(n);
  ind.C = Eigen::MatrixXd::Identity(n, n);
  ind.A = Eigen::VectorXd::Ones(n);
  return ind;
}

void mo_step(std::vector<MoIndividual>& population, const MoParams& params,
             const MixedIntegerSpace& space, const MoObjective& objective,
             RngStream& rng) {
  const int lambda = params.lambda;
  if (static_cast<int>(population.size()) != lambda)
    throw std::invalid_argument("mo_step: population size must equal lambda");
  const int n = space.size();

  // Parents first, one offspring per parent appended behind them.
  std::vector<MoIndividual> combined = std::move(population);
  combined.reserve(static_cast<std::size_t>(2 * lambda));
  for (int i = 0; i < lambda; ++i) {
    const MoIndividual& parent = combined[static_cast<std::size_t>(i)];
    const SpdFactors factors = factorize_spd(parent.C);
    const std::vector<double> draws = standard_normal_vector(rng, n);
    const Eigen::VectorXd y =
        factors.sqrt * Eigen::Map<const Eigen::VectorXd>(draws.data(), n);
    MoIndividual off = parent;
    off.x = parent.x + parent.sigma * y;
    const Eigen::VectorXd v =
        parent.x + parent.sigma * parent.A.cwiseProduct(y);
    off.v_bar = encode_vector(space, v);
    off.f = objective(std::span<const double>(
        off.v_bar.data(), static_cast<std::size_t>(n)));
    check_finite_pair(off.f, i);
    combined.push_back(std::move(off));
  }

  std::vector<std::array<double, 2>> objectives;
  objectives.reserve(combined.size());
  for (const MoIndividual& ind : combined) objectives.push_back(ind.f);
  const std::vector<int> ranked =
      rank_population(objectives, params.reference_point);
  std::vector<int> rank_of(combined.size());
  for (int pos = 0; pos < static_cast<int>(ranked.size()); ++pos)
    rank_of[static_cast<std::size_t>(ranked[static_cast<std::size_t>(pos)])] =
        pos;

  const double sigma_gain = 1.0 / (1.0 - params.p_target);
  for (int i = 0; i < lambda; ++i) {
    MoIndividual& parent = combined[static_cast<std::size_t>(i)];
    MoIndividual& off = combined[static_cast<std::size_t>(lambda + i)];
    const double succ =
        rank_of[static_cast<std::size_t>(lambda + i)] < lambda ? 1.0 : 0.0;

    off.p_succ = (1.0 - params.c_p) * off.p_succ + params.c_p * succ;
    off.sigma *= std::exp((off.p_succ - params.p_target) * sigma_gain /
                          params.d);
    if (off.p_succ < params.p_thresh) {
      // Step along the realized move, normalized by the parent's pre-update
      // step size; off.x has not been margin-corrected yet.
      off.p_c = (1.0 - params.c_c) * off.p_c +
                std::sqrt(params.c_c * (2.0 - params.c_c)) *
                    (off.x - parent.x) / parent.sigma;
      off.C = symmetrized((1.0 - params.c_cov) * off.C +
                          params.c_cov * off.p_c * off.p_c.transpose());
    } else {
      off.p_c = (1.0 - params.c_c) * off.p_c;
      off.C = symmetrized(
          (1.0 - params.c_cov) * off.C +
          params.c_cov * (off.p_c * off.p_c.transpose() +
                          params.c_c * (2.0 - params.c_c) * off.C));
    }
    parent.p_succ = (1.0 - params.c_p) * parent.p_succ + params.c_p * succ;
    parent.sigma *= std::exp((parent.p_succ - params.p_target) * sigma_gain /
                             params.d);

    corrected_in_place(off, space, params.alpha);
    corrected_in_place(parent, space, params.alpha);
  }

  // Ranking keys are untouched by the corrections, so the precomputed order
  // still selects correctly.
  std::vector<MoIndividual> next;
  next.reserve(static_cast<std::size_t>(lambda));
  for (int pos = 0; pos < lambda; ++pos)
    next.push_back(
        std::move(combined[static_cast<std::size_t>(ranked[pos])]));
  population = std::move(next);
}

double population_hypervolume(std::span<const MoIndividual> population,
                              const std::array<double, 2>& ref) {
  std::vector<std::array<double, 2>> points;
  points.reserve(population.size());
  for (const MoIndividual& ind : population) points.push_back(ind.f);
  return hypervolume_2d(points, ref);
}

double median_margin_probability(const MoIndividual& ind,
                                 const MixedIntegerSpace& space) {
  std::vector<double> probs;
  for (int j = 0; j < space.size(); ++j) {
    if (!space.dim(j).is_binary()) continue;
    const double sd = ind.sigma * ind.A(j) * std::sqrt(ind.C(j, j));
    const double threshold = space.thresholds(j)[0];
    const double p_zero =
        sd > 0.0 ? normal_cdf((threshold - ind.x(j)) / sd)
                 : (ind.x(j) <= threshold ? 1.0 : 0.0);
    probs.push_back(std::min(p_zero, 1.0 - p_zero));
  }
  if (probs.empty()) return std::numeric_limits<double>::quiet_NaN();
  return median_of(std::move(probs));
}

}  // namespace mibbo
