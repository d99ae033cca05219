#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mibbo/rng.hpp"
#include "mibbo/space.hpp"

namespace mibbo {

// How a trial initializes its search distribution.  Single-objective recipes
// draw the continuous block of m0 uniformly and pin discrete entries to a
// constant; the multi-objective recipes draw every coordinate of each initial
// search point uniformly.
struct InitRecipe {
  double continuous_low = 1.0;
  double continuous_high = 3.0;
  double discrete_value = 0.0;
  bool uniform_all_dims = false;
  double uniform_low = 0.0;
  double uniform_high = 1.0;
  double sigma0 = 1.0;
};

struct BenchmarkSpec {
  std::string name;
  int arity = 1;  // 1 or 2 objectives
  MixedIntegerSpace space;
  std::function<double(std::span<const double>)> objective;
  std::function<std::array<double, 2>(std::span<const double>)> objective2;
  InitRecipe init;
};

struct BenchmarkOptions {
  // Overrides the integer candidate set ({-10..10} single-objective,
  // {-10..20} for dsint by default).
  std::optional<std::pair<int, int>> integer_range;
};

// Names: sphere-onemax, sphere-leadingones, ellipsoid-onemax,
// ellipsoid-leadingones, sphere-int, ellipsoid-int, dslotz, dsint.
std::vector<std::string> benchmark_names();

// Builds the named benchmark at dimension n (even, >= 4; half continuous,
// half discrete).  Throws std::invalid_argument for unknown names or invalid
// splits.
BenchmarkSpec make_benchmark(std::string_view name, int n,
                             const BenchmarkOptions& options = {});

std::vector<BenchmarkSpec> benchmark_catalog(int n);

// Initial mean for a single-objective trial per the benchmark's recipe.
Eigen::VectorXd draw_initial_mean(const BenchmarkSpec& spec, RngStream& rng);

// Initial search point for one multi-objective individual (all coordinates
// uniform).
Eigen::VectorXd draw_initial_point(const BenchmarkSpec& spec, RngStream& rng);

}  // namespace mibbo
