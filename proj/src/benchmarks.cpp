#include "mibbo/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace mibbo {
namespace {

void check_size(std::span<const double> v, int n, const char* name) {
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument(std::string(name) + ": expected " +
                                std::to_string(n) + " coordinates, got " +
                                std::to_string(v.size()));
}

double ellipsoid_weight(int j, int count) {
  // 1000^(j / (count - 1)) with j counted from zero.
  return std::pow(1000.0, static_cast<double>(j) / (count - 1));
}

double onemax_term(std::span<const double> v, int n_co, int n) {
  double ones = 0.0;
  for (int k = n_co; k < n; ++k) ones += v[static_cast<std::size_t>(k)];
  return (n - n_co) - ones;
}

double leadingones_term(std::span<const double> v, int n_co, int n) {
  // n_bi minus the sum of prefix products: counts from the first zero bit on.
  double total = 0.0;
  double prefix = 1.0;
  for (int k = n_co; k < n; ++k) {
    prefix *= v[static_cast<std::size_t>(k)];
    total += prefix;
  }
  return (n - n_co) - total;
}

double tailingzeros_count(std::span<const double> v, int n_co, int n) {
  double total = 0.0;
  double suffix = 1.0;
  for (int k = n - 1; k >= n_co; --k) {
    suffix *= 1.0 - v[static_cast<std::size_t>(k)];
    total += suffix;
  }
  return total;
}

MixedIntegerSpace half_binary_space(int n) {
  std::vector<Dimension> dims;
  dims.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n / 2; ++j) dims.push_back(continuous_dimension());
  for (int j = n / 2; j < n; ++j) dims.push_back(binary_dimension());
  return MixedIntegerSpace(std::move(dims));
}

MixedIntegerSpace half_integer_space(int n, std::pair<int, int> range) {
  std::vector<Dimension> dims;
  dims.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n / 2; ++j) dims.push_back(continuous_dimension());
  for (int j = n / 2; j < n; ++j)
    dims.push_back(integer_dimension(range.first, range.second));
  return MixedIntegerSpace(std::move(dims));
}

}  // namespace

std::vector<std::string> benchmark_names() {
  return {"sphere-onemax",  "sphere-leadingones", "ellipsoid-onemax",
          "ellipsoid-leadingones", "sphere-int",  "ellipsoid-int",
          "dslotz",         "dsint"};
}

BenchmarkSpec make_benchmark(std::string_view name, int n,
                             const BenchmarkOptions& options) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument(
        "make_benchmark: n must be even and at least 4");
  const int n_co = n / 2;

  InitRecipe single;  // m0: continuous ~ U[1,3], discrete 0, sigma0 = 1

  if (name == "sphere-onemax") {
    BenchmarkSpec spec{std::string(name), 1, half_binary_space(n), {}, {},
                       single};
    spec.objective = [n, n_co](std::span<const double> v) {
      check_size(v, n, "sphere-onemax");
      double f = 0.0;
      for (int j = 0; j < n_co; ++j)
        f += v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      return f + onemax_term(v, n_co, n);
    };
    return spec;
  }
  if (name == "sphere-leadingones") {
    BenchmarkSpec spec{std::string(name), 1, half_binary_space(n), {}, {},
                       single};
    spec.objective = [n, n_co](std::span<const double> v) {
      check_size(v, n, "sphere-leadingones");
      double f = 0.0;
      for (int j = 0; j < n_co; ++j)
        f += v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      return f + leadingones_term(v, n_co, n);
    };
    return spec;
  }
  if (name == "ellipsoid-onemax") {
    BenchmarkSpec spec{std::string(name), 1, half_binary_space(n), {}, {},
                       single};
    spec.objective = [n, n_co](std::span<const double> v) {
      check_size(v, n, "ellipsoid-onemax");
      double f = 0.0;
      for (int j = 0; j < n_co; ++j) {
        const double w = ellipsoid_weight(j, n_co) * v[static_cast<std::size_t>(j)];
        f += w * w;
      }
      return f + onemax_term(v, n_co, n);
    };
    return spec;
  }
  if (name == "ellipsoid-leadingones") {
    BenchmarkSpec spec{std::string(name), 1, half_binary_space(n), {}, {},
                       single};
    spec.objective = [n, n_co](std::span<const double> v) {
      check_size(v, n, "ellipsoid-leadingones");
      double f = 0.0;
      for (int j = 0; j < n_co; ++j) {
        const double w = ellipsoid_weight(j, n_co) * v[static_cast<std::size_t>(j)];
        f += w * w;
      }
      return f + leadingones_term(v, n_co, n);
    };
    return spec;
  }
  if (name == "sphere-int") {
    const auto range = options.integer_range.value_or(std::pair{-10, 10});
    BenchmarkSpec spec{std::string(name), 1, half_integer_space(n, range), {},
                       {}, single};
    spec.objective = [n](std::span<const double> v) {
      check_size(v, n, "sphere-int");
      double f = 0.0;
      for (int j = 0; j < n; ++j)
        f += v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      return f;
    };
    return spec;
  }
  if (name == "ellipsoid-int") {
    const auto range = options.integer_range.value_or(std::pair{-10, 10});
    BenchmarkSpec spec{std::string(name), 1, half_integer_space(n, range), {},
                       {}, single};
    spec.objective = [n](std::span<const double> v) {
      check_size(v, n, "ellipsoid-int");
      double f = 0.0;
      for (int j = 0; j < n; ++j) {
        // Conditioning spans all n dimensions here, not just the continuous
        // block.
        const double w = ellipsoid_weight(j, n) * v[static_cast<std::size_t>(j)];
        f += w * w;
      }
      return f;
    };
    return spec;
  }
  if (name == "dslotz") {
    InitRecipe init;
    init.uniform_all_dims = true;
    init.uniform_low = 0.0;
    init.uniform_high = 1.0;
    init.sigma0 = 1.0;
    BenchmarkSpec spec{std::string(name), 2, half_binary_space(n), {}, {},
                       init};
    spec.objective2 = [n, n_co](std::span<const double> v) {
      check_size(v, n, "dslotz");
      const double n_bi = static_cast<double>(n - n_co);
      double s1 = 0.0, s2 = 0.0;
      for (int j = 0; j < n_co; ++j) {
        const double c = v[static_cast<std::size_t>(j)];
        s1 += c * c;
        s2 += (1.0 - c) * (1.0 - c);
      }
      const double miss_lead = leadingones_term(v, n_co, n);
      const double tail = tailingzeros_count(v, n_co, n);
      return std::array<double, 2>{s1 / n_co + miss_lead / n_bi,
                                   s2 / n_co + (n_bi - tail) / n_bi};
    };
    return spec;
  }
  if (name == "dsint") {
    const auto range = options.integer_range.value_or(std::pair{-10, 20});
    InitRecipe init;
    init.uniform_all_dims = true;
    init.uniform_low = 0.0;
    init.uniform_high = 10.0;
    init.sigma0 = 5.0;
    BenchmarkSpec spec{std::string(name), 2, half_integer_space(n, range), {},
                       {}, init};
    spec.objective2 = [n, n_co](std::span<const double> v) {
      check_size(v, n, "dsint");
      const double n_in = static_cast<double>(n - n_co);
      double c1 = 0.0, c2 = 0.0, i1 = 0.0, i2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double x = v[static_cast<std::size_t>(j)];
        if (j < n_co) {
          c1 += x * x;
          c2 += (10.0 - x) * (10.0 - x);
        } else {
          i1 += x * x;
          i2 += (10.0 - x) * (10.0 - x);
        }
      }
      constexpr double norm = 1.0 / 100.0;
      return std::array<double, 2>{c1 * norm / n_co + i1 * norm / n_in,
                                   c2 * norm / n_co + i2 * norm / n_in};
    };
    return spec;
  }
  throw std::invalid_argument("make_benchmark: unknown benchmark '" +
                              std::string(name) + "'");
}

std::vector<BenchmarkSpec> benchmark_catalog(int n) {
  std::vector<BenchmarkSpec> catalog;
  for (const std::string& name : benchmark_names())
    catalog.push_back(make_benchmark(name, n));
  return catalog;
}

Eigen::VectorXd draw_initial_mean(const BenchmarkSpec& spec, RngStream& rng) {
  const int n = spec.space.size();
  Eigen::VectorXd m0(n);
  for (int j = 0; j < n; ++j) {
    if (spec.space.is_discrete(j)) {
      m0(j) = spec.init.discrete_value;
    } else {
      m0(j) = spec.init.continuous_low +
              rng.next_double() *
                  (spec.init.continuous_high - spec.init.continuous_low);
    }
  }
  return m0;
}

Eigen::VectorXd draw_initial_point(const BenchmarkSpec& spec, RngStream& rng) {
  const int n = spec.space.size();
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j)
    x0(j) = spec.init.uniform_low +
            rng.next_double() * (spec.init.uniform_high - spec.init.uniform_low);
  return x0;
}

}  // namespace mibbo
