#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "mibbo/matrix.hpp"
#include "mibbo/rng.hpp"

using namespace mibbo;

namespace {

Eigen::MatrixXd random_spd(RngStream& rng, int n, double shift = 1.0) {
  Eigen::MatrixXd m(n, n);
  auto draws = standard_normal_vector(rng, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = draws[static_cast<std::size_t>(i * n + j)];
  return m.transpose() * m + shift * Eigen::MatrixXd::Identity(n, n);
}

double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

// Eigenvalues of a symmetric 3x3 via the trigonometric solution of the
// characteristic cubic; independent of the library's eigensolver.
std::vector<double> cubic_eigenvalues(const Eigen::MatrixXd& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = a.trace() / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Eigen::MatrixXd b = (a - q * Eigen::MatrixXd::Identity(3, 3)) / p;
  const double det_b =
      b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  double r = det_b / 2.0;
  r = std::min(1.0, std::max(-1.0, r));
  const double phi = std::acos(r) / 3.0;
  const double pi = std::acos(-1.0);
  double hi = q + 2.0 * p * std::cos(phi);
  double lo = q + 2.0 * p * std::cos(phi + 2.0 * pi / 3.0);
  double mid = 3.0 * q - hi - lo;
  return {lo, mid, hi};
}

}  // namespace

TEST_CASE("matrix_sqrt handles identity and diagonal cases") {
  Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK(relative_frobenius(matrix_sqrt(i2), i2) < 1e-14);

  Eigen::MatrixXd d(2, 2);
  d << 4, 0, 0, 9;
  Eigen::MatrixXd expected(2, 2);
  expected << 2, 0, 0, 3;
  CHECK(relative_frobenius(matrix_sqrt(d), expected) < 1e-14);

  Eigen::MatrixXd d1(1, 1);
  d1 << 4;
  CHECK(matrix_inverse_sqrt(d1)(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(relative_frobenius(matrix_inverse_sqrt(i2), i2) < 1e-14);
}

TEST_CASE("matrix_sqrt squares back to the input") {
  RngStream rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd a = random_spd(rng, 5);
    Eigen::MatrixXd s = matrix_sqrt(a);
    CHECK(relative_frobenius(s * s, a) < 1e-10);
    CHECK(relative_frobenius(s, s.transpose()) < 1e-13);
  }
}

TEST_CASE("matrix_inverse_sqrt whitens the input") {
  RngStream rng(18);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd a = random_spd(rng, 5);
    Eigen::MatrixXd s = matrix_inverse_sqrt(a);
    CHECK(relative_frobenius(s * a * s, Eigen::MatrixXd::Identity(5, 5)) < 1e-10);
  }
}

TEST_CASE("factorize_spd exposes consistent factors and extremes") {
  RngStream rng(19);
  Eigen::MatrixXd a = random_spd(rng, 6);
  SpdFactors f = factorize_spd(a);
  CHECK(relative_frobenius(f.sqrt * f.sqrt, a) < 1e-10);
  CHECK(relative_frobenius(f.inv_sqrt * f.sqrt, Eigen::MatrixXd::Identity(6, 6)) <
        1e-10);
  CHECK(f.min_eigenvalue > 0.0);
  CHECK(f.max_eigenvalue >= f.min_eigenvalue);
  CHECK(f.condition_number() == f.max_eigenvalue / f.min_eigenvalue);

  Eigen::VectorXd probe = Eigen::VectorXd::LinSpaced(6, -1.0, 1.0);
  double rayleigh = probe.dot(a * probe) / probe.squaredNorm();
  CHECK(rayleigh >= f.min_eigenvalue - 1e-9);
  CHECK(rayleigh <= f.max_eigenvalue + 1e-9);
}

TEST_CASE("factorize_spd rejects indefinite input") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, 0, -3;
  CHECK_THROWS_AS((void)factorize_spd(a), definiteness_error);
  try {
    (void)factorize_spd(a);
  } catch (const definiteness_error& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-3.0).epsilon(1e-12));
  }
}

TEST_CASE("eigen_extremes on diagonal and identity matrices") {
  Eigen::MatrixXd d(2, 2);
  d << 1, 0, 0, 100;
  auto [mn, cond] = eigen_extremes(d);
  CHECK(mn == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(cond == doctest::Approx(100.0).epsilon(1e-13));

  auto [mn_i, cond_i] = eigen_extremes(Eigen::MatrixXd::Identity(3, 3));
  CHECK(mn_i == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cond_i == doctest::Approx(1.0).epsilon(1e-14));

  // Indefinite spectra are reported, not rejected.
  Eigen::MatrixXd neg(2, 2);
  neg << -2, 0, 0, 5;
  auto [mn_n, cond_n] = eigen_extremes(neg);
  CHECK(mn_n == doctest::Approx(-2.0).epsilon(1e-13));
  (void)cond_n;
}

TEST_CASE("eigen_extremes matches the characteristic-polynomial roots at 3x3") {
  RngStream rng(20);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXd a = random_spd(rng, 3, 0.5);
    auto roots = cubic_eigenvalues(a);
    auto [mn, cond] = eigen_extremes(a);
    CHECK(std::abs(mn - roots[0]) < 1e-9 * std::max(1.0, std::abs(roots[0])));
    CHECK(std::abs(cond - roots[2] / roots[0]) <
          1e-8 * std::max(1.0, roots[2] / roots[0]));
  }
}

TEST_CASE("symmetrized averages away asymmetry") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 3, 1, 2;
  Eigen::MatrixXd s = symmetrized(a);
  CHECK(s(0, 1) == 2.0);
  CHECK(s(1, 0) == 2.0);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(1, 1) == 2.0);
}
