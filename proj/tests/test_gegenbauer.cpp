#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "finite_difference.hpp"
#include "design_forge/gegenbauer.hpp"
#include "design_forge/sphere.hpp"
#include "design_forge/verifier.hpp"

using namespace design_forge;
using doctest::Approx;

namespace {

// binom(2a+k-1, k) through Gamma functions; independent of the product loop.
double binomial_oracle(double alpha, int k) {
  return std::exp(std::lgamma(2 * alpha + k) - std::lgamma(2 * alpha) - std::lgamma(k + 1.0));
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("gegenbauer_eval examples") {
  CHECK(gegenbauer_eval(1.0, 1, 0.3) == Approx(0.6).epsilon(1e-15));
  CHECK(gegenbauer_eval(0.5, 2, 0.5) == Approx(-0.125).epsilon(1e-15));
  CHECK(gegenbauer_eval(1.5, 3, 1.0) == Approx(10.0).epsilon(1e-15));
  CHECK(gegenbauer_eval(2.0, 0, -0.7) == 1.0);
}

TEST_CASE("gegenbauer_eval domain") {
  CHECK_THROWS_AS(gegenbauer_eval(0.5, 3, 1.0 + 1e-9), std::domain_error);
  CHECK_THROWS_AS(gegenbauer_eval(0.5, 3, -1.0 - 1e-9), std::domain_error);
  CHECK_NOTHROW(gegenbauer_eval(0.5, 3, 1.0 + 1e-13));
  CHECK(gegenbauer_eval(0.5, 3, 1.0 + 5e-13) == gegenbauer_eval(0.5, 3, 1.0));
  CHECK_THROWS_AS(gegenbauer_eval(0.5, 201, 0.2), std::out_of_range);
  CHECK_NOTHROW(gegenbauer_eval(0.5, 200, 0.2));
  CHECK_THROWS(gegenbauer_eval(-0.25, 2, 0.2));
}

TEST_CASE("circle convention: (2/k) T_k") {
  for (int k = 1; k <= 12; ++k) {
    CHECK(gegenbauer_at_one(0.0, k) == Approx(2.0 / k).epsilon(1e-15));
    for (double th : {0.0, 0.4, 1.3, 2.9}) CHECK(gegenbauer_eval(0.0, k, std::cos(th)) == Approx(2.0 / k * std::cos(k * th)).epsilon(1e-12));
  }
}

TEST_CASE("Legendre derivative examples") {
  CHECK(gegenbauer_derivative(0.5, 2, 1.0, 1) == Approx(3.0).epsilon(1e-15));
  CHECK(gegenbauer_derivative(1.7, 0, 0.3, 1) == 0.0);
  CHECK(gegenbauer_derivative(1.7, 1, 0.3, 2) == 0.0);
  const double h = 1e-5;
  const double fd = (gegenbauer_eval(0.5, 3, 0.2 + h) - gegenbauer_eval(0.5, 3, 0.2 - h)) / (2 * h);
  CHECK(rel_err(gegenbauer_derivative(0.5, 3, 0.2, 1), fd) <= 1e-8);
  CHECK_THROWS_AS(gegenbauer_derivative(0.5, 3, 0.2, 3), std::invalid_argument);
}

TEST_CASE("derivatives match finite differences away from the endpoints") {
  const double h = 1e-5;
  for (double alpha : {0.0, 0.5, 1.0, 1.5, 2.0, 4.5})
    for (int k = 1; k <= 12; ++k)
      for (double t : {-0.83, -0.41, 0.07, 0.36, 0.77}) {
        auto f = [&](double s) { return gegenbauer_eval(alpha, k, s); };
        auto fp = [&](double s) { return gegenbauer_derivative(alpha, k, s, 1); };
        const double d1 = central_difference(f, t, h);
        const double d2 = central_difference(fp, t, h);
        const double s1 = std::max(1.0, std::abs(d1));
        const double s2 = std::max(1.0, std::abs(d2));
        CHECK(std::abs(fp(t) - d1) / s1 <= 1e-7);
        CHECK(std::abs(gegenbauer_derivative(alpha, k, t, 2) - d2) / s2 <= 1e-7);
      }
}

TEST_CASE("gegenbauer_at_one examples") {
  for (int k = 0; k <= 30; ++k) CHECK(gegenbauer_at_one(0.5, k) == Approx(1.0).epsilon(1e-14));
  CHECK(gegenbauer_at_one(1.5, 3) == Approx(10.0).epsilon(1e-15));
  CHECK(gegenbauer_at_one(1.0, 4) == Approx(5.0).epsilon(1e-15));
}

TEST_CASE("recurrence at 1 agrees with the binomial closed form up to k = 60") {
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 4.5})
    for (int k = 0; k <= 60; ++k) {
      CHECK(rel_err(gegenbauer_eval(alpha, k, 1.0), gegenbauer_at_one(alpha, k)) <= 1e-11);
      CHECK(rel_err(gegenbauer_at_one(alpha, k), binomial_oracle(alpha, k)) <= 1e-11);
    }
}

TEST_CASE("|C_k(t)| <= C_k(1) on a 1001-point grid") {
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 4.5})
    for (int k = 0; k <= 25; ++k) {
      const double top = gegenbauer_at_one(alpha, k);
      for (int i = 0; i <= 1000; ++i) {
        const double t = -1.0 + 2.0 * i / 1000.0;
        CHECK(std::abs(gegenbauer_eval(alpha, k, t)) <= top * (1 + 1e-12));
      }
    }
}

TEST_CASE("harmonic_dim examples") {
  CHECK(harmonic_dim(2, 3) == 7);
  CHECK(harmonic_dim(3, 2) == 9);
  for (int k = 1; k <= 20; ++k) {
    CHECK(harmonic_dim(1, k) == 2);
    CHECK(harmonic_dim(2, k) == static_cast<std::uint64_t>(2 * k + 1));
    CHECK(harmonic_dim(3, k) == static_cast<std::uint64_t>((k + 1) * (k + 1)));
  }
  CHECK_THROWS(harmonic_dim(2, 0));
  CHECK_THROWS(harmonic_dim(0, 2));
}

TEST_CASE("orthogonality residual examples") {
  CHECK(orthogonality_residual(0.5, 1, 2, 64) <= 1e-10);
  CHECK(orthogonality_residual(0.5, 1, 1, 64) <= 1e-10);
  CHECK(gegenbauer_norm_sq(0.5, 1) == Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(orthogonality_residual(1.0, 0, 0, 64) <= 1e-10);
  CHECK(gegenbauer_norm_sq(1.0, 0) == Approx(std::numbers::pi / 2).epsilon(1e-13));
  for (double alpha : {0.0, 0.5, 1.0, 2.5})
    for (int m = 0; m <= 15; ++m)
      for (int n = 0; n <= 15; ++n) CHECK(orthogonality_residual(alpha, m, n, 64) <= 1e-10 * std::max(1.0, gegenbauer_norm_sq(alpha, n)));
}

TEST_CASE("gegenbauer_sequence matches pointwise evaluation") {
  std::vector<double> seq(40);
  for (double alpha : {0.0, 0.5, 1.5})
    for (double t : {-1.0, -0.3, 0.0, 0.9, 1.0}) {
      gegenbauer_sequence(alpha, t, seq.data(), 40);
      for (int k = 0; k < 40; ++k) CHECK(seq[k] == Approx(gegenbauer_eval(alpha, k, t)).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("sum of harmonic dimensions equals the rank of a monomial evaluation matrix") {
  // Polynomials of degree <= n restricted to S^d span a space of dimension
  // 1 + sum_k dim H_k; the rank of monomials sampled at random points counts it.
  std::mt19937_64 rng(77);
  for (int d = 1; d <= 3; ++d)
    for (int n = 1; n <= 10; ++n) {
      std::uint64_t expected = 1;
      for (int k = 1; k <= n; ++k) expected += harmonic_dim(d, k);
      const auto exps = monomial_exponents(static_cast<std::size_t>(d + 1), n);
      const auto rows = static_cast<Eigen::Index>(std::max<std::uint64_t>(2 * expected, 8));
      Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(exps.size()));
      for (Eigen::Index r = 0; r < rows; ++r) {
        const UnitPoint x = random_point(static_cast<std::size_t>(d), rng);
        for (std::size_t c = 0; c < exps.size(); ++c) {
          double v = 1.0;
          for (int j = 0; j <= d; ++j) v *= std::pow(x[j], exps[c][j]);
          a(r, static_cast<Eigen::Index>(c)) = v;
        }
      }
      Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
      const auto& s = svd.singularValues();
      Eigen::Index rank = 0;
      while (rank < s.size() && s(rank) > 1e-9 * s(0)) ++rank;
      CHECK_MESSAGE(static_cast<std::uint64_t>(rank) == expected, "d=" << d << " n=" << n);
      // a clean gap separates the two groups
      if (rank < s.size()) CHECK(s(rank) < 1e-12 * s(0));
    }
}
