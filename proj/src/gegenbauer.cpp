#include "design_forge/gegenbauer.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace design_forge {

namespace {

void check_args(double alpha, int k) {
  if (!(alpha >= 0.0)) throw std::domain_error("Gegenbauer parameter alpha must be >= 0");
  if (k < 0 || k > kMaxGegenbauerDegree)
    throw std::out_of_range("Gegenbauer degree " + std::to_string(k) + " outside [0, " +
                            std::to_string(kMaxGegenbauerDegree) + "]");
}

double clamp_argument(double t) {
  if (!(std::abs(t) <= 1.0 + 1e-12)) throw std::domain_error("Gegenbauer argument outside [-1, 1]");
  return std::clamp(t, -1.0, 1.0);
}

double eval_unchecked(double alpha, int k, double t) {
  if (k == 0) return 1.0;
  if (alpha == 0.0) {
    // (2/k) T_k(t)
    double t0 = 1.0, t1 = t;
    for (int j = 2; j <= k; ++j) {
      const double t2 = 2.0 * t * t1 - t0;
      t0 = t1;
      t1 = t2;
    }
    return 2.0 / k * t1;
  }
  double c0 = 1.0;
  double c1 = 2.0 * alpha * t;
  for (int j = 2; j <= k; ++j) {
    const double c2 = (2.0 * (j + alpha - 1.0) * t * c1 - (j + 2.0 * alpha - 2.0) * c0) / j;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

}  // namespace

GegenbauerParams GegenbauerParams::for_sphere(int d, int max_degree) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  return {0.5 * (d - 1), max_degree};
}

double gegenbauer_eval(double alpha, int k, double t) {
  check_args(alpha, k);
  return eval_unchecked(alpha, k, clamp_argument(t));
}

double gegenbauer_derivative(double alpha, int k, double t, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("unsupported derivative order");
  check_args(alpha, k);
  t = clamp_argument(t);
  if (k < order) return 0.0;
  if (order == 1) {
    const double factor = alpha == 0.0 ? 2.0 : 2.0 * alpha;
    return factor * eval_unchecked(alpha + 1.0, k - 1, t);
  }
  const double factor = alpha == 0.0 ? 4.0 : 4.0 * alpha * (alpha + 1.0);
  return factor * eval_unchecked(alpha + 2.0, k - 2, t);
}

double gegenbauer_at_one(double alpha, int k) {
  check_args(alpha, k);
  if (k == 0) return 1.0;
  if (alpha == 0.0) return 2.0 / k;
  double v = 1.0;
  for (int j = 1; j <= k; ++j) v *= (2.0 * alpha + j - 1.0) / j;
  return v;
}

std::uint64_t harmonic_dim(int d, int k) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (k < 1) throw std::invalid_argument("harmonic degree must be >= 1");
  // (2k+d-1)/(k+d-1) * binom(d+k-1, k), exact.
  unsigned __int128 binom = 1;
  const int top = d + k - 1;
  const int r = std::min(k, d - 1);
  for (int i = 1; i <= r; ++i) {
    binom = binom * static_cast<unsigned>(top - r + i) / static_cast<unsigned>(i);
    if (binom > (static_cast<unsigned __int128>(1) << 100)) throw std::overflow_error("harmonic dimension overflow");
  }
  const unsigned __int128 num = binom * static_cast<unsigned>(2 * k + d - 1);
  const auto den = static_cast<unsigned>(k + d - 1);
  if (num % den != 0) throw std::logic_error("harmonic dimension is not integral");
  const unsigned __int128 out = num / den;
  if (out > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("harmonic dimension overflow");
  return static_cast<std::uint64_t>(out);
}

double gegenbauer_norm_sq(double alpha, int n) {
  check_args(alpha, n);
  constexpr double pi = std::numbers::pi;
  if (alpha == 0.0) return n == 0 ? pi : 2.0 * pi / (static_cast<double>(n) * n);
  const double log_v = std::log(pi) + (1.0 - 2.0 * alpha) * std::log(2.0) + std::lgamma(n + 2.0 * alpha) -
                       std::lgamma(n + 1.0) - std::log(alpha + n) - 2.0 * std::lgamma(alpha);
  return std::exp(log_v);
}

double orthogonality_residual(double alpha, int m, int n, int grid_size) {
  check_args(alpha, m);
  check_args(alpha, n);
  if (grid_size < 2) throw std::invalid_argument("grid too small");

  // Golub-Welsch on the monic recurrence of the weight (1-t^2)^{alpha-1/2}.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(grid_size);
  Eigen::VectorXd sub(grid_size - 1);
  for (int k = 1; k < grid_size; ++k) {
    double beta;
    if (alpha == 0.0)
      beta = k == 1 ? 0.5 : 0.25;
    else
      beta = k * (k + 2.0 * alpha - 1.0) / (4.0 * (k + alpha) * (k + alpha - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mass = gegenbauer_norm_sq(alpha, 0);

  double integral = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    const double node = std::clamp(es.eigenvalues()(i), -1.0, 1.0);
    integral += mass * v0 * v0 * eval_unchecked(alpha, m, node) * eval_unchecked(alpha, n, node);
  }
  const double exact = m == n ? gegenbauer_norm_sq(alpha, n) : 0.0;
  return std::abs(integral - exact);
}

void gegenbauer_sequence(double alpha, double t, double* values, int count) {
  if (count <= 0) return;
  values[0] = 1.0;
  if (count == 1) return;
  if (alpha == 0.0) {
    double t0 = 1.0, t1 = t;
    values[1] = 2.0 * t1;
    for (int j = 2; j < count; ++j) {
      const double t2 = 2.0 * t * t1 - t0;
      t0 = t1;
      t1 = t2;
      values[j] = 2.0 / j * t1;
    }
    return;
  }
  values[1] = 2.0 * alpha * t;
  for (int j = 2; j < count; ++j)
    values[j] = (2.0 * (j + alpha - 1.0) * t * values[j - 1] - (j + 2.0 * alpha - 2.0) * values[j - 2]) / j;
}

}  // namespace design_forge
