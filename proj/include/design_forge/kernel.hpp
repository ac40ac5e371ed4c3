#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "design_forge/sphere.hpp"
#include "design_forge/sphere_rule.hpp"

namespace design_forge {

/// Precomputed reproducing kernel of the mean-zero polynomials of degree
/// <= n on S^d, under the weights w_k = k(k+d-1):
///
///   g(t) = sum_{k=1..n} lambda_k C_k^alpha(t),
///   lambda_k = dim H_k / (w_k C_k^alpha(1)),  alpha = (d-1)/2.
///
/// Immutable after construction.
class KernelSpec {
 public:
  KernelSpec(int d, int n);

  int dim() const { return d_; }
  int strength() const { return n_; }
  double alpha() const { return alpha_; }

  /// w_k and lambda_k, stored at index k-1.
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coefficients() const { return coefficients_view_; }
  double weight(int k) const { return weights_[k - 1]; }
  double coefficient(int k) const { return lambda_[k]; }

  double g1() const { return g1_; }
  double gp1() const { return gp1_; }
  double gpp1() const { return gpp1_; }

  /// g, g', g'' with domain check (|t| <= 1 + 1e-12, clamped).
  double g(double t) const;
  double g_d1(double t) const;
  double g_d2(double t) const;

  /// Unchecked hot-path evaluation; t must already lie in [-1, 1].
  double g_unchecked(double t) const;
  double g_d1_unchecked(double t) const;
  /// g and g' in one call.
  void g_and_d1_unchecked(double t, double& g, double& gp) const;

  /// Cubature exact for degree 2n on S^d.
  const SphereRule& rule() const { return rule_; }

 private:
  int d_;
  int n_;
  double alpha_;
  std::vector<double> weights_;
  std::vector<double> lambda_;  // lambda_[0] = 0, lambda_[k] for k = 1..n
  std::vector<double> coefficients_view_;
  std::vector<double> lambda_d1_;  // coefficients of C_{k-1}^{alpha+1} in g'
  std::vector<double> lambda_d2_;  // coefficients of C_{k-2}^{alpha+2} in g''
  double g1_ = 0.0;
  double gp1_ = 0.0;
  double gpp1_ = 0.0;
  SphereRule rule_;
};

KernelSpec make_kernel(int d, int n);

/// The closed sum sum_{k=1..n} (2k+d-1)(k+d-2)! / (k! d!) for g'(1).
double gp1_closed_sum(int d, int n);

/// N points on S^d, stored contiguously row-major.
class Configuration {
 public:
  Configuration() = default;
  /// Rows must be unit within 1e-12; they are renormalized exactly.
  Configuration(std::size_t d, std::vector<double> coords);
  explicit Configuration(const std::vector<UnitPoint>& points);

  std::size_t dim() const { return d_; }
  std::size_t size() const { return n_points_; }
  bool empty() const { return n_points_ == 0; }
  std::span<const double> coords() const { return coords_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * (d_ + 1), d_ + 1}; }
  UnitPoint unit_point(std::size_t i) const;
  std::vector<UnitPoint> points() const;

  /// Moves point i along the geodesic with tangent velocity v for time t.
  void move_point(std::size_t i, std::span<const double> v, double t);

 private:
  std::size_t d_ = 0;
  std::size_t n_points_ = 0;
  std::vector<double> coords_;
};

/// ||(G_{x_1} + ... + G_{x_N}) / N||_w^2, evaluated degree by degree as
/// w_k * ||Phi_k||^2 on a cubature exact for degree 2n. Stays accurate
/// down to ~1e-30, where the pairwise sum bottoms out near 1e-18.
double energy(const KernelSpec& spec, const Configuration& config);

/// Same quantity as the pairwise sum (1/N^2) sum_{i,j} g(<x_i, x_j>),
/// Kahan-compensated, row-major.
double gram_energy(const KernelSpec& spec, const Configuration& config);

/// Per-degree contributions E_1..E_n (index k-1), each >= 0.
std::vector<double> energy_by_degree(const KernelSpec& spec, const Configuration& config);

/// grad_{x_i} energy = (2/N^2) sum_j g'(<x_i,x_j>) (x_j - <x_i,x_j> x_i).
std::vector<TangentVector> energy_gradient(const KernelSpec& spec, const Configuration& config);

/// Spherical gradient of Phi = (1/N) sum_j G_{x_j} at every x_i, flattened
/// N x (d+1). Equals (N/2) grad_{x_i} energy.
std::vector<double> phi_gradient(const KernelSpec& spec, const Configuration& config);

/// sqrt(max(energy, 0)); bounds |mean Q(x_i) - \int Q| by residual * ||Q||_w.
double design_residual(const KernelSpec& spec, const Configuration& config);

/// (3 g''(1) + g'(1))^{1/2}, bound on the spherical Hessian of a unit-norm Q.
double hessian_step_bound(const KernelSpec& spec);

/// P(y) = sum_i a_i g(<x_i, y>).
double kernel_poly_eval(const KernelSpec& spec, const std::vector<UnitPoint>& centers,
                        std::span<const double> coeffs, const UnitPoint& y);

/// ||P||_w^2 = sum_{i,j} a_i a_j g(<x_i, x_j>).
double kernel_poly_norm_sq(const KernelSpec& spec, const std::vector<UnitPoint>& centers,
                           std::span<const double> coeffs);

/// Energies below this are reported as exact zero by callers.
inline constexpr double kAchievedZeroEnergy = 1e-24;

}  // namespace design_forge
