#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "design_forge/kernel.hpp"
#include "design_forge/partition.hpp"
#include "design_forge/sphere_rule.hpp"

namespace design_forge {

/// \int_{S^d} x^a dmu_d for the normalized surface measure, d = a.size() - 1.
double monomial_sphere_integral(std::span<const int> exponents);

/// All exponent vectors of length `vars` with total degree <= max_degree,
/// graded then lexicographic.
std::vector<std::vector<int>> monomial_exponents(std::size_t vars, int max_degree);

struct DesignCheck {
  bool pass = false;
  double worst_error = 0.0;
  std::vector<int> witness;
};

/// Compares the equal-weight average of every monomial of degree <= n with
/// its exact integral. Works on raw row-major coordinates (N x (d+1)) and does
/// not touch the kernel machinery.
DesignCheck is_design(std::size_t d, std::span<const double> coords, int n, double tol);
DesignCheck is_design(const std::vector<UnitPoint>& points, int n, double tol);

struct MzReport {
  int degree = 0;
  int trials = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = false;
  double partition_norm = 0.0;
  /// Fraction of points lying in their own partition region.
  double in_region_fraction = 0.0;
  /// Largest relative change of the reference L1 integral between the full
  /// grid and a grid with half the nodes per level.
  double reference_discrepancy = 0.0;
};

/// Dense product grid for L1 reference integrals: >= 10^6 nodes for d <= 3.
/// Throws std::domain_error("reference quadrature unsupported") for d > 3.
SphereRule mz_reference_grid(std::size_t d, bool coarse = false);

/// (1/N) sum |P(x_i)| divided by \int |P| on `grid`.
double l1_ratio(std::size_t d, std::span<const double> coords, const std::function<double(const double*)>& poly,
                const SphereRule& grid);

/// Discrete-to-continuous L1 ratios of random polynomials of degree <= m
/// (kernel-span and monomial-mixture families, alternating); pass iff every
/// ratio lies in (1/2, 3/2).
MzReport mz_check(std::span<const double> coords, const Partition& partition, int m, int trials, std::uint64_t seed);

struct Lemma1Report {
  int trials = 0;
  double mean_energy = 0.0;
  double energy_stderr = 0.0;
  double bound = 0.0;
  bool pass = false;
  /// Mean and standard error of (1/N^2) sum_{i,j} g(<x_i, x'_j>) for two
  /// independent in-region draws; estimates \int\int g = 0.
  double cross_mean = 0.0;
  double cross_stderr = 0.0;
  bool cross_pass = false;
};

/// Monte Carlo over independent uniform draws x_i in R_i. pass iff
/// mean_energy <= bound * (1 + 3/sqrt(trials)); cross_pass iff
/// |cross_mean| <= 4 cross_stderr. Needs trials >= 50.
Lemma1Report lemma1_montecarlo(const KernelSpec& spec, const Partition& partition, int trials, std::uint64_t seed);

struct ResidualConsistency {
  double kernel_residual;
  double monomial_deviation;
};

/// Kernel residual next to the worst monomial deviation, on the same points.
ResidualConsistency residual_consistency(const KernelSpec& spec, const Configuration& config);

}  // namespace design_forge
