#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace design_forge {

/// A point on S^d, stored as a unit vector in R^{d+1}.
class UnitPoint {
 public:
  /// Normalizes `v`. Throws std::domain_error("degenerate direction") for a zero vector.
  explicit UnitPoint(std::span<const double> v);
  UnitPoint(std::initializer_list<double> v);

  std::size_t dim() const { return coords_.size() - 1; }
  std::size_t ambient_dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  bool operator==(const UnitPoint&) const = default;

 private:
  struct unchecked_tag {};
  UnitPoint(std::vector<double> c, unchecked_tag) : coords_(std::move(c)) {}
  friend UnitPoint unit_point_from_unit_coords(std::vector<double>);

  std::vector<double> coords_;
};

/// Wraps coordinates already known to be unit length (renormalizes once, no
/// degeneracy check beyond that).
UnitPoint unit_point_from_unit_coords(std::vector<double> c);

/// A vector in the tangent space at `base`.
struct TangentVector {
  UnitPoint base;
  std::vector<double> dir;

  double norm() const;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

UnitPoint normalize(std::span<const double> v);

/// v - (v, x) x
TangentVector tangent_project(const UnitPoint& x, std::span<const double> v);

/// Moves along the great circle x cos(|v| t) + (v/|v|) sin(|v| t).
UnitPoint geodesic_step(const UnitPoint& x, const TangentVector& v, double t);

/// In-place variant on raw coordinates; `x` must be unit, `v` tangent at x.
void geodesic_step_inplace(std::span<double> x, std::span<const double> v, double t);

/// Uniform point on S^d (normalized Gaussian vector).
UnitPoint random_point(std::size_t d, std::mt19937_64& rng);

}  // namespace design_forge
