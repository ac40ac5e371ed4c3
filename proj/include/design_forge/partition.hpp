#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "design_forge/sphere.hpp"

namespace design_forge {

/// Normalized measure of the cap {x in S^m : angle(x, pole) < theta}.
double normalized_cap_area(std::size_t m, double theta);

/// Inverse of normalized_cap_area in theta, for area in [0, 1].
double cap_colatitude(std::size_t m, double area);

struct AngleInterval {
  double lo;
  double hi;
};

/// A region of the recursive zonal partition of S^d.
///
/// bounds[j] for j < d-1 is a colatitude interval on S^{d-j} (the angle
/// from the last coordinate axis); bounds[d-1] is the longitude interval on
/// S^1. A level whose interval spans its full range is unconstrained.
/// Intervals are half-open [lo, hi) unless hi is the top of the range.
struct Region {
  std::vector<AngleInterval> bounds;
};

/// Area-regular partition of S^d into N regions (polar caps plus collars,
/// each collar split by the same construction one dimension down).
class Partition {
 public:
  Partition(std::size_t d, std::vector<Region> regions);

  std::size_t dim() const { return d_; }
  std::size_t size() const { return regions_.size(); }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<UnitPoint>& centers() const { return centers_; }
  const std::vector<double>& region_diameters() const { return diameters_; }
  double norm() const { return norm_; }

  /// Analytic normalized area of region i.
  double region_area(std::size_t i) const;
  bool contains(std::size_t i, const UnitPoint& x) const;
  /// Index of the region containing x.
  std::size_t locate(const UnitPoint& x) const;
  const UnitPoint& region_center(std::size_t i) const;
  /// Uniform sample from region i.
  UnitPoint region_sample(std::size_t i, std::mt19937_64& rng) const;

 private:
  void check_index(std::size_t i) const;

  std::size_t d_;
  std::vector<Region> regions_;
  std::vector<UnitPoint> centers_;
  std::vector<double> diameters_;
  double norm_ = 0.0;
};

Partition eq_partition(std::size_t d, std::size_t n_regions);

/// Max over regions of an analytic upper bound on the Euclidean diameter.
double partition_norm(const Partition& p);

/// Upper bound on the Euclidean diameter of a region of S^d.
double region_diameter_bound(const Region& r);

}  // namespace design_forge
