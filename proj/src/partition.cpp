#include "design_forge/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace design_forge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// I_k(theta) = \int_0^theta sin^k(s) ds
double sine_power_integral(std::size_t k, double theta) {
  double i_prev = theta;                                          // I_0
  double i_curr = 2.0 * std::sin(0.5 * theta) * std::sin(0.5 * theta);  // I_1
  if (k == 0) return i_prev;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  double s_pow = 1.0;  // sin^{j-1}
  for (std::size_t j = 2; j <= k; ++j) {
    s_pow = (j == 2) ? s : s_pow * s;
    const double next = (-s_pow * c + static_cast<double>(j - 1) * i_prev) / static_cast<double>(j);
    i_prev = i_curr;
    i_curr = next;
  }
  return i_curr;
}

double sine_power_integral_full(std::size_t k) {
  double a = kPi, b = 2.0;
  if (k == 0) return a;
  for (std::size_t j = 2; j <= k; ++j) {
    const double next = static_cast<double>(j - 1) / static_cast<double>(j) * a;
    a = b;
    b = next;
  }
  return b;
}

double sphere_surface_area(std::size_t m) {
  const double h = 0.5 * static_cast<double>(m + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double level_top(std::size_t level, std::size_t d) { return level + 1 == d ? kTwoPi : kPi; }

bool level_is_full(const AngleInterval& iv, double top) { return iv.lo <= 0.0 && iv.hi >= top; }

bool in_interval(double a, const AngleInterval& iv, double top) {
  if (a < iv.lo) return false;
  if (a < iv.hi) return true;
  return iv.hi >= top && a <= top;
}

// Angles of x in the nested coordinate system used by Region::bounds.
std::vector<double> nested_angles(std::span<const double> x) {
  const std::size_t d = x.size() - 1;
  std::vector<double> angles(d);
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t level = 0; level + 1 < d; ++level) {
    const std::size_t m = d - level;  // y lives on S^m, length m+1
    double r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) r2 += y[i] * y[i];
    const double r = std::sqrt(r2);
    angles[level] = std::atan2(r, y[m]);
    y.resize(m);
    if (r > 0.0) {
      for (double& c : y) c /= r;
    } else {
      std::fill(y.begin(), y.end(), 0.0);
      y[0] = 1.0;
    }
  }
  double phi = std::atan2(y[1], y[0]);
  if (phi < 0.0) phi += kTwoPi;
  angles[d - 1] = phi;
  return angles;
}

UnitPoint point_from_angles(std::size_t d, const std::vector<double>& angles) {
  std::vector<double> y = {std::cos(angles[d - 1]), std::sin(angles[d - 1])};
  for (std::size_t level = d - 1; level-- > 0;) {
    const double theta = angles[level];
    const double s = std::sin(theta);
    for (double& c : y) c *= s;
    y.push_back(std::cos(theta));
  }
  return unit_point_from_unit_coords(std::move(y));
}

Region full_region(std::size_t m) {
  Region r;
  for (std::size_t level = 0; level < m; ++level) r.bounds.push_back({0.0, level + 1 == m ? kTwoPi : kPi});
  return r;
}

Region prepend(AngleInterval colat, const Region& sub) {
  Region r;
  r.bounds.reserve(sub.bounds.size() + 1);
  r.bounds.push_back(colat);
  r.bounds.insert(r.bounds.end(), sub.bounds.begin(), sub.bounds.end());
  return r;
}

std::vector<Region> zonal_regions(std::size_t m, std::size_t n) {
  if (n == 1) return {full_region(m)};
  std::vector<Region> out;
  if (m == 1) {
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
      const double hi = (i + 1 == n) ? kTwoPi : kTwoPi * static_cast<double>(i + 1) / static_cast<double>(n);
      out.push_back(Region{{{lo, hi}}});
    }
    return out;
  }

  const Region sub_full = full_region(m - 1);
  if (n == 2) {
    out.push_back(prepend({0.0, 0.5 * kPi}, sub_full));
    out.push_back(prepend({0.5 * kPi, kPi}, sub_full));
    return out;
  }

  const double nd = static_cast<double>(n);
  const double polar = cap_colatitude(m, 1.0 / nd);
  const double ideal_angle = std::pow(sphere_surface_area(m) / nd, 1.0 / static_cast<double>(m));
  const auto n_collars =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround((kPi - 2.0 * polar) / ideal_angle)));

  // Ideal (fractional) region counts per collar, then rounded with carried
  // discrepancy so the total stays n - 2.
  const double fitting = (kPi - 2.0 * polar) / static_cast<double>(n_collars);
  std::vector<std::size_t> counts;
  double carry = 0.0;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < n_collars; ++k) {
    const double a = polar + fitting * static_cast<double>(k);
    const double b = polar + fitting * static_cast<double>(k + 1);
    const double ideal = (normalized_cap_area(m, b) - normalized_cap_area(m, a)) * nd;
    auto c = static_cast<long>(std::lround(ideal + carry));
    c = std::max<long>(c, 0);
    carry += ideal - static_cast<double>(c);
    counts.push_back(static_cast<std::size_t>(c));
    assigned += static_cast<std::size_t>(c);
  }
  // Guard against rounding drift in the last collar.
  if (assigned != n - 2) {
    const long fix = static_cast<long>(n - 2) - static_cast<long>(assigned);
    counts.back() = static_cast<std::size_t>(std::max<long>(0, static_cast<long>(counts.back()) + fix));
  }

  out.push_back(prepend({0.0, polar}, sub_full));
  std::size_t cumulative = 1;
  double lo = polar;
  for (std::size_t k = 0; k < n_collars; ++k) {
    if (counts[k] == 0) continue;
    cumulative += counts[k];
    const double hi = cap_colatitude(m, static_cast<double>(cumulative) / nd);
    for (const Region& sub : zonal_regions(m - 1, counts[k])) out.push_back(prepend({lo, hi}, sub));
    lo = hi;
  }
  out.push_back(prepend({lo, kPi}, sub_full));
  return out;
}

}  // namespace

double normalized_cap_area(std::size_t m, double theta) {
  if (m == 0) throw std::invalid_argument("sphere dimension must be >= 1");
  if (theta <= 0.0) return 0.0;
  if (theta >= kPi) return 1.0;
  return sine_power_integral(m - 1, theta) / sine_power_integral_full(m - 1);
}

double cap_colatitude(std::size_t m, double area) {
  if (area <= 0.0) return 0.0;
  if (area >= 1.0) return kPi;
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < 200 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (normalized_cap_area(m, mid) < area)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double region_diameter_bound(const Region& r) {
  const std::size_t d = r.bounds.size();
  const AngleInterval& lon = r.bounds[d - 1];
  const double arc = lon.hi - lon.lo;
  double diam = arc >= kPi ? 2.0 : 2.0 * std::sin(0.5 * arc);
  bool sub_full = level_is_full(lon, kTwoPi);
  for (std::size_t level = d - 1; level-- > 0;) {
    const AngleInterval& iv = r.bounds[level];
    if (sub_full && iv.lo <= 0.0) {
      diam = iv.hi >= 0.5 * kPi ? 2.0 : 2.0 * std::sin(iv.hi);
    } else if (sub_full && iv.hi >= kPi) {
      diam = iv.lo <= 0.5 * kPi ? 2.0 : 2.0 * std::sin(iv.lo);
    } else {
      const double s_max = (iv.lo <= 0.5 * kPi && iv.hi >= 0.5 * kPi) ? 1.0
                                                                       : std::max(std::sin(iv.lo), std::sin(iv.hi));
      const double chord = 2.0 * std::sin(0.5 * (iv.hi - iv.lo));
      diam = std::min(2.0, std::sqrt(chord * chord + s_max * s_max * diam * diam));
    }
    sub_full = sub_full && level_is_full(iv, kPi);
  }
  return diam;
}

Partition::Partition(std::size_t d, std::vector<Region> regions) : d_(d), regions_(std::move(regions)) {
  if (d_ == 0) throw std::invalid_argument("sphere dimension must be >= 1");
  centers_.reserve(regions_.size());
  diameters_.reserve(regions_.size());
  for (const Region& r : regions_) {
    if (r.bounds.size() != d_) throw std::invalid_argument("region depth does not match dimension");
    std::vector<double> angles(d_);
    bool sub_full = true;
    for (std::size_t level = d_; level-- > 0;) {
      const AngleInterval& iv = r.bounds[level];
      const double top = level_top(level, d_);
      if (level + 1 < d_ && sub_full && iv.lo <= 0.0)
        angles[level] = 0.0;
      else if (level + 1 < d_ && sub_full && iv.hi >= top)
        angles[level] = kPi;
      else
        angles[level] = 0.5 * (iv.lo + iv.hi);
      sub_full = sub_full && level_is_full(iv, top);
    }
    centers_.push_back(point_from_angles(d_, angles));
    diameters_.push_back(region_diameter_bound(r));
  }
  norm_ = diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());
}

void Partition::check_index(std::size_t i) const {
  if (i >= regions_.size()) throw std::out_of_range("region index out of range");
}

double Partition::region_area(std::size_t i) const {
  check_index(i);
  const Region& r = regions_[i];
  double area = 1.0;
  for (std::size_t level = 0; level + 1 < d_; ++level) {
    const std::size_t m = d_ - level;
    area *= normalized_cap_area(m, r.bounds[level].hi) - normalized_cap_area(m, r.bounds[level].lo);
  }
  const AngleInterval& lon = r.bounds[d_ - 1];
  return area * (lon.hi - lon.lo) / kTwoPi;
}

bool Partition::contains(std::size_t i, const UnitPoint& x) const {
  check_index(i);
  if (x.dim() != d_) throw std::invalid_argument("dimension mismatch");
  const std::vector<double> angles = nested_angles(x.coords());
  const Region& r = regions_[i];
  for (std::size_t level = 0; level < d_; ++level) {
    const double top = level_top(level, d_);
    if (!in_interval(angles[level], r.bounds[level], top)) return false;
    // At a pole the remaining angles are arbitrary.
    if (level + 1 < d_ && (angles[level] == 0.0 || angles[level] == kPi)) return true;
  }
  return true;
}

std::size_t Partition::locate(const UnitPoint& x) const {
  for (std::size_t i = 0; i < regions_.size(); ++i)
    if (contains(i, x)) return i;
  throw std::logic_error("point not covered by partition");
}

const UnitPoint& Partition::region_center(std::size_t i) const {
  check_index(i);
  return centers_[i];
}

UnitPoint Partition::region_sample(std::size_t i, std::mt19937_64& rng) const {
  check_index(i);
  const Region& r = regions_[i];
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> angles(d_);
  for (;;) {
    for (std::size_t level = 0; level + 1 < d_; ++level) {
      const std::size_t m = d_ - level;
      const double a0 = normalized_cap_area(m, r.bounds[level].lo);
      const double a1 = normalized_cap_area(m, r.bounds[level].hi);
      angles[level] = cap_colatitude(m, a0 + (a1 - a0) * unit(rng));
    }
    const AngleInterval& lon = r.bounds[d_ - 1];
    angles[d_ - 1] = lon.lo + (lon.hi - lon.lo) * unit(rng);
    UnitPoint x = point_from_angles(d_, angles);
    if (contains(i, x)) return x;
  }
}

Partition eq_partition(std::size_t d, std::size_t n_regions) {
  if (d == 0) throw std::invalid_argument("sphere dimension must be >= 1");
  if (n_regions == 0) throw std::invalid_argument("partition needs at least one region");
  return Partition(d, zonal_regions(d, n_regions));
}

double partition_norm(const Partition& p) { return p.norm(); }

}  // namespace design_forge
