#include "design_forge/sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace design_forge {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

std::vector<double> normalized_copy(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("points need at least 2 coordinates");
  const double len = norm(v);
  if (!(len > 0.0) || !std::isfinite(len)) throw std::domain_error("degenerate direction");
  std::vector<double> out(v.begin(), v.end());
  for (double& c : out) c /= len;
  return out;
}

}  // namespace

UnitPoint::UnitPoint(std::span<const double> v) : coords_(normalized_copy(v)) {}

UnitPoint::UnitPoint(std::initializer_list<double> v)
    : coords_(normalized_copy(std::span<const double>(v.begin(), v.size()))) {}

UnitPoint unit_point_from_unit_coords(std::vector<double> c) {
  const double len = norm(c);
  if (len != 1.0)
    for (double& x : c) x /= len;
  return UnitPoint(std::move(c), UnitPoint::unchecked_tag{});
}

double TangentVector::norm() const { return design_forge::norm(dir); }

UnitPoint normalize(std::span<const double> v) { return UnitPoint(v); }

TangentVector tangent_project(const UnitPoint& x, std::span<const double> v) {
  if (v.size() != x.ambient_dim()) throw std::invalid_argument("dimension mismatch");
  const double radial = dot(v, x.coords());
  std::vector<double> dir(v.begin(), v.end());
  for (std::size_t i = 0; i < dir.size(); ++i) dir[i] -= radial * x[i];
  return {x, std::move(dir)};
}

void geodesic_step_inplace(std::span<double> x, std::span<const double> v, double t) {
  const double speed = norm(v);
  if (speed == 0.0 || t == 0.0) return;
  const double angle = speed * t;
  const double c = std::cos(angle);
  const double s = std::sin(angle) / speed;
  double len2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = c * x[i] + s * v[i];
    len2 += x[i] * x[i];
  }
  // Rounding in cos/sin leaves |x| off by a few ulp; pull it back.
  const double len = std::sqrt(len2);
  for (double& xi : x) xi /= len;
}

UnitPoint geodesic_step(const UnitPoint& x, const TangentVector& v, double t) {
  if (v.dir.size() != x.ambient_dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<double> out(x.coords().begin(), x.coords().end());
  geodesic_step_inplace(out, v.dir, t);
  return unit_point_from_unit_coords(std::move(out));
}

UnitPoint random_point(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(d + 1);
  for (;;) {
    for (double& c : v) c = gauss(rng);
    if (norm(v) > 1e-300) return UnitPoint(v);
  }
}

}  // namespace design_forge
