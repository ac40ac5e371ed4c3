#include "design_forge/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "design_forge/gegenbauer.hpp"
#include "design_forge/pair_kernels.hpp"

namespace design_forge {

namespace {

// sum_{j<count} coef[j] C_j^a(t); a = 0 follows the (2/j) T_j convention.
double gegenbauer_series(double a, const double* coef, int count, double t) {
  if (count <= 0) return 0.0;
  double sum = coef[0];
  if (count == 1) return sum;
  if (a == 0.0) {
    double t0 = 1.0, t1 = t;
    sum += coef[1] * 2.0 * t1;
    for (int j = 2; j < count; ++j) {
      const double t2 = 2.0 * t * t1 - t0;
      t0 = t1;
      t1 = t2;
      sum += coef[j] * (2.0 / j) * t1;
    }
    return sum;
  }
  double c0 = 1.0;
  double c1 = 2.0 * a * t;
  sum += coef[1] * c1;
  for (int j = 2; j < count; ++j) {
    const double c2 = (2.0 * (j + a - 1.0) * t * c1 - (j + 2.0 * a - 2.0) * c0) / j;
    c0 = c1;
    c1 = c2;
    sum += coef[j] * c1;
  }
  return sum;
}

double checked_argument(double t) {
  if (!(std::abs(t) <= 1.0 + 1e-12)) throw std::domain_error("kernel argument outside [-1, 1]");
  return std::clamp(t, -1.0, 1.0);
}

}  // namespace

KernelSpec::KernelSpec(int d, int n)
    : d_(d), n_(n), alpha_(0.5 * (d - 1)), rule_(1, {1.0, 0.0}, {1.0}) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (n < 1 || n > kMaxGegenbauerDegree)
    throw std::out_of_range("design strength must lie in [1, " + std::to_string(kMaxGegenbauerDegree) + "]");

  weights_.resize(n);
  lambda_.assign(n + 1, 0.0);
  lambda_d1_.assign(n, 0.0);
  lambda_d2_.assign(std::max(n - 1, 1), 0.0);
  const double f1 = alpha_ == 0.0 ? 2.0 : 2.0 * alpha_;
  const double f2 = alpha_ == 0.0 ? 4.0 : 4.0 * alpha_ * (alpha_ + 1.0);
  for (int k = 1; k <= n; ++k) {
    const double w = static_cast<double>(k) * (k + d - 1);
    const double lam = static_cast<double>(harmonic_dim(d, k)) / (w * gegenbauer_at_one(alpha_, k));
    weights_[k - 1] = w;
    lambda_[k] = lam;
    lambda_d1_[k - 1] = lam * f1;
    if (k >= 2) lambda_d2_[k - 2] = lam * f2;
  }
  g1_ = g_unchecked(1.0);
  gp1_ = g_d1_unchecked(1.0);
  gpp1_ = g_d2(1.0);
  rule_ = product_sphere_rule(static_cast<std::size_t>(d), 2 * n);
  coefficients_view_.assign(lambda_.begin() + 1, lambda_.end());
}

double KernelSpec::g_unchecked(double t) const { return gegenbauer_series(alpha_, lambda_.data(), n_ + 1, t); }

double KernelSpec::g_d1_unchecked(double t) const {
  return gegenbauer_series(alpha_ + 1.0, lambda_d1_.data(), n_, t);
}

void KernelSpec::g_and_d1_unchecked(double t, double& g, double& gp) const {
  g = g_unchecked(t);
  gp = g_d1_unchecked(t);
}

double KernelSpec::g(double t) const { return g_unchecked(checked_argument(t)); }
double KernelSpec::g_d1(double t) const { return g_d1_unchecked(checked_argument(t)); }
double KernelSpec::g_d2(double t) const {
  t = checked_argument(t);
  if (n_ < 2) return 0.0;
  return gegenbauer_series(alpha_ + 2.0, lambda_d2_.data(), n_ - 1, t);
}

KernelSpec make_kernel(int d, int n) { return KernelSpec(d, n); }

double gp1_closed_sum(int d, int n) {
  // factorials via lgamma to stay finite for large k
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double log_term = std::lgamma(k + d - 1.0) - std::lgamma(k + 1.0) - std::lgamma(d + 1.0);
    sum += (2.0 * k + d - 1.0) * std::exp(log_term);
  }
  return sum;
}

Configuration::Configuration(std::size_t d, std::vector<double> coords) : d_(d), coords_(std::move(coords)) {
  if (d_ < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (coords_.size() % (d_ + 1) != 0) throw std::invalid_argument("coordinate count is not a multiple of d+1");
  n_points_ = coords_.size() / (d_ + 1);
  for (std::size_t i = 0; i < n_points_; ++i) {
    std::span<double> x(coords_.data() + i * (d_ + 1), d_ + 1);
    const double len = norm(x);
    if (!(std::abs(len - 1.0) <= 1e-9)) throw std::invalid_argument("point " + std::to_string(i) + " is not unit");
    // Rescaling already-unit input would perturb the last bits, so file round trips stay exact.
    if (std::abs(len - 1.0) > 1e-14)
      for (double& c : x) c /= len;
  }
}

Configuration::Configuration(const std::vector<UnitPoint>& points) {
  if (points.empty()) return;
  d_ = points.front().dim();
  n_points_ = points.size();
  coords_.reserve(n_points_ * (d_ + 1));
  for (const UnitPoint& p : points) {
    if (p.dim() != d_) throw std::invalid_argument("mixed dimensions in configuration");
    coords_.insert(coords_.end(), p.coords().begin(), p.coords().end());
  }
}

UnitPoint Configuration::unit_point(std::size_t i) const {
  const auto p = point(i);
  return unit_point_from_unit_coords(std::vector<double>(p.begin(), p.end()));
}

std::vector<UnitPoint> Configuration::points() const {
  std::vector<UnitPoint> out;
  out.reserve(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) out.push_back(unit_point(i));
  return out;
}

void Configuration::move_point(std::size_t i, std::span<const double> v, double t) {
  if (i >= n_points_) throw std::out_of_range("point index out of range");
  geodesic_step_inplace(std::span<double>(coords_.data() + i * (d_ + 1), d_ + 1), v, t);
}

namespace {

void check_compatible(const KernelSpec& spec, const Configuration& config) {
  if (config.empty()) throw std::invalid_argument("empty configuration");
  if (config.dim() != static_cast<std::size_t>(spec.dim()))
    throw std::invalid_argument("configuration dimension does not match kernel");
}

}  // namespace

std::vector<double> energy_by_degree(const KernelSpec& spec, const Configuration& config) {
  check_compatible(spec, config);
  const SphereRule& rule = spec.rule();
  const auto n = static_cast<std::size_t>(spec.strength());
  std::vector<double> sums(rule.size() * n);
  kernels::omp::node_degree_sums(spec, config, rule, sums);
  std::vector<double> out(n, 0.0);
  const auto w = rule.weights();
  for (std::size_t m = 0; m < rule.size(); ++m)
    for (std::size_t k = 0; k < n; ++k) out[k] += w[m] * sums[m * n + k] * sums[m * n + k];
  for (std::size_t k = 0; k < n; ++k) out[k] *= spec.weights()[k];
  return out;
}

double energy(const KernelSpec& spec, const Configuration& config) {
  double total = 0.0;
  for (double e : energy_by_degree(spec, config)) total += e;
  return total;
}

double gram_energy(const KernelSpec& spec, const Configuration& config) {
  check_compatible(spec, config);
  const auto n_pts = static_cast<double>(config.size());
  return kernels::omp::gram_sum(spec, config) / (n_pts * n_pts);
}

std::vector<double> phi_gradient(const KernelSpec& spec, const Configuration& config) {
  check_compatible(spec, config);
  std::vector<double> out(config.coords().size());
  kernels::omp::phi_gradient(spec, config, out);
  return out;
}

std::vector<TangentVector> energy_gradient(const KernelSpec& spec, const Configuration& config) {
  const std::vector<double> phi = phi_gradient(spec, config);
  const std::size_t stride = config.dim() + 1;
  const double scale = 2.0 / static_cast<double>(config.size());
  std::vector<TangentVector> out;
  out.reserve(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    std::vector<double> dir(phi.begin() + i * stride, phi.begin() + (i + 1) * stride);
    for (double& c : dir) c *= scale;
    out.push_back({config.unit_point(i), std::move(dir)});
  }
  return out;
}

double design_residual(const KernelSpec& spec, const Configuration& config) {
  return std::sqrt(std::max(energy(spec, config), 0.0));
}

double hessian_step_bound(const KernelSpec& spec) { return std::sqrt(3.0 * spec.gpp1() + spec.gp1()); }

double kernel_poly_eval(const KernelSpec& spec, const std::vector<UnitPoint>& centers,
                        std::span<const double> coeffs, const UnitPoint& y) {
  if (centers.size() != coeffs.size()) throw std::invalid_argument("centers and coefficients differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) sum += coeffs[i] * spec.g(dot(centers[i].coords(), y.coords()));
  return sum;
}

double kernel_poly_norm_sq(const KernelSpec& spec, const std::vector<UnitPoint>& centers,
                           std::span<const double> coeffs) {
  if (centers.size() != coeffs.size()) throw std::invalid_argument("centers and coefficients differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = 0; j < centers.size(); ++j)
      sum += coeffs[i] * coeffs[j] * spec.g(dot(centers[i].coords(), centers[j].coords()));
  return sum;
}

}  // namespace design_forge
