#include "design_forge/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

namespace design_forge {

double monomial_sphere_integral(std::span<const int> exponents) {
  if (exponents.size() < 2) throw std::invalid_argument("need at least 2 variables");
  int total = 0;
  for (int a : exponents) {
    if (a < 0) throw std::invalid_argument("negative exponent");
    if (a % 2 != 0) return 0.0;
    total += a;
  }
  const double vars = static_cast<double>(exponents.size());
  double log_v = std::lgamma(0.5 * vars) - std::lgamma(0.5 * (vars + total));
  const double log_gamma_half = std::lgamma(0.5);
  for (int a : exponents) log_v += std::lgamma(0.5 * (a + 1)) - log_gamma_half;
  return std::exp(log_v);
}

namespace {

void enumerate(std::size_t vars, int remaining, std::vector<int>& cur, std::size_t pos,
               std::vector<std::vector<int>>& out) {
  if (pos + 1 == vars) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur[pos] = a;
    enumerate(vars, remaining - a, cur, pos + 1, out);
  }
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(std::size_t vars, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(vars, 0);
  for (int deg = 0; deg <= max_degree; ++deg) enumerate(vars, deg, cur, 0, out);
  return out;
}

DesignCheck is_design(std::size_t d, std::span<const double> coords, int n, double tol) {
  if (n < 1) throw std::invalid_argument("design strength must be >= 1");
  const std::size_t vars = d + 1;
  if (coords.empty() || coords.size() % vars != 0) throw std::invalid_argument("bad coordinate array");
  const std::size_t n_pts = coords.size() / vars;

  // powers[(i * vars + c) * (n+1) + e] = x_{i,c}^e
  const auto np1 = static_cast<std::size_t>(n + 1);
  std::vector<double> powers(n_pts * vars * np1);
  for (std::size_t i = 0; i < n_pts; ++i)
    for (std::size_t c = 0; c < vars; ++c) {
      double* p = &powers[(i * vars + c) * np1];
      p[0] = 1.0;
      for (std::size_t e = 1; e < np1; ++e) p[e] = p[e - 1] * coords[i * vars + c];
    }

  DesignCheck out;
  out.worst_error = -1.0;
  for (const auto& a : monomial_exponents(vars, n)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_pts; ++i) {
      double term = 1.0;
      for (std::size_t c = 0; c < vars; ++c) term *= powers[(i * vars + c) * np1 + static_cast<std::size_t>(a[c])];
      sum += term;
    }
    const double err = std::abs(sum / static_cast<double>(n_pts) - monomial_sphere_integral(a));
    if (err > out.worst_error) {
      out.worst_error = err;
      out.witness = a;
    }
  }
  out.pass = out.worst_error <= tol;
  return out;
}

DesignCheck is_design(const std::vector<UnitPoint>& points, int n, double tol) {
  if (points.empty()) throw std::invalid_argument("empty point set");
  std::vector<double> coords;
  for (const UnitPoint& p : points) coords.insert(coords.end(), p.coords().begin(), p.coords().end());
  return is_design(points.front().dim(), coords, n, tol);
}

SphereRule mz_reference_grid(std::size_t d, bool coarse) {
  const int div = coarse ? 2 : 1;
  switch (d) {
    case 1:
      return product_sphere_rule(1, 1, 1000000 / div);
    case 2:
      return product_sphere_rule(2, 1000 / div, 1000 / div);
    case 3:
      return product_sphere_rule(3, 100 / div, 100 / div);
    default:
      throw std::domain_error("reference quadrature unsupported");
  }
}

namespace {

double grid_l1(const std::function<double(const double*)>& poly, const SphereRule& grid) {
  const auto nodes = grid.nodes();
  const auto w = grid.weights();
  const std::size_t stride = grid.dim() + 1;
  const auto n_nodes = static_cast<long>(grid.size());
  std::vector<double> vals(grid.size());
#pragma omp parallel for schedule(static)
  for (long m = 0; m < n_nodes; ++m)
    vals[static_cast<std::size_t>(m)] = std::abs(poly(nodes.data() + static_cast<std::size_t>(m) * stride));
  double sum = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) sum += w[m] * vals[m];
  return sum;
}

double discrete_l1(std::size_t d, std::span<const double> coords, const std::function<double(const double*)>& poly) {
  const std::size_t stride = d + 1;
  const std::size_t n_pts = coords.size() / stride;
  double sum = 0.0;
  for (std::size_t i = 0; i < n_pts; ++i) sum += std::abs(poly(coords.data() + i * stride));
  return sum / static_cast<double>(n_pts);
}

std::function<double(const double*)> random_polynomial(std::size_t d, int m, std::size_t trial,
                                                       std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t vars = d + 1;
  if (trial % 2 == 0) {
    // constant plus a few reproducing kernels of degree m
    auto spec = std::make_shared<KernelSpec>(static_cast<int>(d), m);
    auto centers = std::make_shared<std::vector<double>>();
    auto coeffs = std::make_shared<std::vector<double>>();
    for (int j = 0; j < 3; ++j) {
      const UnitPoint c = random_point(d, rng);
      centers->insert(centers->end(), c.coords().begin(), c.coords().end());
      coeffs->push_back(gauss(rng));
    }
    const double constant = gauss(rng) * spec->g1();
    return [=](const double* y) {
      double v = constant;
      for (std::size_t j = 0; j < coeffs->size(); ++j) {
        double t = 0.0;
        for (std::size_t c = 0; c < vars; ++c) t += (*centers)[j * vars + c] * y[c];
        v += (*coeffs)[j] * spec->g_unchecked(std::clamp(t, -1.0, 1.0));
      }
      return v;
    };
  }
  // constant plus a few monomials of degree <= m
  auto exps = std::make_shared<std::vector<std::vector<int>>>();
  auto coeffs = std::make_shared<std::vector<double>>();
  std::uniform_int_distribution<int> deg_dist(1, m);
  std::uniform_int_distribution<std::size_t> var_dist(0, vars - 1);
  for (int j = 0; j < 4; ++j) {
    std::vector<int> a(vars, 0);
    const int deg = deg_dist(rng);
    for (int s = 0; s < deg; ++s) ++a[var_dist(rng)];
    exps->push_back(std::move(a));
    coeffs->push_back(gauss(rng));
  }
  const double constant = 0.5 * gauss(rng);
  return [=](const double* y) {
    double v = constant;
    for (std::size_t j = 0; j < exps->size(); ++j) {
      double term = (*coeffs)[j];
      for (std::size_t c = 0; c < vars; ++c)
        for (int e = 0; e < (*exps)[j][c]; ++e) term *= y[c];
      v += term;
    }
    return v;
  };
}

}  // namespace

double l1_ratio(std::size_t d, std::span<const double> coords, const std::function<double(const double*)>& poly,
                const SphereRule& grid) {
  if (grid.dim() != d) throw std::invalid_argument("grid dimension mismatch");
  return discrete_l1(d, coords, poly) / grid_l1(poly, grid);
}

MzReport mz_check(std::span<const double> coords, const Partition& partition, int m, int trials,
                  std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("polynomial degree must be >= 1");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const std::size_t d = partition.dim();
  const std::size_t stride = d + 1;
  if (coords.empty() || coords.size() % stride != 0) throw std::invalid_argument("bad coordinate array");
  const SphereRule grid = mz_reference_grid(d);
  const SphereRule coarse = mz_reference_grid(d, true);

  MzReport rep;
  rep.degree = m;
  rep.trials = trials;
  rep.partition_norm = partition.norm();
  const std::size_t n_pts = coords.size() / stride;
  std::size_t inside = 0;
  const std::size_t checked = std::min(n_pts, partition.size());
  for (std::size_t i = 0; i < checked; ++i) {
    const UnitPoint x(coords.subspan(i * stride, stride));
    if (partition.contains(i, x)) ++inside;
  }
  rep.in_region_fraction = static_cast<double>(inside) / static_cast<double>(n_pts);

  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(seq);
    const auto poly = random_polynomial(d, m, static_cast<std::size_t>(t), rng);
    const double fine = grid_l1(poly, grid);
    const double rough = grid_l1(poly, coarse);
    rep.reference_discrepancy = std::max(rep.reference_discrepancy, std::abs(fine - rough) / fine);
    const double ratio = discrete_l1(d, coords, poly) / fine;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.pass = rep.min_ratio > 0.5 && rep.max_ratio < 1.5;
  return rep;
}

Lemma1Report lemma1_montecarlo(const KernelSpec& spec, const Partition& partition, int trials, std::uint64_t seed) {
  if (trials < 50) throw std::invalid_argument("need at least 50 trials");
  if (partition.dim() != static_cast<std::size_t>(spec.dim())) throw std::invalid_argument("dimension mismatch");
  const std::size_t n_pts = partition.size();
  const std::size_t stride = partition.dim() + 1;

  std::vector<double> energies, crosses;
  for (int t = 0; t < trials; ++t) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(seq);
    std::vector<UnitPoint> first, second;
    for (std::size_t i = 0; i < n_pts; ++i) first.push_back(partition.region_sample(i, rng));
    for (std::size_t i = 0; i < n_pts; ++i) second.push_back(partition.region_sample(i, rng));
    const Configuration cfg(first);
    energies.push_back(energy(spec, cfg));

    double cross = 0.0;
    for (std::size_t i = 0; i < n_pts; ++i)
      for (std::size_t j = 0; j < n_pts; ++j) {
        double dotv = 0.0;
        for (std::size_t c = 0; c < stride; ++c) dotv += first[i][c] * second[j][c];
        cross += spec.g_unchecked(std::clamp(dotv, -1.0, 1.0));
      }
    crosses.push_back(cross / static_cast<double>(n_pts * n_pts));
  }

  auto mean_and_stderr = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(ss / (n - 1.0) / n)};
  };

  Lemma1Report rep;
  rep.trials = trials;
  std::tie(rep.mean_energy, rep.energy_stderr) = mean_and_stderr(energies);
  std::tie(rep.cross_mean, rep.cross_stderr) = mean_and_stderr(crosses);
  rep.bound = spec.gp1() * partition.norm() * partition.norm() / static_cast<double>(n_pts);
  rep.pass = rep.mean_energy <= rep.bound * (1.0 + 3.0 / std::sqrt(static_cast<double>(trials)));
  rep.cross_pass = std::abs(rep.cross_mean) <= 4.0 * rep.cross_stderr;
  return rep;
}

ResidualConsistency residual_consistency(const KernelSpec& spec, const Configuration& config) {
  const DesignCheck check = is_design(config.dim(), config.coords(), spec.strength(), 0.0);
  return {design_residual(spec, config), check.worst_error};
}

}  // namespace design_forge
