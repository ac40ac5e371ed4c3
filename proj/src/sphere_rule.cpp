#include "design_forge/sphere_rule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "design_forge/gegenbauer.hpp"

namespace design_forge {

namespace {

// C_K^lambda(cos theta) for K above kMaxGegenbauerDegree as well; rule sizes
// for reference quadrature run to ~1000 nodes.
double gegenbauer_big(double lambda, int k, double t) {
  if (k == 0) return 1.0;
  double c0 = 1.0;
  double c1 = 2.0 * lambda * t;
  for (int j = 2; j <= k; ++j) {
    const double c2 = (2.0 * (j + lambda - 1.0) * t * c1 - (j + 2.0 * lambda - 2.0) * c0) / j;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

}  // namespace

GaussRule gauss_gegenbauer(double lambda, int n_nodes) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gauss_gegenbauer needs lambda > 0");
  if (n_nodes < 1) throw std::invalid_argument("gauss_gegenbauer needs at least one node");
  constexpr double pi = std::numbers::pi;

  // Bracket roots by scanning in theta, where they are nearly equispaced.
  const int scan = 16 * n_nodes + 64;
  auto f = [&](double theta) { return gegenbauer_big(lambda, n_nodes, std::cos(theta)); };
  std::vector<double> roots;
  roots.reserve(n_nodes);
  double th_prev = 0.0;
  double f_prev = f(th_prev);
  for (int s = 1; s <= scan; ++s) {
    const double th = pi * s / scan;
    const double fv = f(th);
    if (fv == 0.0) {
      roots.push_back(th);
    } else if (f_prev != 0.0 && (fv < 0.0) != (f_prev < 0.0)) {
      double lo = th_prev, hi = th;
      double flo = f_prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    th_prev = th;
    f_prev = fv;
  }
  if (static_cast<int>(roots.size()) != n_nodes) throw std::runtime_error("gauss_gegenbauer: root bracketing failed");

  GaussRule rule;
  rule.nodes.resize(n_nodes);
  rule.weights.resize(n_nodes);
  double total = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    // ascending in t
    const double theta = roots[n_nodes - 1 - i];
    const double t = std::cos(theta);
    const double s = std::sin(theta);
    const double deriv = 2.0 * lambda * gegenbauer_big(lambda + 1.0, n_nodes - 1, t);
    rule.nodes[i] = t;
    rule.weights[i] = 1.0 / (s * s * deriv * deriv);
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

SphereRule::SphereRule(std::size_t d, std::vector<double> nodes, std::vector<double> weights)
    : d_(d), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.size() != weights_.size() * (d_ + 1)) throw std::invalid_argument("sphere rule size mismatch");
}

SphereRule product_sphere_rule(std::size_t d, int polar_nodes, int circle_nodes) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (polar_nodes < 1 || circle_nodes < 1) throw std::invalid_argument("node counts must be positive");
  constexpr double pi = std::numbers::pi;

  std::vector<double> nodes;
  std::vector<double> weights;
  nodes.reserve(2 * circle_nodes);
  for (int j = 0; j < circle_nodes; ++j) {
    const double phi = 2.0 * pi * (j + 0.5) / circle_nodes;
    nodes.push_back(std::cos(phi));
    nodes.push_back(std::sin(phi));
    weights.push_back(1.0 / circle_nodes);
  }

  for (std::size_t m = 2; m <= d; ++m) {
    const GaussRule g = gauss_gegenbauer(0.5 * static_cast<double>(m - 1), polar_nodes);
    const std::size_t sub_len = m;  // points of S^{m-1}
    std::vector<double> next_nodes;
    std::vector<double> next_weights;
    next_nodes.reserve(nodes.size() / sub_len * g.nodes.size() * (m + 1));
    for (std::size_t a = 0; a < g.nodes.size(); ++a) {
      const double t = g.nodes[a];
      const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (std::size_t b = 0; b < weights.size(); ++b) {
        for (std::size_t c = 0; c < sub_len; ++c) next_nodes.push_back(r * nodes[b * sub_len + c]);
        next_nodes.push_back(t);
        next_weights.push_back(g.weights[a] * weights[b]);
      }
    }
    nodes = std::move(next_nodes);
    weights = std::move(next_weights);
  }
  return SphereRule(d, std::move(nodes), std::move(weights));
}

SphereRule product_sphere_rule(std::size_t d, int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  return product_sphere_rule(d, degree / 2 + 1, degree + 1);
}

}  // namespace design_forge
