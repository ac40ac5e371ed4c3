#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace design_forge {

/// Gauss rule for the weight (1-t^2)^{lambda-1/2} on [-1, 1], weights
/// normalized to sum to 1. lambda > 0.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_gegenbauer(double lambda, int n_nodes);

/// Positive-weight cubature on S^d against the normalized surface measure.
class SphereRule {
 public:
  SphereRule(std::size_t d, std::vector<double> nodes, std::vector<double> weights);

  std::size_t dim() const { return d_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> node(std::size_t i) const { return {nodes_.data() + i * (d_ + 1), d_ + 1}; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::size_t d_;
  std::vector<double> nodes_;  // row-major, size() x (d+1)
  std::vector<double> weights_;
};

/// Product rule (Gauss-Gegenbauer in each colatitude, equally spaced on the
/// circle) integrating every polynomial of total degree <= `degree` exactly.
SphereRule product_sphere_rule(std::size_t d, int degree);

/// Product rule with explicit node counts per colatitude level and on the circle.
SphereRule product_sphere_rule(std::size_t d, int polar_nodes, int circle_nodes);

}  // namespace design_forge
