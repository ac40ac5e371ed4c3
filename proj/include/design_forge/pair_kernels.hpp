#pragma once

#include <span>

#include "design_forge/kernel.hpp"
#include "design_forge/sphere_rule.hpp"

// O(N^2) and O(N M) kernels behind the design energy. Each exists as a plain
// serial reference and an OpenMP version; the OpenMP versions parallelize
// over rows and keep every per-row sum serial, so their results do not depend
// on the thread count.
namespace design_forge::kernels {

namespace serial {

/// sum_{i,j} g(<x_i, x_j>), one Kahan accumulator, row-major.
double gram_sum(const KernelSpec& spec, const Configuration& config);

/// out[i] = (1/N) sum_j g'(<x_i,x_j>) (x_j - <x_i,x_j> x_i), N x (d+1).
void phi_gradient(const KernelSpec& spec, const Configuration& config, std::span<double> out);

/// out[m*n + k-1] = (lambda_k / N) sum_i C_k(<x_i, z_m>) for rule nodes z_m.
void node_degree_sums(const KernelSpec& spec, const Configuration& config, const SphereRule& rule,
                      std::span<double> out);

}  // namespace serial

namespace omp {

/// Per-row Kahan sums combined in row order.
double gram_sum(const KernelSpec& spec, const Configuration& config);
void phi_gradient(const KernelSpec& spec, const Configuration& config, std::span<double> out);
void node_degree_sums(const KernelSpec& spec, const Configuration& config, const SphereRule& rule,
                      std::span<double> out);

}  // namespace omp

/// Caps the OpenMP worker count (no-op without OpenMP); 0 keeps the default.
void set_thread_count(int threads);
int thread_count();

}  // namespace design_forge::kernels
