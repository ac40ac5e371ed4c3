#include "design_forge/pair_kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "design_forge/gegenbauer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace design_forge::kernels {

namespace {

inline double row_dot(const double* a, const double* b, std::size_t len) {
  double s = 0.0;
  for (std::size_t c = 0; c < len; ++c) s += a[c] * b[c];
  return std::clamp(s, -1.0, 1.0);
}

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// One row of the gradient: (1/N) sum_j g'(t_ij) (x_j - t_ij x_i).
inline void gradient_row(const KernelSpec& spec, const double* pts, std::size_t n_pts, std::size_t len,
                         std::size_t i, double* out) {
  const double* xi = pts + i * len;
  std::fill(out, out + len, 0.0);
  for (std::size_t j = 0; j < n_pts; ++j) {
    if (j == i) continue;
    const double* xj = pts + j * len;
    const double t = row_dot(xi, xj, len);
    const double gp = spec.g_d1_unchecked(t);
    for (std::size_t c = 0; c < len; ++c) out[c] += gp * (xj[c] - t * xi[c]);
  }
  const double inv_n = 1.0 / static_cast<double>(n_pts);
  double radial = 0.0;
  for (std::size_t c = 0; c < len; ++c) {
    out[c] *= inv_n;
    radial += out[c] * xi[c];
  }
  // rounding leaves a radial component of order eps * g'(1); drop it
  for (std::size_t c = 0; c < len; ++c) out[c] -= radial * xi[c];
}

inline void node_row(const KernelSpec& spec, const double* pts, std::size_t n_pts, std::size_t len,
                     const double* node, double* out, std::vector<double>& scratch) {
  const int n = spec.strength();
  std::fill(out, out + n, 0.0);
  for (std::size_t i = 0; i < n_pts; ++i) {
    const double t = row_dot(pts + i * len, node, len);
    gegenbauer_sequence(spec.alpha(), t, scratch.data(), n + 1);
    for (int k = 1; k <= n; ++k) out[k - 1] += scratch[k];
  }
  const double inv_n = 1.0 / static_cast<double>(n_pts);
  for (int k = 1; k <= n; ++k) out[k - 1] *= spec.coefficient(k) * inv_n;
}

void check_gradient_out(const Configuration& config, std::span<double> out) {
  if (out.size() != config.coords().size()) throw std::invalid_argument("gradient output has the wrong size");
}

void check_node_out(const KernelSpec& spec, const SphereRule& rule, std::span<double> out) {
  if (out.size() != rule.size() * static_cast<std::size_t>(spec.strength()))
    throw std::invalid_argument("node sum output has the wrong size");
}

}  // namespace

namespace serial {

double gram_sum(const KernelSpec& spec, const Configuration& config) {
  const std::size_t n_pts = config.size();
  const std::size_t len = config.dim() + 1;
  const double* pts = config.coords().data();
  Kahan acc;
  for (std::size_t i = 0; i < n_pts; ++i)
    for (std::size_t j = 0; j < n_pts; ++j) acc.add(spec.g_unchecked(row_dot(pts + i * len, pts + j * len, len)));
  return acc.sum;
}

void phi_gradient(const KernelSpec& spec, const Configuration& config, std::span<double> out) {
  check_gradient_out(config, out);
  const std::size_t len = config.dim() + 1;
  for (std::size_t i = 0; i < config.size(); ++i)
    gradient_row(spec, config.coords().data(), config.size(), len, i, out.data() + i * len);
}

void node_degree_sums(const KernelSpec& spec, const Configuration& config, const SphereRule& rule,
                      std::span<double> out) {
  check_node_out(spec, rule, out);
  const std::size_t len = config.dim() + 1;
  const auto n = static_cast<std::size_t>(spec.strength());
  std::vector<double> scratch(n + 1);
  for (std::size_t m = 0; m < rule.size(); ++m)
    node_row(spec, config.coords().data(), config.size(), len, rule.node(m).data(), out.data() + m * n, scratch);
}

}  // namespace serial

namespace omp {

double gram_sum(const KernelSpec& spec, const Configuration& config) {
  const auto n_pts = static_cast<long>(config.size());
  const std::size_t len = config.dim() + 1;
  const double* pts = config.coords().data();
  std::vector<double> row_sums(static_cast<std::size_t>(n_pts));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n_pts; ++i) {
    Kahan acc;
    for (long j = 0; j < n_pts; ++j) acc.add(spec.g_unchecked(row_dot(pts + i * len, pts + j * len, len)));
    row_sums[static_cast<std::size_t>(i)] = acc.sum;
  }
  Kahan total;
  for (double r : row_sums) total.add(r);
  return total.sum;
}

void phi_gradient(const KernelSpec& spec, const Configuration& config, std::span<double> out) {
  check_gradient_out(config, out);
  const std::size_t len = config.dim() + 1;
  const auto n_pts = static_cast<long>(config.size());
  const double* pts = config.coords().data();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n_pts; ++i)
    gradient_row(spec, pts, config.size(), len, static_cast<std::size_t>(i), out.data() + i * len);
}

void node_degree_sums(const KernelSpec& spec, const Configuration& config, const SphereRule& rule,
                      std::span<double> out) {
  check_node_out(spec, rule, out);
  const std::size_t len = config.dim() + 1;
  const auto n = static_cast<std::size_t>(spec.strength());
  const auto n_nodes = static_cast<long>(rule.size());
#pragma omp parallel
  {
    std::vector<double> scratch(n + 1);
#pragma omp for schedule(static)
    for (long m = 0; m < n_nodes; ++m)
      node_row(spec, config.coords().data(), config.size(), len, rule.node(static_cast<std::size_t>(m)).data(),
               out.data() + m * n, scratch);
  }
}

}  // namespace omp

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace design_forge::kernels
