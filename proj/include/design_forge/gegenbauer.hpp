#pragma once

#include <cstdint>

namespace design_forge {

/// Largest degree evaluated by the recurrences; beyond it rounding in double
/// precision is no longer controlled, so callers get an error instead.
inline constexpr int kMaxGegenbauerDegree = 200;

/// Parameters of the Gegenbauer family attached to S^d: alpha = (d-1)/2.
struct GegenbauerParams {
  double alpha;
  int max_degree;

  static GegenbauerParams for_sphere(int d, int max_degree);
};

/// C_k^alpha(t), classical normalization (C_k^alpha(1) = binom(2 alpha + k - 1, k)).
///
/// alpha = 0 uses the renormalized limit lim C_k^alpha / alpha = (2/k) T_k, so
/// that the circle kernel keeps a nonzero value at t = 1. Throws
/// std::domain_error when |t| > 1 + 1e-12 or alpha < 0, std::out_of_range for
/// k outside [0, kMaxGegenbauerDegree].
double gegenbauer_eval(double alpha, int k, double t);

/// First or second t-derivative of C_k^alpha, from
/// d/dt C_k^a = 2a C_{k-1}^{a+1} and d2/dt2 C_k^a = 4a(a+1) C_{k-2}^{a+2}.
double gegenbauer_derivative(double alpha, int k, double t, int order);

/// C_k^alpha(1) via prod_{j=1..k} (2 alpha + j - 1) / j (2/k when alpha = 0).
double gegenbauer_at_one(double alpha, int k);

/// Dimension of the space of degree-k spherical harmonics on S^d, k >= 1.
std::uint64_t harmonic_dim(int d, int k);

/// Closed-form value of \int_{-1}^{1} (C_n^alpha)^2 (1-t^2)^{alpha-1/2} dt.
double gegenbauer_norm_sq(double alpha, int n);

/// |numeric \int C_m C_n w dt - closed form|, using a Gauss rule for the
/// weight (1-t^2)^{alpha-1/2} with grid_size nodes built from the Jacobi
/// matrix (independent of the evaluation recurrence). Test helper.
double orthogonality_residual(double alpha, int m, int n, int grid_size);

/// Fills values[k] = C_k^alpha(t) for k = 0..values.size()-1, t already in [-1, 1].
/// Hot-path variant without range checks.
void gegenbauer_sequence(double alpha, double t, double* values, int count);

}  // namespace design_forge
