#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "design_forge/kernel.hpp"
#include "design_forge/partition.hpp"

namespace design_forge {

enum class InitMode { centers, random_in_region };

InitMode parse_init_mode(const std::string& s);
std::string to_string(InitMode m);

struct InitialConfiguration {
  Partition partition;
  Configuration config;
  /// Upper bound on the expected energy of in-region sampling.
  double lemma1_bound;
};

/// g'(1) * ||R||^2 / N.
double lemma1_bound(const KernelSpec& spec, const Partition& partition);

/// One point per region of eq_partition(d, N): the region centers, or a
/// uniform draw inside each region (reproducible from `seed`).
InitialConfiguration initial_configuration(const KernelSpec& spec, std::size_t n_points, InitMode mode,
                                           std::uint64_t seed);

/// Moves every x_i along the great circle with velocity -grad Phi(x_i) for time t.
Configuration descent_step(const KernelSpec& spec, const Configuration& config, double t);

struct SolveOptions {
  int max_iterations = 100000;
  /// Target for the residual ||Phi||_w.
  double tolerance = 1e-12;
  /// nullopt selects 1 / (3 g''(1) + g'(1)).
  std::optional<double> initial_step;
  double backtrack = 0.5;
  double armijo = 1e-4;
  /// Step enlargement after an accepted step, capped at max_step.
  double growth = 2.0;
  double max_step = 2.0;
  double min_step = 1e-20;
  int stall_window = 50;
  double stall_relative_decrease = 1e-16;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Termination { converged, max_iterations, stalled };
std::string to_string(Termination t);

struct SolveReport {
  int iterations = 0;
  std::vector<double> energy_trace;
  std::vector<double> step_trace;
  double final_residual = 0.0;
  Termination terminated = Termination::max_iterations;
  double initial_bound = 0.0;
  bool mz_checked = false;
};

struct IterationLog {
  int iteration;
  double energy;
  double step;
};

struct SolveResult {
  Configuration config;
  SolveReport report;
};

/// Armijo-backtracked geodesic descent on the design energy. The velocity
/// of point i is -grad Phi(x_i), which under the weights w_k = k(k+d-1)
/// makes the linearized update of Phi close to the identity, so steps near 1
/// are the natural scale. Throws std::runtime_error("numerical blowup") on a
/// non-finite energy.
SolveResult solve(const KernelSpec& spec, Configuration init, const SolveOptions& opts,
                  double initial_bound = 0.0, const std::function<void(const IterationLog&)>& observer = {});

struct StudyRow {
  int d;
  int n;
  std::size_t n_points;
  bool converged;
  double residual;
  int iterations;
  double seconds;
};

/// For each n, solves from partition centers with N = n_rule(n). Observational.
std::vector<StudyRow> scaling_study(int d, const std::vector<int>& degrees,
                                    const std::function<std::size_t(int)>& n_rule, const SolveOptions& opts);

std::string study_csv(const std::vector<StudyRow>& rows);

}  // namespace design_forge
