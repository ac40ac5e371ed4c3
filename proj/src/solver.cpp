#include "design_forge/solver.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace design_forge {

InitMode parse_init_mode(const std::string& s) {
  if (s == "centers") return InitMode::centers;
  if (s == "random-in-region") return InitMode::random_in_region;
  throw std::invalid_argument("unknown init mode '" + s + "'");
}

std::string to_string(InitMode m) { return m == InitMode::centers ? "centers" : "random-in-region"; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iterations:
      return "max_iterations";
    case Termination::stalled:
      return "stalled";
  }
  return "unknown";
}

double lemma1_bound(const KernelSpec& spec, const Partition& partition) {
  const double r = partition.norm();
  return spec.gp1() * r * r / static_cast<double>(partition.size());
}

InitialConfiguration initial_configuration(const KernelSpec& spec, std::size_t n_points, InitMode mode,
                                           std::uint64_t seed) {
  if (n_points == 0) throw std::invalid_argument("need at least one point");
  Partition partition = eq_partition(static_cast<std::size_t>(spec.dim()), n_points);
  std::vector<UnitPoint> pts;
  pts.reserve(n_points);
  if (mode == InitMode::centers) {
    pts = partition.centers();
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n_points; ++i) pts.push_back(partition.region_sample(i, rng));
  }
  const double bound = lemma1_bound(spec, partition);
  return {std::move(partition), Configuration(pts), bound};
}

namespace {

void apply_velocities(Configuration& config, const std::vector<double>& grad, double t) {
  const std::size_t stride = config.dim() + 1;
  std::vector<double> v(stride);
  for (std::size_t i = 0; i < config.size(); ++i) {
    for (std::size_t c = 0; c < stride; ++c) v[c] = -grad[i * stride + c];
    config.move_point(i, v, t);
  }
}

}  // namespace

Configuration descent_step(const KernelSpec& spec, const Configuration& config, double t) {
  if (t < 0.0) throw std::invalid_argument("step must be non-negative");
  Configuration out = config;
  if (t == 0.0) return out;
  apply_velocities(out, phi_gradient(spec, config), t);
  return out;
}

void SolveOptions::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtracking factor must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("Armijo constant must lie in (0, 1)");
  if (initial_step && !(*initial_step > 0.0)) throw std::invalid_argument("initial step must be positive");
  if (!(growth >= 1.0)) throw std::invalid_argument("step growth must be >= 1");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
}

SolveResult solve(const KernelSpec& spec, Configuration init, const SolveOptions& opts, double initial_bound,
                  const std::function<void(const IterationLog&)>& observer) {
  opts.validate();
  SolveResult result{std::move(init), {}};
  Configuration& config = result.config;
  SolveReport& report = result.report;
  report.initial_bound = initial_bound;

  const double n_pts = static_cast<double>(config.size());
  const double tol_energy = opts.tolerance * opts.tolerance;
  double step = opts.initial_step.value_or(1.0 / (3.0 * spec.gpp1() + spec.gp1()));
  step = std::min(step, opts.max_step);

  double e = energy(spec, config);
  if (!std::isfinite(e)) throw std::runtime_error("numerical blowup");
  report.energy_trace.push_back(e);
  if (observer) observer({0, e, 0.0});

  int stall_count = 0;
  report.terminated = Termination::max_iterations;
  while (true) {
    if (e <= tol_energy) {
      report.terminated = Termination::converged;
      break;
    }
    if (report.iterations >= opts.max_iterations) break;

    const std::vector<double> grad = phi_gradient(spec, config);
    double grad_sq = 0.0;
    for (double gcomp : grad) grad_sq += gcomp * gcomp;
    if (grad_sq == 0.0) {
      report.terminated = Termination::stalled;
      break;
    }
    const double slope = 2.0 / n_pts * grad_sq;

    bool accepted = false;
    double trial = step;
    Configuration candidate;
    double e_new = e;
    while (trial >= opts.min_step) {
      candidate = config;
      apply_velocities(candidate, grad, trial);
      e_new = energy(spec, candidate);
      if (!std::isfinite(e_new)) throw std::runtime_error("numerical blowup");
      if (e_new <= e - opts.armijo * trial * slope) {
        accepted = true;
        break;
      }
      trial *= opts.backtrack;
    }
    if (!accepted) {
      report.terminated = Termination::stalled;
      break;
    }

    const double rel = (e - e_new) / e;
    stall_count = rel < opts.stall_relative_decrease ? stall_count + 1 : 0;
    config = std::move(candidate);
    e = e_new;
    ++report.iterations;
    report.energy_trace.push_back(e);
    report.step_trace.push_back(trial);
    if (observer) observer({report.iterations, e, trial});
    step = std::min(trial * opts.growth, opts.max_step);
    if (stall_count >= opts.stall_window && e > tol_energy) {
      report.terminated = Termination::stalled;
      break;
    }
  }
  report.final_residual = std::sqrt(std::max(e, 0.0));
  return result;
}

std::vector<StudyRow> scaling_study(int d, const std::vector<int>& degrees,
                                    const std::function<std::size_t(int)>& n_rule, const SolveOptions& opts) {
  std::vector<StudyRow> rows;
  for (int n : degrees) {
    const KernelSpec spec(d, n);
    const std::size_t n_points = n_rule(n);
    const auto start = std::chrono::steady_clock::now();
    InitialConfiguration init = initial_configuration(spec, n_points, InitMode::centers, opts.seed);
    const SolveResult res = solve(spec, std::move(init.config), opts, init.lemma1_bound);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({d, n, n_points, res.report.terminated == Termination::converged, res.report.final_residual,
                    res.report.iterations, seconds});
  }
  return rows;
}

std::string study_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os << "d,n,N,converged,residual,iterations,seconds\n";
  os << std::setprecision(17);
  for (const StudyRow& r : rows)
    os << r.d << ',' << r.n << ',' << r.n_points << ',' << (r.converged ? 1 : 0) << ',' << r.residual << ','
       << r.iterations << ',' << std::setprecision(6) << r.seconds << std::setprecision(17) << '\n';
  return os.str();
}

}  // namespace design_forge
