// design-forge: generate, verify and inspect spherical designs.
//
// Exit codes: 0 success, 1 verification failed, 2 solver did not converge,
// 64 usage, 65 bad input data, 74 I/O failure, 70 internal error. Reports go to stdout as JSON,
// logs to stderr.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "design_forge/gegenbauer.hpp"
#include "design_forge/io.hpp"
#include "design_forge/kernel.hpp"
#include "design_forge/pair_kernels.hpp"
#include "design_forge/partition.hpp"
#include "design_forge/solver.hpp"
#include "design_forge/verifier.hpp"

namespace df = design_forge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitIo = 74;
constexpr int kExitInternal = 70;

struct Globals {
  std::uint64_t seed = 0;
  bool no_timestamp = false;
  int threads = 0;
  bool verbose = false;
};

struct GenerateArgs {
  int d = 0;
  int n = 0;
  std::string n_points = "auto";
  double tol = 1e-12;
  int max_iter = 100000;
  std::string init_mode = "centers";
  std::string out;
  int mz_trials = 10;
  int mz_degree = 0;
};

struct VerifyArgs {
  std::string in;
  int n = 0;
  double tol = 1e-9;
  std::string mz_partition;
  int mz_degree = 0;
  int mz_trials = 20;
};

struct KernelInfoArgs {
  int d = 0;
  int n = 0;
};

struct PartitionArgs {
  int d = 0;
  long long n_points = 0;
  std::string out;
};

struct StudyArgs {
  int d = 0;
  std::string n_range;
  std::string n_rule = "2*(n+1)^2";
  double tol = 1e-12;
  int max_iter = 100000;
  std::string out;
  std::string series;
};

void log_line(const Globals& g, const std::string& msg) {
  if (g.verbose) std::cerr << msg << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw df::cli::UsageError(msg);
}

std::function<void(const df::IterationLog&)> iteration_logger(const Globals& g) {
  if (!g.verbose) return {};
  return [](const df::IterationLog& it) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "iteration=%d energy=%.17g step=%.17g", it.iteration, it.energy, it.step);
    std::cerr << buf << '\n';
  };
}

// Smallest count worth trying: enough degrees of freedom (N d) for the
// sum of dim H_k equations.
std::size_t auto_base_count(int d, int n) {
  std::uint64_t eqs = 0;
  for (int k = 1; k <= n; ++k) eqs += df::harmonic_dim(d, k);
  return static_cast<std::size_t>((eqs + static_cast<std::uint64_t>(d) - 1) / static_cast<std::uint64_t>(d)) + 1;
}

// Monomial certification stays affordable up to these sizes.
bool monomial_check_feasible(std::size_t d, int n) { return d <= 4 && n <= 12; }

int cmd_generate(const Globals& g, const GenerateArgs& a) {
  require(a.d >= 1, "-d must be >= 1");
  require(a.n >= 1 && a.n <= df::kMaxGegenbauerDegree, "-n must lie in [1, 200]");
  require(a.tol > 0.0, "--tol must be positive");
  require(a.max_iter >= 0, "--max-iter must be >= 0");
  require(a.mz_trials >= 0, "--mz-trials must be >= 0");
  const df::InitMode mode = [&] {
    try {
      return df::parse_init_mode(a.init_mode);
    } catch (const std::invalid_argument&) {
      throw df::cli::UsageError("--init-mode must be 'centers' or 'random-in-region'");
    }
  }();

  std::vector<std::size_t> counts;
  if (a.n_points == "auto") {
    const std::size_t base = auto_base_count(a.d, a.n);
    for (int j = 0; j <= 5; ++j) counts.push_back(base << j);
  } else {
    long long v = 0;
    std::size_t used = 0;
    try {
      v = std::stoll(a.n_points, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == a.n_points.size() && v >= 1, "-N must be a positive integer or 'auto'");
    counts.push_back(static_cast<std::size_t>(v));
  }

  const df::KernelSpec spec(a.d, a.n);
  df::SolveOptions opts;
  opts.tolerance = a.tol;
  opts.max_iterations = a.max_iter;
  opts.seed = g.seed;

  std::optional<df::InitialConfiguration> init;
  std::optional<df::SolveResult> result;
  json attempts = json::array();
  for (std::size_t count : counts) {
    log_line(g, "event=attempt N=" + std::to_string(count));
    init.emplace(df::initial_configuration(spec, count, mode, g.seed));
    result.emplace(df::solve(spec, init->config, opts, init->lemma1_bound, iteration_logger(g)));
    attempts.push_back({{"N", count},
                        {"terminated", df::to_string(result->report.terminated)},
                        {"final_residual", result->report.final_residual}});
    if (result->report.terminated == df::Termination::converged) break;
  }
  const std::size_t d = static_cast<std::size_t>(a.d);

  json report;
  report["command"] = "generate";
  report["d"] = a.d;
  report["n"] = a.n;
  report["N"] = result->config.size();
  report["seed"] = g.seed;
  report["init_mode"] = df::to_string(mode);
  if (counts.size() > 1) report["attempts"] = attempts;

  if (a.mz_trials > 0 && d <= 3) {
    const int m = a.mz_degree > 0 ? a.mz_degree : 2 * a.n;
    const df::MzReport mz = df::mz_check(init->config.coords(), init->partition, m, a.mz_trials, g.seed);
    result->report.mz_checked = true;
    report["mz"] = df::to_json(mz);
  }
  report["solve"] = df::to_json(result->report);

  const bool converged = result->report.terminated == df::Termination::converged;
  bool verified = true;
  if (monomial_check_feasible(d, a.n)) {
    const df::DesignCheck check = df::is_design(d, result->config.coords(), a.n, 1e-9);
    verified = check.pass;
    report["verify"] = df::to_json(check);
  }

  if (!a.out.empty()) {
    df::PointSetFile ps{d, a.n, result->config, json::object()};
    ps.metadata["seed"] = g.seed;
    ps.metadata["tool-version"] = df::kToolVersion;
    ps.metadata["residual"] = result->report.final_residual;
    ps.metadata["terminated"] = df::to_string(result->report.terminated);
    ps.metadata["iterations"] = result->report.iterations;
    if (!g.no_timestamp) ps.metadata["timestamp"] = utc_timestamp();
    df::write_point_set(a.out, ps);
    report["output"] = a.out;
  } else {
    report["points"] = df::point_set_to_json({d, a.n, result->config, json::object()})["points"];
  }
  if (!g.no_timestamp) report["timestamp"] = utc_timestamp();
  emit(report);

  if (!converged) return kExitNoConvergence;
  return verified ? kExitOk : kExitVerifyFail;
}

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  const df::PointSetFile ps = df::read_point_set(a.in);
  const int n = a.n > 0 ? a.n : ps.n.value_or(0);
  require(n >= 1, "design strength unknown: pass -n or store 'n' in the file");
  require(a.tol > 0.0, "--tol must be positive");
  require(ps.points.size() > 0, "empty point set");

  json report;
  report["command"] = "verify";
  report["d"] = ps.d;
  report["n"] = n;
  report["N"] = ps.points.size();
  const df::DesignCheck check = df::is_design(ps.d, ps.points.coords(), n, a.tol);
  report["worst_error"] = check.worst_error;
  report["witness"] = check.witness;
  report["pass"] = check.pass;
  if (n <= df::kMaxGegenbauerDegree) {
    const df::KernelSpec spec(static_cast<int>(ps.d), n);
    report["residual"] = df::design_residual(spec, ps.points);
  }
  if (!a.mz_partition.empty()) {
    require(a.mz_trials >= 1, "--mz-trials must be >= 1");
    json pj;
    try {
      pj = json::parse(df::read_text_file(a.mz_partition));
    } catch (const json::parse_error& e) {
      throw df::DataError(a.mz_partition + ": " + e.what());
    }
    const df::Partition part = df::partition_from_json(pj);
    if (part.dim() != ps.d || part.size() != ps.points.size())
      throw df::DataError("partition does not match the point set");
    const int m = a.mz_degree > 0 ? a.mz_degree : n;
    try {
      report["mz"] = df::to_json(df::mz_check(ps.points.coords(), part, m, a.mz_trials, g.seed));
    } catch (const std::domain_error& e) {
      throw df::cli::UsageError(e.what());
    }
  }
  emit(report);
  return check.pass ? kExitOk : kExitVerifyFail;
}

int cmd_kernel_info(const KernelInfoArgs& a) {
  require(a.d >= 1, "-d must be >= 1");
  require(a.n >= 1 && a.n <= df::kMaxGegenbauerDegree, "-n must lie in [1, 200]");
  const df::KernelSpec spec(a.d, a.n);
  json table = json::array();
  for (int k = 1; k <= a.n; ++k)
    table.push_back({{"k", k},
                     {"w_k", spec.weight(k)},
                     {"dim_H_k", df::harmonic_dim(a.d, k)},
                     {"G_k_at_1", df::gegenbauer_at_one(spec.alpha(), k)},
                     {"lambda_k", spec.coefficient(k)}});
  json report;
  report["command"] = "kernel-info";
  report["d"] = a.d;
  report["n"] = a.n;
  report["alpha"] = spec.alpha();
  report["table"] = std::move(table);
  report["g1"] = spec.g1();
  report["gp1_closed_sum"] = df::gp1_closed_sum(a.d, a.n);
  report["gp1_direct"] = spec.g_d1(1.0);
  report["gpp1"] = spec.gpp1();
  report["markov_bound"] = static_cast<double>(a.n) * a.n * spec.gp1();
  report["hessian_step_bound"] = df::hessian_step_bound(spec);
  emit(report);
  return kExitOk;
}

int cmd_partition(const PartitionArgs& a) {
  require(a.d >= 1, "-d must be >= 1");
  require(a.n_points >= 1, "-N must be >= 1");
  const df::Partition p = df::eq_partition(static_cast<std::size_t>(a.d), static_cast<std::size_t>(a.n_points));
  json pj = df::partition_to_json(p);
  if (a.out.empty()) {
    emit(pj);
    return kExitOk;
  }
  df::write_text_file(a.out, pj.dump(2) + "\n");
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    lo = std::min(lo, p.region_area(i));
    hi = std::max(hi, p.region_area(i));
  }
  emit({{"command", "partition"},
        {"d", a.d},
        {"N", a.n_points},
        {"partition_norm", p.norm()},
        {"min_area", lo},
        {"max_area", hi},
        {"output", a.out}});
  return kExitOk;
}

int cmd_study(const Globals& g, const StudyArgs& a) {
  require(a.d >= 1, "-d must be >= 1");
  require(a.tol > 0.0, "--tol must be positive");
  const std::vector<int> degrees = df::cli::parse_int_range(a.n_range);
  for (int n : degrees) require(n >= 1 && n <= df::kMaxGegenbauerDegree, "degrees must lie in [1, 200]");
  const df::cli::NRule rule(a.n_rule);
  for (int n : degrees) rule.count(n);  // validate before any solving

  df::SolveOptions opts;
  opts.tolerance = a.tol;
  opts.max_iterations = a.max_iter;
  opts.seed = g.seed;
  std::vector<df::StudyRow> rows =
      df::scaling_study(a.d, degrees, [&](int n) { return rule.count(n); }, opts);
  if (g.no_timestamp)
    for (auto& r : rows) r.seconds = 0.0;
  for (const auto& r : rows)
    log_line(g, "event=study_row n=" + std::to_string(r.n) + " N=" + std::to_string(r.n_points) +
                    " converged=" + (r.converged ? "true" : "false"));

  const std::string csv = df::study_csv(rows);
  if (!a.series.empty()) {
    std::ostringstream s;
    s << "# residual vs N, d=" << a.d << ", N rule " << rule.text() << "\n# N residual n\n";
    s.precision(17);
    for (const auto& r : rows) s << r.n_points << ' ' << r.residual << ' ' << r.n << '\n';
    df::write_text_file(a.series, s.str());
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    df::write_text_file(a.out, csv);
    std::size_t ok = 0;
    for (const auto& r : rows) ok += r.converged ? 1 : 0;
    emit({{"command", "study"}, {"d", a.d}, {"rows", rows.size()}, {"converged", ok}, {"output", a.out}});
  }
  return kExitOk;
}

int thread_setting(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("DESIGN_FORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw df::cli::UsageError("DESIGN_FORGE_THREADS must be a positive integer");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical construction and certification of spherical designs"};
  app.set_version_flag("--version", df::kToolVersion);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit timestamps so repeated runs are byte-identical");
  app.add_option("--threads", g.threads, "Worker thread cap (falls back to DESIGN_FORGE_THREADS)");
  app.add_flag("-v,--verbose", g.verbose, "Structured progress lines on stderr");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Construct a design from an equal-area start");
  gen->add_option("-d", ga.d, "Sphere dimension")->required();
  gen->add_option("-n", ga.n, "Design strength")->required();
  gen->add_option("-N", ga.n_points, "Point count or 'auto'")->capture_default_str();
  gen->add_option("--tol", ga.tol, "Residual tolerance")->capture_default_str();
  gen->add_option("--max-iter", ga.max_iter, "Iteration cap per attempt")->capture_default_str();
  gen->add_option("--init-mode", ga.init_mode, "centers | random-in-region")->capture_default_str();
  gen->add_option("-o,--out", ga.out, "Point set output (.json or .csv)");
  gen->add_option("--mz-trials", ga.mz_trials, "Sampling-inequality trials on the start (0 disables)")
      ->capture_default_str();
  gen->add_option("--mz-degree", ga.mz_degree, "Polynomial degree for that check (default 2n)");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Certify a point set with exact monomial integrals");
  ver->add_option("-i,--in,input", va.in, "Point set (.json or .csv)")->required();
  ver->add_option("-n", va.n, "Design strength (default: the file's n)");
  ver->add_option("--tol", va.tol, "Worst allowed monomial deviation")->capture_default_str();
  ver->add_option("--mz", va.mz_partition, "Partition JSON; enables the sampling-inequality check");
  ver->add_option("--mz-degree", va.mz_degree, "Polynomial degree for that check (default n)");
  ver->add_option("--mz-trials", va.mz_trials, "Random polynomials for that check")->capture_default_str();

  KernelInfoArgs ka;
  auto* kin = app.add_subcommand("kernel-info", "Kernel coefficients and extremal constants");
  kin->add_option("-d", ka.d, "Sphere dimension")->required();
  kin->add_option("-n", ka.n, "Design strength")->required();

  PartitionArgs pa;
  auto* par = app.add_subcommand("partition", "Equal-area partition with per-region areas and diameters");
  par->add_option("-d", pa.d, "Sphere dimension")->required();
  par->add_option("-N", pa.n_points, "Region count")->required();
  par->add_option("-o,--out", pa.out, "Partition JSON output");

  StudyArgs sa;
  auto* stu = app.add_subcommand("study", "Solve over a range of strengths and tabulate the outcome");
  stu->add_option("-d", sa.d, "Sphere dimension")->required();
  stu->add_option("--n", sa.n_range, "Strengths: a..b or a,b,c")->required();
  stu->add_option("--N-rule", sa.n_rule, "Point count as an expression in n")->capture_default_str();
  stu->add_option("--tol", sa.tol, "Residual tolerance")->capture_default_str();
  stu->add_option("--max-iter", sa.max_iter, "Iteration cap per row")->capture_default_str();
  stu->add_option("-o,--out", sa.out, "CSV output (default stdout)");
  stu->add_option("--series", sa.series, "Whitespace-separated residual-vs-N series for plotting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    df::kernels::set_thread_count(thread_setting(g.threads));
    if (gen->parsed()) return cmd_generate(g, ga);
    if (ver->parsed()) return cmd_verify(g, va);
    if (kin->parsed()) return cmd_kernel_info(ka);
    if (par->parsed()) return cmd_partition(pa);
    return cmd_study(g, sa);
  } catch (const df::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const df::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const df::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
