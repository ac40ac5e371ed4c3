#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("design_forge_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path err = workdir() / "stderr.txt";
  const std::string cmd = env + " " + DESIGN_FORGE_CLI + " " + args + " 2>" + err.string();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, slurp(err)};
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

void write(const std::string& name, const std::string& text) { std::ofstream(workdir() / name) << text; }

const char* kTetrahedron = R"({"d": 2, "points": [
  [0.5773502691896258, 0.5773502691896258, 0.5773502691896258],
  [0.5773502691896258, -0.5773502691896258, -0.5773502691896258],
  [-0.5773502691896258, 0.5773502691896258, -0.5773502691896258],
  [-0.5773502691896258, -0.5773502691896258, 0.5773502691896258]]})";

}  // namespace

TEST_CASE("generate then verify") {
  const Run g = run("--seed 7 --no-timestamp generate -d 2 -n 3 -N 32 --tol 1e-12 --mz-trials 2 -o " + path("g.json"));
  REQUIRE(g.code == 0);
  const json report = json::parse(g.out);
  CHECK(report["solve"]["terminated"] == "converged");
  CHECK(report["solve"]["final_residual"].get<double>() <= 1e-12);
  CHECK(report["verify"]["pass"] == true);
  CHECK(report["solve"]["mz_checked"] == true);
  const json file = json::parse(slurp(path("g.json")));
  CHECK(file["N"] == 32);
  CHECK(file["n"] == 3);
  CHECK(file["metadata"]["seed"] == 7);
  CHECK(file["metadata"].contains("tool-version"));
  CHECK_FALSE(file["metadata"].contains("timestamp"));

  const Run v = run("verify " + path("g.json"));
  CHECK(v.code == 0);
  const json vj = json::parse(v.out);
  for (const char* key : {"n", "N", "d", "worst_error", "witness", "pass", "residual"}) CHECK(vj.contains(key));
  CHECK(vj["worst_error"].get<double>() <= 1e-9);
}

TEST_CASE("generate writes CSV and can skip the output file") {
  REQUIRE(run("--no-timestamp generate -d 2 -n 2 -N 18 --mz-trials 0 -o " + path("g.csv")).code == 0);
  CHECK(run("verify -n 2 " + path("g.csv")).code == 0);
  const Run inline_points = run("--no-timestamp generate -d 2 -n 1 -N 4 --mz-trials 0");
  CHECK(inline_points.code == 0);
  CHECK(json::parse(inline_points.out)["points"].size() == 4);
}

TEST_CASE("generate with too few points reports nonconvergence") {
  const Run r = run("--no-timestamp generate -d 2 -n 5 -N 6 --mz-trials 0");
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["solve"]["terminated"] == "stalled");
}

TEST_CASE("generate with automatic N") {
  const Run r = run("--no-timestamp generate -d 2 -n 3 -N auto --mz-trials 0");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.contains("attempts"));
  CHECK(j["solve"]["terminated"] == "converged");
}

TEST_CASE("usage errors exit 64") {
  const Run missing = run("generate -n 3 -N 32");
  CHECK(missing.code == 64);
  CHECK(missing.err.find("Usage") != std::string::npos);
  CHECK(run("").code == 64);
  CHECK(run("generate -d 2 -n 3 -N many").code == 64);
  CHECK(run("generate -d 2 -n 3 --init-mode spiral").code == 64);
  CHECK(run("kernel-info -d 0 -n 2").code == 64);
  CHECK(run("kernel-info -d 2 -n 201").code == 64);
  CHECK(run("partition -d 2 -N 0").code == 64);
  CHECK(run("study -d 2 --n ''").code == 64);
  CHECK(run("study -d 2 --n 3..1").code == 64);
  CHECK(run("study -d 2 --n 1..2 --N-rule 'n-5'").code == 64);
  CHECK(run("study -d 2 --n 1..2 --N-rule '2*(n+1'").code == 64);
  CHECK(run("kernel-info -d 2 -n 2", "DESIGN_FORGE_THREADS=lots").code == 64);
}

TEST_CASE("help and version exit 0") {
  CHECK(run("--help").code == 0);
  CHECK(run("--version").code == 0);
}

TEST_CASE("verify known designs") {
  write("tet.json", kTetrahedron);
  CHECK(run("verify -n 2 " + path("tet.json")).code == 0);
  const Run fail = run("verify -n 3 " + path("tet.json"));
  CHECK(fail.code == 1);
  const json j = json::parse(fail.out);
  CHECK(j["pass"] == false);
  int degree = 0;
  for (const auto& e : j["witness"]) degree += e.get<int>();
  CHECK(degree % 2 == 1);
  CHECK(run("verify " + path("tet.json")).code == 64);  // no strength anywhere
}

TEST_CASE("bad data exits 65, missing files 74") {
  write("nonunit.json", R"({"d": 2, "points": [[1, 0, 0], [0.4, 0, 0]]})");
  CHECK(run("verify -n 1 " + path("nonunit.json")).code == 65);
  write("broken.json", "{\n \"d\": 2,\n \"points\": [[1, 0, 0],,]\n}");
  const Run broken = run("verify -n 1 " + path("broken.json"));
  CHECK(broken.code == 65);
  CHECK(broken.err.find("line 3") != std::string::npos);
  write("bad.csv", "1,0,0\n0,1,0\n0,0\n");
  const Run csv = run("verify -n 1 " + path("bad.csv"));
  CHECK(csv.code == 65);
  CHECK(csv.err.find("line 3") != std::string::npos);
  CHECK(run("verify -n 1 " + path("does-not-exist.json")).code == 74);
  CHECK(run("partition -d 2 -N 10 -o /nonexistent/dir/p.json").code == 74);
}

TEST_CASE("verify with a sampling-inequality check") {
  REQUIRE(run("partition -d 2 -N 400 -o " + path("p400.json")).code == 0);
  const json part = json::parse(slurp(path("p400.json")));
  json ps;
  ps["d"] = 2;
  ps["points"] = part["centers"];
  write("c400.json", ps.dump());
  const Run r = run("verify -n 1 --mz " + path("p400.json") + " --mz-degree 5 --mz-trials 4 " + path("c400.json"));
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["mz"]["pass"] == true);
  CHECK(j["mz"]["degree"] == 5);
  write("tet_copy.json", kTetrahedron);
  CHECK(run("verify -n 2 --mz " + path("p400.json") + " " + path("tet_copy.json")).code == 65);
}

TEST_CASE("kernel-info") {
  const Run two = run("kernel-info -d 2 -n 2");
  REQUIRE(two.code == 0);
  const json j = json::parse(two.out);
  CHECK(j["gp1_closed_sum"].get<double>() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(j["gp1_direct"].get<double>() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(j["gpp1"].get<double>() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(j["hessian_step_bound"].get<double>() == doctest::Approx(std::sqrt(11.5)).epsilon(1e-14));
  const json one = json::parse(run("kernel-info -d 2 -n 1").out);
  REQUIRE(one["table"].size() == 1);
  CHECK(one["table"][0]["lambda_k"].get<double>() == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("partition areas") {
  const Run r = run("partition -d 2 -N 100");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["areas"].size() == 100);
  for (const auto& a : j["areas"]) CHECK(std::abs(a.get<double>() - 0.01) <= 1e-10 * 0.01);
  for (const char* key : {"d", "N", "centers", "norms", "bounds"}) CHECK(j.contains(key));
}

TEST_CASE("study writes CSV and a plot series") {
  const Run r = run("--no-timestamp study -d 2 --n 1..4 --N-rule '2*(n+1)^2' -o " + path("s.csv") + " --series " +
                    path("s.dat"));
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(path("s.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "d,n,N,converged,residual,iterations,seconds");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string field;
    for (int column = 0; column < 4; ++column) std::getline(fields, field, ',');
    CHECK(field == "1");  // converged column
    ++rows;
  }
  CHECK(rows == 4);
  const std::string series = slurp(path("s.dat"));
  CHECK(series.find("\n8 ") != std::string::npos);
  CHECK(series.find("\n50 ") != std::string::npos);
  const Run to_stdout = run("--no-timestamp study -d 2 --n 1,2 --N-rule '2*(n+1)^2'");
  CHECK(to_stdout.code == 0);
  CHECK(to_stdout.out.rfind("d,n,N,converged,residual,iterations,seconds\n", 0) == 0);
}

TEST_CASE("identical invocations give identical bytes") {
  const std::string args = "--seed 11 --no-timestamp generate -d 2 -n 4 -N 50 --init-mode random-in-region --mz-trials 2 -o ";
  const Run a = run(args + path("det_a.json"));
  const Run b = run(args + path("det_b.json"));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp(path("det_a.json")) == slurp(path("det_b.json")));
  json ja = json::parse(a.out), jb = json::parse(b.out);
  ja.erase("output");
  jb.erase("output");
  CHECK(ja.dump() == jb.dump());
  const Run t1 = run(args + path("det_c.json"), "DESIGN_FORGE_THREADS=1");
  REQUIRE(t1.code == 0);
  CHECK(slurp(path("det_a.json")) == slurp(path("det_c.json")));
}

TEST_CASE("verbose logging goes to stderr") {
  const Run r = run("--verbose --no-timestamp generate -d 2 -n 2 -N 18 --mz-trials 0");
  CHECK(r.code == 0);
  CHECK(r.err.find("iteration=0 energy=") != std::string::npos);
  CHECK(json::parse(r.out).is_object());
}
