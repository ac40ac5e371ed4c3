#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "design_forge/partition.hpp"

using namespace design_forge;
using doctest::Approx;

TEST_CASE("cap area and its inverse") {
  const double pi = std::numbers::pi;
  CHECK(normalized_cap_area(2, pi / 3) == Approx(0.25).epsilon(1e-14));
  CHECK(normalized_cap_area(1, pi / 4) == Approx(0.25).epsilon(1e-14));
  CHECK(normalized_cap_area(3, pi) == Approx(1.0).epsilon(1e-14));
  CHECK(normalized_cap_area(3, pi / 2) == Approx(0.5).epsilon(1e-14));
  for (std::size_t m = 1; m <= 5; ++m)
    for (double a : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999}) CHECK(normalized_cap_area(m, cap_colatitude(m, a)) == Approx(a).epsilon(1e-12));
}

TEST_CASE("circle partition: arcs of length 2 pi / N") {
  const Partition p = eq_partition(1, 8);
  REQUIRE(p.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto& b = p.regions()[i].bounds.at(0);
    CHECK(b.hi - b.lo == Approx(2 * std::numbers::pi / 8).epsilon(1e-14));
  }
  CHECK(p.norm() == Approx(2 * std::sin(std::numbers::pi / 8)).epsilon(1e-14));
  CHECK(eq_partition(1, 4).norm() == Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("circle region 0 of 4 has center angle pi/4") {
  const Partition p = eq_partition(1, 4);
  const UnitPoint& c = p.region_center(0);
  CHECK(std::atan2(c[1], c[0]) == Approx(std::numbers::pi / 4).epsilon(1e-14));
}

TEST_CASE("S^2 with N=4: caps at colatitude pi/3 and two collar cells") {
  const Partition p = eq_partition(2, 4);
  REQUIRE(p.size() == 4);
  const auto& top = p.regions().front().bounds.at(0);
  CHECK(top.lo == 0.0);
  CHECK(top.hi == Approx(std::numbers::pi / 3).epsilon(1e-12));
  const auto& bottom = p.regions().back().bounds.at(0);
  CHECK(bottom.lo == Approx(2 * std::numbers::pi / 3).epsilon(1e-12));
  for (std::size_t i = 1; i <= 2; ++i) {
    CHECK(p.regions()[i].bounds[0].lo == Approx(std::numbers::pi / 3).epsilon(1e-12));
    CHECK(p.regions()[i].bounds[0].hi == Approx(2 * std::numbers::pi / 3).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < 4; ++i) CHECK(p.region_area(i) == Approx(0.25).epsilon(1e-12));
}

TEST_CASE("trivial partitions have norm 2") {
  for (std::size_t d = 1; d <= 4; ++d) {
    const Partition one = eq_partition(d, 1);
    CHECK(one.size() == 1);
    CHECK(one.norm() == 2.0);
    CHECK(one.region_area(0) == Approx(1.0).epsilon(1e-14));
  }
  CHECK(eq_partition(2, 2).norm() == 2.0);
  CHECK(partition_norm(eq_partition(2, 2)) == 2.0);
}

TEST_CASE("partition norm decreases with N") { CHECK(eq_partition(2, 100).norm() > eq_partition(2, 400).norm()); }

TEST_CASE("invalid partition requests") {
  CHECK_THROWS(eq_partition(0, 5));
  CHECK_THROWS(eq_partition(2, 0));
  const Partition p = eq_partition(2, 10);
  CHECK_THROWS_AS(p.region_center(10), std::out_of_range);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(p.region_sample(11, rng), std::out_of_range);
}

TEST_CASE("every region has area 1/N and the areas sum to 1") {
  std::vector<std::size_t> counts;
  for (std::size_t n = 1; n <= 60; ++n) counts.push_back(n);
  for (std::size_t n : {97, 100, 256, 400, 999, 1000, 2048, 4097, 10000}) counts.push_back(n);
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t n : counts) {
      const Partition p = eq_partition(d, n);
      REQUIRE(p.size() == n);
      double total = 0.0, worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = p.region_area(i);
        total += a;
        worst = std::max(worst, std::abs(a * static_cast<double>(n) - 1.0));
      }
      CHECK_MESSAGE(worst <= 1e-10, "d=" << d << " N=" << n);
      CHECK(std::abs(total - 1.0) <= 1e-10);
    }
}

TEST_CASE("partition norm times N^(1/d) stays in a factor-4 band") {
  for (std::size_t d = 1; d <= 3; ++d) {
    double lo = 1e300, hi = 0.0;
    for (std::size_t n : {10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000}) {
      const double scaled = eq_partition(d, n).norm() * std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d));
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    CHECK_MESSAGE(hi / lo <= 4.0, "d=" << d << " band " << hi / lo);
  }
}

TEST_CASE("polar cap center is the pole") {
  const Partition p = eq_partition(2, 30);
  const UnitPoint& c = p.region_center(0);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == 1.0);
  CHECK(p.region_center(29)[2] == -1.0);
}

TEST_CASE("centers lie in their regions and locate back") {
  for (std::size_t d = 1; d <= 4; ++d)
    for (std::size_t n : {1, 2, 3, 7, 33, 200}) {
      const Partition p = eq_partition(d, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(p.contains(i, p.region_center(i)));
        CHECK(p.locate(p.region_center(i)) == i);
      }
    }
}

TEST_CASE("regions cover the sphere without overlap") {
  std::mt19937_64 rng(3);
  for (std::size_t d = 1; d <= 3; ++d) {
    const Partition p = eq_partition(d, 57);
    for (int s = 0; s < 2000; ++s) {
      const UnitPoint x = random_point(d, rng);
      int owners = 0;
      for (std::size_t i = 0; i < p.size(); ++i) owners += p.contains(i, x) ? 1 : 0;
      CHECK(owners == 1);
    }
  }
}

TEST_CASE("region samples stay in their region") {
  std::mt19937_64 rng(17);
  for (std::size_t d = 1; d <= 3; ++d) {
    const Partition p = eq_partition(d, 40);
    for (int s = 0; s < 10000; ++s) {
      const std::size_t i = static_cast<std::size_t>(s) % p.size();
      REQUIRE(p.contains(i, p.region_sample(i, rng)));
    }
  }
}

TEST_CASE("region samples are uniform: per-region frequencies of a global test") {
  // Drawing a region uniformly, then a point uniformly inside it, is uniform on
  // S^2, so the second moments must come out at 1/3 each.
  std::mt19937_64 rng(8);
  const Partition p = eq_partition(2, 12);
  const int samples = 120000;
  double m2[3] = {0, 0, 0};
  for (int s = 0; s < samples; ++s) {
    const UnitPoint x = p.region_sample(static_cast<std::size_t>(s) % p.size(), rng);
    for (int c = 0; c < 3; ++c) m2[c] += x[c] * x[c];
  }
  // Var(x^2) = 1/5 - 1/9 on S^2; stratification only lowers it.
  const double sigma = std::sqrt(1.0 / 5 - 1.0 / 9) / std::sqrt(static_cast<double>(samples));
  for (double v : m2) CHECK(std::abs(v / samples - 1.0 / 3) <= 4 * sigma);
}

TEST_CASE("region sampling is deterministic under a seed") {
  const Partition p = eq_partition(3, 25);
  std::mt19937_64 a(123), b(123);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.region_sample(i, a) == p.region_sample(i, b));
}

TEST_CASE("diameter bound dominates sampled chord lengths") {
  std::mt19937_64 rng(4);
  for (std::size_t d = 1; d <= 3; ++d) {
    const Partition p = eq_partition(d, 30);
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::vector<UnitPoint> pts;
      for (int s = 0; s < 40; ++s) pts.push_back(p.region_sample(i, rng));
      double widest = 0.0;
      for (const auto& a : pts)
        for (const auto& b : pts) {
          double s2 = 0.0;
          for (std::size_t c = 0; c <= d; ++c) s2 += (a[c] - b[c]) * (a[c] - b[c]);
          widest = std::max(widest, std::sqrt(s2));
        }
      CHECK(widest <= p.region_diameters()[i] + 1e-12);
      CHECK(region_diameter_bound(p.regions()[i]) == p.region_diameters()[i]);
    }
  }
}
