#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "minkdim/neighborhood.hpp"

using namespace minkdim;

TEST_CASE("critical_index on 1/n") {
  const auto s = power_sequence(1.0, 100);
  CHECK(critical_index(s, 0.01) == 7);
}

TEST_CASE("critical_index on 2^-n") {
  const auto s = geometric_sequence(0.5, 40);
  CHECK(critical_index(s, std::ldexp(1.0, -10)) == 9);
}

TEST_CASE("critical_index error boundaries") {
  const auto s = power_sequence(1.0, 100);
  SUBCASE("delta at half the first gap") {
    try {
      critical_index(s, s.gap(0) / 2.0 + 1e-12);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::delta_too_large);
    }
  }
  SUBCASE("delta too small for the stored length") {
    try {
      critical_index(s, 1e-6);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::truncation);
    }
  }
  SUBCASE("non-positive delta") { CHECK_THROWS_AS(critical_index(s, 0.0), Error); }
}

TEST_CASE("measure_1d_exact on 1/n") {
  const auto s = power_sequence(1.0, 100);
  const auto m = measure_1d_exact(s, 0.01);
  CHECK(m.measure == doctest::Approx(1.0 / 7.0 + 0.14).epsilon(1e-14));
  CHECK(m.critical_index == 7);
  CHECK(m.method == MeasureMethod::exact_1d);
}

TEST_CASE("measure_1d_bruteforce hand cases") {
  const std::vector<double> disjoint{1.0, 0.5};
  CHECK(measure_1d_bruteforce(disjoint, 0.1).measure == doctest::Approx(0.6));
  const std::vector<double> overlapping{1.0, 0.95};
  CHECK(measure_1d_bruteforce(overlapping, 0.1).measure == doctest::Approx(0.45));
}

TEST_CASE("exact and brute-force agree when the tail reaches the limit interval") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> expo(0.3, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  while (checked < 60) {
    const double a = expo(rng);
    const auto s = power_sequence(a, 20000);
    const double delta = std::exp(std::log(1e-5) + unit(rng) * (std::log(1e-2) - std::log(1e-5)));
    if (!(s.back() < 2.0 * delta)) continue;
    NeighborhoodMeasurement exact;
    try {
      exact = measure_1d_exact(s, delta);
    } catch (const Error&) {
      continue;
    }
    const double brute = measure_1d_bruteforce(s, delta).measure;
    CHECK(std::abs(exact.measure - brute) <= 1e-12 * brute);
    ++checked;
  }
}

TEST_CASE("stadium area of a unit segment") {
  TrajectorySegment seg;
  seg.points = {{0.0, 0.0}, {1.0, 0.0}};
  for (double delta : {0.1, 0.05, 0.02}) {
    const double expected = 2.0 * delta + std::numbers::pi * delta * delta;
    const auto m = measure_2d_grid(std::span(&seg, 1), delta);
    CHECK(std::abs(m.measure - expected) / expected < 0.02);
    CHECK(m.cell_side == doctest::Approx(delta / 8));
  }
}

TEST_CASE("disk area from a short diagonal segment") {
  TrajectorySegment seg;
  seg.points = {{0.3, 0.3}, {0.3 + 1e-6, 0.3 + 1e-6}};
  const double delta = 0.05;
  const auto m = measure_2d_grid(std::span(&seg, 1), delta, kDefaultCellCap, 64);
  const double expected = std::numbers::pi * delta * delta;
  CHECK(std::abs(m.measure - expected) / expected < 0.01);
}

TEST_CASE("grid measure is invariant under polyline refinement") {
  TrajectorySegment coarse;
  coarse.points = {{0.0, 0.0}, {0.5, 0.25}, {1.0, 0.0}};
  TrajectorySegment fine;
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    fine.points.push_back(t <= 0.5 ? Point{t, 0.5 * t} : Point{t, 0.5 * (1.0 - t)});
  }
  const double a = measure_2d_grid(std::span(&coarse, 1), 0.03).measure;
  const double b = measure_2d_grid(std::span(&fine, 1), 0.03).measure;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("overlapping segments are not double counted") {
  std::vector<TrajectorySegment> segs(2);
  segs[0].points = {{0.0, 0.0}, {1.0, 0.0}};
  segs[1].points = {{0.0, 0.0}, {1.0, 0.0}};
  const double one = measure_2d_grid(std::span(segs.data(), 1), 0.05).measure;
  const double two = measure_2d_grid(segs, 0.05).measure;
  CHECK(one == two);
}

TEST_CASE("grid errors") {
  TrajectorySegment tiny;
  tiny.points = {{0.5, 0.5}, {0.5 + 1e-12, 0.5}};
  try {
    measure_2d_grid(std::span(&tiny, 1), 0.1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }

  TrajectorySegment seg;
  seg.points = {{0.0, 0.0}, {1.0, 1.0}};
  try {
    measure_2d_grid(std::span(&seg, 1), 1e-3, 1000);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cell_budget);
  }
  CHECK_THROWS_AS(measure_2d_grid({}, 0.1), Error);
}

TEST_CASE("grid measure is deterministic") {
  TrajectorySegment seg;
  for (int i = 0; i <= 500; ++i) {
    const double t = i / 500.0;
    seg.points.push_back({t, 0.5 + 0.3 * std::sin(12 * t)});
  }
  const auto a = measure_2d_grid(std::span(&seg, 1), 0.004);
  const auto b = measure_2d_grid(std::span(&seg, 1), 0.004);
  CHECK(a.cell_count == b.cell_count);
  CHECK(a.candidate_cells == b.candidate_cells);
}
