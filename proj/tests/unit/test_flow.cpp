#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "minkdim/dimension.hpp"
#include "minkdim/flow.hpp"

using namespace minkdim;

namespace {

bool is_graph(const TrajectorySegment& s) {
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    if (!(s.points[i].y > s.points[i - 1].y) || !(s.points[i].x < s.points[i - 1].x)) return false;
  }
  return true;
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double l2 = dx * dx + dy * dy;
  const double t = l2 > 0 ? std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / l2, 0.0, 1.0) : 0.0;
  return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

double distance_to_polyline(const Point& p, const TrajectorySegment& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    best = std::min(best, segment_distance(p, s.points[i - 1], s.points[i]));
  }
  return best;
}

}  // namespace

TEST_CASE("closed forms") {
  CHECK(saddle_x(0.5, 0.25, 0.5) == doctest::Approx(0.25));
  CHECK(saddle_x(1.0, 0.1, 1.0) == doctest::Approx(0.1));
  CHECK(std::exp(semihyp_log_x(1.0, 2, 0.5, 1.0)) == doctest::Approx(std::exp(-1.0)));
  CHECK(std::exp(semihyp_log_x(1.0, 2, 0.1, 1.0)) == doctest::Approx(1.234098e-4).epsilon(1e-6));
}

TEST_CASE("saddle trajectory polyline") {
  const double tol = 1e-5;
  const auto s = saddle_trajectory(SaddleSpec{0.5, {}}, 0.25, tol);
  CHECK(s.front() == Point{1.0, 0.25});
  CHECK(s.back() == Point{0.0625, 1.0});
  CHECK(is_graph(s));
  CHECK_FALSE(s.clamped);
  // The curve stays within the chord tolerance of the polyline.
  for (int i = 0; i <= 400; ++i) {
    const double y = 0.25 + 0.75 * i / 400.0;
    CHECK(distance_to_polyline({saddle_x(0.5, 0.25, y), y}, s) <= tol * 1.01);
  }
}

TEST_CASE("saddle trajectory errors") {
  CHECK_THROWS_AS(saddle_trajectory(SaddleSpec{0.5, {}}, 1.0, 1e-5), Error);
  CHECK_THROWS_AS(saddle_trajectory(SaddleSpec{0.5, {}}, 0.0, 1e-5), Error);
  CHECK_THROWS_AS(saddle_trajectory(SaddleSpec{0.5, {}}, 0.5, 0.0), Error);
  CHECK_THROWS_AS(saddle_trajectory(SaddleSpec{0.5, {{0.1, 1, 2}}}, 0.5, 1e-5), Error);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(validate(SaddleSpec{0.0, {}}), Error);
  CHECK_THROWS_AS(validate(SaddleSpec{1.5, {}}), Error);
  CHECK_THROWS_AS(validate(SaddleSpec{0.5, {{1.0, 0, 2}}}), Error);
  CHECK_THROWS_AS(validate(SaddleSpec{0.5, {{1.0, 1, 1}}}), Error);
  CHECK_NOTHROW(validate(SaddleSpec{0.5, {{1.0, 1, 2}, {-0.3, 2, 3}}}));
  CHECK_THROWS_AS(validate(SemiHypSpec{1.0, 1, {}}), Error);
  CHECK_THROWS_AS(validate(SemiHypSpec{0.0, 2, {}}), Error);
  CHECK_THROWS_AS(validate(SemiHypSpec{1.0, 2, {{1.0, 1, 2}}}), Error);
  CHECK_NOTHROW(validate(SemiHypSpec{1.0, 2, {{1.0, 0, 3}}}));
}

TEST_CASE("semi-hyperbolic trajectory") {
  const auto s = semihyp_trajectory(SemiHypSpec{1.0, 2, {}}, 0.5, 1e-5);
  CHECK(s.back().x == doctest::Approx(std::exp(-1.0)));
  CHECK(is_graph(s));

  SUBCASE("underflow is clamped and flagged") {
    const auto c = semihyp_trajectory(SemiHypSpec{1.0, 2, {}}, 1e-3, 1e-5);
    CHECK(c.clamped);
    CHECK(c.back() == Point{std::numeric_limits<double>::min(), 1.0});
    CHECK(is_graph(c));
  }

  SUBCASE("nucleus integral shrinks relative to y0") {
    double previous = std::numeric_limits<double>::infinity();
    for (double y0 : {0.1, 0.05, 0.025, 0.0125}) {
      const auto t = semihyp_trajectory(SemiHypSpec{1.0, 2, {}}, y0, 1e-7);
      double integral = 0.0;
      for (std::size_t i = 1; i < t.points.size(); ++i) {
        integral += 0.5 * (t.points[i].x + t.points[i - 1].x) * (t.points[i].y - t.points[i - 1].y);
      }
      CHECK(integral / y0 < previous);
      previous = integral / y0;
    }
  }
}

TEST_CASE("integrator matches the closed forms") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(0.3, 1.0);
  std::uniform_real_distribution<double> entry(0.05, 0.9);
  for (int trial = 0; trial < 12; ++trial) {
    const double a = alpha(rng);
    const double y0 = entry(rng);
    const auto s = integrate_trajectory(SaddleSpec{a, {}}, {1.0, y0});
    double worst = 0.0;
    for (const auto& p : s.points) worst = std::max(worst, std::abs(p.x - saddle_x(a, y0, p.y)));
    CHECK(worst < 1e-8);
    CHECK(s.back().y == 1.0);
    CHECK(is_graph(s));
  }
  for (int trial = 0; trial < 6; ++trial) {
    const double a = alpha(rng) + 0.5;
    const double y0 = 0.2 + 0.6 * entry(rng);
    const auto s = integrate_trajectory(SemiHypSpec{a, 2, {}}, {1.0, y0});
    double worst = 0.0;
    for (const auto& p : s.points) {
      worst = std::max(worst, std::abs(p.x - std::exp(semihyp_log_x(a, 2, y0, p.y))));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("integrator edge cases") {
  const auto d = integrate_trajectory(SaddleSpec{0.5, {}}, {1.0, 1.0});
  CHECK(d.degenerate);
  CHECK(d.points.size() == 1);
  CHECK_THROWS_AS(integrate_trajectory(SaddleSpec{0.5, {}}, {1.0, 0.0}), Error);
  CHECK_THROWS_AS(integrate_trajectory(SaddleSpec{0.5, {{-1.0, 0, 1}}}, {1.0, 0.5}), Error);
  IntegrationOptions few;
  few.max_steps = 5;
  try {
    integrate_trajectory(SaddleSpec{0.5, {}}, {1.0, 1e-6}, few);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::left_domain);
  }
}

TEST_CASE("perturbed exit stays within a bounded factor") {
  for (double y0 : {0.5, 0.1, 0.01}) {
    const auto p = integrate_trajectory(SaddleSpec{0.5, {{0.1, 1, 2}}}, {1.0, y0});
    const double ratio = p.back().x / (y0 * y0);
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
  }
}

TEST_CASE("bundle exit identity") {
  const auto entry = power_sequence(1.0, 200, 2);
  const auto b = build_bundle(SaddleSpec{0.5, {}}, entry, 1e-4);
  REQUIRE(b.exit().size() == entry.size());
  for (std::size_t n = 0; n < entry.size(); ++n) {
    CHECK(std::abs(b.exit()[n] - entry[n] * entry[n]) <= 1e-12);
  }
  for (const auto& s : b.segments()) CHECK(is_graph(s));
}

TEST_CASE("bundle exit sequence dimensions") {
  const auto entry = power_sequence(1.0, 200'000, 2);
  const auto b = build_bundle(SaddleSpec{0.5, {}}, entry, 1.0);
  const auto e = sequence_dimension(b.exit(), make_ladder(1e-9, 1e-4, 16));
  CHECK(std::abs(e.fit - 1.0 / 3.0) < 0.05);

  const auto semi = build_bundle(SemiHypSpec{1.0, 2, {}}, power_sequence(1.0, 1000, 2), 1e-3);
  CHECK(semi.clamped_count() > 0);
  CHECK(semi.exit().size() < 1000);
  for (std::size_t n = 0; n < semi.exit().size(); ++n) {
    CHECK(semi.exit()[n] == doctest::Approx(std::exp(semihyp_log_x(1.0, 2, entry[n], 1.0))));
  }
}

TEST_CASE("bundle rejects entries outside (0,1)") {
  CHECK_THROWS_AS(build_bundle(SaddleSpec{0.5, {}}, power_sequence(1.0, 10, 1), 1e-4), Error);
}

TEST_CASE("perturbed bundle keeps the dimension") {
  const auto ladder = make_ladder(2e-3, std::pow(10.0, -1.5), 8);
  const auto entry = power_sequence(1.0, 600, 2);
  const double tol = ladder.delta_min() / 32;
  const auto plain = bundle_dimension(build_bundle(SaddleSpec{0.5, {}}, entry, tol), ladder);
  const auto bent =
      bundle_dimension(build_bundle(SaddleSpec{0.5, {{0.1, 1, 2}}}, entry, tol), ladder);
  CHECK(std::abs(plain.fit - bent.fit) < 0.03);
}

TEST_CASE("focus spiral sampling") {
  const FocusSpec spec{1, 0.5, 200};
  CHECK(focus_radius(spec, 0.0) == doctest::Approx(0.5));
  const auto s = focus_spiral(spec, {1e-4, 0.05});
  CHECK(s.points.size() >= 64 * 200);
  const Point last = s.back();
  CHECK(std::hypot(last.x, last.y) < 0.05);
  CHECK_THROWS_AS(focus_spiral(FocusSpec{1, 0.5, 50}, {1e-4, 0.05}), Error);
  CHECK_THROWS_AS(focus_spiral(spec, {1e-4, 1e-3}), Error);
  CHECK_THROWS_AS(validate(FocusSpec{0, 0.5, 100}), Error);
  CHECK_THROWS_AS(validate(FocusSpec{1, 1.0, 100}), Error);
}

TEST_CASE("focus transversal orbit dimension") {
  const auto orbit = focus_transversal_orbit(FocusSpec{1, 0.5, 100}, 1'000'000);
  CHECK(std::abs(sequence_dimension(orbit, default_ladder_1d()).fit - 2.0 / 3.0) < 0.03);
}

TEST_CASE("limit cycle spirals") {
  SUBCASE("side checks") {
    CHECK_THROWS_AS(validate(LimitCycleSpec{0.5, 2, CycleSide::outside, 0.3, 100}), Error);
    CHECK_THROWS_AS(validate(LimitCycleSpec{0.5, 2, CycleSide::inside, 0.8, 100}), Error);
    CHECK_THROWS_AS(validate(LimitCycleSpec{0.5, 0, CycleSide::inside, 0.3, 100}), Error);
    CHECK_NOTHROW(validate(LimitCycleSpec{0.5, 2, CycleSide::inside, 0.3, 100}));
  }
  SUBCASE("turn budget") {
    CHECK_THROWS_AS(limit_cycle_spiral(LimitCycleSpec{0.5, 2, CycleSide::outside, 0.8, 100},
                                       {3e-5, 1e-3}),
                    Error);
  }
  SUBCASE("hyperbolic cycle is rectifiable") {
    const LimitCycleSpec spec{0.5, 1, CycleSide::inside, 0.2, 100};
    const auto s = limit_cycle_spiral(spec, {1e-3 / 32, 1e-3});
    const double r = std::hypot(s.back().x, s.back().y);
    CHECK(std::abs(r - 0.5) < 1e-4);
    CHECK(std::abs(curve_dimension(s, default_ladder_2d()).fit - 1.0) < 0.07);
  }
  SUBCASE("multiplicity three through the transversal orbit") {
    const LimitCycleSpec spec{0.5, 3, CycleSide::outside, 0.8, 100};
    const auto orbit = limit_cycle_transversal_orbit(spec, 1'000'000);
    const double d = sequence_dimension(orbit, default_ladder_1d()).fit;
    CHECK(std::abs(1.0 + d - 5.0 / 3.0) < 0.05);
  }
}
