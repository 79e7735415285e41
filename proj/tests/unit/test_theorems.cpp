#include <doctest.h>

#include <cmath>
#include <random>

#include "minkdim/theorems.hpp"

using namespace minkdim;

namespace {

struct Draw {
  TwoCycleSpec spec;
  bool above_one = true;
};

// r1 log-uniform in [1.05, 5], inverted on odd draws; draws whose floor
// argument sits within 1e-6 of an integer are rejected.
Draw draw_unit_cycle(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> logr(std::log(1.05), std::log(5.0));
  std::uniform_int_distribution<int> kd(2, 6);
  std::uniform_int_distribution<int> extra(0, 2);
  for (;;) {
    const double rho = std::exp(logr(rng));
    const bool above = index % 2 == 0;
    const int k1 = kd(rng);
    const int k2 = k1 + extra(rng);
    TwoCycleSpec s;
    s.r1 = above ? rho : 1.0 / rho;
    s.r2 = 1.0 / s.r1;
    s.alpha1 = -1.0;
    s.alpha2 = -1.0;
    s.k1 = k1;
    s.k2 = k2;
    // With k2 >= k1 the branch is fixed by which side of 1 r1 lies on.
    const double arg = above ? (k1 - 1) / s.r1 : (k2 - 1) / s.r2;
    if (std::abs(arg - std::round(arg)) < 1e-6) continue;
    return {s, above};
  }
}

}  // namespace

TEST_CASE("saddle loop dimensions") {
  CHECK(saddle_loop_dim(6) == 5.0 / 3.0);
  CHECK(saddle_loop_dim(4) == 1.5);
  CHECK(saddle_loop_dim(1) == 1.0);
  for (int j = 1; j <= 10; ++j) {
    CHECK(saddle_loop_dim(2 * j - 1) == saddle_loop_dim(2 * j));
  }
  for (int k = 1; k <= 40; ++k) {
    CHECK(saddle_loop_dim(k) >= 1.0);
    CHECK(saddle_loop_dim(k) < 2.0);
  }
  CHECK_THROWS_AS(saddle_loop_dim(0), Error);
}

TEST_CASE("corner and polycycle predictions") {
  CHECK(predict_corner_dim(0.5) == 1.5);
  const double dims[] = {0.2, 0.5, 1.0 / 3.0};
  CHECK(predict_polycycle_dim(dims) == 1.5);
  CHECK_THROWS_AS(predict_corner_dim(1.0), Error);
  CHECK_THROWS_AS(predict_polycycle_dim(std::span<const double>{}), Error);
}

TEST_CASE("guarded floor") {
  CHECK(guarded_floor(2.7).value == 2);
  CHECK_FALSE(guarded_floor(2.7).guarded);
  CHECK(guarded_floor(3.0 - 1e-12).value == 3);
  CHECK(guarded_floor(3.0 - 1e-12).guarded);
  CHECK(guarded_floor(3.0).value == 3);
  CHECK_FALSE(guarded_floor(3.0).guarded);
  CHECK(guarded_floor(-0.5).value == -1);
}

TEST_CASE("epsilon examples") {
  const double s2 = std::sqrt(2.0);
  CHECK(mourtada_epsilon(s2, 3, 3).value == 6);
  CHECK(mourtada_epsilon(s2, 3, 3).branch == 1);
  CHECK(mourtada_epsilon(s2, 2, 3).value == 4);
  CHECK(mourtada_epsilon(1.0 / s2, 3, 3).branch == 2);
  CHECK(mourtada_epsilon(2.0, 3, std::nullopt).value == 6);
  try {
    mourtada_epsilon(1.0, 4, 4);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::inequality);
  }
  CHECK_THROWS_AS(mourtada_epsilon(s2, std::nullopt, std::nullopt), Error);
  CHECK_THROWS_AS(mourtada_epsilon(s2, 1, 3), Error);
}

TEST_CASE("cyclicity bound examples and range") {
  CHECK(cyclicity_bound(1.0, 0.3).value == 3);
  CHECK(cyclicity_bound(5.0 / 3.0, 1.0 / std::sqrt(2.0)).value == 6);
  CHECK(cyclicity_bound(1.5, 0.5).value == 4);
  try {
    cyclicity_bound(2.0 - 1e-7, 0.5);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular);
  }
  CHECK_THROWS_AS(cyclicity_bound(1.5, 0.0), Error);
  CHECK_THROWS_AS(cyclicity_bound(0.9, 0.5), Error);
}

TEST_CASE("cyclicity bound is monotone") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(1.0, 1.99);
  std::uniform_real_distribution<double> ur(0.01, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double d1 = ud(rng), d2 = ud(rng), r1 = ur(rng), r2 = ur(rng);
    const double r = ur(rng), d = ud(rng);
    CHECK(cyclicity_bound(std::min(d1, d2), r).value <= cyclicity_bound(std::max(d1, d2), r).value);
    CHECK(cyclicity_bound(d, std::min(r1, r2)).value <= cyclicity_bound(d, std::max(r1, r2)).value);
    CHECK(cyclicity_bound(d, r).value >= 3);
  }
}

TEST_CASE("recover_r") {
  const auto a = recover_r(2.0 / 3.0, 3.0 / 4.0);
  CHECK(a.r == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_FALSE(a.warning);
  const auto b = recover_r(0.5, 0.5);
  CHECK(b.r == 1.0);
  CHECK(b.warning);
  CHECK(recover_r(0.3, 0.8).r == recover_r(0.8, 0.3).r);
  CHECK_THROWS_AS(recover_r(0.0, 0.5), Error);

  for (int g1 = 2; g1 <= 8; ++g1) {
    for (int g2 = 2; g2 <= 8; ++g2) {
      const double d1 = 1.0 - 1.0 / g1, d2 = 1.0 - 1.0 / g2;
      const double expect = std::min(double(g1) / g2, double(g2) / g1);
      CHECK(std::abs(recover_r(d1, d2).r - expect) < 1e-12);
    }
  }
}

TEST_CASE("consistency report examples") {
  SUBCASE("hyperbolic") {
    TwoCycleSpec s;
    s.r1 = std::sqrt(2.0);
    s.r2 = 1.0 / s.r1;
    s.beta12 = 0.7;
    s.alpha1 = -1.0;
    s.k1 = 3;
    const auto rep = consistency_report(s);
    CHECK(rep.proof_case == ProofCase::hyperbolic);
    CHECK(rep.d == 1.0);
    CHECK(rep.bound == 3);
    CHECK_FALSE(rep.r_from_dims);
  }
  SUBCASE("r1 = sqrt 2") {
    TwoCycleSpec s;
    s.r1 = std::sqrt(2.0);
    s.r2 = 1.0 / s.r1;
    s.alpha1 = -1.0;
    s.k1 = 3;
    const auto rep = consistency_report(s);
    CHECK(rep.proof_case == ProofCase::r1_above_one);
    CHECK(rep.d == doctest::Approx(2.0 - 1.0 / 3.0));
    CHECK(rep.bound == 6);
    CHECK(rep.epsilon == 6);
    CHECK(rep.consistent);
  }
  SUBCASE("r1 = 1/sqrt 2") {
    TwoCycleSpec s;
    s.r1 = 1.0 / std::sqrt(2.0);
    s.r2 = 1.0 / s.r1;
    s.alpha1 = -1.0;
    s.k1 = 3;
    const auto rep = consistency_report(s);
    CHECK(rep.proof_case == ProofCase::r1_below_one);
    CHECK(rep.d == doctest::Approx(2.0 - 1.0 / (1.0 + 2.0 * std::sqrt(2.0))));
    REQUIRE(rep.epsilon);
    CHECK(rep.bound == *rep.epsilon);
    CHECK(rep.consistent);
  }
  SUBCASE("errors carry the stage") {
    TwoCycleSpec s;
    s.alpha1 = -1.0;
    s.k1 = 3;
    s.alpha2 = -1.0;
    s.k2 = 3;
    try {
      consistency_report(s);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("[normalize]") != std::string::npos);
    }
  }
}

TEST_CASE("bound equals epsilon on random unit-product cycles") {
  std::mt19937_64 rng(2024);
  int above = 0, below = 0;
  for (int i = 0; i < 200; ++i) {
    const Draw d = draw_unit_cycle(rng, i);
    const auto rep = consistency_report(d.spec);
    REQUIRE(rep.epsilon);
    INFO("r1 " << d.spec.r1 << " k1 " << *d.spec.k1 << " k2 " << *d.spec.k2);
    CHECK(rep.bound == *rep.epsilon);
    CHECK(rep.bound == mourtada_epsilon(d.spec.r1, d.spec.k1, d.spec.k2).value);
    CHECK_FALSE(mourtada_epsilon(d.spec.r1, d.spec.k1, d.spec.k2).guard_triggered);
    (rep.proof_case == ProofCase::r1_above_one ? above : below)++;
  }
  CHECK(above > 0);
  CHECK(below > 0);
}
