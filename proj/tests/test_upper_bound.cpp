// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "afrelay/error.hpp"
#include "afrelay/potdc.hpp"
#include "afrelay/upper_bound.hpp"
#include "oracles.hpp"

using namespace afrelay;
using namespace afrelay::testing;

namespace {

ProblemMatrices seeded(int m_r, double noise, std::uint64_t seed) {
  const SystemConfig c = symmetric_config(m_r, noise);
  return build_problem(c, draw_channels(c, seed));
}

}  // namespace

TEST_CASE("scalar relay: bound is the exact optimum") {
  const auto pm = seeded(1, 0.3, 2);
  const double a1 = pm.a1(0, 0).real(), a2 = pm.a2(0, 0).real();
  const double b1 = pm.b1(0, 0).real(), b2 = pm.b2(0, 0).real();
  CHECK(compute_q_star(pm) == doctest::Approx(std::log(a1 * a2 / (b1 * b1))).epsilon(1e-10));
  const double exact = std::log(a1 * a2 / (b1 * b2));
  for (int n : {1, 5, 30}) {
    UpperBoundOptions opt;
    opt.segments = n;
    const auto ub = compute_upper_bound(pm, exact, opt);
    CHECK(ub.bound == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("q* with A2 = B1 is the top eigenvalue of the pencil (A1, B1)") {
  auto pm = seeded(2, 1.0, 5);
  pm.a2 = pm.b1;
  const double expected = std::log(gen_eig_extremes(pm.a1, pm.b1).lambda_max);
  CHECK(compute_q_star(pm) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("sandwich, refinement and soundness on a seeded instance") {
  const auto pm = seeded(3, 1.0, 1);
  const auto p = run_potdc(pm);
  const auto iv = tau_beta_intervals(pm);

  UpperBoundOptions opt;
  const auto ub30 = compute_upper_bound(pm, p.relaxed_value, opt);
  CHECK(ub30.q_star >= p.relaxed_value + std::log(iv.beta_min) - 1e-9);
  CHECK(ub30.beta_min <= ub30.beta_max);
  CHECK(ub30.beta_max <= iv.beta_max * (1.0 + 1e-12));
  CHECK(ub30.segments == 30);
  REQUIRE(ub30.per_segment_values.size() == 30);
  CHECK(ub30.bound ==
        *std::max_element(ub30.per_segment_values.begin(), ub30.per_segment_values.end()));
  CHECK(ub30.bound >= p.relaxed_value - 1e-9);
  CHECK(ub30.bound - p.relaxed_value < 1e-2);

  opt.segments = 1;
  const auto ub1 = compute_upper_bound(pm, p.relaxed_value, opt);
  CHECK(ub1.bound >= ub30.bound - 1e-9);

  double prev = ub1.bound;
  for (int n : {2, 4, 8}) {
    opt.segments = n;
    const double b = compute_upper_bound(pm, p.relaxed_value, opt).bound;
    CHECK(b <= prev + 1e-9);
    prev = b;
  }

  Xoshiro256 rng(17);
  for (int k = 0; k < 10000; ++k)
    REQUIRE(std::log(objective(random_vector(rng, pm.n), pm)) <= ub30.bound + 1e-9);
}

TEST_CASE("logarithmic spacing is also sound") {
  const auto pm = seeded(2, 0.5, 9);
  const auto p = run_potdc(pm);
  UpperBoundOptions opt;
  opt.spacing = SegmentSpacing::logarithmic;
  opt.segments = 10;
  const auto ub = compute_upper_bound(pm, p.relaxed_value, opt);
  CHECK(ub.bound >= p.relaxed_value - 1e-9);
  CHECK(ub.bound - p.relaxed_value < 1e-2);
}

TEST_CASE("chord of log lies below log inside the segment") {
  Xoshiro256 rng(4);
  for (int k = 0; k < 20; ++k) {
    const double lo = 0.01 + rng.uniform() * 5.0;
    const double hi = lo * (1.0 + 10.0 * rng.uniform());
    const auto [s, c] = log_chord(lo, hi);
    CHECK(s * lo + c == doctest::Approx(std::log(lo)).epsilon(1e-12));
    CHECK(s * hi + c == doctest::Approx(std::log(hi)).epsilon(1e-12));
    for (int i = 1; i <= 100; ++i) {
      const double b = lo + (hi - lo) * i / 101.0;
      REQUIRE(s * b + c <= std::log(b) + 1e-15);
    }
  }
}

TEST_CASE("errors") {
  const auto pm = seeded(2, 1.0, 6);
  UpperBoundOptions opt;
  opt.segments = 0;
  CHECK_THROWS_AS(compute_upper_bound(pm, 0.0, opt), InvalidInput);
  const double cap = compute_q_star(pm) - std::log(tau_beta_intervals(pm).beta_min);
  CHECK_THROWS_AS(compute_upper_bound(pm, cap + 1.0), DegenerateRange);
}
