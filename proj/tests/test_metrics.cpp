#include "tpsolve/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace tpsolve;

TEST_CASE("mixed norm normalizes by its first argument") {
  Vector u(2);
  Vector v(2);
  u << 3.0, 4.0;  // ||u|| = 5
  v << 3.0, 4.5;  // ||u - v|| = 0.5

  // 0.5 / (0.1 + 0.2 * 5) = 0.5 / 1.1
  CHECK(mixed_norm(u, v, 0.1, 0.2) == doctest::Approx(0.5 / 1.1).epsilon(1e-14));
  // Swapping the arguments changes the normalization: ||v|| = sqrt(29.25).
  CHECK(mixed_norm(v, u, 0.1, 0.2) ==
        doctest::Approx(0.5 / (0.1 + 0.2 * std::sqrt(29.25))).epsilon(1e-14));
  CHECK(mixed_norm(u, u, 1e-6, 1e-3) == 0.0);

  Vector w(3);
  w << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS((void)mixed_norm(u, w, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("pp error pairs interior points and the periodic wrap") {
  // Three points, scalar state. U = [u0, u1, u2], fine column n-1 targets
  // point n, the last column wraps onto point 0.
  BlockVector points(1, 3);
  points << 10.0, 20.0, 30.0;
  BlockVector fine(1, 3);
  fine << 20.0, 30.0, 10.0;  // exact match after pairing
  CHECK(pp_error(points, fine, 1.0, 0.0) == 0.0);

  // Perturb the wrap target only: |10 - 10.7| / (1 + 0) = 0.7.
  fine(0, 2) = 10.7;
  CHECK(pp_error(points, fine, 1.0, 0.0) == doctest::Approx(0.7).epsilon(1e-14));

  // An interior jump with the wrap restored:
  // |20 - 20.9| normalized by ||U_1|| = 20 with r_tol 0.1 -> 0.9 / 3.
  fine(0, 2) = 10.0;
  fine(0, 0) = 20.9;
  CHECK(pp_error(points, fine, 1.0, 0.1) == doctest::Approx(0.9 / 3.0).epsilon(1e-14));

  // A NaN entry must propagate instead of being dropped by the max.
  fine(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK(std::isnan(pp_error(points, fine, 1.0, 0.1)));

  BlockVector bad(1, 2);
  CHECK_THROWS_AS((void)pp_error(points, bad, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("inner error is the worst per-column mixed norm") {
  BlockVector newer(2, 2);
  newer << 1.0, 0.0, 0.0, 2.0;
  BlockVector older = newer;
  older(0, 0) = 1.5;  // column 0 differs by 0.5, ||newer col|| = 1
  older(1, 1) = 2.2;  // column 1 differs by 0.2, ||newer col|| = 2

  // a_tol = 1, r_tol = 1: max(0.5 / 2, 0.2 / 3) = 0.25.
  CHECK(inner_error(newer, older, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(inner_error(newer, newer, 1e-6, 1e-3) == 0.0);

  older(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK(std::isnan(inner_error(newer, older, 1.0, 1.0)));
}

TEST_CASE("solve counter aggregates per-worker tallies") {
  SolveCounter counter(3);
  CHECK(counter.workers() == 3);
  counter.tally(0).factor_solves = 4;
  counter.tally(0).cached_resolves = 1;
  counter.tally(1).factor_solves = 2;
  counter.tally(2).cached_resolves = 7;

  CHECK(counter.tally(0).solves() == 5);
  CHECK(counter.effective() == 7);
  CHECK(counter.total() == 14);
  CHECK(counter.total() <= counter.workers() * counter.effective());

  CHECK_THROWS_AS(counter.tally(3), std::out_of_range);
  CHECK_THROWS_AS(SolveCounter(0), std::invalid_argument);
}

TEST_CASE("fresh counter reports zero work") {
  const SolveCounter counter(4);
  CHECK(counter.effective() == 0);
  CHECK(counter.total() == 0);
}
