#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "orchard/errors.hpp"
#include "orchard/scorer.hpp"

using namespace orchard;

namespace {
ScoreReport score(long long cr, long long ct, double t, double d, int k) {
  return compute_score({cr, ct, t, d, k});
}
}  // namespace

TEST_CASE("reference point") {
  const auto s = score(10, 10, 100, 150, 0);
  CHECK(s.p_f == doctest::Approx(50).epsilon(1e-12));
  CHECK(s.p_t == doctest::Approx(25).epsilon(1e-12));
  CHECK(s.p_d == doctest::Approx(25).epsilon(1e-12));
  CHECK(s.p_c == 0);
  CHECK(s.p == doctest::Approx(100).epsilon(1e-12));
}

TEST_CASE("one missed fruit and two collisions") {
  const auto s = score(9, 10, 100, 150, 2);
  CHECK(s.p_f == doctest::Approx(30));
  CHECK(s.p_c == doctest::Approx(50));
  CHECK(s.p == doctest::Approx(30));
}

TEST_CASE("p_t 13.51 and p_d 23.88 invert to time and distance") {
  const double t = 100.0 * (1.0 - std::log(13.51 / 25.0));
  const double d = 150.0 * (1.0 - 0.5 * std::log(23.88 / 25.0));
  CHECK(t == doctest::Approx(161.55).epsilon(1e-3));
  CHECK(d == doctest::Approx(153.44).epsilon(1e-3));
  const auto s = score(10, 10, t, d, 0);
  CHECK(s.p_t == doctest::Approx(13.51).epsilon(1e-9));
  CHECK(s.p_d == doctest::Approx(23.88).epsilon(1e-9));
}

TEST_CASE("zero true count") {
  CHECK(score(0, 0, 50, 50, 0).p_f == doctest::Approx(50));
  CHECK(score(1, 0, 50, 50, 0).p_f == doctest::Approx(-150));
}

TEST_CASE("component properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1.0, 400.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng), d = u(rng);
    CHECK(score(5, 5, t, d, 0).p_t > score(5, 5, t + 1.0, d, 0).p_t);
    CHECK(score(5, 5, t, d, 0).p_d > score(5, 5, t, d + 1.0, 0).p_d);
    const long long ct = static_cast<long long>(u(rng) / 10);
    const long long delta = 1 + i % 3;
    if (ct >= delta)
      CHECK(score(ct + delta, ct, t, d, 0).p_f == doctest::Approx(score(ct - delta, ct, t, d, 0).p_f));
    CHECK(score(ct, ct, t, d, 0).p_f >= score(ct + delta, ct, t, d, 0).p_f);
    const int k = i % 5;
    CHECK(score(5, 5, t, d, k).p - score(5, 5, t, d, k + 1).p == doctest::Approx(25));
    const auto s = score(ct + 1, ct, t, d, k);
    CHECK(std::abs(s.p - (s.p_f + s.p_t + s.p_d - s.p_c)) <= 1e-9);
  }
}

TEST_CASE("matches the term-by-term evaluation") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> count(0, 60), kk(0, 4);
  std::uniform_real_distribution<double> u(0.5, 500.0);
  for (int i = 0; i < 1000; ++i) {
    ScoreInputs in{count(rng), count(rng), u(rng), u(rng), kk(rng), u(rng), u(rng)};
    const double want = oracle::sheet_total(in.c_r, in.c_t, in.t_m, in.d_m, in.k, in.t_b, in.d_b);
    CHECK(std::abs(compute_score(in).p - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(score(1, -1, 10, 10, 0), DomainError);
  CHECK_THROWS_AS(score(1, 1, 0, 10, 0), DomainError);
  CHECK_THROWS_AS(score(1, 1, 10, -1, 0), DomainError);
  CHECK_THROWS_AS(score(1, 1, 10, 10, -1), DomainError);
  CHECK_THROWS_AS(compute_score({1, 1, 10, 10, 0, 0.0, 150}), DomainError);
}
