#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "orthlip/error.hpp"
#include "orthlip/exponents.hpp"

using namespace orthlip;

namespace {

ExponentVector spread(std::size_t n, double lo, double hi) {
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return ExponentVector(p);
}

ExponentVector random_exponents(std::mt19937_64& rng, std::size_t n, double pmax_cap) {
  std::uniform_real_distribution<double> u(2.0, pmax_cap);
  std::vector<double> p(n);
  for (auto& x : p) x = u(rng);
  std::sort(p.begin(), p.end());
  return ExponentVector(p);
}

// Unrolled hypothesis on the radii t_{k+1} = t_k + (1-lambda) lambda^k (R-r)
// with equality at every step:
//   Z(r) = sum_k theta^k [A/d_k^a + B/d_k^b + C] + theta^K Z(t_K).
// Terms are formed in log space since d_k underflows long before theta^k does.
double brute_force_hole_filling(const HoleFilling& h, double r, double R, double lambda, double z_end) {
  const int steps = 1000;
  const double log_theta = std::log(h.theta);
  double z = 0.0;
  for (int k = 0; k < steps; ++k) {
    if (h.theta == 0.0 && k > 0) break;
    const double log_d = std::log((1.0 - lambda) * (R - r)) + k * std::log(lambda);
    const double w = k == 0 ? 0.0 : k * log_theta;
    z += h.A * std::exp(w - h.alpha0 * log_d) + h.B * std::exp(w - h.beta0 * log_d) + h.C * std::exp(w);
  }
  if (h.theta > 0.0) z += std::exp(steps * log_theta) * z_end;
  return z;
}

}  // namespace

TEST_CASE("exponent vector validation") {
  CHECK_THROWS_AS(ExponentVector({3.0}), InvalidArgument);
  CHECK_THROWS_AS(ExponentVector({1.5, 3.0}), InvalidArgument);
  CHECK_THROWS_AS(ExponentVector({4.0, 3.0}), InvalidArgument);
  CHECK_THROWS_AS(ExponentVector({2.0, std::numeric_limits<double>::infinity()}), InvalidArgument);
  const ExponentVector p({2.0, 3.0, 3.0});
  CHECK(p.dim() == 3);
  CHECK(p.min() == 2.0);
  CHECK(p.max() == 3.0);
  CHECK_FALSE(p.standard_growth());
}

TEST_CASE("extended reals order +infinity above every finite value") {
  const auto inf = ExtendedReal::infinity();
  CHECK(ExtendedReal(1e300) < inf);
  CHECK_FALSE(inf < ExtendedReal(1.0));
  CHECK(min(inf, ExtendedReal(3.0)) == ExtendedReal(3.0));
  CHECK(over_p_minus_two(5.0, 2.0).is_infinite());
  CHECK(over_p_minus_two(6.0, 4.0).value() == 3.0);
  CHECK_THROWS_AS(inf.value(), InvalidArgument);
  CHECK(min_finite(inf, 7.0) == 7.0);
}

TEST_CASE("q sequence examples") {
  const auto a = compute_q_sequence(ExponentVector({2.0, 3.0, 4.0}), 2.0);
  CHECK(a.q == std::vector<double>{2.0, 2.0, 2.0});

  const auto b = compute_q_sequence(ExponentVector({2.0, 2.0, 2.0, 2.0}), 7.5);
  for (double q : b.q) CHECK(q == 7.5);

  const auto c = compute_q_sequence(ExponentVector({4.0, 20.0}), 10.0);
  CHECK(c.q[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.q[1] == doctest::Approx(10.0 / 9.0).epsilon(1e-15));
  CHECK(c.order(0) == 10.0);
  CHECK(c.order(2) == c.q[1]);

  CHECK_THROWS_AS(compute_q_sequence(ExponentVector({2.0, 3.0}), 1.5), InvalidArgument);
}

TEST_CASE("q sequence is non-increasing and lies in (1, q0]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uq(2.0, 30.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_exponents(rng, 2 + trial % 7, 40.0);
    const double q0 = uq(rng);
    const auto q = compute_q_sequence(p, q0);
    for (std::size_t k = 0; k < q.q.size(); ++k) {
      CHECK(q.q[k] > 1.0);
      CHECK(q.q[k] <= q0);
      if (k > 0) CHECK(q.q[k] <= q.q[k - 1]);
    }
  }
}

TEST_CASE("index rule uses log = -inf for non-positive arguments") {
  CHECK(first_index_above_log(-3.0) == 0);
  CHECK(first_index_above_log(0.0) == 0);
  CHECK(first_index_above_log(2.0) == 0);   // j > -1
  CHECK(first_index_above_log(4.0) == 1);   // j > 0
  CHECK(first_index_above_log(5.0) == 1);   // j > 0.32
  CHECK(first_index_above_log(16.0) == 3);  // j > 2
}

TEST_CASE("Moser schedule for N=3, p=(2,4,6)") {
  const ExponentVector p({2.0, 4.0, 6.0});
  const auto s = compute_moser_schedule(p, 40);
  CHECK(s.j0 == 0);
  CHECK(s.j1 == 1);
  CHECK(s.J == 2);
  CHECK(s.sobolev2star == 6.0);
  CHECK(s.gamma(1) == 12.0);
  CHECK(s.gamma(2) == 20.0);
  CHECK(s.tau(2) == doctest::Approx(7.0 / 15.0).epsilon(1e-14));
  CHECK(1.0 / 20.0 == doctest::Approx(s.tau(2) / 12.0 + (1.0 - s.tau(2)) / 48.0).epsilon(1e-14));
  CHECK(s.theta > 1.0);
  CHECK(std::isfinite(s.theta));
}

TEST_CASE("Moser schedule in the standard-growth case") {
  const auto s = compute_moser_schedule(ExponentVector({5.0, 5.0, 5.0}), 20);
  CHECK(s.j0 == 0);
  CHECK(s.j1 == 0);
  CHECK(s.J == 1);
  CHECK(s.theta == 1.0);
  CHECK(epsilon_asymptote(ExponentVector({5.0, 5.0, 5.0})) == 0.0);
}

TEST_CASE("Moser schedule rejects N=2 and short ladders") {
  CHECK_THROWS_AS(compute_moser_schedule(ExponentVector({2.0, 4.0}), 30), InvalidArgument);
  const ExponentVector p({2.0, 4.0, 6.0});
  CHECK(minimum_jmax(p) == 12);
  CHECK_THROWS_AS(compute_moser_schedule(p, 11), InvalidArgument);
  CHECK_NOTHROW(compute_moser_schedule(p, 12));
  CHECK_THROWS_AS(compute_moser_schedule(p, 5000), InvalidArgument);
}

TEST_CASE("epsilon asymptote examples") {
  CHECK(epsilon_asymptote(spread(3, 2.0, 6.0)) == 1.5);
  CHECK(epsilon_asymptote(spread(4, 2.0, 10.0)) == 4.0);
}

TEST_CASE("Moser schedule properties on random exponents") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> un(3, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(un(rng));
    const auto p = random_exponents(rng, n, 50.0);
    if (p.standard_growth()) continue;
    const int jmax = minimum_jmax(p) + 60;
    const auto s = compute_moser_schedule(p, jmax);
    const double half_star = s.sobolev2star / 2.0;
    const double c = half_star * (p.min() - 2.0) - (p.max() - 2.0);

    for (int j = 1; j <= jmax; ++j) REQUIRE(s.gamma(j) > s.gamma(j - 1));
    for (int j = s.j0; j <= jmax; ++j) {
      const double t = s.tau(j);
      REQUIRE(t > 0.0);
      REQUIRE(t < 1.0);
      const double g = s.gamma(j);
      const double rhs = t / moser_gamma(p.max(), j - 1) + (1.0 - t) / (half_star * (g + p.min() - p.max()));
      REQUIRE(std::abs(1.0 / g - rhs) <= 1e-12 * (1.0 / g));
    }
    for (int j = s.J; j <= s.J + 60 && j <= jmax; ++j) {
      const double ratio = s.absorption_ratio(j);
      REQUIRE(ratio > 0.0);
      REQUIRE(ratio < 1.0);
      REQUIRE(s.eps(j) > 0.0);
      if (j > s.J) {
        const double prev = s.absorption_ratio(j - 1);
        if (c > 0.0) {
          REQUIRE(ratio >= prev * (1.0 - 1e-14));
        } else {
          REQUIRE(ratio <= prev * (1.0 + 1e-14));
        }
      }
    }
  }
}

TEST_CASE("2^j eps_j approaches N (p_N - p_1)/8") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_exponents(rng, 3 + trial % 4, 50.0);
    if (p.standard_growth()) continue;
    const auto s = compute_moser_schedule(p, std::max(40, minimum_jmax(p)));
    const double lim = epsilon_asymptote(p);
    CHECK(std::abs(std::ldexp(s.eps(40), 40) - lim) <= 1e-3 * lim);
  }
}

TEST_CASE("partial products of 1 + eps_j are Cauchy") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_exponents(rng, 3 + trial % 4, 50.0);
    if (minimum_jmax(p) > 40) continue;
    const double a = compute_moser_schedule(p, 40).theta;
    const auto s60 = compute_moser_schedule(p, 60);
    CHECK(std::abs(s60.theta / a - 1.0) < 1e-9);
    // The reported tail dominates what the 20 further factors add.
    CHECK(std::log(s60.theta / a) <= compute_moser_schedule(p, 40).theta_tail * (1.0 + 1e-6) + 1e-16);
  }
}

TEST_CASE("hole-filling bound: worked example and zero data") {
  const HoleFilling h{1.0, 0.0, 0.0, 1.0, 1.0, 0.5};
  CHECK(iteration_lemma_bound(h, 1.0, 2.0, 0.75) == doctest::Approx(12.0).epsilon(1e-14));
  const HoleFilling zero{0.0, 0.0, 0.0, 2.0, 1.0, 0.3};
  CHECK(iteration_lemma_bound(zero, 0.5, 1.0) == 0.0);
}

TEST_CASE("hole-filling bound: input validation") {
  const HoleFilling h{1.0, 1.0, 1.0, 2.0, 1.0, 0.25};
  CHECK_THROWS_AS(iteration_lemma_bound(h, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(iteration_lemma_bound(h, 1.0, 2.0, 0.5), InvalidArgument);  // theta^{1/2} = 0.5
  CHECK_THROWS_AS(iteration_lemma_bound(h, 1.0, 2.0, 1.0), InvalidArgument);
  HoleFilling bad = h;
  bad.beta0 = 3.0;
  CHECK_THROWS_AS(iteration_lemma_bound(bad, 1.0, 2.0), InvalidArgument);
  bad = h;
  bad.theta = 1.0;
  CHECK_THROWS_AS(iteration_lemma_bound(bad, 1.0, 2.0), InvalidArgument);
}

TEST_CASE("hole-filling bound dominates the iterated hypothesis") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    HoleFilling h;
    h.A = 5.0 * u01(rng);
    h.B = 5.0 * u01(rng);
    h.C = 5.0 * u01(rng);
    h.alpha0 = 0.5 + 4.0 * u01(rng);
    h.beta0 = h.alpha0 * (0.05 + 0.95 * u01(rng));
    h.theta = 0.95 * u01(rng);
    const double r = 0.1 + u01(rng);
    const double R = r + 0.05 + 2.0 * u01(rng);
    const double lo = std::pow(h.theta, 1.0 / h.alpha0);
    const double lambda = lo + (1.0 - lo) * (0.05 + 0.9 * u01(rng));
    const double bound = iteration_lemma_bound(h, r, R, lambda);
    for (double z_end : {0.0, bound}) {
      const double z = brute_force_hole_filling(h, r, R, lambda, z_end);
      CHECK(z <= bound * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("hole-filling bound monotonicity") {
  const HoleFilling base{1.0, 2.0, 0.5, 2.0, 1.0, 0.3};
  const double lam = 0.8;
  const double b0 = iteration_lemma_bound(base, 1.0, 2.0, lam);
  HoleFilling h = base;
  h.A = 1.5;
  CHECK(iteration_lemma_bound(h, 1.0, 2.0, lam) >= b0);
  h = base;
  h.B = 2.5;
  CHECK(iteration_lemma_bound(h, 1.0, 2.0, lam) >= b0);
  h = base;
  h.C = 1.0;
  CHECK(iteration_lemma_bound(h, 1.0, 2.0, lam) >= b0);
  h = base;
  h.theta = 0.4;
  CHECK(iteration_lemma_bound(h, 1.0, 2.0, lam) >= b0);
  CHECK(iteration_lemma_bound(base, 1.0, 2.5, lam) <= b0);
  CHECK(iteration_lemma_bound(base, 1.5, 2.0, lam) >= b0);
}
