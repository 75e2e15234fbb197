#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "orthlip/error.hpp"
#include "orthlip/grid.hpp"

using namespace orthlip;

namespace {

NodalField affine_field(const Grid& g, const std::vector<double>& a, double b) {
  return NodalField::sample(g, [&](const Point& x) {
    double s = b;
    for (std::size_t d = 0; d < g.dim(); ++d) s += a[d] * x[d];
    return s;
  });
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g({{0.0, 2.0}, {-1.0, 1.0}}, {5, 9});
  CHECK(g.h(0) == 0.5);
  CHECK(g.h(1) == 0.25);
  CHECK(g.size() == 45);
  CHECK(g.cell_volume() == 0.125);
  CHECK(g.domain_volume() == 4.0);
  CHECK(g.coord(44)[0] == 2.0);
  CHECK(g.coord(44)[1] == 1.0);
  CHECK(g.flat_index(g.multi_index(23)) == 23);
  CHECK(g.is_boundary(0));
  CHECK_FALSE(g.is_boundary(g.flat_index({2, 4, 0})));
  CHECK_THROWS_AS(Grid({{0.0, 1.0}, {0.0, 1.0}}, {2, 5}), InvalidArgument);
  CHECK_THROWS_AS(Grid({{0.0, 1.0}}, {5}), InvalidArgument);
  CHECK_THROWS_AS(Grid({{1.0, 1.0}, {0.0, 1.0}}, {5, 5}), InvalidArgument);
  CHECK_THROWS_AS(NodalField(Grid::unit(2, 3), std::vector<double>(8, 0.0)), InvalidArgument);
}

TEST_CASE("discrete gradient examples") {
  const Grid g = Grid::unit(2, 11);
  const auto u = affine_field(g, {3.0, 0.0}, 2.0);
  const auto d0 = discrete_gradient(u, 0);
  for (double v : d0.values()) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
  const auto d1 = discrete_gradient(u, 1);
  for (double v : d1.values()) CHECK(std::abs(v) < 1e-12);

  const NodalField c(g, 4.2);
  const auto dc = discrete_gradient(c, 0);
  for (double v : dc.values()) CHECK(v == 0.0);

  const Grid q = Grid::unit(2, 5);  // h = 0.25
  const auto sq = NodalField::sample(q, [](const Point& x) { return x[0] * x[0]; });
  const auto dsq = discrete_gradient(sq, 0);
  for (std::size_t i = 1; i <= 3; ++i) {
    const std::size_t k = q.flat_index({i, 2, 0});
    CHECK(dsq[k] == doctest::Approx(2.0 * q.coord(k)[0]).epsilon(1e-14));
  }
}

TEST_CASE("second derivatives of a quadratic") {
  const Grid g = Grid::unit(3, 7);
  const auto u = NodalField::sample(g, [](const Point& x) { return x[0] * x[0] + 3.0 * x[0] * x[1] - x[2] * x[2]; });
  const auto uxx = discrete_second_derivative(u, 0, 0);
  const auto uxy = discrete_second_derivative(u, 0, 1);
  const auto uzz = discrete_second_derivative(u, 2, 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    CHECK(uxx[k] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(uxy[k] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(uzz[k] == doctest::Approx(-2.0).epsilon(1e-10));
  }
}

TEST_CASE("Lebesgue norm examples") {
  const Grid g = Grid::unit(2, 17);
  const auto dom = SubRegion::domain(g);
  const NodalField one(g, 1.0);
  for (double q : {1.0, 2.0, 3.7}) CHECK(lebesgue_norm(one, q, dom) == doctest::Approx(1.0).epsilon(1e-13));

  const Grid g2({{0.0, 2.0}, {0.0, 1.5}}, {9, 7});
  const NodalField c(g2, -2.5);
  for (double q : {1.0, 2.0, 5.0}) {
    CHECK(lebesgue_norm(c, q, SubRegion::domain(g2)) == doctest::Approx(2.5 * std::pow(3.0, 1.0 / q)).epsilon(1e-13));
  }
  CHECK(lebesgue_norm(c, HUGE_VAL, SubRegion::domain(g2)) == 2.5);

  // Oracle: the same quadrature on a much finer grid.
  const auto x1 = [](const Point& x) { return x[0]; };
  const double coarse = lebesgue_norm(NodalField::sample(Grid::unit(2, 33), x1), 2.0, dom);
  const Grid fine = Grid::unit(2, 1025);
  const double reference = lebesgue_norm(NodalField::sample(fine, x1), 2.0, SubRegion::domain(fine));
  CHECK(std::abs(coarse - reference) < 2e-3);
  CHECK(std::abs(reference - 1.0 / std::sqrt(3.0)) < 1e-5);

  CHECK_THROWS_AS(lebesgue_norm(one, 2.0, SubRegion::ball({5.0, 5.0, 0.0}, 0.01)), InvalidArgument);
  CHECK_THROWS_AS(lebesgue_norm(one, 0.5, dom), InvalidArgument);
}

TEST_CASE("gradient/norm duality for affine fields") {
  for (std::size_t dim : {2u, 3u}) {
    const Grid g = Grid::unit(dim, 9);
    const std::vector<double> a{1.5, -0.25, 2.0};
    const auto u = affine_field(g, a, 0.3);
    const auto region = SubRegion::box({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75});
    const double vol = region_volume(g, region);
    for (std::size_t i = 0; i < dim; ++i) {
      for (double q : {1.0, 2.0, 4.5}) {
        const double lhs = lebesgue_norm(discrete_gradient(u, i), q, region);
        CHECK(lhs == doctest::Approx(std::abs(a[i]) * std::pow(vol, 1.0 / q)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("Lebesgue norm converges at second order under refinement") {
  const auto f = [](const Point& x) { return std::exp(x[0]) * std::sin(2.0 * x[1] + 0.3); };
  const double q = 3.0;
  auto norm_at = [&](std::size_t n) {
    const Grid g = Grid::unit(2, n);
    return lebesgue_norm(NodalField::sample(g, f), q, SubRegion::domain(g));
  };
  const double a = norm_at(17), b = norm_at(33), c = norm_at(65);
  const double order = std::log2(std::abs(a - b) / std::abs(b - c));
  CHECK(order >= 1.8);
}

TEST_CASE("cutoff functions") {
  const Grid g = Grid::unit(2, 41);
  const auto c = make_cutoff({{0.5, 0.5, 0.0}, 0.2, 0.4}, g);
  CHECK(c.eta[g.flat_index({20, 20, 0})] == 1.0);
  CHECK(c.eta[0] == 0.0);
  CHECK(c.eta[g.size() - 1] == 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point x = g.coord(k);
    const double r = std::hypot(x[0] - 0.5, x[1] - 0.5);
    CHECK(c.eta[k] >= 0.0);
    CHECK(c.eta[k] <= 1.0);
    if (r <= 0.2) CHECK(c.eta[k] == 1.0);
    if (r >= 0.4) CHECK(c.eta[k] == 0.0);
  }
  CHECK(c.constant == doctest::Approx(c.max_grad * 0.2));
  CHECK(c.constant <= 1.875 + 1e-12);  // sup of the quintic ramp slope

  const auto half = make_cutoff({{0.5, 0.5, 0.0}, 0.25, 0.35}, g);
  CHECK(half.max_grad / c.max_grad == doctest::Approx(2.0).epsilon(0.1));

  CHECK_THROWS_AS(make_cutoff({{0.5, 0.5, 0.0}, 0.3, 0.3}, g), InvalidArgument);
  CHECK_THROWS_AS(make_cutoff({{0.5, 0.5, 0.0}, 0.3, 0.33}, g), InvalidArgument);  // s - t < 2h
  CHECK_THROWS_AS(make_cutoff({{0.5, 0.5, 0.0}, 0.3, 0.6}, g), InvalidArgument);
}

TEST_CASE("field CSV and binary round trips") {
  const Grid g({{0.0, 1.0}, {0.0, 2.0}, {-1.0, 0.0}}, {3, 4, 5});
  const auto u = NodalField::sample(g, [](const Point& x) { return std::sin(x[0]) + x[1] * x[2] / 3.0; });

  std::stringstream csv;
  write_field_csv(u, csv);
  const auto back = read_field_csv(g, csv);
  CHECK(back.values() == u.values());

  std::stringstream bin;
  write_field_binary(u, bin);
  CHECK(bin.str().size() == 4 + 3 * 8 + 6 * 8 + g.size() * 8);
  const auto back2 = read_field_binary(bin);
  CHECK(back2.grid() == g);
  CHECK(back2.values() == u.values());

  std::stringstream partial("index,value\n0,1.0\n");
  CHECK_THROWS_AS(read_field_csv(g, partial), InvalidArgument);
}
