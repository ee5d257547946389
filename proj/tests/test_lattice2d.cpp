#include <doctest.h>

#include "qnl/lattice2d.hpp"

#include <cmath>
#include <random>

using namespace qnl;

namespace {

Vec random_field(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> z;
  Vec u(n);
  for (auto& x : u) x = z(rng);
  return u;
}

// Sum over triangles of area * |grad u_T|^2, from the three vertex values.
double p1_dirichlet(const StripDomain2D& d, const Vec& u) {
  double total = 0;
  for (const Triangle& t : active_triangles(d)) {
    auto v = t.vertices();
    Eigen::Matrix2d E;
    E.row(0) = (position(v[1]) - position(v[0])).transpose();
    E.row(1) = (position(v[2]) - position(v[0])).transpose();
    auto val = [&](const Site& s) {
      int k = d.index(s);
      return k < 0 ? 0.0 : u[k];
    };
    Eigen::Vector2d du(val(v[1]) - val(v[0]), val(v[2]) - val(v[0]));
    Eigen::Vector2d g = E.inverse() * du;
    total += std::sqrt(3.0) / 4 * g.squaredNorm();
  }
  return total;
}

}  // namespace

TEST_CASE("lattice directions") {
  CHECK((direction(4) - Eigen::Vector2d(-1, 0)).norm() < 1e-15);
  CHECK((direction(2) - Eigen::Vector2d(0.5, std::sqrt(3.0) / 2)).norm() < 1e-15);
  CHECK((direction(1) + direction(3) + direction(5)).norm() < 1e-15);
  for (int j = 1; j <= 6; ++j) {
    CHECK((position(offset(j)) - direction(j)).norm() < 1e-15);
    CHECK(direction(j).norm() == doctest::Approx(1.0));
    CHECK((direction(j + 6) - direction(j)).norm() < 1e-15);
  }
}

TEST_CASE("domain indexing") {
  for (bool periodic : {false, true}) {
    StripDomain2D d{4, 5, periodic, 1};
    for (int k = 0; k < d.sites(); ++k) CHECK(d.index(d.site_of(k)) == k);
    CHECK(d.index({0, 5}) == -1);
    CHECK(d.index({0, -5}) == -1);
    if (periodic) CHECK(d.index({9, 1}) == d.index({0, 1}));
    else CHECK(d.index({4, 0}) == -1);
  }
}

TEST_CASE("second differences") {
  StripDomain2D d{6, 6, false, 1};
  Vec u = Vec::Zero(d.sites());
  Site s0{0, 0};
  u[d.index(s0)] = 1;
  Site a1 = offset(1), a2 = offset(2);
  CHECK(second_diff(d, u, 1, 2, s0 - a1 - a2) == 1.0);
  CHECK(second_diff(d, u, 1, 2, s0 - a1) == -1.0);
  CHECK(second_diff(d, u, 1, 2, s0 - a2) == -1.0);
  CHECK(second_diff(d, u, 1, 2, s0) == 1.0);
  Vec r = random_field(d.sites(), 3);
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j)
      CHECK(second_diff(d, r, i, j, {1, -1}) == doctest::Approx(second_diff(d, r, j, i, {1, -1})));
  Vec affine(d.sites());
  for (int k = 0; k < d.sites(); ++k) affine[k] = 0.3 * position(d.site_of(k)).x() - 0.7 * position(d.site_of(k)).y() + 2;
  CHECK(std::abs(second_diff(d, affine, 2, 5, {0, 1})) < 1e-13);
}

TEST_CASE("second difference stencil signs") {
  SiteForm2D f = second_diff_form(1, 2, {0, 0});
  std::vector<double> signs;
  for (auto [s, c] : f) signs.push_back(c);
  CHECK(signs == std::vector<double>{1, -1, -1, 1});
}

TEST_CASE("gradient Gram equals the P1 Dirichlet integral") {
  StripDomain2D d{5, 5, false, 1};
  SymQuadForm G = gram_gradient_2d(d);
  for (unsigned seed = 1; seed <= 20; ++seed) {
    Vec u = random_field(d.sites(), seed);
    CHECK(G.value(u) == doctest::Approx(p1_dirichlet(d, u)).epsilon(1e-12));
  }
  Vec hat = Vec::Zero(d.sites());
  hat[d.index({0, 0})] = 1;
  CHECK(G.value(hat) == doctest::Approx(2 * std::sqrt(3.0)));
  CHECK(gram_difference_2d(d).value(hat) == doctest::Approx(12.0));
  Vec ones = Vec::Ones(d.sites());
  CHECK(G.value(ones) > 0);
}
