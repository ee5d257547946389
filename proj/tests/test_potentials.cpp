#include <doctest.h>

#include "qnl/potentials.hpp"

#include <random>

using namespace qnl;

namespace {

Vec random_near(const Vec& g, double eps, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-eps, eps);
  Vec out = g;
  for (int i = 0; i < g.size(); ++i) out[i] += u(rng);
  return out;
}

void check_derivatives(const SitePotential& V, const Vec& g) {
  const double h = 1e-5;
  PotentialEval e = V.eval(g);
  CHECK(e.energy == doctest::Approx(V.energy(g)).epsilon(1e-14));
  for (int i = 0; i < g.size(); ++i) {
    Vec p = g, m = g;
    p[i] += h;
    m[i] -= h;
    CHECK(e.gradient[i] == doctest::Approx((V.energy(p) - V.energy(m)) / (2 * h)).epsilon(1e-7).scale(1));
    Vec col = (V.eval(p).gradient - V.eval(m).gradient) / (2 * h);
    CHECK((col - e.hessian.col(i)).norm() <= 1e-7 * (1 + e.hessian.norm()));
  }
  CHECK((e.hessian - e.hessian.transpose()).norm() <= 1e-12 * (1 + e.hessian.norm()));
}

}  // namespace

TEST_CASE("EAM chain derivatives match finite differences") {
  EamChain1D V;
  for (unsigned seed = 1; seed <= 3; ++seed) check_derivatives(V, random_near(homogeneous_map_1d(2).col(0), 0.1, seed));
}

TEST_CASE("quadratic potentials: derivatives and reference state") {
  SecondNeighborQuadratic V(-0.99, 0.1, 0.15, -0.2);
  Vec R = homogeneous_map_1d(2).col(0);
  check_derivatives(V, random_near(R, 0.2, 4));
  CHECK(V.eval(R).gradient.norm() < 1e-14);

  HexQuadratic2D W(0.7, 0.2, -0.1, 0.05);
  check_derivatives(W, random_near(Vec::Zero(6), 0.2, 5));
  CHECK(W.beta2() == doctest::Approx(0.85));
}

TEST_CASE("planar EAM derivatives and invariance") {
  EamPlanar2D V;
  Mat P = homogeneous_map_2d_vec();
  Vec f(4);
  f << 1.02, 0.01, -0.02, 0.98;
  Vec g = P * f;
  check_derivatives(V, random_near(g, 0.05, 6));

  // a rotation of every bond leaves the energy unchanged
  double c = std::cos(0.3), s = std::sin(0.3);
  Vec r = g;
  for (int j = 0; j < 6; ++j) {
    r[2 * j] = c * g[2 * j] - s * g[2 * j + 1];
    r[2 * j + 1] = s * g[2 * j] + c * g[2 * j + 1];
  }
  CHECK(V.energy(r) == doctest::Approx(V.energy(g)).epsilon(1e-13));
}

TEST_CASE("potential errors") {
  EamChain1D V;
  CHECK_THROWS_AS(V.energy(Vec::Zero(3)), ArityError);
  EamPlanar2D W;
  CHECK_THROWS_AS(W.energy(Vec::Zero(12)), SingularConfigurationError);
}

TEST_CASE("Cauchy-Born derivatives") {
  EamChain1D V;
  const double h = 1e-5, F = 1.05;
  CauchyBorn cb = cauchy_born_1d(V, 2, F);
  CHECK(cb.dW[0] == doctest::Approx((cauchy_born_1d(V, 2, F + h).W - cauchy_born_1d(V, 2, F - h).W) / (2 * h)).epsilon(1e-8));
  CHECK(cb.d2W(0, 0) ==
        doctest::Approx((cauchy_born_1d(V, 2, F + h).dW[0] - cauchy_born_1d(V, 2, F - h).dW[0]) / (2 * h)).epsilon(1e-7));

  HexQuadratic2D W(1, 0.5, 0.1, 0.2);
  CauchyBorn c2 = cauchy_born_2d(W, Eigen::Vector2d(0.1, -0.2));
  CHECK(c2.d2W.rows() == 2);
  CHECK((c2.d2W - c2.d2W.transpose()).norm() < 1e-12);
}
