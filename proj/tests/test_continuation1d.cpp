#include <doctest.h>

#include "qnl/continuation1d.hpp"
#include "qnl/stability1d.hpp"

#include <algorithm>
#include <cmath>

using namespace qnl;

TEST_CASE("graded mesh") {
  GradedMesh1D m = build_graded_mesh(400, 1.5);
  CHECK(m.K == 20);
  CHECK(m.nodes.front() == -400);
  CHECK(m.nodes.back() == 400);
  for (int x = -m.K - 1; x <= m.K + 1; ++x) CHECK(std::count(m.nodes.begin(), m.nodes.end(), x) == 1);
  for (size_t i = 1; i < m.nodes.size(); ++i) CHECK(m.nodes[i] > m.nodes[i - 1]);
  // node count grows like K log(N / K)
  GradedMesh1D big = build_graded_mesh(6400, 1.5);
  double ratio = double(big.nodes.size()) / m.nodes.size();
  CHECK(ratio < 16.0 * std::log(6400.0 / 80) / std::log(20.0) * 1.5);
  CHECK(ratio > 2.0);

  CHECK_THROWS_AS(build_graded_mesh(100, 0.5), InvalidExponentError);
}

TEST_CASE("Newton solves") {
  auto V = std::make_shared<EamChain1D>();
  ChainModelSpec spec = study_spec(Scheme1D::reflection, V, 64, 1.5, 0.0);
  spec.F = 1.0;
  ChainModel m = build_chain_model(spec);
  Vec y0 = m.homogeneous(1.0);
  int iters = -1;
  Vec y = newton_solve(m, LoadCase{1.5, 0.0}, y0, {}, &iters);
  CHECK(iters == 0);
  CHECK((y - y0).lpNorm<Eigen::Infinity>() < 1e-12);

  Vec y1 = newton_solve(m, LoadCase{1.5, 1e-4}, y0);
  Vec y2 = newton_solve(m, LoadCase{1.5, 2e-4}, y0);
  double d1 = (y1 - y0).lpNorm<Eigen::Infinity>(), d2 = (y2 - y0).lpNorm<Eigen::Infinity>();
  CHECK(d1 > 0);
  CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(1e-2));

  auto Q = std::make_shared<SecondNeighborQuadratic>(1.0, 0.1, 0.0, 0.0);
  ChainModelSpec qs;
  qs.potential = Q;
  qs.N = 20;
  ChainModel qm = build_chain_model(qs);
  Vec yq = newton_solve(qm, LoadCase{1.5, 0.05}, qm.homogeneous(1.0), {}, &iters);
  CHECK(iters <= 1);
}

TEST_CASE("critical strain of a homogeneous path matches the Fourier root") {
  auto V = std::make_shared<EamChain1D>();
  auto gamma = [&](double F) { return gamma_atomistic_fourier(symbol_coeffs(*V, F)).gamma; };
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 60; ++i) (gamma(0.5 * (lo + hi)) > 0 ? lo : hi) = 0.5 * (lo + hi);

  ChainModelSpec spec;
  spec.scheme = Scheme1D::atomistic;
  spec.potential = V;
  spec.N = 60;
  ContinuationOptions opt;
  opt.tol_F = 1e-6;
  ContinuationResult r = critical_strain(spec, LoadCase{1.5, 0.0}, opt);
  CHECK(r.critical_strain >= lo - 1e-6);
  CHECK(r.critical_strain == doctest::Approx(lo).epsilon(2e-3));
}

TEST_CASE("extrapolation recovers a synthetic law") {
  std::vector<int> N = {32, 64, 128, 256, 512};
  std::vector<double> F;
  for (int n : N) F.push_back(1.25 + 0.7 * std::pow(n, -1.3));
  auto [Fs, c, q] = extrapolate(N, F);
  CHECK(Fs == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(q == doctest::Approx(1.3).epsilon(1e-3));
  CHECK_THROWS(extrapolate({1, 2}, {1.0, 2.0}));
}

TEST_CASE("load profile") {
  LoadCase l{1.5, 0.2};
  CHECK(l(0) == doctest::Approx(0.2));
  CHECK(l(3) == doctest::Approx(0.2 * std::pow(10.0, -1.25)));
}
