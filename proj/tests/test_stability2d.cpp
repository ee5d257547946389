#include <doctest.h>

#include "qnl/stability2d.hpp"

#include <complex>
#include <numbers>
#include <random>

using namespace qnl;

TEST_CASE("beta criterion") {
  CHECK(hex_betas({1, 0, 0, 0}) == std::array<double, 3>{1, 1, 2});
  CHECK(atomistic_stable_hex({1, 0, 0, 0}));
  CHECK_FALSE(atomistic_stable_hex({1, -1, 0, 0}));
  auto b = hex_betas({1, 1, -1, 1});
  CHECK(b == std::array<double, 3>{2, 2, 1});
}

TEST_CASE("triangle parameterization") {
  TrianglePoint p{0.3, 0.2};
  auto b = p.betas();
  TrianglePoint q = TrianglePoint::from_betas(b[0], b[1]);
  CHECK(q.x == doctest::Approx(p.x));
  CHECK(q.y == doctest::Approx(p.y));
  HexAlphas a = p.alphas(0.2);
  auto b2 = hex_betas(a);
  for (int i = 0; i < 3; ++i) CHECK(b2[i] == doctest::Approx(b[i]));
  CHECK(a[1] == doctest::Approx(0.2 * (a[0] + a[1])));
  CHECK_THROWS((TrianglePoint{0.6, 0.3}).betas());
}

TEST_CASE("lateral reduction matches plane waves on the periodic strip") {
  const int N2 = 6;
  StripDomain2D d{3, N2, true, 1};
  auto V = std::make_shared<HexQuadratic2D>(0.7, 0.1, -0.2, 0.15);
  for (const auto& s : {InterfaceScheme::atomistic(), InterfaceScheme::lrf()}) {
    SymQuadForm H = assemble_hessian_2d(s, V, Mat::Zero(1, 2), d);
    SymQuadForm G = gram_difference_2d(d);
    StripBlocks b = strip_blocks(H, G, N2);
    std::mt19937 rng(1);
    std::normal_distribution<double> z;
    Eigen::VectorXcd v(b.rows());
    for (auto& x : v) x = {z(rng), z(rng)};
    for (int j = 1; j <= 3; ++j) {
      double k = 2 * std::numbers::pi * j / 7;
      Eigen::VectorXcd u(d.sites());
      for (int idx = 0; idx < d.sites(); ++idx) {
        Site st = d.site_of(idx);
        u[idx] = std::polar(1.0, k * st.m) * v[st.n + N2 - 1];
      }
      Eigen::MatrixXcd Hd = Eigen::MatrixXd(H.matrix()).cast<std::complex<double>>();
      std::complex<double> full = u.dot(Hd * u) / 7.0;
      std::complex<double> red = v.dot(b.reduce_H(k).dense() * v);
      CHECK(std::abs(full - red) < 1e-10 * (1 + std::abs(full)));
    }
  }
}

TEST_CASE("strip eigenvalues") {
  for (double k : {0.1, 1.0, std::numbers::pi})
    CHECK(strip_min_eig(InterfaceScheme::atomistic(), {1, 0, 0, 0}, k, 16) > 0);
  // beta3 < 0
  HexAlphas a{1, 0, -0.5, -0.5};
  CHECK(hex_betas(a)[2] < 0);
  CHECK(scheme_stable_strip(InterfaceScheme::atomistic(), a).min_value < 0);
  CHECK_THROWS(strip_min_eig(InterfaceScheme::atomistic(), a, 0.0, 16));

  HexAlphas p = TrianglePoint{0.3, 0.2}.alphas();
  double v64 = strip_min_eig(InterfaceScheme::qce(), p, 0.5, 64);
  double v128 = strip_min_eig(InterfaceScheme::qce(), p, 0.5, 128);
  CHECK(std::abs(v64 - v128) < 1e-6);
}

TEST_CASE("coupled schemes at an unstable atomistic point") {
  HexAlphas a{1, -1, 0, 0};
  for (const auto& s : {InterfaceScheme::qce(), InterfaceScheme::grac23(), InterfaceScheme::lrf()})
    CHECK_FALSE(scheme_stable_strip(s, a).stable);
  HexAlphas b{0.5, -1, 0.1, 0.1};
  CHECK_FALSE(atomistic_stable_hex(b));
  CHECK_FALSE(scheme_stable_strip(InterfaceScheme::lrf(), b).stable);
}

TEST_CASE("coarse region scans") {
  RegionScanOptions o;
  o.resolution = 32;
  auto atom = stability_region_scan(InterfaceScheme::atomistic(), o);
  auto qce = stability_region_scan(InterfaceScheme::qce(), o);
  REQUIRE(atom.size() == qce.size());
  for (size_t i = 0; i < atom.size(); ++i) {
    CHECK(atom[i].stable);
    CHECK(atom[i].ix == qce[i].ix);
  }
  o.jobs = 3;
  auto again = stability_region_scan(InterfaceScheme::qce(), o);
  for (size_t i = 0; i < qce.size(); ++i) CHECK(again[i].min_value == qce[i].min_value);
}

TEST_CASE("negative eigenvalue of the K operator") {
  double prev = 0;
  for (double kappa : {0.0, 1.0, 4.0, 16.0}) {
    double l = kappa_min_eig(kappa, 0, 2048);
    CHECK(l < 0);
    if (kappa > 0) CHECK(l > prev);
    prev = l;
  }
  // larger domains can only lower the value
  CHECK(kappa_min_eig(4.0, 0, 4096) <= kappa_min_eig(4.0, 0, 2048) + 1e-15);
}

TEST_CASE("interface mass fraction") {
  StripDomain2D d{4, 8, false, 2};
  Vec u = Vec::Zero(d.ndof());
  u[2 * d.index({0, 0})] = 1;
  CHECK(interface_mass_fraction(d, u) == 1.0);
  u[2 * d.index({0, 6}) + 1] = 1;
  CHECK(interface_mass_fraction(d, u) == 0.5);
}
