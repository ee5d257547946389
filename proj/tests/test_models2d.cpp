#include <doctest.h>

#include "qnl/models2d.hpp"

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

const Mat kZeroF = Mat::Zero(1, 2);

}  // namespace

TEST_CASE("nearest-neighbour hexagonal Hessian is a multiple of the difference Gram") {
  StripDomain2D d{5, 5, false, 1};
  double a0 = 0.8, a1 = 0.3;
  auto V = std::make_shared<HexQuadratic2D>(a0, a1, 0.0, 0.0);
  SymQuadForm H = assemble_hessian_2d(InterfaceScheme::atomistic(), V, kZeroF, d);
  SymQuadForm G = gram_difference_2d(d);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    Vec u = random_field(d.sites(), seed);
    CHECK(H.value(u) == doctest::Approx((a0 + a1) * G.value(u)).epsilon(1e-12));
  }
}

TEST_CASE("qce Hessian differs from the atomistic one by an interface form") {
  StripDomain2D d{5, 5, true, 1};
  double a0 = 0.8, a1 = 0.3;
  auto V = std::make_shared<HexQuadratic2D>(a0, a1, 0.0, 0.0);
  SymQuadForm Ha = assemble_hessian_2d(InterfaceScheme::atomistic(), V, kZeroF, d);
  SymQuadForm Hq = assemble_hessian_2d(InterfaceScheme::qce(), V, kZeroF, d);
  for (unsigned seed = 1; seed <= 10; ++seed) {
    Vec u = random_field(d.sites(), seed);
    double want = 0;
    for (int m = -d.M; m <= d.M; ++m) {
      double a = eval_form(d, u, diff_form(1, {m, 0})), b = eval_form(d, u, diff_form(1, Site{m, 0} + offset(2)));
      want += a * a - b * b;
    }
    want *= (a0 + 4 * a1) / 3;
    CHECK(Hq.value(u) - Ha.value(u) == doctest::Approx(want).epsilon(1e-10).scale(1));
  }
}

TEST_CASE("ghost forces") {
  auto V = std::make_shared<EamPlanar2D>();
  Mat F(2, 2);
  F << 1.03, 0.04, -0.02, 0.97;
  StripDomain2D d{6, 6, false, 2};
  CHECK(ghost_force_residual(InterfaceScheme::atomistic(), V, F, d) < 1e-12);
  for (const auto& s : {InterfaceScheme::qce(), InterfaceScheme::grac23(), InterfaceScheme::lrf()})
    CHECK(ghost_force_residual(s, V, F, d) < 1e-10);
  // reweighting D_2 alone keeps the flat interface consistent; the along-interface direction does not
  CHECK(ghost_force_residual(InterfaceScheme::grac({0, 1.0 / 3, 0, 0, 0, 0}), V, F, d) < 1e-10);
  CHECK(ghost_force_residual(InterfaceScheme::grac({1.0 / 3, 0, 0, 0, 0, 0}), V, F, d) > 1e-3);
}

TEST_CASE("interface coefficients of the simple hexagonal case") {
  double a0 = 0.9, a1 = 0.2;
  auto V = std::make_shared<HexQuadratic2D>(a0, a1, 0.0, 0.0);
  InterfaceCoeffs q = strain_gradient_decompose_2d(InterfaceScheme::qce(), V, kZeroF);
  double c1 = q.c_bulk[0], g = (a0 + 4 * a1) / 3;
  CHECK(q.ctilde1[0] == doctest::Approx(c1));
  CHECK(q.ctilde1[1] == doctest::Approx(c1 + g));
  CHECK(q.ctilde1[2] == doctest::Approx(c1 - g));
  CHECK(q.gap == doctest::Approx(-g));
  CHECK(strain_gradient_decompose_2d(InterfaceScheme::grac23(), V, kZeroF).gap == doctest::Approx(-(a0 + 2 * a1)));
  CHECK(strain_gradient_decompose_2d(InterfaceScheme::lrf(), V, kZeroF).gap == doctest::Approx(-a1));
}

TEST_CASE("atomistic strain-gradient coefficients") {
  double a0 = 0.9, a1 = 0.2, a2 = -0.15, a3 = 0.1;
  auto V = std::make_shared<HexQuadratic2D>(a0, a1, a2, a3);
  InterfaceCoeffs c = strain_gradient_decompose_2d(InterfaceScheme::atomistic(), V, kZeroF);
  for (double cj : c.c_bulk) CHECK(cj == doctest::Approx(2 * (a0 + a1 - a2 - a3)));
  CHECK((c.sg_forms.at(-3) - hex_X(a2, a3)).norm() < 1e-12);
  CHECK(c.reconstruction_error < 1e-10);
}

TEST_CASE("generalized grac families") {
  auto [wq, Cq] = interface_family(InterfaceScheme::qce());
  GenGracGap q = gen_grac_gap(wq, Cq, 1, 0);
  CHECK(q.p0 == doctest::Approx(-1.0 / 3));
  CHECK(q.p1 == doctest::Approx(-4.0 / 3));
  auto [wl, Cl] = interface_family(InterfaceScheme::lrf());
  GenGracGap l = gen_grac_gap(wl, Cl, 1, 0);
  CHECK(l.p0 == doctest::Approx(0.0).scale(1));
  CHECK(l.p1 == doctest::Approx(-1.0));

  CHECK_THROWS_AS(check_gen_grac({0.9}, {Mat::Identity(6, 6)}), ConsistencyError);
  Mat bad = Mat::Identity(6, 6);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(check_gen_grac({1.0}, {bad}), ConsistencyError);
  CHECK_NOTHROW(check_gen_grac({1.0}, {triangle_map(1)}));
}

TEST_CASE("K operators vanish on affine fields") {
  StripDomain2D d{6, 6, true, 1};
  KOperators K = assemble_K_operators(d, 2.0);
  // affine in the vertical coordinate, so admissible on the periodic strip away from the clamped rows
  Vec u(d.sites());
  for (int k = 0; k < d.sites(); ++k) u[k] = 0.4 * position(d.site_of(k)).y();
  CHECK(K.K0.value(u) == doctest::Approx(0.0).scale(1));
  CHECK(K.S.value(u) == doctest::Approx(0.0).scale(1));
  Vec r = random_field(d.sites(), 8);
  CHECK(K.Kkappa.value(r) == doctest::Approx(K.K0.value(r) + 2.0 * K.S.value(r)));
}

TEST_CASE("B decomposition and symbols") {
  HexQuadratic2D V(0.6, -0.2, 0.3, 0.1);
  auto Vp = std::make_shared<HexQuadratic2D>(V);
  StripDomain2D d{5, 5, false, 1};
  auto B = b_forms(d);
  Vec u = random_field(d.sites(), 4);
  double want = V.beta1() * B[0].value(u) + V.beta2() * B[1].value(u) + V.beta3() * B[2].value(u);
  CHECK(assemble_hessian_2d(InterfaceScheme::atomistic(), Vp, kZeroF, d).value(u) == doctest::Approx(want));
  CHECK(hex_symbol(V, {0, 0}) == doctest::Approx(0.0).scale(1));
  // lattice periodicity of the symbol
  Eigen::Vector2d k(0.3, 0.7), b1(2 * M_PI, -2 * M_PI / std::sqrt(3.0));
  CHECK(hex_symbol(V, k + b1) == doctest::Approx(hex_symbol(V, k)));
}

TEST_CASE("scheme names and parsing") {
  for (const char* s : {"atomistic", "cauchy_born", "qce", "grac23", "lrf", "lrf+s(0.5)", "grac23+S(1)"})
    CHECK_NOTHROW(parse_scheme_2d(s));
  CHECK(parse_scheme_2d("lrf+s(0.5)").kappa == 0.5);
  CHECK(parse_scheme_2d("lrf+s(0.5)").stabilizer == Stabilizer2D::lrf_s);
  CHECK(parse_scheme_2d(InterfaceScheme::grac23().name()).kind == Scheme2D::grac23);
  CHECK_THROWS(parse_scheme_2d("qcf"));
}
