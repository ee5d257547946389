#include <doctest.h>

#include "qnl/models1d.hpp"
#include "qnl/stability1d.hpp"

#include <random>

using namespace qnl;

namespace {

ChainModelSpec quad_spec(Scheme1D s, int N, double a = -0.99, double b = 0.1, double g = 0.15, double d = -0.2) {
  ChainModelSpec spec;
  spec.scheme = s;
  spec.potential = std::make_shared<SecondNeighborQuadratic>(a, b, g, d);
  spec.N = N;
  return spec;
}

double gamma_window(const ChainModelSpec& spec) {
  return min_generalized_eig(assemble_hessian_1d(spec), gram_1d(spec)).lambda_min;
}

}  // namespace

TEST_CASE("counterexample potential Hessian entries") {
  SecondNeighborQuadratic V(-0.99, 0.1, 0.15, -0.2);
  auto at = [&](int r, int s) { return V.hessian()(slot_1d(r, 2), slot_1d(s, 2)); };
  CHECK(at(1, 1) == doctest::Approx(1.0));
  CHECK(at(1, -1) == doctest::Approx(-0.99));
  CHECK(at(2, -2) == doctest::Approx(0.15));
  CHECK(at(1, -2) == doctest::Approx(0.2));
  CHECK((V.hessian() - V.hessian().transpose()).norm() == 0);
}

TEST_CASE("Fourier minimum of the symbol cubic") {
  FourierMin a = gamma_atomistic_fourier(symbol_coeffs(-0.99, 0.1, 0.15, -0.2));
  CHECK(a.gamma == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(a.s_star == doctest::Approx(4.0));
  FourierMin b = gamma_atomistic_fourier({1, 0, 0, 0});
  CHECK(b.gamma == doctest::Approx(1.0));
  CHECK(b.s_star == doctest::Approx(0.0));
  FourierMin c = gamma_atomistic_fourier({0, -1, 0, 0});
  CHECK(c.gamma == doctest::Approx(-4.0));
  CHECK(c.s_star == doctest::Approx(4.0));
}

TEST_CASE("symbol coefficients agree with the Hessian of a general potential") {
  SecondNeighborQuadratic V(0.3, 0.2, -0.1, 0.05);
  SymbolCoeffs1D a = symbol_coeffs(0.3, 0.2, -0.1, 0.05), b = symbol_coeffs(V, 1.0);
  CHECK(a.A1 == doctest::Approx(b.A1));
  CHECK(a.A2 == doctest::Approx(b.A2));
  CHECK(a.A3 == doctest::Approx(b.A3));
  CHECK(a.A4 == doctest::Approx(b.A4));
}

TEST_CASE("atomistic window eigenvalue converges to the Fourier constant") {
  double gamma = gamma_atomistic_fourier(symbol_coeffs(-0.5, 0.1, 0.05, 0.0)).gamma;
  double e1 = gamma_window(quad_spec(Scheme1D::atomistic, 100, -0.5, 0.1, 0.05, 0.0)) - gamma;
  double e2 = gamma_window(quad_spec(Scheme1D::atomistic, 200, -0.5, 0.1, 0.05, 0.0)) - gamma;
  CHECK(e1 >= -1e-12);
  CHECK(e2 >= -1e-12);
  CHECK(e2 < 0.3 * e1);
}

TEST_CASE("coupled schemes are no more stable than the atomistic model up to a vanishing excess") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    double a = u(rng), b = 0.3 * u(rng), g = 0.2 * u(rng), d = 0.2 * u(rng);
    for (Scheme1D s : {Scheme1D::qnl2, Scheme1D::reflection}) {
      double e1 = gamma_window(quad_spec(s, 80, a, b, g, d)) - gamma_window(quad_spec(Scheme1D::atomistic, 80, a, b, g, d));
      double e2 = gamma_window(quad_spec(s, 160, a, b, g, d)) - gamma_window(quad_spec(Scheme1D::atomistic, 160, a, b, g, d));
      double p1 = std::max(e1, 0.0), p2 = std::max(e2, 0.0);
      CHECK(p2 <= 1e-5 + (p1 > 1e-5 ? 0.6 * p1 : 0.0));
    }
  }
}

TEST_CASE("counterexample window monotonicity and pair case") {
  CHECK(counterexample_report(500).lambda_qnl <= counterexample_report(250).lambda_qnl + 1e-12);
  double gamma = gamma_atomistic_fourier(symbol_coeffs(0.5, 0.2, 0.0, 0.0)).gamma;
  CHECK(gamma_window(quad_spec(Scheme1D::qnl2, 200, 0.5, 0.2, 0.0, 0.0)) >= gamma - 1e-3);
}

TEST_CASE("ghost forces vanish for force-consistent schemes") {
  auto V = std::make_shared<EamChain1D>();
  for (Scheme1D s : {Scheme1D::atomistic, Scheme1D::qnl2, Scheme1D::reflection})
    for (double F : {0.97, 1.0, 1.08}) {
      ChainModelSpec spec;
      spec.scheme = s;
      spec.potential = V;
      spec.F = F;
      spec.N = 20;
      CHECK(ghost_force_residual_1d(spec) < 1e-11);
    }
}

TEST_CASE("energy gradient against central differences") {
  ChainModelSpec spec;
  spec.potential = std::make_shared<EamChain1D>();
  spec.N = 10;
  ChainModel m = build_chain_model(spec);
  auto f = [](int xi) { return 0.01 * xi; };
  Vec y = m.homogeneous(1.02);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (int i = 0; i < y.size(); ++i) y[i] += u(rng);
  auto [E, g] = energy_gradient_1d(m, y, f);
  const double h = 1e-6;
  for (int i = 0; i < y.size(); ++i) {
    Vec p = y, q = y;
    p[i] += h;
    q[i] -= h;
    CHECK(g[i] == doctest::Approx((energy_gradient_1d(m, p, f).first - energy_gradient_1d(m, q, f).first) / (2 * h)).epsilon(1e-6).scale(1));
  }
  CHECK(E == doctest::Approx(m.energy.energy(y) - m.force_vector(f).dot(y)));

  Vec bad = y;
  std::swap(bad[3], bad[4]);
  CHECK_THROWS_AS(energy_gradient_1d(m, bad, f), InvalidDeformationError);
}

TEST_CASE("stabilizer form") {
  const int N = 10;
  SymQuadForm S = assemble_stabilizer_1d(N, -1, 2);
  Vec hat = Vec::Zero(2 * N - 1);
  hat[-1 + N - 1] = 1;
  CHECK(S.value(hat) == doctest::Approx(6.0));
  CHECK(S.value(2 * hat) == doctest::Approx(24.0));
  Vec affine(2 * N - 1);
  for (int i = 0; i < affine.size(); ++i) affine[i] = 0.3 * (i - N + 1);
  // only windows away from the clamped ends see an affine function
  CHECK(S.value(affine) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("pairwise and power decompositions") {
  ChainModelSpec spec = quad_spec(Scheme1D::qnl2, 30);
  PowerForm1D p = power_decompose_1d(spec);
  CHECK(p.B.at(-5) == doctest::Approx(3.91));
  CHECK(p.C.at(-5) == doctest::Approx(-1.6));
  CHECK(p.D.at(-5) == doctest::Approx(0.15));

  StrainGradientForm1D f = strain_gradient_decompose_1d(spec);
  SymQuadForm H = assemble_hessian_1d(spec);
  SymQuadForm R = reconstruct_from_strain_gradient(f, spec.N);
  CHECK(Mat(H.matrix() - R.matrix()).cwiseAbs().maxCoeff() < 1e-10);

  StrainGradientForm1D nn = strain_gradient_decompose_1d(quad_spec(Scheme1D::reflection, 20, 0.0, 0.0, 0.0, 0.0));
  for (const auto& cj : nn.cj)
    for (auto [b, v] : cj) CHECK(v == doctest::Approx(0.0).scale(1));
}

TEST_CASE("interface perturbation bound") {
  auto V = std::make_shared<SecondNeighborQuadratic>(-0.99, 0.1, 0.15, -0.2);
  ChainModelSpec spec = quad_spec(Scheme1D::qnl2, 20);
  auto a = effective_site_hessians(spec);
  CHECK(kappa0_bound_between(a, a, 2) == 0.0);
  double k = kappa0_bound(V, {1.0});
  CHECK(k > 0);

  std::map<int, Mat> b;
  spec.scheme = Scheme1D::reflection;
  auto r = effective_site_hessians(spec);
  std::map<int, Mat> a2, r2;
  for (auto& [x, m] : a) a2[x] = 3 * m;
  for (auto& [x, m] : r) r2[x] = 3 * m;
  CHECK(kappa0_bound_between(a2, r2, 2) == doctest::Approx(3 * kappa0_bound_between(a, r, 2)));
}

TEST_CASE("configuration errors") {
  ChainModelSpec spec;
  CHECK_THROWS_AS(spec.validate(), ConfigurationError);
  CHECK_THROWS(parse_scheme_1d("nonsense"));
  CHECK(parse_scheme_1d(to_string(Scheme1D::reflection)) == Scheme1D::reflection);
}
