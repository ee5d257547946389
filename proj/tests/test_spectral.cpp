#include <doctest.h>

#include "qnl/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace qnl;

namespace {

SymQuadForm dirichlet_laplacian(int n) {
  SymQuadForm L(n);
  for (int i = 0; i < n; ++i) {
    L.add(i, i, 2.0);
    if (i + 1 < n) L.add(i, i + 1, -1.0);
  }
  return L;
}

SymQuadForm identity(int n) {
  SymQuadForm I(n);
  for (int i = 0; i < n; ++i) I.add(i, i, 1.0);
  return I;
}

}  // namespace

TEST_CASE("closed-form tridiagonal eigenvalues") {
  for (int n : {5, 40, 200}) {
    SymQuadForm L = dirichlet_laplacian(n);
    CHECK(min_generalized_eig(L, L).lambda_min == doctest::Approx(1.0).epsilon(1e-10));
    double want = 2 - 2 * std::cos(std::numbers::pi / (n + 1));
    CHECK(min_generalized_eig(L, identity(n)).lambda_min == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("random pencils agree with a dense solver") {
  std::mt19937 rng(11);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 30;
    SymQuadForm H(n), M(n);
    for (int i = 0; i < n; ++i) {
      M.add(i, i, 2.0 + std::abs(z(rng)));
      if (i + 1 < n) M.add(i, i + 1, 0.3 * z(rng));
      for (int j = i; j < std::min(n, i + 3); ++j) H.add(i, j, z(rng));
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(H.matrix()),
                                                                  Eigen::MatrixXd(M.matrix()));
    SpectralResult r = min_generalized_eig(H, M);
    CHECK(r.lambda_min == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-8));
    Vec res = H.matrix() * r.eigvec - r.lambda_min * (M.matrix() * r.eigvec);
    CHECK(res.norm() < 1e-6 * r.eigvec.norm());
  }
}

TEST_CASE("form accumulation") {
  SymQuadForm A(3);
  A.add_square({{0, 1.0}, {1, -1.0}}, 2.0);
  Vec u(3);
  u << 1, 3, 5;
  CHECK(A.value(u) == doctest::Approx(8.0));
  A.add_product({{2, 1.0}}, {{0, 1.0}}, 1.0);
  CHECK(A.value(u) == doctest::Approx(13.0));
  CHECK(A.apply(u).dot(u) == doctest::Approx(A.value(u)));
  CHECK_THROWS(A.add(0, 3, 1.0));
}

TEST_CASE("indefinite Gram and sign convention") {
  SymQuadForm M(2);
  M.add(0, 0, 1.0);
  M.add(1, 1, -1.0);
  CHECK_THROWS_AS(min_generalized_eig(identity(2), M), IndefiniteGramError);

  Vec v(3);
  v << 0, -2, 1;
  normalize_sign(v);
  CHECK(v[1] == 2);
}

TEST_CASE("banded Hermitian pencils") {
  const int n = 12;
  std::mt19937 rng(3);
  std::normal_distribution<double> z;
  HermitianBanded A(n, 2), B(n, 2);
  for (int i = 0; i < n; ++i) {
    A.add(i, i, z(rng));
    B.add(i, i, 3.0);
    for (int k = 1; k <= 2 && i + k < n; ++k) {
      A.add(i, i + k, {z(rng), z(rng)});
      B.add(i, i + k, {0.2 * z(rng), 0.2 * z(rng)});
    }
  }
  Eigen::MatrixXcd Bd = B.dense();
  Eigen::LLT<Eigen::MatrixXcd> llt(Bd);
  Eigen::MatrixXcd L = llt.matrixL();
  Eigen::MatrixXcd C = L.inverse() * A.dense() * L.inverse().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
  double lmin = es.eigenvalues()[0];
  CHECK(banded_min_eig(A, B) == doctest::Approx(lmin).epsilon(1e-10));
  CHECK(banded_positive_definite(A, B, lmin - 1e-6));
  CHECK_FALSE(banded_positive_definite(A, B, lmin + 1e-6));
}
