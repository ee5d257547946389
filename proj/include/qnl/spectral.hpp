#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qnl {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using LinearForm = std::vector<std::pair<int, double>>;

struct IndefiniteGramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double lambda, Vec v)
      : std::runtime_error(what), best_lambda(lambda), best_vector(std::move(v)) {}
  double best_lambda;
  Vec best_vector;
};

/// Symmetric quadratic form assembled from accumulating contributions.
class SymQuadForm {
 public:
  explicit SymQuadForm(int n = 0, std::string label = {});

  int dim() const { return n_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  /// Accumulates v into the symmetric entry {i, j}.
  void add(int i, int j, double v);
  /// Adds c * (l . u)^2.
  void add_square(const LinearForm& l, double c);
  /// Adds c * (l1 . u)(l2 . u).
  void add_product(const LinearForm& l1, const LinearForm& l2, double c);
  /// Adds w * L^T H L where row a of L is rows[a].
  void add_block(const std::vector<LinearForm>& rows, const Eigen::MatrixXd& H, double w);
  void add_form(const SymQuadForm& other, double c);

  /// Full symmetric matrix.
  const SpMat& matrix() const;
  double value(const Vec& u) const;
  Vec apply(const Vec& u) const;
  double max_abs() const;

  /// One "i j value" line per stored upper-triangular entry.
  void dump(std::ostream& os) const;

 private:
  int n_;
  std::string label_;
  std::vector<Eigen::Triplet<double>> trip_;
  mutable SpMat mat_;
  mutable bool dirty_ = true;
};

struct SpectralResult {
  double lambda_min = 0.0;
  Vec eigvec;
  double residual = 0.0;
  int iterations = 0;
};

struct EigOptions {
  double tol = 1e-8;
  std::uint64_t seed = 20240531;
  int max_iter = 100;
};

/// Smallest lambda with H v = lambda M v, M positive definite.
SpectralResult min_generalized_eig(const SymQuadForm& H, const SymQuadForm& M,
                                   const EigOptions& opt = {});
SpectralResult min_generalized_eig(const SpMat& H, const SpMat& M, const EigOptions& opt = {});

/// Numerical floor used in stability decisions: 1e-10 * max |H_ij|.
double stability_floor(const SymQuadForm& H);
bool is_stable(const SymQuadForm& H, const SymQuadForm& M, double margin = 0.0,
               const EigOptions& opt = {});

/// Flips v so that its first nonzero component is positive.
void normalize_sign(Vec& v);

/// Hermitian matrix with bandwidth p, stored by diagonals: d[k][i] = A(i, i + k).
struct HermitianBanded {
  int n = 0;
  int p = 0;
  std::vector<std::vector<std::complex<double>>> d;

  HermitianBanded() = default;
  HermitianBanded(int n, int p);
  void add(int i, int j, std::complex<double> v);  // entry (i,j), j >= i; mirrored implicitly
  std::complex<double> at(int i, int j) const;
  Eigen::MatrixXcd dense() const;
};

/// True iff A - sigma * B is positive definite (banded Cholesky).
bool banded_positive_definite(const HermitianBanded& A, const HermitianBanded& B, double sigma);
/// Smallest eigenvalue of the Hermitian pencil (A, B), B positive definite.
double banded_min_eig(const HermitianBanded& A, const HermitianBanded& B, double rel_tol = 1e-13);

}  // namespace qnl
