#include "qnl/spectral.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

namespace qnl {

SymQuadForm::SymQuadForm(int n, std::string label) : n_(n), label_(std::move(label)) {}

void SymQuadForm::add(int i, int j, double v) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("SymQuadForm entry out of range");
  if (i > j) std::swap(i, j);
  trip_.emplace_back(i, j, v);
  dirty_ = true;
}

void SymQuadForm::add_square(const LinearForm& l, double c) { add_product(l, l, c); }

void SymQuadForm::add_product(const LinearForm& l1, const LinearForm& l2, double c) {
  // c * sym(l1 l2^T): entry {i,j} with i<j receives c/2 (a_i b_j + a_j b_i).
  for (auto [i, a] : l1)
    for (auto [j, b] : l2) {
      if (i == j)
        add(i, i, c * a * b);
      else
        add(i, j, 0.5 * c * a * b);
    }
}

void SymQuadForm::add_block(const std::vector<LinearForm>& rows, const Eigen::MatrixXd& H,
                            double w) {
  const int d = static_cast<int>(rows.size());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double h = w * H(a, b);
      if (h == 0.0) continue;
      for (auto [i, ci] : rows[a])
        for (auto [j, cj] : rows[b])
          if (i <= j) add(i, j, h * ci * cj);
    }
}

void SymQuadForm::add_form(const SymQuadForm& other, double c) {
  if (other.n_ != n_) throw std::invalid_argument("SymQuadForm dimension mismatch");
  for (const auto& t : other.trip_) trip_.emplace_back(t.row(), t.col(), c * t.value());
  dirty_ = true;
}

const SpMat& SymQuadForm::matrix() const {
  if (dirty_) {
    std::vector<Eigen::Triplet<double>> full;
    full.reserve(2 * trip_.size());
    for (const auto& t : trip_) {
      full.push_back(t);
      if (t.row() != t.col()) full.emplace_back(t.col(), t.row(), t.value());
    }
    mat_.resize(n_, n_);
    mat_.setFromTriplets(full.begin(), full.end());
    mat_.makeCompressed();
    dirty_ = false;
  }
  return mat_;
}

double SymQuadForm::value(const Vec& u) const { return u.dot(matrix() * u); }

Vec SymQuadForm::apply(const Vec& u) const { return matrix() * u; }

double SymQuadForm::max_abs() const {
  const SpMat& A = matrix();
  double m = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

void SymQuadForm::dump(std::ostream& os) const {
  const SpMat& A = matrix();
  os << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      if (it.row() <= it.col()) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

// ---------------------------------------------------------------------------

void normalize_sign(Vec& v) {
  double m = v.cwiseAbs().maxCoeff();
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-10 * m) {
      if (v[i] < 0) v = -v;
      return;
    }
}

namespace {

double max_abs(const SpMat& A) {
  double m = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

}  // namespace

SpectralResult min_generalized_eig(const SymQuadForm& H, const SymQuadForm& M,
                                   const EigOptions& opt) {
  return min_generalized_eig(H.matrix(), M.matrix(), opt);
}

// Bisection on the positive-definiteness of H - sigma M (Cholesky succeeds iff the
// pencil has no eigenvalue <= sigma), then inverse iteration at the lower bracket.
SpectralResult min_generalized_eig(const SpMat& H, const SpMat& M, const EigOptions& opt) {
  const int n = H.rows();
  if (n == 0 || H.cols() != n || M.rows() != n || M.cols() != n)
    throw std::invalid_argument("min_generalized_eig: dimension mismatch");

  Eigen::SimplicialLLT<SpMat> cholM(M);
  if (cholM.info() != Eigen::Success) throw IndefiniteGramError("Gram form is not positive definite");

  SpMat pattern = H + M;
  Eigen::SimplicialLLT<SpMat> llt;
  llt.analyzePattern(pattern);
  int factorizations = 0;
  auto pd = [&](double s) {
    SpMat A = H - s * M;
    llt.factorize(A);
    ++factorizations;
    return llt.info() == Eigen::Success;
  };

  Vec hd = H.diagonal(), md = M.diagonal();
  double hi = (hd.array() / md.array()).minCoeff();
  double scale = std::max({std::abs(hi), (hd.cwiseAbs().array() / md.array()).maxCoeff(), 1e-300});
  double step = 1e-3 * scale, lo = hi - step;
  for (int k = 0; !pd(lo); ++k) {
    if (k > 200) throw ConvergenceError("could not bracket the smallest eigenvalue", hi, Vec());
    step *= 4;
    hi = lo;
    lo = hi - step;
  }
  while (hi - lo > 1e-13 * scale) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pd(mid)) lo = mid; else hi = mid;
  }
  // Nudge down until the shifted operator factorizes; the last probe may have failed.
  double shift = lo;
  for (double nudge = 1e-13 * scale; !pd(shift); nudge *= 10) shift = lo - nudge;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = U(rng);
  const double normH = max_abs(H), normM = max_abs(M);

  SpectralResult res;
  double lambda = hi, resid = INFINITY;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Vec w = llt.solve(M * v);
    v = w / std::sqrt(w.dot(M * w));
    Vec Hv = H * v, Mv = M * v;
    lambda = v.dot(Hv) / v.dot(Mv);
    resid = (Hv - lambda * Mv).norm() / v.norm();
    res.iterations = factorizations + it;
    if (resid <= opt.tol * (normH + std::abs(lambda) * normM)) {
      normalize_sign(v);
      res.lambda_min = lambda;
      res.eigvec = v / v.norm();
      res.residual = resid;
      return res;
    }
  }
  throw ConvergenceError("inverse iteration did not converge", lambda, v);
}

double stability_floor(const SymQuadForm& H) { return 1e-10 * H.max_abs(); }

bool is_stable(const SymQuadForm& H, const SymQuadForm& M, double margin, const EigOptions& opt) {
  double lam = min_generalized_eig(H, M, opt).lambda_min;
  return lam > std::max(margin, stability_floor(H));
}

// ---------------------------------------------------------------------------

HermitianBanded::HermitianBanded(int n_, int p_) : n(n_), p(p_), d(p_ + 1) {
  for (int k = 0; k <= p; ++k) d[k].assign(std::max(0, n - k), {0.0, 0.0});
}

void HermitianBanded::add(int i, int j, std::complex<double> v) {
  if (j < i) {
    std::swap(i, j);
    v = std::conj(v);
  }
  int k = j - i;
  if (k > p || i < 0 || j >= n) throw std::out_of_range("HermitianBanded entry outside band");
  d[k][i] += v;
}

std::complex<double> HermitianBanded::at(int i, int j) const {
  if (j >= i) return j - i <= p ? d[j - i][i] : 0.0;
  return j >= 0 && i - j <= p ? std::conj(d[i - j][j]) : 0.0;
}

Eigen::MatrixXcd HermitianBanded::dense() const {
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = std::abs(i - j) <= p ? at(i, j) : 0.0;
  return A;
}

bool banded_positive_definite(const HermitianBanded& A, const HermitianBanded& B, double sigma) {
  const int n = A.n, p = std::max(A.p, B.p);
  // L(i, j) stored at L[i * (p + 1) + (i - j)], 0 <= i - j <= p.
  std::vector<std::complex<double>> L(static_cast<size_t>(n) * (p + 1));
  auto Lr = [&](int i, int j) -> std::complex<double>& { return L[i * (p + 1) + (i - j)]; };
  for (int j = 0; j < n; ++j) {
    double s = (A.at(j, j) - sigma * B.at(j, j)).real();
    for (int k = std::max(0, j - p); k < j; ++k) s -= std::norm(Lr(j, k));
    if (!(s > 0)) return false;
    double ljj = std::sqrt(s);
    Lr(j, j) = ljj;
    for (int i = j + 1; i <= std::min(n - 1, j + p); ++i) {
      std::complex<double> t = A.at(i, j) - sigma * B.at(i, j);
      for (int k = std::max(0, i - p); k < j; ++k) t -= Lr(i, k) * std::conj(Lr(j, k));
      Lr(i, j) = t / ljj;
    }
  }
  return true;
}

double banded_min_eig(const HermitianBanded& A, const HermitianBanded& B, double rel_tol) {
  double hi = INFINITY, scale = 1e-300;
  for (int i = 0; i < A.n; ++i) {
    double r = A.at(i, i).real() / B.at(i, i).real();
    hi = std::min(hi, r);
    scale = std::max(scale, std::abs(r));
  }
  double step = 1e-3 * scale, lo = hi - step;
  for (int k = 0; !banded_positive_definite(A, B, lo); ++k) {
    if (k > 200) throw ConvergenceError("could not bracket banded eigenvalue", hi, Vec());
    step *= 4;
    hi = lo;
    lo = hi - step;
  }
  while (hi - lo > rel_tol * scale) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (banded_positive_definite(A, B, mid)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qnl
