#pragma once

#include "qnl/energy.hpp"
#include "qnl/lattice2d.hpp"
#include "qnl/potentials.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace qnl {

enum class Scheme2D { atomistic, cauchy_born, qce, grac, grac23, lrf, gen_grac };

enum class Stabilizer2D {
  none,
  second_differences,  // sum over row 0 of all 36 |D_i D_j u|^2
  lrf_s,               // (|a0|+|a1|+|a2|+|a3|) / 6 sum over row 0 of |D_i D_{i+2} u|^2
};

struct InterfaceScheme {
  Scheme2D kind = Scheme2D::atomistic;
  std::array<double, 6> lambda{};  // grac reconstruction weights, lambda[i-1] for D~_i
  std::vector<double> weights;     // gen_grac
  std::vector<Mat> matrices;       // gen_grac, 6 x 6 maps of the difference stencil
  Stabilizer2D stabilizer = Stabilizer2D::none;
  double kappa = 0.0;

  static InterfaceScheme atomistic() { return {}; }
  static InterfaceScheme cauchy_born();
  static InterfaceScheme qce();
  static InterfaceScheme grac(const std::array<double, 6>& lambda);
  static InterfaceScheme grac23();
  static InterfaceScheme lrf();
  static InterfaceScheme gen_grac(std::vector<double> w, std::vector<Mat> C);
  InterfaceScheme stabilized(Stabilizer2D s, double kappa) const;

  std::string name() const;
};

InterfaceScheme parse_scheme_2d(const std::string& s);

struct ConsistencyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Row-0 site energy sum_l w_l V(C_l Dy) of an interface scheme (identity for qce).
std::pair<std::vector<double>, std::vector<Mat>> interface_family(const InterfaceScheme& s);
/// Throws ConsistencyError unless sum w = 1 and every C_l fixes homogeneous stencils.
void check_gen_grac(const std::vector<double>& w, const std::vector<Mat>& C, double tol = 1e-10);

/// C_T for the triangle with edges a_k, a_{k+1} at the centre site.
Mat triangle_map(int k);

/// A weighted site energy whose six slots are linear in lattice values.
struct LatticeTerm2D {
  double weight = 1.0;
  std::array<SiteForm2D, 6> slots;
  Site center;
};

std::vector<LatticeTerm2D> scheme_terms_2d(const InterfaceScheme& s, const StripDomain2D& d);

/// Macroscopic strain: 1 x 2 for scalar, 2 x 2 for vectorial displacements.
struct Model2D {
  InterfaceScheme scheme;
  StripDomain2D domain;
  Mat F;
  StencilEnergy energy;

  Vec homogeneous() const;  // y = F x on the DOFs
};

Model2D build_model_2d(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                       const StripDomain2D& d);

/// Stabilizer added with weight kappa to the Hessian (scalar scale for lrf_s included).
SymQuadForm stabilizer_form_2d(const InterfaceScheme& s, const PotentialPtr& V, const StripDomain2D& d);

SymQuadForm assemble_hessian_2d(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                                const StripDomain2D& d);

/// max |dE(F x)| over DOFs at least two rows/columns away from the clamped boundary.
double ghost_force_residual(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                            const StripDomain2D& d);

/// Bond coefficients c_j(xi), j = 1..3, plus per-site sums of squares of second differences.
struct SgDecomposition2D {
  std::map<std::pair<Site, int>, double> bonds;
  std::map<Site, Mat> X;  // X[xi](p-1, q-1), p < q: coefficient of |D_p D_q u(xi)|^2
};

struct InterfaceCoeffs {
  std::array<double, 3> c_bulk{};   // directions 1..3, taken far inside the atomistic region
  std::array<double, 3> ctilde1{};  // rows -1, 0, +1
  double gap = 0;                   // ctilde1[+1] - ctilde1[-1]
  std::map<int, std::array<double, 3>> rows;  // c~_j on rows
  std::map<int, Mat> sg_forms;                // X per row
  double reconstruction_error = 0;
};

/// Applies the product-to-squares rewrite identities to every term of the scheme.
SgDecomposition2D sg_decompose_terms(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                                     const StripDomain2D& d);
SymQuadForm reconstruct_2d(const SgDecomposition2D& dec, const StripDomain2D& d);

/// Decomposition on a periodic strip; throws std::logic_error on reconstruction mismatch.
InterfaceCoeffs strain_gradient_decompose_2d(const InterfaceScheme& s, const PotentialPtr& V,
                                             const Mat& F, int N2 = 6);

/// Atomistic X for the hexagonal quadratic, same layout as SgDecomposition2D::X.
Mat hex_X(double a2, double a3);

struct GenGracGap {
  double gap, p0, p1;
};
GenGracGap gen_grac_gap(const std::vector<double>& w, const std::vector<Mat>& C, double alpha0,
                        double alpha1);

struct KOperators {
  SymQuadForm K0, S, Kkappa;
};
/// K0 = sum_{row 0} D_2 D_1 u . D_1 u, S = sum_{row 0} |D^2 u|^2, K_kappa = K0 + kappa S.
KOperators assemble_K_operators(const StripDomain2D& d, double kappa);

/// The three sums of squares with H^a = beta1 B1 + beta2 B2 + beta3 B3.
std::array<SymQuadForm, 3> b_forms(const StripDomain2D& d);

/// Fourier symbol sum V_ij (e^{ik.a_i} - 1)(e^{-ik.a_j} - 1) of the hexagonal quadratic.
double hex_symbol(const HexQuadratic2D& V, const Eigen::Vector2d& k);

}  // namespace qnl
