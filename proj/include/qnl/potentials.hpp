#pragma once

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <vector>

namespace qnl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ArityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PotentialEval {
  double energy = 0.0;
  Vec gradient;
  Mat hessian;
};

/// Many-body site energy acting on a flattened difference stencil.
class SitePotential {
 public:
  virtual ~SitePotential() = default;
  virtual int arity() const = 0;
  virtual double energy(const Vec& g) const = 0;
  virtual PotentialEval eval(const Vec& g) const = 0;

 protected:
  void check_arity(const Vec& g) const;
};

using PotentialPtr = std::shared_ptr<const SitePotential>;

// 1D stencils are ordered rho = -r, ..., -1, 1, ..., r.
std::vector<int> stencil_1d(int r_cut);
int slot_1d(int rho, int r_cut);

/// EAM-type chain: V = sum phi(|g|) + G(sum psi(|g|)).
class EamChain1D : public SitePotential {
 public:
  EamChain1D(double A = 3.0, double B = 3.0, double C = 5.0, double s0 = default_s0(3.0),
             int r_cut = 2);
  static double default_s0(double B);

  int arity() const override { return 2 * r_cut_; }
  int r_cut() const { return r_cut_; }
  double energy(const Vec& g) const override;
  PotentialEval eval(const Vec& g) const override;

  double phi(double s, int deriv = 0) const;
  double psi(double s, int deriv = 0) const;
  double embed(double s, int deriv = 0) const;

  double A, B, C, s0;

 private:
  int r_cut_;
};

/// Quadratic site energy 1/2 (g - F0 R)^T H (g - F0 R) with the symmetric
/// second-neighbour Hessian pattern.
class SecondNeighborQuadratic : public SitePotential {
 public:
  SecondNeighborQuadratic(double alpha, double beta, double gamma, double delta,
                          double F0 = 1.0);
  int arity() const override { return 4; }
  double energy(const Vec& g) const override;
  PotentialEval eval(const Vec& g) const override;
  const Mat& hessian() const { return H_; }

  double alpha, beta, gamma, delta, F0;

 private:
  Mat H_;
  Vec center_;
};

/// Hexagonally symmetric quadratic 1/2 g^T H g over the six nearest-neighbour
/// differences, H circulant with row (a0, a1, a2, a3, a2, a1).
class HexQuadratic2D : public SitePotential {
 public:
  HexQuadratic2D(double a0, double a1, double a2, double a3);
  int arity() const override { return 6; }
  double energy(const Vec& g) const override;
  PotentialEval eval(const Vec& g) const override;
  const Mat& hessian() const { return H_; }

  double beta1() const { return a0 + a1 - a2 - a3; }
  double beta2() const { return a0 + a1 + a2 + a3; }
  double beta3() const { return 2 * a0 + 2 * a1 + 4 * a2 + a3; }

  double a0, a1, a2, a3;

 private:
  Mat H_;
};

/// Vectorial EAM with a bond-angle term. Stencil layout (g1x, g1y, ..., g6x, g6y).
class EamPlanar2D : public SitePotential {
 public:
  EamPlanar2D(double A = 3.0, double B = 3.0, double C = 1.0, double D = -0.5,
              double s0 = default_s0(3.0));
  static double default_s0(double B);

  int arity() const override { return 12; }
  double energy(const Vec& g) const override;
  PotentialEval eval(const Vec& g) const override;

  double A, B, C, D, s0;
};

/// Linear maps from a macroscopic strain to the homogeneous stencil.
Mat homogeneous_map_1d(int r_cut);   // arity x 1
Mat homogeneous_map_2d();            // 6 x 2, rows a_j^T
Mat homogeneous_map_2d_vec();        // 12 x 4, F stored row-major

struct CauchyBorn {
  double W = 0.0;
  Vec dW;
  Mat d2W;
};

/// W(F) = V(P f) with exact chain-rule derivatives.
CauchyBorn cauchy_born(const SitePotential& p, const Mat& P, const Vec& f);
CauchyBorn cauchy_born_1d(const SitePotential& p, int r_cut, double F);
CauchyBorn cauchy_born_2d(const SitePotential& p, const Eigen::Vector2d& F);

}  // namespace qnl
