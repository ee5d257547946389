#pragma once

#include "qnl/potentials.hpp"
#include "qnl/spectral.hpp"

#include <vector>

namespace qnl {

/// Affine function of the DOF vector: sum c_i x_i + c.
struct Affine {
  LinearForm lin;
  double c = 0.0;

  static Affine dof(int i) { return {{{i, 1.0}}, 0.0}; }
  static Affine constant(double v) { return {{}, v}; }
  double eval(const Vec& x) const;
  Affine& operator+=(const Affine& o);
  Affine& operator*=(double s);
};

Affine operator+(Affine a, const Affine& b);
Affine operator-(Affine a, const Affine& b);
Affine operator*(double s, Affine a);

/// weight * [V(stencil(x)) - V(reference)], each stencil slot affine in x.
struct StencilTerm {
  double weight = 1.0;
  std::vector<Affine> slots;
};

/// Energy of the form sum_t w_t V(A_t x + b_t) - f.x + kappa/2 (x - c)^T S (x - c).
class StencilEnergy {
 public:
  StencilEnergy(PotentialPtr V, int ndof, Vec reference_stencil);

  int ndof() const { return ndof_; }
  const SitePotential& potential() const { return *V_; }
  const std::vector<StencilTerm>& terms() const { return terms_; }

  void add_term(StencilTerm t);
  void set_force(Vec f) { force_ = std::move(f); }
  void add_quadratic(const SymQuadForm& S, double kappa, Vec center);

  Vec stencil(const StencilTerm& t, const Vec& x) const;
  double energy(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  SymQuadForm hessian(const Vec& x) const;

 private:
  PotentialPtr V_;
  int ndof_;
  double vref_;
  std::vector<StencilTerm> terms_;
  Vec force_;
  std::vector<std::pair<SymQuadForm, Vec>> quad_;  // kappa folded into the form
};

}  // namespace qnl
