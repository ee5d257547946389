#pragma once

#include "qnl/spectral.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace qnl {

/// Site m a1 + n a2 of the triangular lattice; row(site) = n.
struct Site {
  int m = 0, n = 0;
  Site operator+(const Site& o) const { return {m + o.m, n + o.n}; }
  Site operator-(const Site& o) const { return {m - o.m, n - o.n}; }
  bool operator==(const Site&) const = default;
  auto operator<=>(const Site&) const = default;
};

/// a_j, j taken mod 6 with a_1 = (1, 0).
Eigen::Vector2d direction(int j);
/// a_j in lattice coordinates.
Site offset(int j);
Eigen::Vector2d position(const Site& s);

/// Rectangular strip m in [-M, M], n in [-N2, N2]. Sites with |n| >= N2 are clamped;
/// laterally the strip is either clamped at |m| >= M or periodic with period 2M + 1.
struct StripDomain2D {
  int M = 8;
  int N2 = 8;
  bool periodic = false;
  int ncomp = 1;  // 1 for scalar displacements, 2 for vectorial

  int width() const { return periodic ? 2 * M + 1 : 2 * M - 1; }
  int sites() const { return width() * (2 * N2 - 1); }
  int ndof() const { return ncomp * sites(); }
  bool clamped(const Site& s) const;
  /// Canonical representative (wrapped for periodic strips).
  Site wrap(const Site& s) const;
  /// Site index or -1 if clamped.
  int index(const Site& s) const;
  Site site_of(int index) const;
  void validate() const;
};

using SiteForm2D = std::vector<std::pair<Site, double>>;

/// D_i D_j u(xi) as a site form.
SiteForm2D second_diff_form(int i, int j, const Site& xi);
SiteForm2D diff_form(int j, const Site& xi);
/// Evaluates a site form on a scalar field over the domain (clamped reads 0).
double eval_form(const StripDomain2D& d, const Vec& u, const SiteForm2D& f);
double second_diff(const StripDomain2D& d, const Vec& u, int i, int j, const Site& xi);

/// Linear form over DOFs of component c (clamped contributions dropped).
LinearForm to_linear(const StripDomain2D& d, const SiteForm2D& f, int c = 0);

/// Triangles {xi, xi + a_k, xi + a_{k+1}} with k = 1 (upward) or k = 2 (downward).
struct Triangle {
  Site base;
  int k;
  std::array<Site, 3> vertices() const;
};

/// Triangles touching at least one DOF.
std::vector<Triangle> active_triangles(const StripDomain2D& d);
/// Sites xi such that some xi + a_i (reach 1) or xi + a_i + a_j (reach 2) is a DOF.
std::vector<Site> active_sites(const StripDomain2D& d, int reach = 1);

/// |grad u|^2_{L2} = (1/sqrt 3) sum_xi sum_{j=1..3} |D_j u(xi)|^2, componentwise.
SymQuadForm gram_gradient_2d(const StripDomain2D& d);
/// sum_xi sum_{j=1..6} |D_j u(xi)|^2, componentwise.
SymQuadForm gram_difference_2d(const StripDomain2D& d);

}  // namespace qnl
