#pragma once

#include "qnl/energy.hpp"
#include "qnl/potentials.hpp"
#include "qnl/spectral.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qnl {

enum class Scheme1D { atomistic, cauchy_born, qnl2, reflection, stabilized_qnl, restricted_atomistic };

Scheme1D parse_scheme_1d(const std::string& s);
std::string to_string(Scheme1D s);

/// Stencil used at the interface sites next to the right continuum region of the
/// finite geometry. `printed` slot rho=2 is 2 D_2; `corrected` uses 2 D_1.
enum class RightInterfaceStencil { corrected, printed };

struct ConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidDeformationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChainModelSpec {
  Scheme1D scheme = Scheme1D::atomistic;
  PotentialPtr potential;
  int r_cut = 2;
  double F = 1.0;
  int N = 100;
  /// 0 selects the single interface at 0 (atomistic for xi <= 0); K > 0 the
  /// finite geometry with atomistic region [-K, K].
  int K = 0;
  double kappa = 0.0;
  /// Optional integer node positions covering [-N, N]; empty means every site.
  std::vector<int> nodes;
  RightInterfaceStencil right_stencil = RightInterfaceStencil::corrected;

  void validate() const;
};

using SiteForm = std::vector<std::pair<int, double>>;  // lattice site -> coefficient

/// A weighted site-energy term with slots that are linear in lattice values y(site).
/// Continuum elements are written as the site potential of a homogeneous stencil.
struct LatticeTerm {
  double weight = 1.0;
  std::vector<SiteForm> slots;
  int site = 0;
  bool element = false;
};

std::vector<LatticeTerm> chain_terms(const ChainModelSpec& spec);

struct ChainModel {
  ChainModelSpec spec;
  std::vector<int> nodes;  // all nodes, including the clamped ends +-N
  std::map<int, int> dof_of_node;
  StencilEnergy energy;
  SymQuadForm gram;        // |grad u|^2 on the P1 space
  SymQuadForm stabilizer;  // empty unless stabilized

  int ndof() const { return energy.ndof(); }
  /// y(site) as an affine function of the DOFs (clamped: F * site).
  Affine y_at(int site) const;
  Vec homogeneous(double F) const;
  Vec positions() const;
  Vec force_vector(const std::function<double(int)>& f) const;
};

ChainModel build_chain_model(const ChainModelSpec& spec);

SymQuadForm assemble_hessian_1d(const ChainModelSpec& spec);
/// max |dE(F x)| over DOF nodes at least 2 r_cut away from the clamped ends.
double ghost_force_residual_1d(const ChainModelSpec& spec);
SymQuadForm gram_1d(const ChainModelSpec& spec);

/// Energy (including -sum f y) and its exact gradient at the DOF values y.
std::pair<double, Vec> energy_gradient_1d(const ChainModel& model, const Vec& y,
                                          const std::function<double(int)>& f);

/// <Su, u> = sum over eta in [xi1 - 2 r_cut + 2, 0] of |D_{-1} D_1 u(eta)|^2, on the
/// window |xi| < N with u clamped outside.
SymQuadForm assemble_stabilizer_1d(int N, int xi1, int r_cut);

/// Pairwise bond form: c0(b) |D1u(b)|^2 + sum_j c_j(b) |D1u(b) - D1u(b - j)|^2.
struct StrainGradientForm1D {
  std::map<int, double> c0;
  std::vector<std::map<int, double>> cj;  // cj[j - 1][b], j = 1 .. 2 r_cut - 1
};

/// Difference-power form: sum A |D1u|^2 + B |d2 u|^2 + C |d3 u|^2 + D |d4 u|^2 with the
/// second and fourth differences centred at xi and the third on u(xi-1 .. xi+2).
struct PowerForm1D {
  std::map<int, double> A, B, C, D;
};

/// Bond-space matrix Q(b, b') of the homogeneous-state Hessian (lattice resolution only).
std::map<std::pair<int, int>, double> bond_form_1d(const ChainModelSpec& spec);
StrainGradientForm1D strain_gradient_decompose_1d(const ChainModelSpec& spec);
PowerForm1D power_decompose_1d(const ChainModelSpec& spec);

/// Rebuilds the window Hessian from a pairwise decomposition.
SymQuadForm reconstruct_from_strain_gradient(const StrainGradientForm1D& form, int N);

/// Effective second derivatives V_{xi, rho sigma} in standard stencil coordinates for the
/// atomistic-side sites of the single-interface geometry.
std::map<int, Mat> effective_site_hessians(const ChainModelSpec& spec);

/// sum_{rho,sigma} (|rho|+|sigma|)^2 |rho||sigma| max_xi |a_xi - b_xi|_{rho sigma}
double kappa0_bound_between(const std::map<int, Mat>& a, const std::map<int, Mat>& b, int r_cut);
/// Sup over F of the bound between the qnl2 and reflection effective site potentials.
double kappa0_bound(const PotentialPtr& potential, const std::vector<double>& F_set);

}  // namespace qnl
