#pragma once

#include "qnl/models2d.hpp"
#include "qnl/spectral.hpp"

#include <array>
#include <map>
#include <vector>

namespace qnl {

using HexAlphas = std::array<double, 4>;

std::array<double, 3> hex_betas(const HexAlphas& a);
bool atomistic_stable_hex(const HexAlphas& a);

/// Point of the parameter triangle x > 0, y > 0, x + 2y < 1.
struct TrianglePoint {
  double x = 0, y = 0;

  std::array<double, 3> betas() const;  // beta1 = beta3 = y / (1 - x - 2y), beta2 = x / (1 - x - 2y)
  static TrianglePoint from_betas(double beta1, double beta2);
  /// alpha1 = split * (alpha0 + alpha1).
  HexAlphas alphas(double split = 0.2) const;
};

/// Coupling blocks of a laterally translation-invariant strip Hessian:
/// H[d](i, o + 2) = H[(0, n), (d, n + o)] for |d|, |o| <= 2, with i = n + N2 - 1.
struct StripBlocks {
  int N2 = 0;
  std::map<int, Mat> H;
  std::map<int, Mat> G;  // same for the l2 difference Gram

  int rows() const { return 2 * N2 - 1; }
  HermitianBanded reduce_H(double k1) const;
  HermitianBanded reduce_G(double k1) const;
  StripBlocks& add(const StripBlocks& o, double c);  // H only
};

/// Blocks of the scalar scheme Hessian for the hexagonal quadratic (stabilizer included).
StripBlocks strip_blocks(const InterfaceScheme& s, const HexAlphas& a, int N2);
/// Blocks of an arbitrary periodic-strip form with width 7 (scalar).
StripBlocks strip_blocks(const SymQuadForm& H, const SymQuadForm& G, int N2);

double strip_min_eig(const StripBlocks& b, double k1);
double strip_min_eig(const InterfaceScheme& s, const HexAlphas& a, double k1, int N2);

struct StripScan {
  bool stable = false;
  double argmin_k1 = 0;
  double min_value = 0;
};

/// Uniform k1 grid on [1e-3, pi] with golden-section refinement around the grid minimum.
StripScan min_over_k(const StripBlocks& b, int kgrid);
StripScan scheme_stable_strip(const InterfaceScheme& s, const HexAlphas& a, int kgrid = 64, int N2 = 16);

struct RegionCell {
  int ix = 0, iy = 0;
  TrianglePoint p;
  bool stable = false;
  double min_value = 0;
};

struct RegionScanOptions {
  int resolution = 64;
  double split = 0.2;
  int kgrid = 64;
  int N2 = 16;
  int jobs = 1;
};

/// Cells with centres ((i + 1/2) / res, (j + 1/2) / res) inside the triangle. Throws
/// std::logic_error if a cell is stable for the scheme but not for the atomistic model.
std::vector<RegionCell> stability_region_scan(const InterfaceScheme& s, const RegionScanOptions& opt);

struct KappaScaling {
  std::vector<double> kappa;
  std::vector<int> depth;              // N2 used for each kappa
  std::vector<double> lambda;          // on (M, depth)
  std::vector<double> lambda_doubled;  // on (2M, 2 depth)
  double slope = 0;
  double max_doubling_change = 0;  // max relative change under doubling
};

struct ContradictionError : std::logic_error {
  using std::logic_error::logic_error;
};

/// lambda_min of K0 + kappa S against the l2 difference Gram on a strip clamped at
/// |n| >= N2: periodic with period 2M + 1 (discrete k1 = 2 pi j / (2M + 1)), or laterally
/// unbounded for M = 0 (k1 minimized over [1e-5, pi]).
double kappa_min_eig(double kappa, int M, int N2, int jobs = 1);
/// Negative part of the spectrum of K_kappa at one lateral wavenumber (0 if none).
double kappa_reduced_min_eig(const StripBlocks& b, double k1);
/// N2 is the depth for the largest kappa; smaller kappa use N2 (kappa + 1) / (kappa_max + 1).
KappaScaling kappa_scaling(const std::vector<double>& kappa, int M, int N2, int jobs = 1);

struct GapRecord {
  double t = 0;
  double lambda_a = 0;
  double lambda_grac = 0;
};

struct GapExperiment {
  std::vector<GapRecord> records;
  double t_atomistic = 0, t_grac = 0;  // critical expansions, bisected to t_tol
  double step = 0;
  Vec mode_a, mode_grac;
  double mass_a = 0, mass_grac = 0;  // l2 mass within 3 rows of the interface
  StripDomain2D domain;
};

struct GapOptions {
  double t_lo = 1.2, t_hi = 1.25;
  int steps = 10;
  double t_tol = 1e-7;
  int M = 24, N2 = 24;
  double kappa = 0.0;  // second-difference stabilizer on the grac23 side
};

double interface_mass_fraction(const StripDomain2D& d, const Vec& u, int rows = 3);
GapExperiment vectorial_gap_experiment(const PotentialPtr& V, const GapOptions& opt);

}  // namespace qnl
