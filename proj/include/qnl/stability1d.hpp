#pragma once

#include "qnl/models1d.hpp"


namespace qnl {

/// Atomistic symbol A1 + A2 s + A3 s^2 + A4 s^3 with s = |e^{ik} - 1|^2.
struct SymbolCoeffs1D {
  double A1 = 0, A2 = 0, A3 = 0, A4 = 0;
  double at(double s) const { return A1 + s * (A2 + s * (A3 + s * A4)); }
};

SymbolCoeffs1D symbol_coeffs(double alpha, double beta, double gamma, double delta);
/// Coefficients read off the Hessian of a second-neighbour site potential at F.
SymbolCoeffs1D symbol_coeffs(const SitePotential& V, double F);

struct FourierMin {
  double gamma;
  double s_star;
};

/// Exact minimum of the cubic over s in [0, 4].
FourierMin gamma_atomistic_fourier(const SymbolCoeffs1D& c);

struct CounterexampleReport {
  double gamma_a;
  double lambda_qnl;
  int window;
  Vec eigvec;  // values on xi = -window+1 .. window-1
};

CounterexampleReport counterexample_report(int window_N, double alpha = -0.99, double beta = 0.1,
                                           double gamma = 0.15, double delta = -0.2);

}  // namespace qnl
