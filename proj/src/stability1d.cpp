#include "qnl/stability1d.hpp"

#include <cmath>

namespace qnl {

SymbolCoeffs1D symbol_coeffs(double a, double b, double g, double d) {
  return {2 - 2 * a + 8 * b - 8 * g + 16 * d, a - 2 * b + 18 * g - 12 * d, -8 * g + 2 * d, g};
}

SymbolCoeffs1D symbol_coeffs(const SitePotential& V, double F) {
  if (V.arity() != 4) throw ArityError("symbol coefficients need a second-neighbour potential");
  Mat H = V.eval(F * homogeneous_map_1d(2).col(0)).hessian;
  auto h = [&](int r, int s) { return H(slot_1d(r, 2), slot_1d(s, 2)); };
  // Normalise by V_{1,1} so that the (alpha, beta, gamma, delta) form applies, then rescale.
  double v11 = h(1, 1);
  if (v11 == 0) throw std::invalid_argument("V_{1,1} vanishes; symbol form undefined");
  SymbolCoeffs1D c = symbol_coeffs(h(1, -1) / v11, h(2, 2) / v11, h(2, -2) / v11, h(1, 2) / v11);
  c.A1 *= v11;
  c.A2 *= v11;
  c.A3 *= v11;
  c.A4 *= v11;
  return c;
}

FourierMin gamma_atomistic_fourier(const SymbolCoeffs1D& c) {
  FourierMin best{c.at(0.0), 0.0};
  auto consider = [&](double s) {
    if (!(s >= 0 && s <= 4)) return;
    double v = c.at(s);
    if (v < best.gamma) best = {v, s};
  };
  consider(4.0);
  // Critical points: A2 + 2 A3 s + 3 A4 s^2 = 0.
  double qa = 3 * c.A4, qb = 2 * c.A3, qc = c.A2;
  if (qa == 0) {
    if (qb != 0) consider(-qc / qb);
  } else {
    double disc = qb * qb - 4 * qa * qc;
    if (disc >= 0) {
      double sq = std::sqrt(disc);
      double q = -0.5 * (qb + std::copysign(sq, qb));
      if (q != 0) {
        consider(q / qa);
        consider(qc / q);
      } else {
        consider(0.0);
      }
    }
  }
  return best;
}

CounterexampleReport counterexample_report(int window_N, double alpha, double beta, double gamma,
                                           double delta) {
  auto V = std::make_shared<SecondNeighborQuadratic>(alpha, beta, gamma, delta);
  ChainModelSpec spec;
  spec.scheme = Scheme1D::qnl2;
  spec.potential = V;
  spec.N = window_N;
  ChainModel m = build_chain_model(spec);
  SpectralResult r = min_generalized_eig(m.energy.hessian(m.homogeneous(1.0)), m.gram);
  return {gamma_atomistic_fourier(symbol_coeffs(alpha, beta, gamma, delta)).gamma, r.lambda_min,
          window_N, r.eigvec};
}

}  // namespace qnl
