#include "qnl/potentials.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qnl {

void SitePotential::check_arity(const Vec& g) const {
  if (g.size() != arity())
    throw ArityError("stencil has " + std::to_string(g.size()) + " slots, potential expects " +
                     std::to_string(arity()));
}

std::vector<int> stencil_1d(int r_cut) {
  std::vector<int> R;
  for (int r = -r_cut; r <= r_cut; ++r)
    if (r != 0) R.push_back(r);
  return R;
}

int slot_1d(int rho, int r_cut) { return rho < 0 ? rho + r_cut : rho + r_cut - 1; }

// ---------------------------------------------------------------------------

EamChain1D::EamChain1D(double A_, double B_, double C_, double s0_, int r_cut)
    : A(A_), B(B_), C(C_), s0(s0_), r_cut_(r_cut) {
  if (r_cut < 1) throw std::invalid_argument("r_cut must be positive");
}

double EamChain1D::default_s0(double B) {
  return 2 * std::exp(-0.95 * B) + 2 * std::exp(-1.9 * B);
}

double EamChain1D::phi(double s, int d) const {
  double e1 = std::exp(-A * (s - 1)), e2 = e1 * e1;
  switch (d) {
    case 0: return e2 - 2 * e1;
    case 1: return -2 * A * e2 + 2 * A * e1;
    default: return 4 * A * A * e2 - 2 * A * A * e1;
  }
}

double EamChain1D::psi(double s, int d) const {
  double e = std::exp(-B * s);
  return d == 0 ? e : (d == 1 ? -B * e : B * B * e);
}

double EamChain1D::embed(double s, int d) const {
  double t = s - s0;
  switch (d) {
    case 0: return C * (t * t + t * t * t * t);
    case 1: return C * (2 * t + 4 * t * t * t);
    default: return C * (2 + 12 * t * t);
  }
}

double EamChain1D::energy(const Vec& g) const {
  check_arity(g);
  double e = 0, rho = 0;
  for (int i = 0; i < g.size(); ++i) {
    double s = std::abs(g[i]);
    e += phi(s);
    rho += psi(s);
  }
  return e + embed(rho);
}

PotentialEval EamChain1D::eval(const Vec& g) const {
  check_arity(g);
  const int n = g.size();
  PotentialEval out;
  out.gradient = Vec::Zero(n);
  out.hessian = Mat::Zero(n, n);
  Vec dpsi(n);
  double rho = 0;
  for (int i = 0; i < n; ++i) {
    double s = std::abs(g[i]), sg = g[i] < 0 ? -1.0 : 1.0;
    out.energy += phi(s);
    rho += psi(s);
    out.gradient[i] = phi(s, 1) * sg;
    out.hessian(i, i) = phi(s, 2);
    dpsi[i] = psi(s, 1) * sg;
  }
  double G0 = embed(rho), G1 = embed(rho, 1), G2 = embed(rho, 2);
  out.energy += G0;
  out.gradient += G1 * dpsi;
  out.hessian += G2 * dpsi * dpsi.transpose();
  for (int i = 0; i < n; ++i) out.hessian(i, i) += G1 * psi(std::abs(g[i]), 2);
  return out;
}

// ---------------------------------------------------------------------------

SecondNeighborQuadratic::SecondNeighborQuadratic(double a, double b, double c, double d,
                                                 double F0_)
    : alpha(a), beta(b), gamma(c), delta(d), F0(F0_), H_(Mat::Zero(4, 4)) {
  auto set = [&](int r, int s, double v) {
    H_(slot_1d(r, 2), slot_1d(s, 2)) = v;
    H_(slot_1d(s, 2), slot_1d(r, 2)) = v;
  };
  set(1, 1, 1);
  set(-1, -1, 1);
  set(1, -1, alpha);
  set(2, 2, beta);
  set(-2, -2, beta);
  set(2, -2, gamma);
  set(1, 2, delta);
  set(-1, -2, delta);
  set(-1, 2, -delta);
  set(1, -2, -delta);
  center_ = F0 * homogeneous_map_1d(2).col(0);
}

double SecondNeighborQuadratic::energy(const Vec& g) const {
  check_arity(g);
  Vec d = g - center_;
  return 0.5 * d.dot(H_ * d);
}

PotentialEval SecondNeighborQuadratic::eval(const Vec& g) const {
  check_arity(g);
  Vec d = g - center_;
  return {0.5 * d.dot(H_ * d), H_ * d, H_};
}

// ---------------------------------------------------------------------------

HexQuadratic2D::HexQuadratic2D(double a0_, double a1_, double a2_, double a3_)
    : a0(a0_), a1(a1_), a2(a2_), a3(a3_), H_(6, 6) {
  const double row[4] = {a0, a1, a2, a3};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      int d = std::abs(i - j);
      H_(i, j) = row[std::min(d, 6 - d)];
    }
}

double HexQuadratic2D::energy(const Vec& g) const {
  check_arity(g);
  return 0.5 * g.dot(H_ * g);
}

PotentialEval HexQuadratic2D::eval(const Vec& g) const {
  check_arity(g);
  return {0.5 * g.dot(H_ * g), H_ * g, H_};
}

// ---------------------------------------------------------------------------

EamPlanar2D::EamPlanar2D(double A_, double B_, double C_, double D_, double s0_)
    : A(A_), B(B_), C(C_), D(D_), s0(s0_) {}

double EamPlanar2D::default_s0(double B) { return 6 * std::exp(-0.95 * B); }

namespace {

struct Bond {
  Eigen::Vector2d r;
  double s;
  Eigen::Matrix2d P;  // projection orthogonal to r
};

Bond make_bond(const Vec& g, int j) {
  Eigen::Vector2d v(g[2 * j], g[2 * j + 1]);
  double s = v.norm();
  if (!(s > 0)) throw SingularConfigurationError("zero-length bond in planar EAM stencil");
  Eigen::Vector2d r = v / s;
  return {r, s, Eigen::Matrix2d::Identity() - r * r.transpose()};
}

}  // namespace

double EamPlanar2D::energy(const Vec& g) const {
  return eval(g).energy;
}

PotentialEval EamPlanar2D::eval(const Vec& g) const {
  check_arity(g);
  PotentialEval out;
  out.gradient = Vec::Zero(12);
  out.hessian = Mat::Zero(12, 12);
  Bond b[6];
  for (int j = 0; j < 6; ++j) b[j] = make_bond(g, j);

  auto phi = [&](double s, int d) {
    double e1 = std::exp(-A * (s - 1)), e2 = e1 * e1;
    return d == 0 ? e2 - 2 * e1 : (d == 1 ? -2 * A * e2 + 2 * A * e1 : 4 * A * A * e2 - 2 * A * A * e1);
  };
  auto psi = [&](double s, int d) {
    double e = std::exp(-B * s);
    return d == 0 ? e : (d == 1 ? -B * e : B * B * e);
  };
  // Radial function f(|g|): gradient f' r, Hessian f'' r r^T + f'/s P.
  auto radial_hess = [](const Bond& bd, double f1, double f2) -> Eigen::Matrix2d {
    return f2 * bd.r * bd.r.transpose() + (f1 / bd.s) * bd.P;
  };

  double rho = 0;
  for (int j = 0; j < 6; ++j) {
    out.energy += phi(b[j].s, 0);
    rho += psi(b[j].s, 0);
    out.gradient.segment<2>(2 * j) += phi(b[j].s, 1) * b[j].r;
    out.hessian.block<2, 2>(2 * j, 2 * j) += radial_hess(b[j], phi(b[j].s, 1), phi(b[j].s, 2));
  }
  double t = rho - s0;
  double G0 = C * (t * t + t * t * t * t), G1 = C * (2 * t + 4 * t * t * t), G2 = C * (2 + 12 * t * t);
  out.energy += G0;
  Vec drho(12);
  for (int j = 0; j < 6; ++j) {
    drho.segment<2>(2 * j) = psi(b[j].s, 1) * b[j].r;
    out.hessian.block<2, 2>(2 * j, 2 * j) += G1 * radial_hess(b[j], psi(b[j].s, 1), psi(b[j].s, 2));
  }
  out.gradient += G1 * drho;
  out.hessian += G2 * drho * drho.transpose();

  // Angle term D * sum_j (r_j . r_{j+1} - 1/2)^2.
  for (int j = 0; j < 6; ++j) {
    int k = (j + 1) % 6;
    const Bond &p = b[j], &q = b[k];
    double c = p.r.dot(q.r);
    Eigen::Vector2d dcj = p.P * q.r / p.s, dck = q.P * p.r / q.s;
    auto self = [](const Bond& x, const Eigen::Vector2d& other) -> Eigen::Matrix2d {
      double ro = x.r.dot(other);
      Eigen::Matrix2d m = x.r * (x.P * other).transpose();
      return -(m + m.transpose() + ro * x.P) / (x.s * x.s);
    };
    Eigen::Matrix2d hjj = self(p, q.r), hkk = self(q, p.r);
    Eigen::Matrix2d hjk = (p.P / p.s) * (q.P / q.s);
    double w = c - 0.5;
    out.energy += D * w * w;
    out.gradient.segment<2>(2 * j) += 2 * D * w * dcj;
    out.gradient.segment<2>(2 * k) += 2 * D * w * dck;
    out.hessian.block<2, 2>(2 * j, 2 * j) += 2 * D * (dcj * dcj.transpose() + w * hjj);
    out.hessian.block<2, 2>(2 * k, 2 * k) += 2 * D * (dck * dck.transpose() + w * hkk);
    Eigen::Matrix2d off = 2 * D * (dcj * dck.transpose() + w * hjk);
    out.hessian.block<2, 2>(2 * j, 2 * k) += off;
    out.hessian.block<2, 2>(2 * k, 2 * j) += off.transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------

Mat homogeneous_map_1d(int r_cut) {
  auto R = stencil_1d(r_cut);
  Mat P(R.size(), 1);
  for (size_t i = 0; i < R.size(); ++i) P(i, 0) = R[i];
  return P;
}

Mat homogeneous_map_2d() {
  Mat P(6, 2);
  for (int j = 0; j < 6; ++j) {
    double th = std::numbers::pi / 3 * j;
    P(j, 0) = std::cos(th);
    P(j, 1) = std::sin(th);
  }
  return P;
}

Mat homogeneous_map_2d_vec() {
  Mat a = homogeneous_map_2d();
  Mat P = Mat::Zero(12, 4);
  for (int j = 0; j < 6; ++j) {
    P(2 * j, 0) = a(j, 0);
    P(2 * j, 1) = a(j, 1);
    P(2 * j + 1, 2) = a(j, 0);
    P(2 * j + 1, 3) = a(j, 1);
  }
  return P;
}

CauchyBorn cauchy_born(const SitePotential& p, const Mat& P, const Vec& f) {
  PotentialEval e = p.eval(P * f);
  return {e.energy, P.transpose() * e.gradient, P.transpose() * e.hessian * P};
}

CauchyBorn cauchy_born_1d(const SitePotential& p, int r_cut, double F) {
  return cauchy_born(p, homogeneous_map_1d(r_cut), Vec::Constant(1, F));
}

CauchyBorn cauchy_born_2d(const SitePotential& p, const Eigen::Vector2d& F) {
  return cauchy_born(p, homogeneous_map_2d(), Vec(F));
}

}  // namespace qnl
