#include "qnl/stability2d.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace qnl {

std::array<double, 3> hex_betas(const HexAlphas& a) {
  return {a[0] + a[1] - a[2] - a[3], a[0] + a[1] + a[2] + a[3], 2 * a[0] + 2 * a[1] + 4 * a[2] + a[3]};
}

bool atomistic_stable_hex(const HexAlphas& a) {
  auto b = hex_betas(a);
  return b[0] > 0 && b[1] > 0 && b[2] > 0;
}

std::array<double, 3> TrianglePoint::betas() const {
  double den = 1 - x - 2 * y;
  if (!(x > 0 && y > 0 && den > 0)) throw std::domain_error("point outside the parameter triangle");
  return {y / den, x / den, y / den};
}

TrianglePoint TrianglePoint::from_betas(double beta1, double beta2) {
  double den = 1 + beta2 + 2 * beta1;
  return {beta2 / den, beta1 / den};
}

HexAlphas TrianglePoint::alphas(double split) const {
  auto b = betas();
  double s = 0.5 * (b[0] + b[1]);
  double a23 = 0.5 * (b[1] - b[0]);
  double a2 = (b[2] - 2 * s - a23) / 3;
  double a1 = split * s;
  return {s - a1, a1, a2, a23 - a2};
}

// ---------------------------------------------------------------------------

namespace {

HermitianBanded reduce(const std::map<int, Mat>& blocks, int rows, double k1) {
  HermitianBanded A(rows, 2);
  for (const auto& [d, B] : blocks) {
    std::complex<double> ph = std::polar(1.0, k1 * d);
    for (int i = 0; i < rows; ++i)
      for (int o = 0; o <= 2 && i + o < rows; ++o)
        if (B(i, o + 2) != 0) A.add(i, i + o, B(i, o + 2) * ph);
  }
  return A;
}

std::map<int, Mat> extract(const SymQuadForm& Q, const StripDomain2D& d) {
  std::map<int, Mat> out;
  const int rows = 2 * d.N2 - 1;
  const SpMat& A = Q.matrix();
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      Site r = d.site_of(static_cast<int>(it.row())), c = d.site_of(static_cast<int>(it.col()));
      if (r.m != 0) continue;
      if (std::abs(c.m) > 2) throw std::logic_error("strip coupling wider than two columns");
      int o = c.n - r.n;
      if (std::abs(o) > 2) throw std::logic_error("strip operator exceeds bandwidth 2");
      auto [pos, fresh] = out.try_emplace(c.m, Mat::Zero(rows, 5));
      pos->second(r.n + d.N2 - 1, o + 2) += it.value();
    }
  return out;
}

StripDomain2D block_domain(int N2) { return StripDomain2D{3, N2, true, 1}; }

}  // namespace

HermitianBanded StripBlocks::reduce_H(double k1) const { return reduce(H, rows(), k1); }
HermitianBanded StripBlocks::reduce_G(double k1) const { return reduce(G, rows(), k1); }

StripBlocks& StripBlocks::add(const StripBlocks& o, double c) {
  for (const auto& [d, B] : o.H) {
    auto [it, fresh] = H.try_emplace(d, Mat::Zero(rows(), 5));
    it->second += c * B;
  }
  return *this;
}

StripBlocks strip_blocks(const SymQuadForm& H, const SymQuadForm& G, int N2) {
  StripDomain2D d = block_domain(N2);
  if (H.dim() != d.ndof() || G.dim() != d.ndof()) throw std::invalid_argument("form does not live on the block strip");
  return {N2, extract(H, d), extract(G, d)};
}

StripBlocks strip_blocks(const InterfaceScheme& s, const HexAlphas& a, int N2) {
  StripDomain2D d = block_domain(N2);
  auto V = std::make_shared<HexQuadratic2D>(a[0], a[1], a[2], a[3]);
  return strip_blocks(assemble_hessian_2d(s, V, Mat::Zero(1, 2), d), gram_difference_2d(d), N2);
}

double strip_min_eig(const StripBlocks& b, double k1) {
  if (k1 == 0 || std::abs(k1) > std::numbers::pi) throw std::domain_error("k1 must lie in [-pi, 0) or (0, pi]");
  return banded_min_eig(b.reduce_H(k1), b.reduce_G(k1));
}

double strip_min_eig(const InterfaceScheme& s, const HexAlphas& a, double k1, int N2) {
  if (N2 < 16) throw std::invalid_argument("strip_min_eig needs N2 >= 16");
  return strip_min_eig(strip_blocks(s, a, N2), k1);
}

StripScan min_over_k(const StripBlocks& b, int kgrid) {
  if (kgrid < 64) throw std::invalid_argument("k grid needs at least 64 points");
  const double k0 = 1e-3, k1 = std::numbers::pi;
  auto kj = [&](int j) { return k0 + (k1 - k0) * j / (kgrid - 1); };
  double best = std::numeric_limits<double>::infinity();
  int jbest = 0;
  for (int j = 0; j < kgrid; ++j) {
    HermitianBanded A = b.reduce_H(kj(j)), G = b.reduce_G(kj(j));
    if (std::isfinite(best) && banded_positive_definite(A, G, best)) continue;
    double v = banded_min_eig(A, G);
    if (v < best) {
      best = v;
      jbest = j;
    }
  }
  double lo = kj(std::max(0, jbest - 1)), hi = kj(std::min(kgrid - 1, jbest + 1));
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = strip_min_eig(b, x1), f2 = strip_min_eig(b, x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = strip_min_eig(b, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = strip_min_eig(b, x2);
    }
  }
  StripScan r{false, kj(jbest), best};
  if (f1 < r.min_value) r = {false, x1, f1};
  if (f2 < r.min_value) r = {false, x2, f2};
  return r;
}

namespace {

StripScan decide(const std::function<StripBlocks(int)>& blocks, double scale, int kgrid, int N2) {
  StripScan r = min_over_k(blocks(N2), kgrid);
  double floor = 1e-8 * scale;
  if (r.min_value > floor)
    r.stable = true;
  else if (r.min_value > -floor)
    r.stable = min_over_k(blocks(2 * N2), kgrid).min_value > 0;
  return r;
}

double alpha_scale(const HexAlphas& a) { return std::abs(a[0]) + std::abs(a[1]) + std::abs(a[2]) + std::abs(a[3]); }

}  // namespace

StripScan scheme_stable_strip(const InterfaceScheme& s, const HexAlphas& a, int kgrid, int N2) {
  return decide([&](int n) { return strip_blocks(s, a, n); }, alpha_scale(a), kgrid, N2);
}

// ---------------------------------------------------------------------------

namespace {

// The quadratic scheme Hessian is linear in the alphas; the lrf+s stabilizer scales
// with sum |alpha|.
struct SchemeBasis {
  int N2;
  std::array<StripBlocks, 4> H;
  StripBlocks stab;
  Stabilizer2D kind;
  double kappa;

  SchemeBasis(const InterfaceScheme& s, int N2_) : N2(N2_), kind(s.stabilizer), kappa(s.kappa) {
    StripDomain2D d = block_domain(N2);
    InterfaceScheme plain = s;
    plain.stabilizer = Stabilizer2D::none;
    plain.kappa = 0;
    SymQuadForm G = gram_difference_2d(d);
    for (int i = 0; i < 4; ++i) {
      HexAlphas e{};
      e[i] = 1;
      auto V = std::make_shared<HexQuadratic2D>(e[0], e[1], e[2], e[3]);
      H[i] = strip_blocks(assemble_hessian_2d(plain, V, Mat::Zero(1, 2), d), G, N2);
    }
    if (kind != Stabilizer2D::none) {
      auto V6 = std::make_shared<HexQuadratic2D>(6, 0, 0, 0);  // unit lrf+s scale
      stab = strip_blocks(stabilizer_form_2d(s, V6, d), G, N2);
    }
  }

  StripBlocks at(const HexAlphas& a) const {
    StripBlocks b{N2, {}, H[0].G};
    for (int i = 0; i < 4; ++i) b.add(H[i], a[i]);
    if (kind == Stabilizer2D::second_differences) b.add(stab, kappa);
    if (kind == Stabilizer2D::lrf_s) b.add(stab, kappa * alpha_scale(a) / 6);
    return b;
  }
};

template <class F>
void parallel_for(int n, int jobs, F&& f) {
  jobs = std::max(1, std::min(jobs, n));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  auto work = [&] {
    for (int i; (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

std::vector<RegionCell> stability_region_scan(const InterfaceScheme& s, const RegionScanOptions& opt) {
  if (opt.resolution < 32) throw std::invalid_argument("resolution must be >= 32");
  const int res = opt.resolution;
  std::vector<RegionCell> cells;
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      TrianglePoint p{(i + 0.5) / res, (j + 0.5) / res};
      if (p.x + 2 * p.y < 1) cells.push_back({i, j, p, false, 0});
    }
  SchemeBasis base(s, opt.N2);
  std::unique_ptr<SchemeBasis> doubled;
  std::mutex mu;
  auto blocks = [&](const HexAlphas& a, int n) -> StripBlocks {
    if (n == opt.N2) return base.at(a);
    std::lock_guard<std::mutex> lk(mu);
    if (!doubled) doubled = std::make_unique<SchemeBasis>(s, n);
    return doubled->at(a);
  };
  parallel_for(static_cast<int>(cells.size()), opt.jobs, [&](int c) {
    RegionCell& cell = cells[c];
    HexAlphas a = cell.p.alphas(opt.split);
    StripScan r = decide([&](int n) { return blocks(a, n); }, alpha_scale(a), opt.kgrid, opt.N2);
    cell.stable = r.stable;
    cell.min_value = r.min_value;
    if (cell.stable && !atomistic_stable_hex(a))
      throw std::logic_error("scheme stable where the atomistic model is not");
  });
  return cells;
}

// ---------------------------------------------------------------------------

namespace {

// K_kappa lives on rows |n| <= 2, so its negative spectrum against the Gram equals that
// of the 5 x 5 pencil (K_II, G_II - G_IE G_EE^-1 G_EI). The condensed Gram is O(k1)
// and formed by cancellation, hence extended precision throughout, with the k1 = 0
// operator split off exactly.
double condensed_min_eig(const StripBlocks& b, double k1) {
  using R = long double;
  using C = std::complex<R>;
  using CSp = Eigen::SparseMatrix<C>;
  using CMat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = b.rows(), i0 = b.N2 - 3, ni = 5;
  auto phase = [&](int d) {
    R h = std::sin(static_cast<R>(k1) * d / 2);
    return C(-2 * h * h, std::sin(static_cast<R>(k1) * d));  // e^{i k d} - 1
  };
  // entry (i, i + o), o = 0..2, of the reduced operator
  auto entry = [&](const std::map<int, Mat>& blocks, int i, int o) {
    C v = 0;
    for (const auto& [d, B] : blocks) {
      R x = B(i, o + 2);
      if (x != 0) v += x + x * phase(d);
    }
    return v;
  };
  auto ext = [&](int i) { return i < i0 ? i : i - ni; };
  auto in = [&](int i) { return i >= i0 && i < i0 + ni; };
  std::vector<Eigen::Triplet<C>> tee, tei;
  CMat Gii = CMat::Zero(ni, ni), Kii = CMat::Zero(ni, ni);
  for (int i = 0; i < n; ++i)
    for (int o = 0; o <= 2 && i + o < n; ++o) {
      int j = i + o;
      C g = entry(b.G, i, o), k = entry(b.H, i, o);
      if (in(i) && in(j)) {
        Gii(i - i0, j - i0) = g;
        Gii(j - i0, i - i0) = std::conj(g);
        Kii(i - i0, j - i0) = k;
        Kii(j - i0, i - i0) = std::conj(k);
        continue;
      }
      if (k != C(0)) throw std::logic_error("K_kappa reaches beyond the interface rows");
      if (!in(i) && !in(j)) {
        tee.emplace_back(ext(i), ext(j), g);
        if (o) tee.emplace_back(ext(j), ext(i), std::conj(g));
      } else if (in(j)) {
        tei.emplace_back(ext(i), j - i0, g);
      } else {
        tei.emplace_back(ext(j), i - i0, std::conj(g));
      }
    }
  CSp Gee(n - ni, n - ni), Gei(n - ni, ni);
  Gee.setFromTriplets(tee.begin(), tee.end());
  Gei.setFromTriplets(tei.begin(), tei.end());
  Eigen::SimplicialLLT<CSp> llt(Gee);
  if (llt.info() != Eigen::Success) throw IndefiniteGramError("reduced Gram is not positive definite");
  CMat X = llt.solve(CMat(Gei));
  CMat S = Gii - CMat(Gei.adjoint()) * X;
  S = (R(0.5) * (S + S.adjoint())).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(Kii, S, Eigen::EigenvaluesOnly);
  return std::min(0.0, static_cast<double>(es.eigenvalues()[0]));
}

}  // namespace

double kappa_reduced_min_eig(const StripBlocks& b, double k1) {
  return condensed_min_eig(b, k1);
}

double kappa_min_eig(double kappa, int M, int N2, int jobs) {
  if (N2 < 8) throw std::invalid_argument("kappa scan needs N2 >= 8");
  StripDomain2D d = block_domain(N2);
  KOperators K = assemble_K_operators(d, kappa);
  StripBlocks b = strip_blocks(K.Kkappa, gram_difference_2d(d), N2);
  auto at_k = [&](double k) { return condensed_min_eig(b, k); };
  double v;
  if (M > 0) {
    const int P = 2 * M + 1;
    std::vector<double> lam(M + 1);
    // j and P - j give conjugate operators.
    parallel_for(M + 1, jobs, [&](int j) { lam[j] = at_k(2 * std::numbers::pi * j / P); });
    v = *std::min_element(lam.begin(), lam.end());
  } else {
    // Laterally unbounded strip: minimize over k1 on a log grid, then refine.
    const int n = 48;
    const double lk0 = std::log(1e-5), lk1 = std::log(std::numbers::pi);
    auto lk = [&](int j) { return lk0 + (lk1 - lk0) * j / (n - 1); };
    auto f = [&](double l) { return at_k(std::exp(l)); };
    std::vector<double> lam(n);
    parallel_for(n, jobs, [&](int j) { lam[j] = f(lk(j)); });
    int jb = static_cast<int>(std::min_element(lam.begin(), lam.end()) - lam.begin());
    double lo = lk(std::max(0, jb - 1)), hi = lk(std::min(n - 1, jb + 1));
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo), f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 30; ++it) {
      if (f1 < f2) {
        hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = f(x1);
      } else {
        lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = f(x2);
      }
    }
    v = std::min({lam[jb], f1, f2});
  }
  if (v >= 0) throw ContradictionError("K_kappa has no negative eigenvalue");
  return v;
}

KappaScaling kappa_scaling(const std::vector<double>& kappa, int M, int N2, int jobs) {
  if (kappa.size() < 2) throw std::invalid_argument("need at least two kappa values");
  KappaScaling r;
  r.kappa = kappa;
  const double kmax = *std::max_element(kappa.begin(), kappa.end());
  for (double k : kappa) {
    // The critical mode spreads over O(kappa) rows, so the depth scales with kappa + 1.
    int depth = std::max(64, static_cast<int>(std::ceil(N2 * (k + 1) / (kmax + 1))));
    r.depth.push_back(depth);
    r.lambda.push_back(kappa_min_eig(k, M, depth, jobs));
    r.lambda_doubled.push_back(kappa_min_eig(k, 2 * M, 2 * depth, jobs));
    r.max_doubling_change =
        std::max(r.max_doubling_change, std::abs(r.lambda_doubled.back() - r.lambda.back()) / std::abs(r.lambda.back()));
  }
  Eigen::MatrixXd X(kappa.size(), 2);
  Vec y(kappa.size());
  for (size_t i = 0; i < kappa.size(); ++i) {
    X(i, 0) = 1;
    X(i, 1) = std::log(kappa[i] + 1);
    y[i] = std::log(-r.lambda[i]);
  }
  r.slope = X.colPivHouseholderQr().solve(y)[1];
  return r;
}

// ---------------------------------------------------------------------------

double interface_mass_fraction(const StripDomain2D& d, const Vec& u, int rows) {
  double in = 0, all = 0;
  for (int k = 0; k < d.sites(); ++k) {
    double m2 = 0;
    for (int c = 0; c < d.ncomp; ++c) m2 += u[d.ncomp * k + c] * u[d.ncomp * k + c];
    all += m2;
    if (std::abs(d.site_of(k).n) <= rows) in += m2;
  }
  return all > 0 ? in / all : 0.0;
}

GapExperiment vectorial_gap_experiment(const PotentialPtr& V, const GapOptions& opt) {
  if (V->arity() != 12) throw std::invalid_argument("the gap experiment needs a vectorial potential");
  if (!(opt.t_hi > opt.t_lo) || opt.steps < 2) throw std::invalid_argument("bad expansion range");
  GapExperiment out;
  out.domain = StripDomain2D{opt.M, opt.N2, false, 2};
  out.domain.validate();
  out.step = (opt.t_hi - opt.t_lo) / opt.steps;
  SymQuadForm G = gram_difference_2d(out.domain);
  InterfaceScheme grac = InterfaceScheme::grac23();
  if (opt.kappa > 0) grac = grac.stabilized(Stabilizer2D::second_differences, opt.kappa);

  auto hessian = [&](const InterfaceScheme& s, double t) {
    return assemble_hessian_2d(s, V, t * Mat::Identity(2, 2), out.domain);
  };
  auto pd = [&](const InterfaceScheme& s, double t) {
    Eigen::SimplicialLLT<SpMat> llt(hessian(s, t).matrix());
    return llt.info() == Eigen::Success;
  };
  auto critical = [&](const InterfaceScheme& s, double GapRecord::*field) {
    for (size_t i = 0; i + 1 < out.records.size(); ++i) {
      if (out.records[i].*field > 0 && out.records[i + 1].*field <= 0) {
        double lo = out.records[i].t, hi = out.records[i + 1].t;
        while (hi - lo > opt.t_tol) {
          double mid = 0.5 * (lo + hi);
          (pd(s, mid) ? lo : hi) = mid;
        }
        return hi;
      }
    }
    throw std::range_error("no loss of stability for " + s.name() + " in the expansion range");
  };

  for (int i = 0; i <= opt.steps; ++i) {
    double t = opt.t_lo + i * out.step;
    out.records.push_back({t, min_generalized_eig(hessian(InterfaceScheme::atomistic(), t), G).lambda_min,
                           min_generalized_eig(hessian(grac, t), G).lambda_min});
  }
  out.t_atomistic = critical(InterfaceScheme::atomistic(), &GapRecord::lambda_a);
  out.t_grac = critical(grac, &GapRecord::lambda_grac);
  out.mode_a = min_generalized_eig(hessian(InterfaceScheme::atomistic(), out.t_atomistic), G).eigvec;
  out.mode_grac = min_generalized_eig(hessian(grac, out.t_grac), G).eigvec;
  out.mass_a = interface_mass_fraction(out.domain, out.mode_a);
  out.mass_grac = interface_mass_fraction(out.domain, out.mode_grac);
  return out;
}

}  // namespace qnl
