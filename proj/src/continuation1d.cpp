#include "qnl/continuation1d.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace qnl {

GradedMesh1D build_graded_mesh(int N, double alpha) {
  if (!(alpha > 0.5)) throw InvalidExponentError("grading exponent alpha must exceed 1/2");
  if (N < 4) throw ConfigurationError("graded mesh needs N >= 4");
  GradedMesh1D m;
  m.N = N;
  m.alpha = alpha;
  m.K = std::min(N, static_cast<int>(std::ceil(std::pow(N, (alpha - 0.5) / (alpha + 0.5)) - 1e-12)));
  const double p = 2.0 * (alpha + 1.0) / 3.0;
  std::vector<int> right;
  for (int x = m.K; x <= std::min(N, m.K + 1); ++x) right.push_back(x);
  while (right.back() < N) {
    int x = right.back();
    int h = std::max(1, static_cast<int>(std::floor(std::pow(double(x) / m.K, p))));
    // Avoid a sliver element at the far end.
    if (N - x < h + h / 2) h = N - x;
    right.push_back(x + h);
  }
  for (auto it = right.rbegin(); it != right.rend(); ++it) m.nodes.push_back(-*it);
  for (int x = -m.K + 1; x < m.K; ++x) m.nodes.push_back(x);
  for (int x : right) m.nodes.push_back(x);
  m.nodes.erase(std::unique(m.nodes.begin(), m.nodes.end()), m.nodes.end());
  return m;
}

double LoadCase::operator()(int xi) const {
  return beta * std::pow(1.0 + double(xi) * xi, -(alpha + 1.0) / 2.0);
}

Vec newton_solve(const ChainModel& model, const LoadCase& load, const Vec& y0, const NewtonOptions& opt,
                 int* iterations) {
  auto f = [&](int xi) { return load(xi); };
  Vec y = y0;
  auto [E, g] = energy_gradient_1d(model, y, f);
  Eigen::SimplicialLDLT<SpMat> ldlt;
  for (int it = 0; it <= opt.max_iter; ++it) {
    if (iterations) *iterations = it;
    if (g.lpNorm<Eigen::Infinity>() <= opt.tol) return y;
    if (it == opt.max_iter) break;
    SymQuadForm Hq = model.energy.hessian(y);
    const SpMat& H = Hq.matrix();
    ldlt.compute(H);
    if (ldlt.info() != Eigen::Success) throw SolveFailure("Newton: singular Hessian", y);
    Vec dy = -ldlt.solve(g);
    if (!dy.allFinite()) throw SolveFailure("Newton: non-finite step", y);
    // Backtracking on the energy; steps leaving the admissible set are shortened.
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30 && !accepted; ++ls, t *= 0.5) {
      Vec yt = y + t * dy;
      try {
        auto [Et, gt] = energy_gradient_1d(model, yt, f);
        bool descent = Et <= E + 1e-4 * t * g.dot(dy) || gt.lpNorm<Eigen::Infinity>() < g.lpNorm<Eigen::Infinity>();
        if (descent) {
          y = std::move(yt);
          E = Et;
          g = std::move(gt);
          accepted = true;
        }
      } catch (const InvalidDeformationError&) {
      }
    }
    if (!accepted) throw SolveFailure("Newton: line search failed", y);
  }
  throw SolveFailure("Newton: iteration cap reached", y);
}

namespace {

struct Probe {
  bool ok = false;
  Vec y;
  double lambda = 0;
};

Probe probe(ChainModelSpec spec, double F, const LoadCase& load, const Vec& seed, double seedF,
            const NewtonOptions& nopt) {
  spec.F = F;
  ChainModel m = build_chain_model(spec);
  Vec y0 = seed + (F - seedF) * m.positions();
  Probe p;
  try {
    p.y = newton_solve(m, load, y0, nopt);
  } catch (const SolveFailure&) {
    return p;
  }
  p.ok = true;
  p.lambda = min_generalized_eig(m.energy.hessian(p.y), m.gram).lambda_min;
  return p;
}

}  // namespace

ContinuationResult critical_strain(const ChainModelSpec& spec0, const LoadCase& load,
                                   const ContinuationOptions& opt) {
  ChainModelSpec spec = spec0;
  spec.F = opt.F_start;
  ChainModel m0 = build_chain_model(spec);
  ContinuationResult res;
  res.dofs = m0.ndof();

  Probe p = probe(spec, opt.F_start, load, m0.homogeneous(opt.F_start), opt.F_start, opt.newton);
  if (!p.ok || p.lambda <= 0) throw ImmediateInstabilityError("model is not stable at the initial strain");
  res.steps.push_back({opt.F_start, p.y, p.lambda});

  double F = opt.F_start;
  Vec y = p.y;
  while (true) {
    if (F >= opt.F_max) throw std::runtime_error("no loss of stability below F_max");
    double dF = opt.dF;
    Probe q = probe(spec, F + dF, load, y, F, opt.newton);
    if (!q.ok) {
      dF *= 0.5;
      q = probe(spec, F + dF, load, y, F, opt.newton);
    }
    // A failed solve past the retry is read as loss of stability (fold).
    if (!q.ok || q.lambda <= 0) {
      double lo = F, hi = F + dF;
      Vec ylo = y;
      while (hi - lo > opt.tol_F) {
        double mid = 0.5 * (lo + hi);
        Probe b = probe(spec, mid, load, ylo, lo, opt.newton);
        if (b.ok && b.lambda > 0) {
          lo = mid;
          ylo = b.y;
          res.steps.push_back({mid, b.y, b.lambda});
        } else {
          hi = mid;
        }
      }
      res.bracket_lo = lo;
      res.bracket_hi = hi;
      res.critical_strain = 0.5 * (lo + hi);
      return res;
    }
    res.path_constant = std::max(res.path_constant, (q.y - y).lpNorm<Eigen::Infinity>() / dF);
    F += dF;
    y = q.y;
    res.steps.push_back({F, y, q.lambda});
  }
}

ChainModelSpec study_spec(Scheme1D scheme, const PotentialPtr& V, int N, double alpha, double kappa) {
  ChainModelSpec s;
  s.scheme = scheme;
  s.potential = V;
  s.N = N;
  s.r_cut = 2;
  if (scheme == Scheme1D::stabilized_qnl) s.kappa = kappa;
  if (scheme != Scheme1D::restricted_atomistic && scheme != Scheme1D::atomistic) {
    GradedMesh1D mesh = build_graded_mesh(N, alpha);
    s.K = mesh.K;
    s.nodes = mesh.nodes;
  }
  return s;
}

std::array<double, 3> extrapolate(const std::vector<int>& N, const std::vector<double>& F) {
  if (N.size() != F.size() || N.size() < 3) throw std::invalid_argument("extrapolation needs >= 3 points");
  // For fixed q the fit is linear in (F*, c); q is found by golden-section search.
  auto fit = [&](double q, double& Fs, double& c) {
    Eigen::MatrixXd A(N.size(), 2);
    Eigen::VectorXd b(N.size());
    for (size_t i = 0; i < N.size(); ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = std::pow(double(N[i]), -q);
      b[i] = F[i];
    }
    Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
    Fs = x[0];
    c = x[1];
    return (A * x - b).squaredNorm();
  };
  double lo = 0.05, hi = 6.0, Fs, c;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = fit(x1, Fs, c), f2 = fit(x2, Fs, c);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = fit(x1, Fs, c);
    } else {
      lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = fit(x2, Fs, c);
    }
  }
  double q = 0.5 * (lo + hi);
  fit(q, Fs, c);
  return {Fs, c, q};
}

StudyResult convergence_study(const std::vector<Scheme1D>& schemes, const std::vector<int>& N_list,
                              const PotentialPtr& V, const LoadCase& load, double kappa,
                              const ContinuationOptions& opt, int jobs) {
  if (std::find(schemes.begin(), schemes.end(), Scheme1D::reflection) == schemes.end())
    throw ConfigurationError("convergence study needs the reflection scheme for the reference");
  struct Cell {
    Scheme1D s;
    int N;
    int dofs = 0;
    double Fc = NAN;
  };
  std::vector<Cell> cells;
  for (auto s : schemes)
    for (int N : N_list) cells.push_back({s, N});

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < cells.size();) {
      auto r = critical_strain(study_spec(cells[i].s, V, cells[i].N, load.alpha, kappa), load, opt);
      cells[i].dofs = r.dofs;
      cells[i].Fc = r.critical_strain;
    }
  };
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (int t = 0; t < std::max(1, jobs); ++t)
    pool.emplace_back([&] {
      try {
        worker();
      } catch (...) {
        std::lock_guard lk(mu);
        if (!err) err = std::current_exception();
        next = cells.size();
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  std::vector<std::pair<int, double>> refl;
  for (const auto& c : cells)
    if (c.s == Scheme1D::reflection) refl.emplace_back(c.N, c.Fc);
  std::sort(refl.begin(), refl.end());
  if (refl.size() < 3) throw ConfigurationError("reference extrapolation needs at least three N values");
  std::vector<int> Ns;
  std::vector<double> Fs;
  for (size_t i = refl.size() - 3; i < refl.size(); ++i) {
    Ns.push_back(refl[i].first);
    Fs.push_back(refl[i].second);
  }
  auto [Fref, c, q] = extrapolate(Ns, Fs);
  (void)c;

  StudyResult out{{}, Fref, q};
  for (const auto& cell : cells)
    out.rows.push_back({to_string(cell.s), cell.N, cell.dofs, cell.Fc, std::abs(cell.Fc - Fref) / std::abs(Fref)});
  return out;
}

}  // namespace qnl
