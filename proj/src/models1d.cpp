#include "qnl/models1d.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qnl {

Scheme1D parse_scheme_1d(const std::string& s) {
  if (s == "atomistic") return Scheme1D::atomistic;
  if (s == "cauchy_born" || s == "cb") return Scheme1D::cauchy_born;
  if (s == "qnl2" || s == "qnl") return Scheme1D::qnl2;
  if (s == "reflection" || s == "refl") return Scheme1D::reflection;
  if (s == "stabilized_qnl" || s == "stab") return Scheme1D::stabilized_qnl;
  if (s == "restricted_atomistic") return Scheme1D::restricted_atomistic;
  throw ConfigurationError("unknown 1D scheme '" + s + "'");
}

std::string to_string(Scheme1D s) {
  switch (s) {
    case Scheme1D::atomistic: return "atomistic";
    case Scheme1D::cauchy_born: return "cauchy_born";
    case Scheme1D::qnl2: return "qnl2";
    case Scheme1D::reflection: return "reflection";
    case Scheme1D::stabilized_qnl: return "stabilized_qnl";
    case Scheme1D::restricted_atomistic: return "restricted_atomistic";
  }
  return "?";
}

void ChainModelSpec::validate() const {
  if (!potential) throw ConfigurationError("chain model needs a potential");
  if (r_cut < 1 || potential->arity() != 2 * r_cut)
    throw ConfigurationError("potential arity does not match r_cut");
  if (N < 2) throw ConfigurationError("window half-width N must be at least 2");
  if (K < 0 || (K > 0 && K + r_cut >= N)) throw ConfigurationError("need 0 <= K and K + r_cut < N");
  if (!(F > 0)) throw ConfigurationError("strain F must be positive");
  bool qnl = scheme == Scheme1D::qnl2 || scheme == Scheme1D::stabilized_qnl;
  if ((qnl || scheme == Scheme1D::reflection) && r_cut != 2)
    throw ConfigurationError("qnl2 and reflection are defined for r_cut = 2");
  if (qnl && K > 0 && K < 3) throw ConfigurationError("finite qnl2 needs K >= 3");
  if (kappa < 0 || (kappa != 0 && scheme != Scheme1D::stabilized_qnl))
    throw ConfigurationError("kappa is only used by stabilized_qnl and must be >= 0");
  if (!nodes.empty()) {
    if (nodes.front() != -N || nodes.back() != N || !std::is_sorted(nodes.begin(), nodes.end()) ||
        std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
      throw ConfigurationError("mesh nodes must be strictly increasing from -N to N");
  }
}

// ---------------------------------------------------------------------------

namespace {

SiteForm diff(int xi, int rho) { return {{xi + rho, 1.0}, {xi, -1.0}}; }

SiteForm scaled(SiteForm f, double s) {
  for (auto& t : f) t.second *= s;
  return f;
}

SiteForm combine(const SiteForm& a, const SiteForm& b, double sb) {
  SiteForm out = a;
  for (auto [s, c] : b) {
    auto it = std::find_if(out.begin(), out.end(), [&](auto& t) { return t.first == s; });
    if (it != out.end()) it->second += sb * c; else out.emplace_back(s, sb * c);
  }
  std::erase_if(out, [](auto& t) { return t.second == 0.0; });
  return out;
}

std::vector<int> node_list(const ChainModelSpec& spec) {
  if (!spec.nodes.empty()) return spec.nodes;
  std::vector<int> n;
  for (int x = -spec.N; x <= spec.N; ++x) n.push_back(x);
  return n;
}

// Length of [a, b] inside the continuum region.
double continuum_overlap(const ChainModelSpec& spec, double a, double b, double xc) {
  auto clip = [](double lo, double hi) { return std::max(0.0, hi - lo); };
  if (spec.scheme == Scheme1D::cauchy_born) return b - a;
  if (spec.K == 0) return clip(std::max(a, xc), b);
  return clip(std::max(a, xc), b) + clip(a, std::min(b, -xc));
}

}  // namespace

std::vector<LatticeTerm> chain_terms(const ChainModelSpec& spec) {
  spec.validate();
  const int r = spec.r_cut, N = spec.N, K = spec.K;
  const auto R = stencil_1d(r);
  std::vector<LatticeTerm> terms;

  auto standard = [&](int xi) {
    std::vector<SiteForm> s;
    for (int rho : R) s.push_back(diff(xi, rho));
    return s;
  };
  auto add_site = [&](int xi, double w, std::vector<SiteForm> slots) {
    terms.push_back({w, std::move(slots), xi, false});
  };

  const int lo = -N - r + 1, hi = N + r - 1;
  double xc = 0.0;  // continuum starts at |x| >= xc (shifted by K)
  bool has_continuum = true;

  switch (spec.scheme) {
    case Scheme1D::atomistic:
    case Scheme1D::restricted_atomistic:
      for (int xi = lo; xi <= hi; ++xi) add_site(xi, 1.0, standard(xi));
      has_continuum = false;
      break;
    case Scheme1D::cauchy_born:
      break;
    case Scheme1D::qnl2:
    case Scheme1D::stabilized_qnl: {
      // D~+ = (D_-2, D_-1, D_1, 2 D_1) next to a continuum region on the right,
      // D~- = (2 D_-1, D_-1, D_1, D_2) next to one on the left.
      auto right = [&](int xi, bool printed) {
        return std::vector<SiteForm>{diff(xi, -2), diff(xi, -1), diff(xi, 1),
                                     printed ? scaled(diff(xi, 2), 2.0) : scaled(diff(xi, 1), 2.0)};
      };
      auto left = [&](int xi) {
        return std::vector<SiteForm>{scaled(diff(xi, -1), 2.0), diff(xi, -1), diff(xi, 1), diff(xi, 2)};
      };
      if (K == 0) {
        for (int xi = lo; xi <= -2; ++xi) add_site(xi, 1.0, standard(xi));
        for (int xi = -1; xi <= 0; ++xi) add_site(xi, 1.0, right(xi, false));
        xc = 0.5;
      } else {
        bool printed = spec.right_stencil == RightInterfaceStencil::printed;
        for (int xi = -K; xi <= -K + 1; ++xi) add_site(xi, 1.0, left(xi));
        for (int xi = -K + 2; xi <= K - 2; ++xi) add_site(xi, 1.0, standard(xi));
        for (int xi = K - 1; xi <= K; ++xi) add_site(xi, 1.0, right(xi, printed));
        xc = K + 0.5;
      }
      break;
    }
    case Scheme1D::reflection: {
      // y*(s) = 2 y(P) - y(2P - s) beyond an interface at P.
      auto ystar = [&](int s) -> SiteForm {
        if (K == 0) return s <= 0 ? SiteForm{{s, 1.0}} : SiteForm{{0, 2.0}, {-s, -1.0}};
        if (s > K) return {{K, 2.0}, {2 * K - s, -1.0}};
        if (s < -K) return {{-K, 2.0}, {-2 * K - s, -1.0}};
        return {{s, 1.0}};
      };
      auto reflected = [&](int xi) {
        std::vector<SiteForm> slots;
        for (int rho : R) slots.push_back(combine(ystar(xi + rho), ystar(xi), -1.0));
        return slots;
      };
      int first = K == 0 ? lo : -K, last = K == 0 ? 0 : K;
      for (int xi = first; xi <= last; ++xi) {
        bool edge = xi == last || (K > 0 && xi == first);
        add_site(xi, edge ? 0.5 : 1.0, reflected(xi));
      }
      xc = K == 0 ? 0.0 : K;
      break;
    }
  }

  if (has_continuum) {
    auto nodes = node_list(spec);
    for (size_t e = 0; e + 1 < nodes.size(); ++e) {
      int a = nodes[e], b = nodes[e + 1];
      double w = continuum_overlap(spec, a, b, xc);
      if (w <= 0) continue;
      double h = b - a;
      std::vector<SiteForm> slots;
      for (int rho : R) slots.push_back({{b, rho / h}, {a, -rho / h}});
      terms.push_back({w, std::move(slots), a, true});
    }
  }
  return terms;
}

// ---------------------------------------------------------------------------

Affine ChainModel::y_at(int site) const {
  const int N = spec.N;
  if (site <= -N || site >= N) return Affine::constant(spec.F * site);
  auto it = dof_of_node.find(site);
  if (it != dof_of_node.end()) return Affine::dof(it->second);
  auto up = std::upper_bound(nodes.begin(), nodes.end(), site);
  int b = *up, a = *(up - 1);
  double t = double(site - a) / (b - a);
  return (1 - t) * y_at(a) + t * y_at(b);
}

Vec ChainModel::positions() const {
  Vec x(ndof());
  for (auto [node, i] : dof_of_node) x[i] = node;
  return x;
}

Vec ChainModel::homogeneous(double F) const { return F * positions(); }

Vec ChainModel::force_vector(const std::function<double(int)>& f) const {
  Vec g = Vec::Zero(ndof());
  for (int s = -spec.N + 1; s < spec.N; ++s) {
    double fs = f(s);
    for (auto [i, c] : y_at(s).lin) g[i] += fs * c;
  }
  return g;
}

ChainModel build_chain_model(const ChainModelSpec& spec) {
  spec.validate();
  auto nodes = node_list(spec);
  std::map<int, int> dofs;
  for (int x : nodes)
    if (std::abs(x) < spec.N) dofs.emplace(x, static_cast<int>(dofs.size()));
  const int n = static_cast<int>(dofs.size());

  Vec ref = spec.F * homogeneous_map_1d(spec.r_cut).col(0);
  ChainModel model{spec, nodes, dofs, StencilEnergy(spec.potential, n, ref), SymQuadForm(n, "gram"),
                   SymQuadForm(n, "stabilizer")};

  auto to_affine = [&](const SiteForm& f) {
    Affine a;
    for (auto [s, c] : f) a += c * model.y_at(s);
    return a;
  };
  for (const auto& t : chain_terms(spec)) {
    StencilTerm st{t.weight, {}};
    for (const auto& s : t.slots) st.slots.push_back(to_affine(s));
    model.energy.add_term(std::move(st));
  }

  for (size_t e = 0; e + 1 < nodes.size(); ++e) {
    Affine d = model.y_at(nodes[e + 1]) - model.y_at(nodes[e]);
    model.gram.add_square(d.lin, 1.0 / (nodes[e + 1] - nodes[e]));
  }

  if (spec.scheme == Scheme1D::stabilized_qnl) {
    // Second differences over the interface band of each interface.
    std::vector<int> etas;
    const int band = 2 * spec.r_cut - 1;  // from xi1 - 2 r + 2 to 0 with xi1 = -1
    if (spec.K == 0) {
      for (int e = -band; e <= 0; ++e) etas.push_back(e);
    } else {
      for (int e = spec.K - band; e <= spec.K; ++e) {
        etas.push_back(e);
        etas.push_back(-e);
      }
    }
    for (int eta : etas) {
      Affine d2 = model.y_at(eta + 1) - 2.0 * model.y_at(eta) + model.y_at(eta - 1);
      model.stabilizer.add_square(d2.lin, 1.0);
    }
    if (spec.kappa > 0) model.energy.add_quadratic(model.stabilizer, spec.kappa, model.homogeneous(spec.F));
  }
  return model;
}

SymQuadForm assemble_hessian_1d(const ChainModelSpec& spec) {
  ChainModel m = build_chain_model(spec);
  SymQuadForm H = m.energy.hessian(m.homogeneous(spec.F));
  H.set_label(to_string(spec.scheme));
  return H;
}

double ghost_force_residual_1d(const ChainModelSpec& spec) {
  ChainModel m = build_chain_model(spec);
  Vec g = m.energy.gradient(m.homogeneous(spec.F));
  double r = 0;
  for (auto [node, i] : m.dof_of_node)
    if (std::abs(node) <= spec.N - 2 * spec.r_cut) r = std::max(r, std::abs(g[i]));
  return r;
}

SymQuadForm gram_1d(const ChainModelSpec& spec) { return build_chain_model(spec).gram; }

std::pair<double, Vec> energy_gradient_1d(const ChainModel& model, const Vec& y,
                                          const std::function<double(int)>& f) {
  if (y.size() != model.ndof()) throw std::invalid_argument("deformation has wrong length");
  double prev = model.y_at(model.nodes.front()).eval(y);
  for (size_t k = 1; k < model.nodes.size(); ++k) {
    double cur = model.y_at(model.nodes[k]).eval(y);
    if (!(cur > prev)) throw InvalidDeformationError("deformation is not strictly increasing");
    prev = cur;
  }
  Vec fv = model.force_vector(f);
  return {model.energy.energy(y) - fv.dot(y), model.energy.gradient(y) - fv};
}

SymQuadForm assemble_stabilizer_1d(int N, int xi1, int r_cut) {
  if (xi1 > 0) throw ConfigurationError("xi1 must be <= 0");
  SymQuadForm S(2 * N - 1, "stabilizer");
  auto idx = [&](int x) { return x + N - 1; };
  for (int eta = xi1 - 2 * r_cut + 2; eta <= 0; ++eta) {
    LinearForm l;
    for (auto [x, c] : {std::pair{eta + 1, 1.0}, {eta, -2.0}, {eta - 1, 1.0}})
      if (std::abs(x) < N) l.emplace_back(idx(x), c);
    S.add_square(l, 1.0);
  }
  return S;
}

// ---------------------------------------------------------------------------

namespace {

// Bond coefficients of a translation-invariant site form: bond b joins b and b+1.
std::map<int, double> to_bonds(const SiteForm& f) {
  std::map<int, double> e;
  if (f.empty()) return e;
  int smin = f.front().first, smax = smin;
  for (auto [s, c] : f) {
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  for (int b = smin; b < smax; ++b) {
    double v = 0;
    for (auto [s, c] : f)
      if (s > b) v += c;
    if (v != 0) e[b] = v;
  }
  return e;
}

Vec homogeneous_stencil(const LatticeTerm& t, double F) {
  Vec g(t.slots.size());
  for (size_t a = 0; a < t.slots.size(); ++a) {
    double v = 0;
    for (auto [s, c] : t.slots[a]) v += c * F * s;
    g[a] = v;
  }
  return g;
}

}  // namespace

std::map<std::pair<int, int>, double> bond_form_1d(const ChainModelSpec& spec) {
  if (!spec.nodes.empty()) throw ConfigurationError("bond decomposition needs lattice resolution");
  std::map<std::pair<int, int>, double> Q;
  for (const auto& t : chain_terms(spec)) {
    Mat Vh = spec.potential->eval(homogeneous_stencil(t, spec.F)).hessian;
    std::vector<std::map<int, double>> rows;
    for (const auto& s : t.slots) rows.push_back(to_bonds(s));
    for (size_t a = 0; a < rows.size(); ++a)
      for (size_t b = 0; b < rows.size(); ++b) {
        double h = t.weight * Vh(a, b);
        if (h == 0) continue;
        for (auto [i, ci] : rows[a])
          for (auto [j, cj] : rows[b]) Q[{i, j}] += h * ci * cj;
      }
  }
  return Q;
}

StrainGradientForm1D strain_gradient_decompose_1d(const ChainModelSpec& spec) {
  auto Q = bond_form_1d(spec);
  StrainGradientForm1D out;
  out.cj.resize(2 * spec.r_cut - 1);
  for (const auto& [ij, v] : Q) {
    auto [i, j] = ij;
    out.c0[i] += v;
    if (j < i) {
      if (i - j > static_cast<int>(out.cj.size()))
        throw std::logic_error("bond coupling exceeds the interaction range");
      out.cj[i - j - 1][i] = -v;
    }
  }
  return out;
}

PowerForm1D power_decompose_1d(const ChainModelSpec& spec) {
  auto Q = bond_form_1d(spec);
  auto q = [&](int i, int j) {
    auto it = Q.find({i, j});
    return it == Q.end() ? 0.0 : it->second;
  };
  int bmin = INT32_MAX, bmax = INT32_MIN;
  for (const auto& [ij, v] : Q) {
    bmin = std::min(bmin, ij.first);
    bmax = std::max(bmax, ij.first);
  }
  // Forward binomial vectors e_k (length k) on bonds x .. x+k-1.
  const std::vector<std::vector<double>> v = {{1}, {-1, 1}, {1, -2, 1}, {-1, 3, -3, 1}};
  std::vector<std::map<int, double>> coef(4);
  auto get = [&](int k, int x) {
    auto it = coef[k].find(x);
    return it == coef[k].end() ? 0.0 : it->second;
  };
  for (int b = bmin; b <= bmax; ++b)
    for (int o = 3; o >= 0; --o) {
      double known = 0;
      for (int k = o; k < 4; ++k)  // order index k has length k+1
        for (int x = b + o - k; x <= b; ++x) {
          if (k == o && x == b) continue;
          known += get(k, x) * v[k][b - x] * v[k][b + o - x];
        }
      coef[o][b] = (q(b, b + o) - known) / (v[o][0] * v[o][o]);
    }
  // Shift to the centred convention and keep the interior where the recursion is exact.
  PowerForm1D out;
  for (int b = bmin + 4; b <= bmax - 4; ++b) {
    out.A[b] = get(0, b);
    out.B[b + 1] = get(1, b);
    out.C[b + 1] = get(2, b);
    out.D[b + 2] = get(3, b);
  }
  return out;
}

SymQuadForm reconstruct_from_strain_gradient(const StrainGradientForm1D& form, int N) {
  SymQuadForm H(2 * N - 1, "reconstructed");
  auto bond = [&](int b) {
    LinearForm l;
    if (std::abs(b + 1) < N) l.emplace_back(b + 1 + N - 1, 1.0);
    if (std::abs(b) < N) l.emplace_back(b + N - 1, -1.0);
    return l;
  };
  for (auto [b, c] : form.c0) H.add_square(bond(b), c);
  for (size_t k = 0; k < form.cj.size(); ++k)
    for (auto [b, c] : form.cj[k]) {
      LinearForm l = bond(b);
      for (auto [i, a] : bond(b - static_cast<int>(k) - 1)) l.emplace_back(i, -a);
      H.add_square(l, c);
    }
  return H;
}

// ---------------------------------------------------------------------------

std::map<int, Mat> effective_site_hessians(const ChainModelSpec& spec) {
  const int r = spec.r_cut;
  const auto R = stencil_1d(r);
  std::map<int, Mat> out;
  for (const auto& t : chain_terms(spec)) {
    if (t.element) continue;
    Mat B = Mat::Zero(t.slots.size(), R.size());
    for (size_t a = 0; a < t.slots.size(); ++a)
      for (auto [s, c] : t.slots[a]) {
        if (s == t.site) continue;
        int rho = s - t.site;
        if (std::abs(rho) > r) throw std::logic_error("slot reaches outside the site stencil");
        B(a, slot_1d(rho, r)) += c;
      }
    Mat Vh = spec.potential->eval(homogeneous_stencil(t, spec.F)).hessian;
    Mat eff = t.weight * B.transpose() * Vh * B;
    auto it = out.find(t.site);
    if (it == out.end()) out.emplace(t.site, eff); else it->second += eff;
  }
  return out;
}

double kappa0_bound_between(const std::map<int, Mat>& a, const std::map<int, Mat>& b, int r_cut) {
  const auto R = stencil_1d(r_cut);
  const int d = static_cast<int>(R.size());
  Mat sup = Mat::Zero(d, d);
  std::set<int> sites;
  for (const auto& [s, m] : a) sites.insert(s);
  for (const auto& [s, m] : b) sites.insert(s);
  for (int s : sites) {
    Mat ma = a.count(s) ? a.at(s) : Mat::Zero(d, d);
    Mat mb = b.count(s) ? b.at(s) : Mat::Zero(d, d);
    sup = sup.cwiseMax((ma - mb).cwiseAbs());
  }
  double bound = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double ri = std::abs(R[i]), rj = std::abs(R[j]);
      bound += (ri + rj) * (ri + rj) * ri * rj * sup(i, j);
    }
  return bound;
}

double kappa0_bound(const PotentialPtr& potential, const std::vector<double>& F_set) {
  double best = 0;
  for (double F : F_set) {
    ChainModelSpec s;
    s.potential = potential;
    s.F = F;
    s.N = 12;
    s.scheme = Scheme1D::qnl2;
    auto q = effective_site_hessians(s);
    s.scheme = Scheme1D::reflection;
    auto r = effective_site_hessians(s);
    // Deep atomistic sites agree; compare the interface band only.
    std::map<int, Mat> qa, ra;
    for (int x = -4; x <= 0; ++x) {
      if (q.count(x)) qa[x] = q[x];
      if (r.count(x)) ra[x] = r[x];
    }
    best = std::max(best, kappa0_bound_between(qa, ra, s.r_cut));
  }
  return best;
}

}  // namespace qnl
