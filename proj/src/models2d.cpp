#include "qnl/models2d.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace qnl {

namespace {

int m6(int i) { return ((i % 6) + 6) % 6; }  // 0-based slot from any integer

}  // namespace

InterfaceScheme InterfaceScheme::cauchy_born() {
  InterfaceScheme s;
  s.kind = Scheme2D::cauchy_born;
  return s;
}

InterfaceScheme InterfaceScheme::qce() {
  InterfaceScheme s;
  s.kind = Scheme2D::qce;
  return s;
}

InterfaceScheme InterfaceScheme::grac(const std::array<double, 6>& lambda) {
  InterfaceScheme s;
  s.kind = Scheme2D::grac;
  s.lambda = lambda;
  return s;
}

InterfaceScheme InterfaceScheme::grac23() {
  InterfaceScheme s = grac({0, 1.0 / 3, 1.0 / 3, 0, 0, 0});
  s.kind = Scheme2D::grac23;
  return s;
}

InterfaceScheme InterfaceScheme::lrf() {
  InterfaceScheme s;
  s.kind = Scheme2D::lrf;
  return s;
}

InterfaceScheme InterfaceScheme::gen_grac(std::vector<double> w, std::vector<Mat> C) {
  check_gen_grac(w, C);
  InterfaceScheme s;
  s.kind = Scheme2D::gen_grac;
  s.weights = std::move(w);
  s.matrices = std::move(C);
  return s;
}

InterfaceScheme InterfaceScheme::stabilized(Stabilizer2D st, double kappa) const {
  if (kappa < 0) throw std::invalid_argument("kappa must be >= 0");
  InterfaceScheme s = *this;
  s.stabilizer = st;
  s.kappa = kappa;
  return s;
}

std::string InterfaceScheme::name() const {
  std::ostringstream os;
  switch (kind) {
    case Scheme2D::atomistic: os << "atomistic"; break;
    case Scheme2D::cauchy_born: os << "cauchy_born"; break;
    case Scheme2D::qce: os << "qce"; break;
    case Scheme2D::grac23: os << "grac23"; break;
    case Scheme2D::lrf: os << "lrf"; break;
    case Scheme2D::gen_grac: os << "gen_grac"; break;
    case Scheme2D::grac:
      os << "grac(";
      for (int i = 0; i < 6; ++i) os << (i ? "," : "") << lambda[i];
      os << ")";
      break;
  }
  if (stabilizer == Stabilizer2D::lrf_s) os << "+s(" << kappa << ")";
  if (stabilizer == Stabilizer2D::second_differences) os << "+S(" << kappa << ")";
  return os.str();
}

InterfaceScheme parse_scheme_2d(const std::string& s) {
  if (s == "atomistic") return InterfaceScheme::atomistic();
  if (s == "cauchy_born" || s == "cb") return InterfaceScheme::cauchy_born();
  if (s == "qce") return InterfaceScheme::qce();
  if (s == "grac23") return InterfaceScheme::grac23();
  if (s == "lrf") return InterfaceScheme::lrf();
  auto open = s.find('(');
  if (open != std::string::npos && s.back() == ')') {
    double k = std::stod(s.substr(open + 1, s.size() - open - 2));
    std::string base = s.substr(0, open);
    if (base == "lrf+s") return InterfaceScheme::lrf().stabilized(Stabilizer2D::lrf_s, k);
    if (base == "grac23+S") return InterfaceScheme::grac23().stabilized(Stabilizer2D::second_differences, k);
    if (base == "grac") return InterfaceScheme::grac({0, k, k, 0, 0, 0});
  }
  throw std::invalid_argument("unknown 2D scheme '" + s + "'");
}

// ---------------------------------------------------------------------------

Mat triangle_map(int k) {
  Mat C = Mat::Zero(6, 6);
  int a = m6(k - 1), b = m6(k);
  C(a, a) = 1;
  C(b, b) = 1;
  C(m6(k + 1), b) = 1;
  C(m6(k + 1), a) = -1;
  C(m6(k + 2), a) = -1;
  C(m6(k + 3), b) = -1;
  C(m6(k + 4), a) = 1;
  C(m6(k + 4), b) = -1;
  return C;
}

std::pair<std::vector<double>, std::vector<Mat>> interface_family(const InterfaceScheme& s) {
  switch (s.kind) {
    case Scheme2D::qce:
      return {{1.0}, {Mat::Identity(6, 6)}};
    case Scheme2D::grac:
    case Scheme2D::grac23: {
      Mat C = Mat::Zero(6, 6);
      for (int i = 0; i < 6; ++i) {
        C(i, m6(i - 1)) += s.lambda[i];
        C(i, i) += 1 - s.lambda[i];
        C(i, m6(i + 1)) += s.lambda[i];
      }
      return {{1.0}, {C}};
    }
    case Scheme2D::lrf: {
      // D~_2 = -D_5, D~_3 = -D_6; plus the three continuum triangles above the site.
      Mat R = Mat::Identity(6, 6);
      R(1, 1) = 0;
      R(1, 4) = -1;
      R(2, 2) = 0;
      R(2, 5) = -1;
      return {{0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6}, {R, triangle_map(1), triangle_map(2), triangle_map(3)}};
    }
    case Scheme2D::gen_grac:
      return {s.weights, s.matrices};
    default:
      throw std::invalid_argument("scheme has no interface family");
  }
}

void check_gen_grac(const std::vector<double>& w, const std::vector<Mat>& C, double tol) {
  if (w.empty() || w.size() != C.size()) throw ConsistencyError("gen_grac needs matching weights and matrices");
  double sum = 0;
  for (double x : w) sum += x;
  if (std::abs(sum - 1) > tol) throw ConsistencyError("gen_grac weights must sum to 1");
  Mat P = homogeneous_map_2d();
  for (const Mat& c : C) {
    if (c.rows() != 6 || c.cols() != 6) throw ConsistencyError("gen_grac matrices must be 6 x 6");
    if ((c * P - P).cwiseAbs().maxCoeff() > tol)
      throw ConsistencyError("gen_grac matrix does not fix homogeneous stencils");
  }
}

// ---------------------------------------------------------------------------

namespace {

std::array<SiteForm2D, 6> mapped_slots(const Mat& C, const Site& xi) {
  std::array<SiteForm2D, 6> slots;
  for (int j = 0; j < 6; ++j) {
    double centre = 0;
    for (int i = 0; i < 6; ++i)
      if (C(j, i) != 0) {
        slots[j].emplace_back(xi + offset(i + 1), C(j, i));
        centre -= C(j, i);
      }
    if (centre != 0) slots[j].emplace_back(xi, centre);
  }
  return slots;
}

}  // namespace

std::vector<LatticeTerm2D> scheme_terms_2d(const InterfaceScheme& s, const StripDomain2D& d) {
  std::vector<LatticeTerm2D> terms;
  const Mat I = Mat::Identity(6, 6);
  auto add = [&](double w, const Mat& C, const Site& xi) { terms.push_back({w, mapped_slots(C, xi), xi}); };

  if (s.kind == Scheme2D::atomistic) {
    for (const Site& xi : active_sites(d)) add(1.0, I, xi);
    return terms;
  }
  if (s.kind == Scheme2D::cauchy_born) {
    for (const Triangle& t : active_triangles(d)) add(0.5, triangle_map(t.k), t.base);
    return terms;
  }
  auto [w, C] = interface_family(s);
  for (const Site& xi : active_sites(d)) {
    if (xi.n < 0) add(1.0, I, xi);
    if (xi.n == 0)
      for (size_t l = 0; l < w.size(); ++l) add(w[l], C[l], xi);
  }
  for (const Triangle& t : active_triangles(d)) {
    int nc = 0;
    for (const Site& v : t.vertices()) nc += v.n > 0;
    if (nc > 0) add(nc / 6.0, triangle_map(t.k), t.base);
  }
  return terms;
}

// ---------------------------------------------------------------------------

Vec Model2D::homogeneous() const { return Vec::Zero(domain.ndof()); }

namespace {

int ncomp_of(const PotentialPtr& V) {
  if (V->arity() == 6) return 1;
  if (V->arity() == 12) return 2;
  throw ArityError("2D potentials need 6 (scalar) or 12 (vectorial) slots");
}

Vec homogeneous_stencil(const Mat& F) {
  Mat P = homogeneous_map_2d();
  Mat G = F * P.transpose();  // ncomp x 6
  Vec g(G.size());
  for (int j = 0; j < 6; ++j)
    for (int c = 0; c < G.rows(); ++c) g[G.rows() * j + c] = G(c, j);
  return g;
}

std::vector<Site> row_sites(const StripDomain2D& d, int n) {
  std::vector<Site> out;
  for (const Site& s : active_sites(d, 2))
    if (s.n == n) out.push_back(s);
  return out;
}

}  // namespace

Model2D build_model_2d(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F, const StripDomain2D& d0) {
  StripDomain2D d = d0;
  d.ncomp = ncomp_of(V);
  d.validate();
  if (F.rows() != d.ncomp || F.cols() != 2) throw std::invalid_argument("strain has the wrong shape");
  Model2D model{s, d, F, StencilEnergy(V, d.ndof(), homogeneous_stencil(F))};

  for (const auto& t : scheme_terms_2d(s, d)) {
    StencilTerm st{t.weight, {}};
    st.slots.resize(6 * d.ncomp);
    for (int j = 0; j < 6; ++j)
      for (int c = 0; c < d.ncomp; ++c) {
        Affine a;
        for (auto [site, coef] : t.slots[j]) {
          a.c += coef * (F.row(c) * position(site))(0);
          int k = d.index(site);
          if (k >= 0) a += coef * Affine::dof(d.ncomp * k + c);
        }
        st.slots[d.ncomp * j + c] = std::move(a);
      }
    model.energy.add_term(std::move(st));
  }
  if (s.stabilizer != Stabilizer2D::none && s.kappa > 0)
    model.energy.add_quadratic(stabilizer_form_2d(s, V, d), s.kappa, Vec::Zero(d.ndof()));
  return model;
}

SymQuadForm stabilizer_form_2d(const InterfaceScheme& s, const PotentialPtr& V, const StripDomain2D& d0) {
  StripDomain2D d = d0;
  d.ncomp = ncomp_of(V);
  SymQuadForm S(d.ndof(), "stabilizer");
  for (const Site& xi : row_sites(d, 0))
    for (int c = 0; c < d.ncomp; ++c) {
      if (s.stabilizer == Stabilizer2D::second_differences) {
        for (int i = 1; i <= 6; ++i)
          for (int j = 1; j <= 6; ++j) S.add_square(to_linear(d, second_diff_form(i, j, xi), c), 1.0);
      } else if (s.stabilizer == Stabilizer2D::lrf_s) {
        auto* hq = dynamic_cast<const HexQuadratic2D*>(V.get());
        if (!hq) throw std::invalid_argument("lrf+s needs the hexagonal quadratic potential");
        double scale = (std::abs(hq->a0) + std::abs(hq->a1) + std::abs(hq->a2) + std::abs(hq->a3)) / 6.0;
        for (int i = 1; i <= 6; ++i) S.add_square(to_linear(d, second_diff_form(i, i + 2, xi), c), scale);
      }
    }
  return S;
}

SymQuadForm assemble_hessian_2d(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                                const StripDomain2D& d) {
  Model2D m = build_model_2d(s, V, F, d);
  SymQuadForm H = m.energy.hessian(m.homogeneous());
  H.set_label(s.name());
  return H;
}

double ghost_force_residual(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                            const StripDomain2D& d) {
  Model2D m = build_model_2d(s, V, F, d);
  Vec g = m.energy.gradient(m.homogeneous());
  double r = 0;
  for (int k = 0; k < m.domain.sites(); ++k) {
    Site xi = m.domain.site_of(k);
    if (std::abs(xi.n) > d.N2 - 3 || (!d.periodic && std::abs(xi.m) > d.M - 3)) continue;
    for (int c = 0; c < m.domain.ncomp; ++c) r = std::max(r, std::abs(g[m.domain.ncomp * k + c]));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct SgAccumulator {
  const StripDomain2D& d;
  SgDecomposition2D out;

  void bond(Site xi, int j, double c) {  // |D_j u(xi)|^2
    j = m6(j - 1) + 1;
    if (j > 3) {
      xi = xi + offset(j);
      j -= 3;
    }
    out.bonds[{d.wrap(xi), j}] += c;
  }
  void square(const Site& xi, int p, int q, double c) {  // |D_p D_q u(xi)|^2
    p = m6(p - 1);
    q = m6(q - 1);
    if (p > q) std::swap(p, q);
    auto [it, fresh] = out.X.try_emplace(d.wrap(xi), Mat::Zero(6, 6));
    it->second(p, q) += c;
  }
  // c * D_i u(xi) D_j u(xi), i != j
  void product(const Site& xi, int i, int j, double c) {
    int dij = m6(j - i);
    if (dij > 3) {
      std::swap(i, j);
      dij = 6 - dij;
    }
    if (dij == 1) {
      bond(xi, i, c / 2);
      bond(xi, i + 1, c / 2);
      bond(xi + offset(i), i + 2, -c / 2);
    } else if (dij == 2) {
      bond(xi, i + 1, c / 2);
      bond(xi + offset(i), i + 2, -c / 2);
      bond(xi + offset(i + 1), i + 3, -c / 2);
      square(xi, i, i + 2, c / 2);
    } else {
      bond(xi, i, -c / 2);
      bond(xi, i + 3, -c / 2);
      square(xi, i, i + 3, c / 2);
    }
  }
};

}  // namespace

SgDecomposition2D sg_decompose_terms(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                                     const StripDomain2D& d) {
  if (V->arity() != 6) throw ArityError("strain-gradient decomposition is scalar only");
  SgAccumulator acc{d, {}};
  Vec gF = homogeneous_stencil(F);
  Mat Vh = V->eval(gF).hessian;
  for (const auto& t : scheme_terms_2d(s, d)) {
    // Slot coefficients in the difference coordinates D_i u(centre).
    Mat B = Mat::Zero(6, 6);
    for (int a = 0; a < 6; ++a)
      for (auto [site, c] : t.slots[a]) {
        if (site == t.center) continue;
        Site off = site - t.center;
        int i = -1;
        for (int j = 0; j < 6; ++j)
          if (offset(j + 1) == off) i = j;
        if (i < 0) throw std::logic_error("slot reaches beyond nearest neighbours");
        B(a, i) += c;
      }
    Mat M = t.weight * B.transpose() * Vh * B;
    for (int i = 0; i < 6; ++i) {
      acc.bond(t.center, i + 1, M(i, i));
      for (int j = i + 1; j < 6; ++j)
        if (M(i, j) != 0) acc.product(t.center, i + 1, j + 1, 2 * M(i, j));
    }
  }
  if (s.stabilizer != Stabilizer2D::none && s.kappa > 0) {
    StripDomain2D ds = d;
    ds.ncomp = 1;
    for (const Site& xi : row_sites(ds, 0)) {
      if (s.stabilizer == Stabilizer2D::second_differences) {
        for (int i = 1; i <= 6; ++i)
          for (int j = 1; j <= 6; ++j) acc.square(xi, i, j, s.kappa);
      } else {
        auto* hq = dynamic_cast<const HexQuadratic2D*>(V.get());
        if (!hq) throw std::invalid_argument("lrf+s needs the hexagonal quadratic potential");
        double scale = (std::abs(hq->a0) + std::abs(hq->a1) + std::abs(hq->a2) + std::abs(hq->a3)) / 6.0;
        for (int i = 1; i <= 6; ++i) acc.square(xi, i, i + 2, s.kappa * scale);
      }
    }
  }
  return acc.out;
}

SymQuadForm reconstruct_2d(const SgDecomposition2D& dec, const StripDomain2D& d) {
  SymQuadForm R(d.ndof(), "reconstructed");
  for (const auto& [key, c] : dec.bonds) R.add_square(to_linear(d, diff_form(key.second, key.first)), c);
  for (const auto& [xi, X] : dec.X)
    for (int p = 0; p < 6; ++p)
      for (int q = p; q < 6; ++q)
        if (X(p, q) != 0) R.add_square(to_linear(d, second_diff_form(p + 1, q + 1, xi)), X(p, q));
  return R;
}

InterfaceCoeffs strain_gradient_decompose_2d(const InterfaceScheme& s, const PotentialPtr& V, const Mat& F,
                                             int N2) {
  if (N2 < 6) throw std::invalid_argument("decomposition strip needs N2 >= 6");
  StripDomain2D d{3, N2, true, 1};
  SymQuadForm H = assemble_hessian_2d(s, V, F, d);
  SgDecomposition2D dec = sg_decompose_terms(s, V, F, d);
  SymQuadForm R = reconstruct_2d(dec, d);

  InterfaceCoeffs out;
  SpMat diff = H.matrix() - R.matrix();
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it)
      out.reconstruction_error = std::max(out.reconstruction_error, std::abs(it.value()));
  if (out.reconstruction_error > 1e-10 * (1 + H.max_abs()))
    throw std::logic_error("strain-gradient reconstruction mismatch");

  auto coeff = [&](int n, int j) {
    auto it = dec.bonds.find({Site{0, n}, j});
    return it == dec.bonds.end() ? 0.0 : it->second;
  };
  for (int n = -N2 + 3; n <= N2 - 3; ++n) {
    out.rows[n] = {coeff(n, 1), coeff(n, 2), coeff(n, 3)};
    auto it = dec.X.find(Site{0, n});
    out.sg_forms[n] = it == dec.X.end() ? Mat::Zero(6, 6) : it->second;
  }
  out.c_bulk = out.rows.at(-3);
  for (int m = -1; m <= 1; ++m) out.ctilde1[m + 1] = out.rows.at(m)[0];
  out.gap = out.ctilde1[2] - out.ctilde1[0];
  return out;
}

Mat hex_X(double a2, double a3) {
  Mat X = Mat::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    int p = i, q = m6(i + 2);
    X(std::min(p, q), std::max(p, q)) += a2;
  }
  for (int i = 0; i < 3; ++i) X(i, i + 3) += a3;
  return X;
}

GenGracGap gen_grac_gap(const std::vector<double>& w, const std::vector<Mat>& C, double alpha0, double alpha1) {
  check_gen_grac(w, C);
  InterfaceScheme s = InterfaceScheme::gen_grac(w, C);
  Mat F = Mat::Zero(1, 2);
  auto gap_at = [&](double a0, double a1) {
    auto V = std::make_shared<HexQuadratic2D>(a0, a1, 0.0, 0.0);
    return strain_gradient_decompose_2d(s, V, F).gap;
  };
  double p0 = gap_at(1, 0), p1 = gap_at(0, 1);
  if (std::abs(p0 - p1 - 1) > 1e-9) throw ConsistencyError("gap coefficients violate p0 - p1 = 1");
  return {p0 * alpha0 + p1 * alpha1, p0, p1};
}

KOperators assemble_K_operators(const StripDomain2D& d0, double kappa) {
  StripDomain2D d = d0;
  d.ncomp = 1;
  KOperators K{SymQuadForm(d.ndof(), "K0"), SymQuadForm(d.ndof(), "S"), SymQuadForm(d.ndof(), "Kkappa")};
  for (const Site& xi : row_sites(d, 0)) {
    K.K0.add_product(to_linear(d, second_diff_form(2, 1, xi)), to_linear(d, diff_form(1, xi)), 1.0);
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 6; ++j) K.S.add_square(to_linear(d, second_diff_form(i, j, xi)), 1.0);
  }
  K.Kkappa.add_form(K.K0, 1.0);
  K.Kkappa.add_form(K.S, kappa);
  return K;
}

std::array<SymQuadForm, 3> b_forms(const StripDomain2D& d0) {
  StripDomain2D d = d0;
  d.ncomp = 1;
  std::array<SymQuadForm, 3> B{SymQuadForm(d.ndof(), "B1"), SymQuadForm(d.ndof(), "B2"), SymQuadForm(d.ndof(), "B3")};
  auto combine = [](std::initializer_list<std::pair<SiteForm2D, double>> parts) {
    SiteForm2D f;
    for (const auto& [form, c] : parts)
      for (auto [s, v] : form) f.emplace_back(s, c * v);
    return f;
  };
  for (const Site& xi : active_sites(d, 2)) {
    SiteForm2D alt;
    for (int i = 1; i <= 6; ++i) {
      B[0].add_square(to_linear(d, combine({{diff_form(i + 1, xi), 1}, {diff_form(i - 1, xi), -1},
                                            {diff_form(i + 2, xi), 1}, {diff_form(i - 2, xi), -1}})),
                      1.0 / 12);
      B[1].add_square(to_linear(d, combine({{second_diff_form(i, i + 2, xi), 1}, {second_diff_form(i, i + 4, xi), -1}})),
                      0.25);
      for (auto [s, v] : diff_form(i, xi)) alt.emplace_back(s, (i % 2 ? -1.0 : 1.0) * v);
    }
    B[2].add_square(to_linear(d, alt), 1.0 / 3);
  }
  return B;
}

double hex_symbol(const HexQuadratic2D& V, const Eigen::Vector2d& k) {
  std::complex<double> dv[6];
  for (int j = 0; j < 6; ++j) dv[j] = std::exp(std::complex<double>(0, k.dot(direction(j + 1)))) - 1.0;
  const Mat& H = V.hessian();
  double s = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) s += H(i, j) * (dv[i] * std::conj(dv[j])).real();
  return s;
}

}  // namespace qnl
