#include "qnl/lattice2d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnl {

namespace {
int mod6(int j) { return ((j - 1) % 6 + 6) % 6; }  // 0-based slot of a_j
}  // namespace

Eigen::Vector2d direction(int j) {
  double th = std::numbers::pi / 3 * mod6(j);
  return {std::cos(th), std::sin(th)};
}

Site offset(int j) {
  static const Site o[6] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  return o[mod6(j)];
}

Eigen::Vector2d position(const Site& s) { return s.m * direction(1) + s.n * direction(2); }

void StripDomain2D::validate() const {
  if (M < 1 || N2 < 2) throw std::invalid_argument("strip needs M >= 1 and N2 >= 2");
  if (periodic && M < 3) throw std::invalid_argument("periodic strip needs M >= 3");
  if (ncomp != 1 && ncomp != 2) throw std::invalid_argument("ncomp must be 1 or 2");
}

bool StripDomain2D::clamped(const Site& s) const {
  if (std::abs(s.n) >= N2) return true;
  return !periodic && std::abs(s.m) >= M;
}

Site StripDomain2D::wrap(const Site& s) const {
  if (!periodic) return s;
  int P = 2 * M + 1;
  int m = ((s.m + M) % P + P) % P - M;
  return {m, s.n};
}

int StripDomain2D::index(const Site& s0) const {
  if (clamped(s0)) return -1;
  Site s = wrap(s0);
  int mm = periodic ? s.m + M : s.m + M - 1;
  return (s.n + N2 - 1) * width() + mm;
}

Site StripDomain2D::site_of(int i) const {
  int n = i / width() - N2 + 1;
  int mm = i % width();
  return {periodic ? mm - M : mm - M + 1, n};
}

SiteForm2D diff_form(int j, const Site& xi) { return {{xi + offset(j), 1.0}, {xi, -1.0}}; }

SiteForm2D second_diff_form(int i, int j, const Site& xi) {
  Site ai = offset(i), aj = offset(j);
  return {{xi + ai + aj, 1.0}, {xi + ai, -1.0}, {xi + aj, -1.0}, {xi, 1.0}};
}

double eval_form(const StripDomain2D& d, const Vec& u, const SiteForm2D& f) {
  double v = 0;
  for (auto [s, c] : f) {
    int k = d.index(s);
    if (k >= 0) v += c * u[k];
  }
  return v;
}

double second_diff(const StripDomain2D& d, const Vec& u, int i, int j, const Site& xi) {
  return eval_form(d, u, second_diff_form(i, j, xi));
}

LinearForm to_linear(const StripDomain2D& d, const SiteForm2D& f, int c) {
  LinearForm l;
  for (auto [s, v] : f) {
    int k = d.index(s);
    if (k < 0 || v == 0) continue;
    int dof = d.ncomp * k + c;
    bool merged = false;
    for (auto& t : l)
      if (t.first == dof) {
        t.second += v;
        merged = true;
      }
    if (!merged) l.emplace_back(dof, v);
  }
  return l;
}

std::array<Site, 3> Triangle::vertices() const { return {base, base + offset(k), base + offset(k + 1)}; }

std::vector<Site> active_sites(const StripDomain2D& d, int reach) {
  std::vector<Site> out;
  int mlo = d.periodic ? -d.M : -d.M - reach, mhi = d.periodic ? d.M : d.M + reach;
  for (int n = -d.N2 - reach + 1; n <= d.N2 + reach - 1; ++n)
    for (int m = mlo; m <= mhi; ++m) {
      Site s{m, n};
      bool touches = !d.clamped(s);
      for (int i = 1; i <= 6 && !touches; ++i) {
        touches = !d.clamped(s + offset(i));
        for (int j = 1; reach > 1 && j <= 6 && !touches; ++j) touches = !d.clamped(s + offset(i) + offset(j));
      }
      if (touches) out.push_back(s);
    }
  return out;
}

std::vector<Triangle> active_triangles(const StripDomain2D& d) {
  std::vector<Triangle> out;
  int mlo = d.periodic ? -d.M : -d.M - 1, mhi = d.periodic ? d.M : d.M + 1;
  for (int n = -d.N2; n <= d.N2; ++n)
    for (int m = mlo; m <= mhi; ++m)
      for (int k : {1, 2}) {
        Triangle t{{m, n}, k};
        bool touches = false;
        for (const auto& v : t.vertices()) touches = touches || !d.clamped(v);
        if (touches) out.push_back(t);
      }
  return out;
}

namespace {

SymQuadForm difference_form(const StripDomain2D& d, int jmax, double w, const char* label) {
  d.validate();
  SymQuadForm G(d.ndof(), label);
  for (const Site& s : active_sites(d))
    for (int j = 1; j <= jmax; ++j)
      for (int c = 0; c < d.ncomp; ++c) G.add_square(to_linear(d, diff_form(j, s), c), w);
  return G;
}

}  // namespace

SymQuadForm gram_gradient_2d(const StripDomain2D& d) {
  return difference_form(d, 3, 1.0 / std::sqrt(3.0), "gram");
}

SymQuadForm gram_difference_2d(const StripDomain2D& d) { return difference_form(d, 6, 1.0, "gram_l2"); }

}  // namespace qnl
