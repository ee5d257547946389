#include "qnl/energy.hpp"

namespace qnl {

double Affine::eval(const Vec& x) const {
  double v = c;
  for (auto [i, a] : lin) v += a * x[i];
  return v;
}

Affine& Affine::operator+=(const Affine& o) {
  for (auto [i, a] : o.lin) {
    bool merged = false;
    for (auto& t : lin)
      if (t.first == i) {
        t.second += a;
        merged = true;
        break;
      }
    if (!merged) lin.emplace_back(i, a);
  }
  c += o.c;
  return *this;
}

Affine& Affine::operator*=(double s) {
  for (auto& t : lin) t.second *= s;
  c *= s;
  return *this;
}

Affine operator+(Affine a, const Affine& b) { return a += b; }
Affine operator-(Affine a, const Affine& b) { return a += -1.0 * b; }
Affine operator*(double s, Affine a) { return a *= s; }

StencilEnergy::StencilEnergy(PotentialPtr V, int ndof, Vec reference_stencil)
    : V_(std::move(V)), ndof_(ndof), vref_(V_->energy(reference_stencil)), force_(Vec::Zero(ndof)) {}

void StencilEnergy::add_term(StencilTerm t) {
  if (static_cast<int>(t.slots.size()) != V_->arity())
    throw ArityError("stencil term does not match potential arity");
  // Drop exact cancellations so the Hessian pattern stays tight.
  for (auto& s : t.slots) std::erase_if(s.lin, [](const auto& p) { return p.second == 0.0; });
  terms_.push_back(std::move(t));
}

void StencilEnergy::add_quadratic(const SymQuadForm& S, double kappa, Vec center) {
  SymQuadForm q(S.dim());
  q.add_form(S, kappa);
  quad_.emplace_back(std::move(q), std::move(center));  // energy kappa/2 <S v, v>, Hessian kappa S
}

Vec StencilEnergy::stencil(const StencilTerm& t, const Vec& x) const {
  Vec g(t.slots.size());
  for (size_t a = 0; a < t.slots.size(); ++a) g[a] = t.slots[a].eval(x);
  return g;
}

double StencilEnergy::energy(const Vec& x) const {
  double e = 0;
  for (const auto& t : terms_) e += t.weight * (V_->energy(stencil(t, x)) - vref_);
  e -= force_.dot(x);
  for (const auto& [S, c] : quad_) e += 0.5 * S.value(x - c);
  return e;
}

Vec StencilEnergy::gradient(const Vec& x) const {
  Vec g = -force_;
  for (const auto& t : terms_) {
    PotentialEval pe = V_->eval(stencil(t, x));
    for (size_t a = 0; a < t.slots.size(); ++a) {
      double ga = t.weight * pe.gradient[a];
      for (auto [i, c] : t.slots[a].lin) g[i] += ga * c;
    }
  }
  for (const auto& [S, c] : quad_) g += S.apply(x - c);
  return g;
}

SymQuadForm StencilEnergy::hessian(const Vec& x) const {
  SymQuadForm H(ndof_);
  std::vector<LinearForm> rows;
  for (const auto& t : terms_) {
    PotentialEval pe = V_->eval(stencil(t, x));
    rows.clear();
    for (const auto& s : t.slots) rows.push_back(s.lin);
    H.add_block(rows, pe.hessian, t.weight);
  }
  for (const auto& [S, c] : quad_) H.add_form(S, 1.0);
  return H;
}

}  // namespace qnl
