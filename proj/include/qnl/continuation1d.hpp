#pragma once

#include "qnl/models1d.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace qnl {

struct InvalidExponentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SolveFailure : std::runtime_error {
  SolveFailure(const std::string& what, Vec last) : std::runtime_error(what), last_iterate(std::move(last)) {}
  Vec last_iterate;
};

struct ImmediateInstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GradedMesh1D {
  int N = 0;
  int K = 0;
  double alpha = 0;
  std::vector<int> nodes;  // -N .. N, unit spacing on [-K-1, K+1]
};

/// K = ceil(N^((alpha-1/2)/(alpha+1/2))), h(x) ~ (|x|/K)^(2(alpha+1)/3) beyond K.
GradedMesh1D build_graded_mesh(int N, double alpha);

/// f(xi) = beta (1 + xi^2)^(-(alpha+1)/2)
struct LoadCase {
  double alpha = 1.5;
  double beta = 0.0;
  double operator()(int xi) const;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// Equilibrium of the model energy minus sum f y, started from y0.
Vec newton_solve(const ChainModel& model, const LoadCase& load, const Vec& y0,
                 const NewtonOptions& opt = {}, int* iterations = nullptr);

struct ContinuationStep {
  double F;
  Vec y;
  double lambda_min;
};

struct ContinuationResult {
  std::vector<ContinuationStep> steps;
  double critical_strain = 0;
  double bracket_lo = 0, bracket_hi = 0;
  int dofs = 0;
  double path_constant = 0;  // max |y_{F+dF} - y_F|_inf / dF over accepted steps
};

struct ContinuationOptions {
  double F_start = 1.0;
  double dF = 1e-2;
  double tol_F = 1e-4;
  double F_max = 3.0;
  NewtonOptions newton;
};

/// spec.F is ignored; the path starts at opt.F_start.
ContinuationResult critical_strain(const ChainModelSpec& spec, const LoadCase& load,
                                   const ContinuationOptions& opt = {});

/// The finite-geometry model used in the convergence study at size N.
ChainModelSpec study_spec(Scheme1D scheme, const PotentialPtr& V, int N, double alpha, double kappa);

struct StudyRow {
  std::string scheme;
  int N;
  int dofs;
  double F_crit;
  double rel_error;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  double F_ref;
  double fit_exponent;
};

/// Least-squares fit F(N) = F* + c N^-q; returns (F*, c, q).
std::array<double, 3> extrapolate(const std::vector<int>& N, const std::vector<double>& F);

StudyResult convergence_study(const std::vector<Scheme1D>& schemes, const std::vector<int>& N_list,
                              const PotentialPtr& V, const LoadCase& load, double kappa,
                              const ContinuationOptions& opt = {}, int jobs = 1);

}  // namespace qnl
