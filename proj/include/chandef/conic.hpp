#pragma once
//
// Dense conic optimization over products of complex-Hermitian PSD cones and a
// nonnegative orthant.
//
// The core solver is a primal-dual path-following interior-point method with
// Nesterov-Todd scaling on the homogeneous self-dual embedding, so primal or
// dual infeasibility is detected instead of diverging.  Problems are entered
// in linear-matrix-inequality form,
//
//     minimize cᵀu   subject to   F0_j + Σ_i u_i F_ij ⪰ 0   for each block j,
//                                 A_eq u  = b_eq,
//                                 A_ge u ≥ b_ge,
//
// and converted internally to the standard primal form by adding PSD slacks
// and splitting the free variables.  All computations are deterministic:
// identical inputs produce identical iterate sequences.
//

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chandef/matops.hpp"

namespace chandef::conic {

enum class SolveStatus { kOptimal, kInfeasible, kMaxIter };

struct SolveOptions {
  int max_iter = 200;
  double feas_tol = 1e-9;   // relative primal/dual residual target
  double gap_tol = 1e-9;    // relative complementarity gap target
  double step_frac = 0.98;  // fraction of the distance to the cone boundary
};

struct SdpProblem {
  int nvars = 0;
  RVec objective;  // minimize objectiveᵀu; zero-initialized if empty

  struct Lmi {
    Mat f0;                // constant term
    std::vector<Mat> fi;   // coefficient matrices, one per variable
  };
  std::vector<Lmi> lmis;

  RMat eq_a;  // may be 0×nvars
  RVec eq_b;
  RMat ge_a;  // componentwise A_ge·u ≥ b_ge
  RVec ge_b;

  // Convenience builders.
  static SdpProblem make(int nvars);
  int add_lmi(int dim);                       // F(u) ⪰ 0, coefficients zeroed
  void set_f0(int lmi, const Mat& f0);
  void set_coeff(int lmi, int var, const Mat& fi);
  void add_eq(const RVec& row, double rhs);
  void add_ge(const RVec& row, double rhs);
};

struct SolveResult {
  SolveStatus status = SolveStatus::kMaxIter;
  RVec u;                        // variable values (or dual-infeasibility ray)
  double value = 0.0;            // objectiveᵀu
  double dual_value = 0.0;
  double gap = 0.0;              // |value − dual_value| at termination
  std::vector<Mat> lmi_slacks;   // F_j(u), PSD at optimality
  std::vector<Mat> lmi_duals;    // PSD multipliers Λ_j
  RVec eq_duals;
  RVec ge_duals;                 // nonnegative
  int iterations = 0;
  bool primal_infeasible = false;
  bool dual_infeasible = false;
  std::string message;

  bool ok() const { return status == SolveStatus::kOptimal; }
};

SolveResult solve_sdp(const SdpProblem& prob, const SolveOptions& opts = {});

// ── assembly helpers ─────────────────────────────────────────────────────────
//
// Higher layers build their constraints from affine Hermitian expressions
// F0 + Σ_i u_i F_i.  A Hermitian matrix variable is a contiguous coordinate
// range in the orthonormal basis of its algebra.

struct AffineExpr {
  Mat f0;
  std::vector<std::pair<int, Mat>> terms;  // (variable index, coefficient)
};

// Appends herm_dim(alg) coordinates to the problem and returns their base
// index.  Must be called before any constraint rows or objective entries
// reference the new range.
int add_herm_var(SdpProblem& prob, const BlockAlgebra& alg);

// The expression Σ_s u_{base+s} B_s over hermitian_basis(alg).
AffineExpr herm_var_expr(const BlockAlgebra& alg, int base);
AffineExpr const_expr(const Mat& f0);

// Entry-wise linear transforms of all pieces (partial transpose, kron with a
// fixed factor, partial traces, ...).
AffineExpr map_expr(const AffineExpr& e, const std::function<Mat(const Mat&)>& f);

AffineExpr add_expr(const AffineExpr& a, const AffineExpr& b);
AffineExpr sub_expr(const AffineExpr& a, const AffineExpr& b);
AffineExpr scale_expr(double t, const AffineExpr& e);

// One LMI stating expr ⪰ 0; returns the LMI index.
int add_psd_constraint(SdpProblem& prob, const AffineExpr& expr);

// Equality rows pinning expr to zero, one per basis coordinate of alg.
void add_zero_constraint(SdpProblem& prob, const BlockAlgebra& alg, const AffineExpr& expr);

// Adds Re Tr(W·expr(u)) to the objective (the constant part is returned so
// callers can offset reported values).
double add_trace_objective(SdpProblem& prob, const Mat& w, const AffineExpr& expr);

// Reconstructs the matrix value of a Hermitian variable from a solution.
Mat eval_herm_var(const BlockAlgebra& alg, const RVec& u, int base);

// Pure linear program: minimize cᵀu s.t. A_eq u = b_eq, A_ge u ≥ b_ge.
SolveResult solve_lp(const RVec& c, const RMat& eq_a, const RVec& eq_b,
                     const RMat& ge_a, const RVec& ge_b,
                     const SolveOptions& opts = {});

// ── alternating maximization driver ─────────────────────────────────────────
//
// `round` performs one coordinate-maximization sweep and returns a certified
// value of the objective after the sweep.  Iteration stops when a round
// improves by less than `tol` or after `max_rounds`.  The running maximum is
// reported, so solver roundoff in a late round cannot lower the result.

struct SeesawResult {
  double value = 0.0;
  int rounds = 0;
  std::vector<double> trace;
};

SeesawResult run_seesaw(const std::function<double(int)>& round, int max_rounds,
                        double tol);

// ── multistart search over pure states ──────────────────────────────────────
//
// Maximizes a callable over unit vectors in C^dim: `samples` random draws,
// the best `refine_top` of which (plus any caller-provided seed vectors) are
// polished by projected gradient ascent.  The gradient callback, when given,
// must return g with f(x+δ) ≈ f(x) + Re⟨g,δ⟩; otherwise central differences
// are used.  Deterministic for fixed seed.

struct PureSearchOptions {
  int samples = 100;
  int refine_top = 10;
  int refine_iters = 300;
  double grad_step = 1e-6;  // finite-difference step when no gradient given
};

struct PureSearchResult {
  double value = 0.0;
  CVec state;
};

PureSearchResult pure_state_search(
    int dim, const std::function<double(const CVec&)>& f, std::uint64_t seed,
    const PureSearchOptions& opts = {},
    const std::function<CVec(const CVec&)>& grad = nullptr,
    const std::vector<CVec>& extra_seeds = {});

}  // namespace chandef::conic
