#include "chandef/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace chandef::conic {

namespace {

// ── internal standard-form machinery ────────────────────────────────────────
//
// Standard primal form:  min ⟨C,X⟩  s.t.  ⟨A_k,X⟩ = b_k,  X ∈ K,
// K = (⊕_j PSD(d_j)) ⊕ R^ℓ_+.  Elements of K-space are kept both as a list of
// Hermitian matrices plus a real vector, and as their isometric real
// vectorization (diagonal, then √2·(Re,Im) of the upper triangle per block).

struct BV {
  std::vector<Mat> psd;
  RVec lin;
};

struct Dims {
  std::vector<int> psd;
  int nonneg = 0;

  int vec_len() const {
    int n = nonneg;
    for (int d : psd) n += d * d;
    return n;
  }
  double barrier_nu() const {
    double nu = nonneg;
    for (int d : psd) nu += d;
    return nu;
  }
};

BV bv_zero(const Dims& dims) {
  BV v;
  for (int d : dims.psd) v.psd.push_back(Mat::Zero(d, d));
  v.lin = RVec::Zero(dims.nonneg);
  return v;
}

BV bv_identity(const Dims& dims) {
  BV v;
  for (int d : dims.psd) v.psd.push_back(Mat::Identity(d, d));
  v.lin = RVec::Ones(dims.nonneg);
  return v;
}

double bv_inner(const BV& a, const BV& b) {
  double acc = a.lin.dot(b.lin);
  for (size_t j = 0; j < a.psd.size(); ++j)
    acc += std::real((a.psd[j] * b.psd[j]).trace());
  return acc;
}

void svec_into(const Mat& h, double* out) {
  const int d = static_cast<int>(h.rows());
  const double rt2 = std::sqrt(2.0);
  int t = 0;
  for (int i = 0; i < d; ++i) out[t++] = std::real(h(i, i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      out[t++] = rt2 * std::real(h(i, j));
      out[t++] = rt2 * std::imag(h(i, j));
    }
}

Mat unsvec(const double* in, int d) {
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  Mat h(d, d);
  int t = 0;
  for (int i = 0; i < d; ++i) h(i, i) = in[t++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double re = in[t++] * inv_rt2;
      const double im = in[t++] * inv_rt2;
      h(i, j) = Cx(re, im);
      h(j, i) = Cx(re, -im);
    }
  return h;
}

RVec bv_to_vec(const Dims& dims, const BV& v) {
  RVec out(dims.vec_len());
  int off = 0;
  for (size_t j = 0; j < v.psd.size(); ++j) {
    svec_into(v.psd[j], out.data() + off);
    off += dims.psd[j] * dims.psd[j];
  }
  out.segment(off, dims.nonneg) = v.lin;
  return out;
}

BV vec_to_bv(const Dims& dims, const RVec& x) {
  BV v;
  int off = 0;
  for (int d : dims.psd) {
    v.psd.push_back(unsvec(x.data() + off, d));
    off += d * d;
  }
  v.lin = x.segment(off, dims.nonneg);
  return v;
}

// Nesterov-Todd scaling point per cone component: W S W = X.
struct Scaling {
  std::vector<Mat> w;     // per PSD block
  RVec w_lin;             // per orthant coordinate, w_i = √(x_i/s_i)
};

Mat herm_sym(const Mat& m) { return 0.5 * (m + m.adjoint()); }

Mat mat_power(const Mat& h, double p, double floor_eps) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_sym(h));
  Mat out = Mat::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double lam = std::max(es.eigenvalues()(i), floor_eps);
    out += std::pow(lam, p) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return herm_sym(out);
}

Scaling nt_scaling(const Dims& dims, const BV& x, const BV& s) {
  Scaling sc;
  for (size_t j = 0; j < x.psd.size(); ++j) {
    // W = X^{1/2} (X^{1/2} S X^{1/2})^{-1/2} X^{1/2}
    const Mat xh = mat_power(x.psd[j], 0.5, 1e-300);
    const Mat mid = mat_power(xh * s.psd[j] * xh, -0.5, 1e-300);
    sc.w.push_back(herm_sym(xh * mid * xh));
  }
  sc.w_lin = RVec(dims.nonneg);
  for (int i = 0; i < dims.nonneg; ++i)
    sc.w_lin(i) = std::sqrt(std::max(x.lin(i), 1e-300) / std::max(s.lin(i), 1e-300));
  return sc;
}

BV sandwich(const Scaling& sc, const BV& v) {
  BV out;
  out.psd.reserve(v.psd.size());
  for (size_t j = 0; j < v.psd.size(); ++j)
    out.psd.push_back(herm_sym(sc.w[j] * v.psd[j] * sc.w[j]));
  out.lin = sc.w_lin.array().square() * v.lin.array();
  return out;
}

BV bv_inverse(const BV& v, const Dims& dims) {
  BV out;
  for (const Mat& m : v.psd) out.psd.push_back(mat_power(m, -1.0, 1e-300));
  out.lin = RVec(dims.nonneg);
  for (int i = 0; i < dims.nonneg; ++i) out.lin(i) = 1.0 / v.lin(i);
  return out;
}

// Largest α with v + α·dv remaining in the (closed) cone; +∞ if unbounded.
double max_cone_step(const BV& v, const BV& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < v.psd.size(); ++j) {
    Eigen::LLT<Mat> llt(v.psd[j]);
    Mat n;
    if (llt.info() == Eigen::Success) {
      const Mat l = llt.matrixL();
      n = l.triangularView<Eigen::Lower>().solve(dv.psd[j]);
      n = l.triangularView<Eigen::Lower>().solve(n.adjoint()).adjoint();
    } else {
      const Mat xinv = mat_power(v.psd[j], -1.0, 1e-30);
      n = herm_sym(mat_power(xinv, 0.5, 0.0) * dv.psd[j] * mat_power(xinv, 0.5, 0.0));
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(herm_sym(n));
    const double lam_min = es.eigenvalues()(0);
    if (lam_min < -1e-16) alpha = std::min(alpha, -1.0 / lam_min);
  }
  for (Eigen::Index i = 0; i < v.lin.size(); ++i)
    if (dv.lin(i) < -1e-300) alpha = std::min(alpha, -v.lin(i) / dv.lin(i));
  return alpha;
}

struct CoreProblem {
  Dims dims;
  RMat a;   // m × N
  RVec b;   // m
  BV c;
  RVec c_vec;
};

struct CoreResult {
  SolveStatus status = SolveStatus::kMaxIter;
  BV x, s;
  RVec y;
  double pobj = 0.0, dobj = 0.0, gap = 0.0;
  int iterations = 0;
  bool primal_infeasible = false, dual_infeasible = false;
  std::string message;
};

struct Direction {
  BV dx, ds;
  RVec dy;
  double dtau = 0.0, dkappa = 0.0;
};

CoreResult solve_core(const CoreProblem& pr, const SolveOptions& opts) {
  const Dims& dims = pr.dims;
  const int m = static_cast<int>(pr.b.size());
  const int nvec = dims.vec_len();
  const double nu = dims.barrier_nu();
  const double norm_b = 1.0 + pr.b.norm();
  const double norm_c = 1.0 + pr.c_vec.norm();

  BV x = bv_identity(dims), s = bv_identity(dims);
  RVec y = RVec::Zero(m);
  double tau = 1.0, kappa = 1.0;

  CoreResult res;

  auto lin_solve = [&](Eigen::LLT<RMat>& llt, const RMat& mm, const RVec& rhs) -> RVec {
    if (llt.info() == Eigen::Success) return llt.solve(rhs);
    // fall back to a regularized pivoted solve for degenerate row sets
    RMat reg = mm;
    reg.diagonal().array() += 1e-12 * (1.0 + mm.trace() / std::max(1, m));
    return reg.ldlt().solve(rhs);
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    res.iterations = iter;

    const RVec x_vec = bv_to_vec(dims, x);
    const RVec ax = pr.a * x_vec;
    const RVec r_p = ax - pr.b * tau;

    const RVec aty_vec = pr.a.transpose() * y;
    const BV aty = vec_to_bv(dims, aty_vec);
    BV r_d = bv_zero(dims);
    for (size_t j = 0; j < r_d.psd.size(); ++j)
      r_d.psd[j] = -aty.psd[j] + tau * pr.c.psd[j] - s.psd[j];
    r_d.lin = -aty.lin + tau * pr.c.lin - s.lin;

    const double cx = bv_inner(pr.c, x);
    const double by = pr.b.dot(y);
    const double r_g = by - cx - kappa;
    const double xs = bv_inner(x, s);
    const double mu = (xs + tau * kappa) / (nu + 1.0);

    // convergence / infeasibility tests
    const double pres = r_p.norm() / (tau * norm_b);
    const double dres = bv_to_vec(dims, r_d).norm() / (tau * norm_c);
    const double pobj = cx / tau, dobj = by / tau;
    const double relgap = xs / (tau * tau) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (pres <= opts.feas_tol && dres <= opts.feas_tol && relgap <= opts.gap_tol) {
      res.status = SolveStatus::kOptimal;
      for (Mat& mm : x.psd) mm /= tau;
      x.lin /= tau;
      for (Mat& mm : s.psd) mm /= tau;
      s.lin /= tau;
      res.x = x;
      res.s = s;
      res.y = y / tau;
      res.pobj = pobj;
      res.dobj = dobj;
      res.gap = std::abs(pobj - dobj);
      return res;
    }

    if (tau <= 1e-9 * std::max(1.0, kappa)) {
      // the embedding converged to a ray: classify the infeasibility
      const double pi_res = (by > 1e-14) ? bv_to_vec(dims, r_d).norm() / by : 1e30;
      const double di_res = (cx < -1e-14) ? ax.norm() / (-cx) : 1e30;
      res.status = SolveStatus::kInfeasible;
      if (pi_res <= di_res) {
        res.primal_infeasible = true;
        res.message = "primal infeasibility certificate found";
        res.y = y / std::max(by, 1e-300);
        for (Mat& mm : s.psd) mm /= std::max(by, 1e-300);
        s.lin /= std::max(by, 1e-300);
        res.s = s;
        res.x = x;
      } else {
        res.dual_infeasible = true;
        res.message = "dual infeasibility certificate found (unbounded objective)";
        const double sc = std::max(-cx, 1e-300);
        for (Mat& mm : x.psd) mm /= sc;
        x.lin /= sc;
        res.x = x;
        res.s = s;
        res.y = y;
      }
      return res;
    }

    // Nesterov-Todd scaling and Schur complement
    const Scaling sc = nt_scaling(dims, x, s);
    RMat aw(m, nvec);
    for (int k = 0; k < m; ++k) {
      const BV row = vec_to_bv(dims, pr.a.row(k).transpose());
      aw.row(k) = bv_to_vec(dims, sandwich(sc, row)).transpose();
    }
    RMat schur = pr.a * aw.transpose();
    schur = 0.5 * (schur + schur.transpose());
    Eigen::LLT<RMat> llt(schur);

    const BV wcw = sandwich(sc, pr.c);
    const RVec g = pr.a * bv_to_vec(dims, wcw);
    const double c_wcw = bv_inner(pr.c, wcw);
    const RVec u2 = lin_solve(llt, schur, RVec(pr.b + g));
    const double q = (pr.b - g).dot(u2) + c_wcw;

    const BV w_rd_w = sandwich(sc, r_d);
    const RVec a_wrdw = pr.a * bv_to_vec(dims, w_rd_w);
    const double c_wrdw = bv_inner(pr.c, w_rd_w);

    auto solve_dir = [&](const BV& r_c, double r_tk) {
      Direction d;
      const RVec rhs1 = -r_p - pr.a * bv_to_vec(dims, r_c) + a_wrdw;
      const RVec u1 = lin_solve(llt, schur, rhs1);
      const double p = (pr.b - g).dot(u1) - bv_inner(pr.c, r_c) + c_wrdw + r_g;
      d.dtau = (r_tk / tau - p) / (q + kappa / tau);
      d.dy = u1 + d.dtau * u2;
      const BV atdy = vec_to_bv(dims, RVec(pr.a.transpose() * d.dy));
      d.ds = bv_zero(dims);
      for (size_t j = 0; j < d.ds.psd.size(); ++j)
        d.ds.psd[j] = -atdy.psd[j] + d.dtau * pr.c.psd[j] + r_d.psd[j];
      d.ds.lin = -atdy.lin + d.dtau * pr.c.lin + r_d.lin;
      const BV wdsw = sandwich(sc, d.ds);
      d.dx = bv_zero(dims);
      for (size_t j = 0; j < d.dx.psd.size(); ++j) d.dx.psd[j] = r_c.psd[j] - wdsw.psd[j];
      d.dx.lin = r_c.lin - wdsw.lin;
      d.dkappa = p + q * d.dtau;
      return d;
    };

    auto max_step = [&](const Direction& d) {
      double alpha = std::min(max_cone_step(x, d.dx), max_cone_step(s, d.ds));
      if (d.dtau < 0.0) alpha = std::min(alpha, -tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -kappa / d.dkappa);
      return alpha;
    };

    // predictor
    BV r_c_aff = bv_zero(dims);
    for (size_t j = 0; j < r_c_aff.psd.size(); ++j) r_c_aff.psd[j] = -x.psd[j];
    r_c_aff.lin = -x.lin;
    const Direction aff = solve_dir(r_c_aff, -tau * kappa);
    const double alpha_aff = std::min(1.0, opts.step_frac * max_step(aff));

    // centering parameter from the predictor's achieved complementarity
    double mu_aff = tau * kappa;
    {
      BV xa = x, sa = s;
      for (size_t j = 0; j < xa.psd.size(); ++j) {
        xa.psd[j] += alpha_aff * aff.dx.psd[j];
        sa.psd[j] += alpha_aff * aff.ds.psd[j];
      }
      xa.lin += alpha_aff * aff.dx.lin;
      sa.lin += alpha_aff * aff.ds.lin;
      mu_aff = (bv_inner(xa, sa) +
                (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa)) /
               (nu + 1.0);
    }
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 1e-8, 1.0);

    // corrector
    const BV s_inv = bv_inverse(s, dims);
    BV r_c = bv_zero(dims);
    for (size_t j = 0; j < r_c.psd.size(); ++j)
      r_c.psd[j] = sigma * mu * s_inv.psd[j] - x.psd[j];
    r_c.lin = sigma * mu * s_inv.lin.array() - x.lin.array();
    const double r_tk = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
    const Direction dir = solve_dir(r_c, r_tk);

    const double alpha = std::min(1.0, opts.step_frac * max_step(dir));
    for (size_t j = 0; j < x.psd.size(); ++j) {
      x.psd[j] = herm_sym(x.psd[j] + alpha * dir.dx.psd[j]);
      s.psd[j] = herm_sym(s.psd[j] + alpha * dir.ds.psd[j]);
    }
    x.lin += alpha * dir.dx.lin;
    s.lin += alpha * dir.ds.lin;
    y += alpha * dir.dy;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
  }

  res.status = SolveStatus::kMaxIter;
  res.message = "iteration limit reached before certification";
  res.x = x;
  res.s = s;
  res.y = y;
  res.pobj = bv_inner(pr.c, x) / tau;
  res.dobj = pr.b.dot(y) / tau;
  res.gap = std::abs(res.pobj - res.dobj);
  // scale back so callers can still inspect the best iterate
  for (Mat& mm : res.x.psd) mm /= tau;
  res.x.lin /= tau;
  for (Mat& mm : res.s.psd) mm /= tau;
  res.s.lin /= tau;
  res.y /= tau;
  return res;
}

}  // namespace

// ── LMI-form modeling layer ─────────────────────────────────────────────────

SdpProblem SdpProblem::make(int nvars) {
  SdpProblem p;
  p.nvars = nvars;
  p.objective = RVec::Zero(nvars);
  p.eq_a = RMat(0, nvars);
  p.eq_b = RVec(0);
  p.ge_a = RMat(0, nvars);
  p.ge_b = RVec(0);
  return p;
}

int SdpProblem::add_lmi(int dim) {
  Lmi l;
  l.f0 = Mat::Zero(dim, dim);
  l.fi.assign(static_cast<size_t>(nvars), Mat());
  lmis.push_back(std::move(l));
  return static_cast<int>(lmis.size()) - 1;
}

void SdpProblem::set_f0(int lmi, const Mat& f0) { lmis[static_cast<size_t>(lmi)].f0 = f0; }

void SdpProblem::set_coeff(int lmi, int var, const Mat& fi) {
  lmis[static_cast<size_t>(lmi)].fi[static_cast<size_t>(var)] = fi;
}

static void append_row(RMat& a, RVec& b, const RVec& row, double rhs) {
  a.conservativeResize(a.rows() + 1, Eigen::NoChange);
  a.row(a.rows() - 1) = row.transpose();
  b.conservativeResize(b.size() + 1);
  b(b.size() - 1) = rhs;
}

void SdpProblem::add_eq(const RVec& row, double rhs) { append_row(eq_a, eq_b, row, rhs); }
void SdpProblem::add_ge(const RVec& row, double rhs) { append_row(ge_a, ge_b, row, rhs); }

// The LMI problem "min cᵀu s.t. F(u) ⪰ 0, A_ge u ≥ b_ge, A_eq u = b_eq" is
// encoded as the *dual* side of the standard form: equalities are eliminated
// by a null-space substitution u = u0 + N v, then v plays the role of the
// free dual vector y, the LMI/inequality slacks S = F(u) live in the cone,
// and the cone-side primal variable X carries the multipliers.  This keeps
// the dual strictly feasible whenever the LMI has an interior point (no
// free-variable splitting) and bounds the Schur system by the variable count.

SolveResult solve_sdp(const SdpProblem& prob, const SolveOptions& opts) {
  const int n = prob.nvars;
  const int n_eq = static_cast<int>(prob.eq_b.size());
  const int n_ge = static_cast<int>(prob.ge_b.size());
  const RVec obj = prob.objective.size() ? prob.objective : RVec::Zero(n);

  SolveResult out;

  // equality elimination
  RVec u0 = RVec::Zero(n);
  RMat nmat = RMat::Identity(n, n);
  if (n_eq > 0) {
    Eigen::JacobiSVD<RMat> svd(prob.eq_a,
                               Eigen::ComputeFullV | Eigen::ComputeThinU);
    svd.setThreshold(1e-12);
    u0 = svd.solve(prob.eq_b);
    if ((prob.eq_a * u0 - prob.eq_b).lpNorm<Eigen::Infinity>() >
        1e-8 * (1.0 + prob.eq_b.lpNorm<Eigen::Infinity>())) {
      out.status = SolveStatus::kInfeasible;
      out.primal_infeasible = true;
      out.message = "equality constraints are inconsistent";
      out.u = u0;
      return out;
    }
    const Eigen::Index rank = svd.rank();
    nmat = svd.matrixV().rightCols(n - rank);
  }
  const int nv = static_cast<int>(nmat.cols());

  // reduced data at u = u0 + N v
  std::vector<Mat> f0r;
  std::vector<std::vector<Mat>> fir;  // [lmi][reduced var]
  for (const auto& l : prob.lmis) {
    const int d = static_cast<int>(l.f0.rows());
    Mat base = herm_sym(l.f0);
    for (int i = 0; i < n; ++i) {
      const Mat& fi = l.fi[static_cast<size_t>(i)];
      if (fi.size() == 0) continue;
      if (fi.rows() != d || fi.cols() != d)
        throw std::invalid_argument("solve_sdp: coefficient shape mismatch");
      if (u0(i) != 0.0) base += u0(i) * herm_sym(fi);
    }
    f0r.push_back(base);
    std::vector<Mat> cols;
    for (int s = 0; s < nv; ++s) {
      Mat acc = Mat::Zero(d, d);
      for (int i = 0; i < n; ++i) {
        const Mat& fi = l.fi[static_cast<size_t>(i)];
        if (fi.size() == 0 || nmat(i, s) == 0.0) continue;
        acc += nmat(i, s) * herm_sym(fi);
      }
      cols.push_back(std::move(acc));
    }
    fir.push_back(std::move(cols));
  }
  const RMat ge_ar = prob.ge_a * nmat;                     // n_ge × nv
  const RVec ge_br = prob.ge_b - prob.ge_a * u0;
  const RVec cr_obj = nmat.transpose() * obj;

  // multiplier-side recovery of the equality duals from stationarity:
  //   c_i = Σ_j ⟨F_ij, Λ_j⟩ + (A_geᵀ y_ge)_i + (A_eqᵀ y_eq)_i
  const auto recover_eq_duals = [&](const std::vector<Mat>& lam, const RVec& y_ge) {
    RVec rhs = obj;
    for (size_t j = 0; j < prob.lmis.size(); ++j)
      for (int i = 0; i < n; ++i) {
        const Mat& fi = prob.lmis[j].fi[static_cast<size_t>(i)];
        if (fi.size() == 0) continue;
        rhs(i) -= std::real((herm_sym(fi) * lam[j]).trace());
      }
    if (n_ge > 0) rhs -= prob.ge_a.transpose() * y_ge;
    if (n_eq == 0) return RVec(RVec::Zero(0));
    return RVec(prob.eq_a.transpose()
                    .jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                    .solve(rhs));
  };
  const auto finish_duals = [&](SolveResult& r) {
    std::vector<Mat> lam = r.lmi_duals;
    r.eq_duals = recover_eq_duals(lam, r.ge_duals);
    double dval = 0.0;
    for (size_t j = 0; j < prob.lmis.size(); ++j)
      dval -= std::real((herm_sym(prob.lmis[j].f0) * lam[j]).trace());
    if (n_ge > 0) dval += prob.ge_b.dot(r.ge_duals);
    if (n_eq > 0) dval += prob.eq_b.dot(r.eq_duals);
    r.dual_value = dval;
    r.gap = std::abs(r.value - dval);
  };

  // fully pinned variables: check feasibility of u0 and recover multipliers
  if (nv == 0) {
    bool feasible = true;
    for (const Mat& f : f0r) {
      Eigen::SelfAdjointEigenSolver<Mat> es(f);
      if (es.eigenvalues().minCoeff() < -1e-8 * (1.0 + f.norm())) feasible = false;
    }
    for (int r = 0; r < n_ge; ++r)
      if (ge_br(r) > 1e-8 * (1.0 + std::abs(prob.ge_b(r)))) feasible = false;
    if (!feasible) {
      out.status = SolveStatus::kInfeasible;
      out.primal_infeasible = true;
      out.message = "constraints pin the variables to an infeasible point";
      out.u = u0;
      return out;
    }
    out.status = SolveStatus::kOptimal;
    out.u = u0;
    out.value = obj.dot(u0);
    for (const Mat& f : f0r) {
      out.lmi_slacks.push_back(f);
      out.lmi_duals.push_back(Mat::Zero(f.rows(), f.cols()));
    }
    out.ge_duals = RVec::Zero(n_ge);
    finish_duals(out);
    return out;
  }

  // conic core in dual form: b = −c_reduced, C = (F0; −b_ge), A_s = (−F_s; −a_s)
  CoreProblem core;
  for (const Mat& f : f0r) core.dims.psd.push_back(static_cast<int>(f.rows()));
  core.dims.nonneg = n_ge;

  if (core.dims.vec_len() == 0) {
    // unconstrained after elimination
    if (cr_obj.lpNorm<Eigen::Infinity>() <= 1e-12) {
      out.status = SolveStatus::kOptimal;
      out.u = u0;
      out.value = obj.dot(u0);
      out.eq_duals = recover_eq_duals({}, RVec::Zero(0));
      out.dual_value = n_eq ? prob.eq_b.dot(out.eq_duals) : 0.0;
      out.gap = std::abs(out.value - out.dual_value);
    } else {
      out.status = SolveStatus::kInfeasible;
      out.dual_infeasible = true;
      out.message = "objective is unbounded along an unconstrained direction";
      out.u = u0 - nmat * cr_obj;
    }
    return out;
  }

  core.b = -cr_obj;
  core.c = bv_zero(core.dims);
  for (size_t j = 0; j < f0r.size(); ++j) core.c.psd[j] = f0r[j];
  core.c.lin = -ge_br;
  core.c_vec = bv_to_vec(core.dims, core.c);
  core.a = RMat(nv, core.dims.vec_len());
  for (int s = 0; s < nv; ++s) {
    BV row = bv_zero(core.dims);
    for (size_t j = 0; j < f0r.size(); ++j) row.psd[j] = -fir[j][static_cast<size_t>(s)];
    if (n_ge > 0) row.lin = -ge_ar.col(s);
    core.a.row(s) = bv_to_vec(core.dims, row).transpose();
  }

  const CoreResult cr = solve_core(core, opts);

  out.iterations = cr.iterations;
  out.message = cr.message;
  out.u = u0 + nmat * cr.y;
  out.value = obj.dot(out.u);
  for (size_t j = 0; j < f0r.size(); ++j) {
    out.lmi_slacks.push_back(cr.s.psd[j]);
    out.lmi_duals.push_back(cr.x.psd[j]);
  }
  out.ge_duals = cr.x.lin;

  switch (cr.status) {
    case SolveStatus::kOptimal:
      out.status = SolveStatus::kOptimal;
      finish_duals(out);
      break;
    case SolveStatus::kInfeasible:
      out.status = SolveStatus::kInfeasible;
      // the roles are swapped by the dual-form encoding
      if (cr.dual_infeasible) {
        out.primal_infeasible = true;  // Λ-ray certifies the LMI is infeasible
        out.message = "constraints are infeasible";
      } else {
        out.dual_infeasible = true;    // v-ray certifies an unbounded objective
        out.message = "objective is unbounded below";
        out.u = nmat * cr.y;           // improving ray, not a point
      }
      break;
    case SolveStatus::kMaxIter:
      out.status = SolveStatus::kMaxIter;
      finish_duals(out);
      break;
  }
  return out;
}

// ── assembly helpers ─────────────────────────────────────────────────────────

int add_herm_var(SdpProblem& prob, const BlockAlgebra& alg) {
  if (!prob.lmis.empty() || prob.eq_b.size() || prob.ge_b.size())
    throw std::logic_error("add_herm_var: declare variables before constraints");
  const int base = prob.nvars;
  prob.nvars += alg.herm_dim();
  prob.objective.conservativeResize(prob.nvars);
  prob.objective.tail(alg.herm_dim()).setZero();
  prob.eq_a = RMat(0, prob.nvars);
  prob.ge_a = RMat(0, prob.nvars);
  return base;
}

AffineExpr herm_var_expr(const BlockAlgebra& alg, int base) {
  AffineExpr e;
  e.f0 = Mat::Zero(alg.ambient(), alg.ambient());
  const auto basis = hermitian_basis(alg);
  for (size_t s = 0; s < basis.size(); ++s)
    e.terms.emplace_back(base + static_cast<int>(s), basis[s]);
  return e;
}

AffineExpr const_expr(const Mat& f0) {
  AffineExpr e;
  e.f0 = f0;
  return e;
}

AffineExpr map_expr(const AffineExpr& e, const std::function<Mat(const Mat&)>& f) {
  AffineExpr out;
  out.f0 = f(e.f0);
  for (const auto& [i, m] : e.terms) out.terms.emplace_back(i, f(m));
  return out;
}

AffineExpr add_expr(const AffineExpr& a, const AffineExpr& b) {
  AffineExpr out = a;
  out.f0 += b.f0;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

AffineExpr sub_expr(const AffineExpr& a, const AffineExpr& b) {
  return add_expr(a, scale_expr(-1.0, b));
}

AffineExpr scale_expr(double t, const AffineExpr& e) {
  AffineExpr out = e;
  out.f0 *= t;
  for (auto& [i, m] : out.terms) m *= t;
  return out;
}

int add_psd_constraint(SdpProblem& prob, const AffineExpr& expr) {
  const int d = static_cast<int>(expr.f0.rows());
  const int l = prob.add_lmi(d);
  prob.set_f0(l, expr.f0);
  for (const auto& [i, m] : expr.terms) {
    Mat& slot = prob.lmis[static_cast<size_t>(l)].fi[static_cast<size_t>(i)];
    if (slot.size() == 0)
      slot = m;
    else
      slot += m;  // repeated variable in the expression
  }
  return l;
}

void add_zero_constraint(SdpProblem& prob, const BlockAlgebra& alg, const AffineExpr& expr) {
  for (const Mat& b : hermitian_basis(alg)) {
    RVec row = RVec::Zero(prob.nvars);
    for (const auto& [i, m] : expr.terms)
      row(i) += std::real((b * m).trace());
    prob.add_eq(row, -std::real((b * expr.f0).trace()));
  }
}

double add_trace_objective(SdpProblem& prob, const Mat& w, const AffineExpr& expr) {
  for (const auto& [i, m] : expr.terms)
    prob.objective(i) += std::real((w * m).trace());
  return std::real((w * expr.f0).trace());
}

Mat eval_herm_var(const BlockAlgebra& alg, const RVec& u, int base) {
  const auto basis = hermitian_basis(alg);
  Mat out = Mat::Zero(alg.ambient(), alg.ambient());
  for (size_t s = 0; s < basis.size(); ++s)
    out += u(base + static_cast<int>(s)) * basis[s];
  return out;
}

SolveResult solve_lp(const RVec& c, const RMat& eq_a, const RVec& eq_b,
                     const RMat& ge_a, const RVec& ge_b, const SolveOptions& opts) {
  SdpProblem p = SdpProblem::make(static_cast<int>(c.size()));
  p.objective = c;
  if (eq_b.size()) {
    p.eq_a = eq_a;
    p.eq_b = eq_b;
  }
  if (ge_b.size()) {
    p.ge_a = ge_a;
    p.ge_b = ge_b;
  }
  return solve_sdp(p, opts);
}

// ── see-saw driver ──────────────────────────────────────────────────────────

SeesawResult run_seesaw(const std::function<double(int)>& round, int max_rounds,
                        double tol) {
  SeesawResult r;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < max_rounds; ++i) {
    const double v = round(i);
    r.trace.push_back(v);
    ++r.rounds;
    if (i > 0 && v < best - 1e-9) break;  // numerically stalled; keep best
    const double improvement = v - best;
    best = std::max(best, v);
    if (i > 0 && improvement < tol) break;
  }
  r.value = best;
  return r;
}

// ── multistart pure-state search ────────────────────────────────────────────

namespace {

CVec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Cx(gauss(rng), gauss(rng));
  return v / v.norm();
}

CVec fd_gradient(const std::function<double(const CVec&)>& f, const CVec& x, double h) {
  const int d = static_cast<int>(x.size());
  CVec g = CVec::Zero(d);
  for (int i = 0; i < d; ++i) {
    for (int part = 0; part < 2; ++part) {
      CVec xp = x, xm = x;
      const Cx delta = (part == 0) ? Cx(h, 0.0) : Cx(0.0, h);
      xp(i) += delta;
      xm(i) -= delta;
      const double df = (f(xp / xp.norm()) - f(xm / xm.norm())) / (2.0 * h);
      g(i) += (part == 0) ? Cx(df, 0.0) : Cx(0.0, df);
    }
  }
  return g;
}

}  // namespace

PureSearchResult pure_state_search(int dim,
                                   const std::function<double(const CVec&)>& f,
                                   std::uint64_t seed, const PureSearchOptions& opts,
                                   const std::function<CVec(const CVec&)>& grad,
                                   const std::vector<CVec>& extra_seeds) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, CVec>> pool;
  pool.reserve(static_cast<size_t>(opts.samples) + extra_seeds.size());
  for (int k = 0; k < opts.samples; ++k) {
    CVec v = random_unit(rng, dim);
    pool.emplace_back(f(v), std::move(v));
  }
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  if (static_cast<int>(pool.size()) > opts.refine_top) pool.resize(opts.refine_top);
  for (const CVec& v : extra_seeds) {
    CVec u = v / v.norm();
    pool.emplace_back(f(u), std::move(u));
  }

  PureSearchResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (auto& [v0, x0] : pool) {
    CVec x = x0;
    double fx = v0;
    double step = 0.5;
    for (int it = 0; it < opts.refine_iters && step > 1e-13; ++it) {
      CVec g = grad ? grad(x) : fd_gradient(f, x, opts.grad_step);
      g -= x * Cx(std::real(x.dot(g)), 0.0);  // project onto the tangent space
      const double gn = g.norm();
      if (gn < 1e-13) break;
      bool moved = false;
      while (step > 1e-13) {
        CVec xn = x + (step / gn) * g;
        xn /= xn.norm();
        const double fn = f(xn);
        if (fn > fx + 1e-14) {
          x = std::move(xn);
          fx = fn;
          step = std::min(step * 1.5, 2.0);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (fx > best.value) {
      best.value = fx;
      best.state = x;
    }
  }
  return best;
}

}  // namespace chandef::conic
