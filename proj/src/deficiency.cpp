#include "chandef/deficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "chandef/cones.hpp"
#include "chandef/randomgen.hpp"
#include "cone_encoding.hpp"

namespace chandef {
namespace {

using conic::AffineExpr;
using conic::SdpProblem;
using conic::SolveOptions;
using conic::SolveResult;
using conic::SolveStatus;
using enc::ConeEnc;
using enc::EncMode;

double nonneg(double x) { return x > 0.0 ? x : 0.0; }

// ── joint processing minimization ───────────────────────────────────────────
//
// post:  min ½‖target − Z∘resource‖_◇  over family channels Z: out(res)→out(tgt)
// pre:   min ½‖target − resource∘Z‖_◇  over family channels Z: in(tgt)→in(res)
//
// The diamond norm is epigraphed in the usual way (Y ∓ Δ in the map cone,
// Tr_out Y = λ·I) with the processing channel's Choi matrix as an extra
// variable, entering Δ affinely through composition with the resource; the
// whole minimization stays one SDP.  kOuter relaxes every cone (certified
// lower end of the minimum), kInner restricts them (certified upper end with
// a genuine in-family certificate); they coincide where the encoding is
// exact.  The variable ranges over the ambient space; the Choi-pattern
// projection applied inside the composition and again by the certificate
// constructor is a trace-preserving positive pinching, so it never changes
// the optimal value.

struct JointSolve {
  double eps = 0.0;
  std::optional<HermitianMap> z;
  SolveStatus status = SolveStatus::kMaxIter;
  // Saddle payoff witness recovered from the slack-cone duals (empty when the
  // dual cone of the encoding is not available in closed form).
  Mat xi_choi;  // C(ξ) for ξ: B → A, out-major
  Mat x_norm;   // the matching normalizer X on A
};

JointSolve solve_processing_min(ConeFamily family, EncMode mode,
                                const HermitianMap& target,
                                const HermitianMap& resource, bool post,
                                const SolveOptions& sopts) {
  const BlockAlgebra z_in = post ? resource.out_alg : target.in_alg;
  const BlockAlgebra z_out = post ? target.out_alg : resource.in_alg;
  const int dzi = z_in.ambient(), dzo = z_out.ambient();
  const int din = target.din(), dout = target.dout();

  SdpProblem p = SdpProblem::make(0);
  const BlockAlgebra zfull = BlockAlgebra::full(dzo * dzi);
  const BlockAlgebra yfull = BlockAlgebra::full(dout * din);
  const int zb = conic::add_herm_var(p, zfull);
  const int yb = conic::add_herm_var(p, yfull);
  ConeEnc zc(map_cone(family), mode, dzo, dzi);
  ConeEnc sm(map_cone(family), mode, dout, din);
  ConeEnc sp(map_cone(family), mode, dout, din);
  zc.declare(p);
  sm.declare(p);
  sp.declare(p);
  const int lb = conic::add_herm_var(p, BlockAlgebra::diagonal(1));
  p.objective(lb) = 1.0;

  const AffineExpr zx = conic::herm_var_expr(zfull, zb);
  const AffineExpr y = conic::herm_var_expr(yfull, yb);
  const auto composed = [&](const Mat& c) {
    const HermitianMap g(z_in, z_out, c);
    return post ? compose(g, resource).choi : compose(resource, g).choi;
  };
  const AffineExpr delta = conic::sub_expr(conic::const_expr(target.choi),
                                           conic::map_expr(zx, composed));
  const int base_m = static_cast<int>(p.lmis.size());
  sm.impose(p, conic::sub_expr(y, delta));
  const int base_p = static_cast<int>(p.lmis.size());
  sp.impose(p, conic::add_expr(y, delta));
  const int base_z = static_cast<int>(p.lmis.size());
  zc.impose(p, zx);

  AffineExpr ztp = conic::map_expr(
      zx, [&](const Mat& m) { return partial_trace_first(m, dzo, dzi); });
  ztp.f0 = Mat(ztp.f0 - Mat::Identity(dzi, dzi));
  conic::add_zero_constraint(p, BlockAlgebra::full(dzi), ztp);

  AffineExpr ytp = conic::map_expr(
      y, [&](const Mat& m) { return partial_trace_first(m, dout, din); });
  ytp.terms.emplace_back(lb, Mat(-Mat::Identity(din, din)));
  conic::add_zero_constraint(p, BlockAlgebra::full(din), ytp);

  const SolveResult r = conic::solve_sdp(p, sopts);
  JointSolve out;
  out.status = r.status;
  if (!r.u.size()) return out;
  out.eps = 0.5 * r.value;
  out.z = HermitianMap(z_in, z_out, conic::eval_herm_var(zfull, r.u, zb));

  // Dual witness: the multipliers S∓ of the two slack constraints satisfy
  // S₋ + S₊ = I_B⊗X (stationarity in Y) and, because Z is a variable of the
  // same program, ξ ∝ S₊ − S₋ is automatically stationary against every
  // admissible processing, i.e. a saddle payoff functional.  The membership
  // X⊗I ± C(ξ) = 2S∓/TrX in the dual-family cone is inherited from the
  // multiplier cones: psd for CP, psd + partial-transposed-psd (decomposable,
  // hence block-positive) for EB, and psd ∩ ppt for Pos where that equals
  // separability.
  const auto eff_dual = [&](int base, int count) -> Mat {
    if (static_cast<int>(r.lmi_duals.size()) < base + count) return Mat();
    const ChoiCone cone = map_cone(family);
    if (cone == ChoiCone::kPsd && count == 1) return r.lmi_duals[base];
    if (cone == ChoiCone::kSep && count == 2)
      return Mat(r.lmi_duals[base] +
                 partial_transpose_second(r.lmi_duals[base + 1], dout, din));
    if (cone == ChoiCone::kBlockPos && count == 2 && ppt_is_exact(dout, din))
      return r.lmi_duals[base + 1];
    return Mat();
  };
  const Mat s_minus = eff_dual(base_m, base_p - base_m);
  const Mat s_plus = eff_dual(base_p, base_z - base_p);
  if (s_minus.size() && s_plus.size() && s_minus.rows() == dout * din) {
    const Mat w = partial_trace_first(Mat(s_minus + s_plus), dout, din) / dout;
    const double t = w.trace().real();
    if (t > 1e-9) {
      Mat eta = Mat((s_plus - s_minus) / t);
      const Mat dstar =
          target.choi - composed(conic::eval_herm_var(zfull, r.u, zb));
      if ((dstar * eta).trace().real() < 0.0) eta = -eta;
      out.xi_choi =
          adjoint_map(HermitianMap(target.in_alg, target.out_alg, eta)).choi;
      // The flip sends I⊗W to Wᵀ⊗I, so the normalizer on the witness side is
      // the transpose of the trace-preservation multiplier.
      out.x_norm =
          conditional_expectation(target.in_alg, Mat(w.transpose() / t));
    }
  }
  return out;
}

bool processing_exact(ConeFamily f, int dzo, int dzi, int dout, int din) {
  return ConeEnc(map_cone(f), EncMode::kOuter, dzo, dzi).exact &&
         ConeEnc(map_cone(f), EncMode::kOuter, dout, din).exact;
}

// Adversary's best response to a fixed payoff element ξ: the family channel Z
// maximizing ⟨Z∘resource, ξ⟩ (post) resp. ⟨resource∘Z, ξ⟩ (pre).
std::optional<HermitianMap> best_response(ConeFamily family,
                                          const HermitianMap& resource,
                                          bool post, const BlockAlgebra& t_in,
                                          const BlockAlgebra& t_out,
                                          const HermitianMap& xi,
                                          const SolveOptions& sopts) {
  const BlockAlgebra z_in = post ? resource.out_alg : t_in;
  const BlockAlgebra z_out = post ? t_out : resource.in_alg;
  const int dzi = z_in.ambient(), dzo = z_out.ambient();

  SdpProblem p = SdpProblem::make(0);
  const BlockAlgebra zfull = BlockAlgebra::full(dzo * dzi);
  const int zb = conic::add_herm_var(p, zfull);
  ConeEnc zc(map_cone(family), EncMode::kInner, dzo, dzi);
  zc.declare(p);

  const AffineExpr zx = conic::herm_var_expr(zfull, zb);
  const auto composed = [&](const Mat& c) {
    const HermitianMap g(z_in, z_out, c);
    return post ? compose(g, resource).choi : compose(resource, g).choi;
  };
  conic::add_trace_objective(p, Mat(-adjoint_map(xi).choi),
                             conic::map_expr(zx, composed));
  zc.impose(p, zx);
  AffineExpr ztp = conic::map_expr(
      zx, [&](const Mat& m) { return partial_trace_first(m, dzo, dzi); });
  ztp.f0 = Mat(ztp.f0 - Mat::Identity(dzi, dzi));
  conic::add_zero_constraint(p, BlockAlgebra::full(dzi), ztp);

  const SolveResult r = conic::solve_sdp(p, sopts);
  if (!r.u.size()) return std::nullopt;
  return HermitianMap(z_in, z_out, conic::eval_herm_var(zfull, r.u, zb));
}

// Certified deficiency lower bound carried by one payoff map:
//   post: (‖Φ∘Γ‖^◇ − ‖Ψ∘Γ‖^◇) / ‖Γ‖^◇    with Γ: out(Φ) → in(Φ)
//   pre:  (‖Γ∘Φ‖^◇ − ‖Γ∘Ψ‖^◇) / ‖Γ‖^◇    with Γ: out(Φ) → decision
// Interval ends are chosen so the quotient never overstates the gap.
double witness_gap(ConeFamily family, const HermitianMap& phi,
                   const HermitianMap& psi, bool post, const HermitianMap& g,
                   const SolveOptions& sopts, double* norm_out = nullptr) {
  const HermitianMap a = post ? compose(phi, g) : compose(g, phi);
  const HermitianMap b = post ? compose(psi, g) : compose(g, psi);
  const double na = dual_diamond_norm(family, a, sopts).value_lo;
  const double nb = dual_diamond_norm(family, b, sopts).value_hi;
  const double ng = dual_diamond_norm(family, g, sopts).value_hi;
  if (norm_out) *norm_out = ng;
  return ng > 1e-12 ? (na - nb) / ng : 0.0;
}

// Payoff-map lower bound for the collapsed decision space.  The dual-ball
// witness ξ of ‖Φ − Z∘Ψ‖_◇ comes with a density matrix X certifying
// X⊗I ± C(ξ) ∈ C(P̃), so Γ = ξ + Φ_{I,X} is a genuine dual-cone payoff map
// with ‖Γ‖^◇ ≤ 2, and at the optimal Z it violates the dual-norm inequality
// at the saddle value.  A few best-response rounds guard against degenerate
// optimizers; the best certified gap is kept.
struct WitnessOut {
  double gap = 0.0;
  double norm = 0.0;
  std::optional<HermitianMap> gamma;
};

WitnessOut polish_witness(ConeFamily family, const HermitianMap& phi,
                          const HermitianMap& psi, bool post,
                          const JointSolve& joint, int rounds,
                          const SolveOptions& sopts) {
  WitnessOut best;
  if (!joint.z) return best;
  HermitianMap z = *joint.z;
  const int dB = phi.dout();

  if (joint.xi_choi.size()) {
    const Mat gchoi =
        joint.xi_choi + kron(joint.x_norm, Mat::Identity(dB, dB));
    const HermitianMap gamma(phi.out_alg, phi.in_alg, gchoi);
    double ng = 0.0;
    const double gap = witness_gap(family, phi, psi, post, gamma, sopts, &ng);
    if (gap > best.gap) {
      best.gap = gap;
      best.norm = ng;
      best.gamma = gamma;
    }
  }

  for (int r = 0; r < std::max(1, rounds); ++r) {
    const HermitianMap delta =
        post ? phi - compose(z, psi) : phi - compose(psi, z);
    const BallSupResult ball = diamond_via_dual_ball(family, delta, sopts);
    if (!ball.witness.size()) break;
    const Mat gchoi =
        ball.witness + kron(ball.normalizer, Mat::Identity(dB, dB));
    const HermitianMap gamma(phi.out_alg, phi.in_alg, gchoi);
    double ng = 0.0;
    const double gap =
        witness_gap(family, phi, psi, post, gamma, sopts, &ng);
    if (gap > best.gap) {
      best.gap = gap;
      best.norm = ng;
      best.gamma = gamma;
    }
    if (r + 1 >= rounds) break;
    const HermitianMap xi(phi.out_alg, phi.in_alg, ball.witness);
    const auto znext = best_response(family, psi, post, phi.in_alg,
                                     phi.out_alg, xi, sopts);
    if (!znext) break;
    z = *znext;
  }
  return best;
}

// Random in-family channels and dual-cone payoff maps for the sampled
// decision-restricted bounds.  CP channels also lie in Pos; EB Choi matrices
// are separable, hence inside the Pos-family dual cone; PSD Choi matrices
// are inside the CP and EB dual cones.
HermitianMap sample_family_channel(ConeFamily f, rnd::Rng& rng,
                                   const BlockAlgebra& in,
                                   const BlockAlgebra& out) {
  if (f == ConeFamily::kEb) return rnd::eb_channel(rng, in, out);
  return rnd::channel(rng, in, out);
}

HermitianMap sample_dual_payoff(ConeFamily f, rnd::Rng& rng,
                                const BlockAlgebra& in,
                                const BlockAlgebra& out) {
  if (f == ConeFamily::kPos) return rnd::eb_channel(rng, in, out);
  const int d = out.ambient() * in.ambient();
  Mat c = rnd::psd(rng, d);
  c *= static_cast<double>(in.ambient()) / c.trace().real();
  return HermitianMap(in, out, c);
}

std::string family_caveat(ConeFamily family) {
  return family == ConeFamily::kEb
             ? "; upper bound only (the identity is not entanglement breaking)"
             : "";
}

DeficiencyReport collapsed_deficiency(ConeFamily family,
                                      const HermitianMap& phi,
                                      const HermitianMap& psi, bool post,
                                      const DeficiencyOptions& opts) {
  const BlockAlgebra z_in = post ? psi.out_alg : phi.in_alg;
  const BlockAlgebra z_out = post ? phi.out_alg : psi.in_alg;
  const bool exact = processing_exact(family, z_out.ambient(), z_in.ambient(),
                                      phi.dout(), phi.din());

  const JointSolve lo =
      solve_processing_min(family, EncMode::kOuter, phi, psi, post, opts.solve);
  const JointSolve hi =
      exact ? lo
            : solve_processing_min(family, EncMode::kInner, phi, psi, post,
                                   opts.solve);

  DeficiencyReport rep;
  rep.status = enc::worst(lo.status, hi.status);
  rep.eps_hi = nonneg(hi.eps);
  rep.certificate_channel = hi.z;

  const WitnessOut w = polish_witness(family, phi, psi, post, hi,
                                      opts.witness_rounds, opts.solve);
  rep.witness_payoff = w.gamma;
  rep.diagnostics["witness_eps"] = w.gap;
  rep.diagnostics["witness_norm"] = w.norm;
  rep.diagnostics["collapse_lo"] = nonneg(lo.eps);

  // The collapse value equals the deficiency when the identity is admissible
  // (CP, Pos); for EB it only bounds it from above, so its lower end is not
  // a deficiency lower bound there.
  double eps_lo = nonneg(w.gap);
  if (family != ConeFamily::kEb) eps_lo = std::max(eps_lo, nonneg(lo.eps));
  rep.eps_lo = std::min(eps_lo, rep.eps_hi);

  std::ostringstream m;
  m << (post ? "post" : "pre")
    << "-processing joint sdp at the collapsed decision space ["
    << enc::enc_name(map_cone(family), exact)
    << "]; dual-ball payoff witness lower bound" << family_caveat(family);
  rep.method = m.str();
  return rep;
}

// Inner half of the classical pre-processing program: for a fixed input σ,
//   min ‖Φ(σ) − Ψ(ρ)‖₁  over states ρ
// as the trace-norm split P − Q = Φ(σ) − Ψ(ρ).  The equality multipliers of
// the split rows reassemble into the optimal payoff operator G (‖G‖ = 1,
// Tr[(Φσ − Ψρ*)G] = ‖Φσ − Ψρ*‖₁), recovered here with an empirical sign and
// scale fix and a spectral fallback.
struct InnerRange {
  double value = 0.0;
  Mat rho;
  Mat diff;  // Φ(σ) − Ψ(ρ*)
  Mat g;
  SolveStatus status = SolveStatus::kMaxIter;
};

InnerRange range_inner(const HermitianMap& phi, const HermitianMap& psi,
                       const Mat& sigma, const SolveOptions& sopts) {
  const int dB = phi.dout(), dAp = psi.din();
  SdpProblem p = SdpProblem::make(0);
  const BlockAlgebra bfull = BlockAlgebra::full(dB);
  const int pb = conic::add_herm_var(p, bfull);
  const int qb = conic::add_herm_var(p, bfull);
  const int rb = conic::add_herm_var(p, BlockAlgebra::full(dAp));

  const AffineExpr pe = conic::herm_var_expr(bfull, pb);
  const AffineExpr qe = conic::herm_var_expr(bfull, qb);
  const AffineExpr re = conic::herm_var_expr(BlockAlgebra::full(dAp), rb);
  conic::add_psd_constraint(p, pe);
  conic::add_psd_constraint(p, qe);
  conic::add_psd_constraint(p, re);

  const int match_rows = static_cast<int>(p.eq_a.rows());
  AffineExpr match = conic::sub_expr(pe, qe);
  match.f0 = Mat(match.f0 - apply_map(phi, sigma));
  match = conic::add_expr(
      match, conic::map_expr(re, [&](const Mat& m) { return apply_map(psi, m); }));
  conic::add_zero_constraint(p, bfull, match);

  AffineExpr tr = conic::map_expr(re, [](const Mat& m) {
    Mat t(1, 1);
    t(0, 0) = m.trace();
    return t;
  });
  tr.f0 = Mat(tr.f0 - Mat::Identity(1, 1));
  conic::add_zero_constraint(p, BlockAlgebra::diagonal(1), tr);

  conic::add_trace_objective(p, Mat::Identity(dB, dB), pe);
  conic::add_trace_objective(p, Mat::Identity(dB, dB), qe);

  // The optimum is the trace distance to the closest image, so any reference
  // point caps it; a solve that lands outside [0, cap] has blown up and gets
  // one retry at a looser target before we fall back to a vacuous bound.
  const double cap = trace_norm(herm(
      apply_map(phi, sigma) -
      apply_map(psi, Mat(Mat::Identity(dAp, dAp) / dAp))));
  const auto blown = [&](const SolveResult& rr) {
    return !rr.u.size() || !rr.u.allFinite() || !std::isfinite(rr.value) ||
           rr.value < -1e-6 * (1.0 + cap) ||
           rr.value > cap + 1e-5 * (1.0 + cap);
  };
  SolveResult r = conic::solve_sdp(p, sopts);
  if (blown(r)) {
    conic::SolveOptions relaxed = sopts;
    relaxed.feas_tol = std::max(relaxed.feas_tol, 1e-7);
    relaxed.gap_tol = std::max(relaxed.gap_tol, 1e-7);
    r = conic::solve_sdp(p, relaxed);
  }
  InnerRange out;
  out.status = r.status;
  if (blown(r)) {
    out.status = SolveStatus::kMaxIter;
    return out;
  }
  out.value = r.value;
  out.rho = conic::eval_herm_var(BlockAlgebra::full(dAp), r.u, rb);
  out.diff = herm(apply_map(phi, sigma) - apply_map(psi, out.rho));

  const auto basis = hermitian_basis(bfull);
  Mat graw = Mat::Zero(dB, dB);
  if (r.eq_duals.size() >= match_rows + static_cast<int>(basis.size()) &&
      r.eq_duals.allFinite())
    for (size_t s = 0; s < basis.size(); ++s)
      graw += r.eq_duals(match_rows + static_cast<Eigen::Index>(s)) * basis[s];
  const double gn = op_norm(graw);
  const double dn = trace_norm(out.diff);
  if (gn > 1e-9) {
    out.g = graw / gn;
    if ((out.diff * out.g).trace().real() < 0.0) out.g = -out.g;
  }
  const double attained =
      out.g.size() ? (out.diff * out.g).trace().real() : -1.0;
  if (!out.g.size() || (dn > 1e-8 && attained < (1.0 - 1e-3) * dn))
    out.g = enc::herm_sign(out.diff);
  return out;
}

}  // namespace

// ── payoffs ──────────────────────────────────────────────────────────────────

PayoffResult payoff(const Experiment& e, const HermitianMap& alpha,
                    const std::vector<Mat>& g) {
  if (static_cast<int>(g.size()) != e.size())
    throw std::invalid_argument("payoff: one operator per state required");
  if (!(alpha.in_alg == e.algebra))
    throw std::invalid_argument("payoff: rule does not act on the experiment's algebra");
  PayoffResult out;
  out.per_index = RVec::Zero(e.size());
  for (int i = 0; i < e.size(); ++i) {
    const Mat moved = apply_map(alpha, e.states[static_cast<size_t>(i)]);
    out.per_index(i) = (moved * g[static_cast<size_t>(i)]).trace().real();
    out.total += out.per_index(i);
  }
  out.total_via_pairing =
      pairing(compose(alpha, cq_channel(e)), make_qc(alpha.out_alg, g));
  return out;
}

// ── channel deficiency ───────────────────────────────────────────────────────

DeficiencyReport post_deficiency(ConeFamily family, const HermitianMap& phi,
                                 const HermitianMap& psi,
                                 const BlockAlgebra& decision,
                                 const DeficiencyOptions& opts) {
  if (!(phi.in_alg == psi.in_alg))
    throw std::invalid_argument("post_deficiency: channels must share the input algebra");
  DeficiencyReport rep = collapsed_deficiency(family, phi, psi, true, opts);
  if (decision == phi.out_alg) return rep;

  // Restricted decision space: the collapse value still bounds ε from above
  // (post-composing with any rule is norm non-increasing), but the collapsed
  // witness lives at D = out(Φ), so lower bounds come from sampled rules
  // α: out(Φ) → D and sampled payoff maps Γ: D → in(Φ).
  rep.witness_payoff.reset();
  rep.diagnostics["collapse_witness_eps"] = rep.diagnostics["witness_eps"];
  rep.diagnostics.erase("witness_eps");
  rnd::Rng rng(opts.seed);
  double net_lo = 0.0, payoff_lo = 0.0;
  for (int t = 0; t < opts.net_samples; ++t) {
    const HermitianMap alpha =
        sample_family_channel(family, rng, phi.out_alg, decision);
    const JointSolve js = solve_processing_min(
        family, EncMode::kOuter, compose(alpha, phi), psi, true, opts.solve);
    net_lo = std::max(net_lo, nonneg(js.eps));
    rep.status = enc::worst(rep.status, js.status);
  }
  for (int t = 0; t < opts.net_samples; ++t) {
    const HermitianMap gamma =
        sample_dual_payoff(family, rng, decision, phi.in_alg);
    payoff_lo = std::max(
        payoff_lo, witness_gap(family, phi, psi, true, gamma, opts.solve));
  }
  rep.diagnostics["net_lo"] = net_lo;
  rep.diagnostics["payoff_lo"] = payoff_lo;
  rep.diagnostics["decision_dim"] = decision.ambient();
  rep.eps_lo = std::min(rep.eps_hi, std::max(net_lo, payoff_lo));
  rep.method += "; decision-restricted sampled lower bounds";
  return rep;
}

DeficiencyReport post_deficiency(ConeFamily family, const HermitianMap& phi,
                                 const HermitianMap& psi,
                                 const DeficiencyOptions& opts) {
  return post_deficiency(family, phi, psi, phi.out_alg, opts);
}

DeficiencyReport pre_deficiency(ConeFamily family, const HermitianMap& phi,
                                const HermitianMap& psi,
                                const BlockAlgebra& decision,
                                const DeficiencyOptions& opts) {
  if (!(phi.out_alg == psi.out_alg))
    throw std::invalid_argument("pre_deficiency: channels must share the output algebra");
  DeficiencyReport rep = collapsed_deficiency(family, phi, psi, false, opts);
  if (decision == phi.in_alg) return rep;

  rep.witness_payoff.reset();
  rep.diagnostics["collapse_witness_eps"] = rep.diagnostics["witness_eps"];
  rep.diagnostics.erase("witness_eps");
  rnd::Rng rng(opts.seed);
  double net_lo = 0.0;
  for (int t = 0; t < opts.net_samples; ++t) {
    const HermitianMap beta =
        sample_family_channel(family, rng, decision, phi.in_alg);
    const JointSolve js = solve_processing_min(
        family, EncMode::kOuter, compose(phi, beta), psi, false, opts.solve);
    net_lo = std::max(net_lo, nonneg(js.eps));
    rep.status = enc::worst(rep.status, js.status);
  }
  rep.diagnostics["net_lo"] = net_lo;
  rep.diagnostics["decision_dim"] = decision.ambient();
  rep.eps_lo = std::min(rep.eps_hi, net_lo);
  rep.method += "; decision-restricted sampled lower bounds";
  return rep;
}

DeficiencyReport pre_deficiency(ConeFamily family, const HermitianMap& phi,
                                const HermitianMap& psi,
                                const DeficiencyOptions& opts) {
  return pre_deficiency(family, phi, psi, phi.in_alg, opts);
}

// ── classical pre-processing (range inclusion) ──────────────────────────────

DeficiencyReport pre_range_inclusion(const HermitianMap& phi,
                                     const HermitianMap& psi,
                                     const DeficiencyOptions& opts,
                                     const std::vector<CVec>& extra_seeds) {
  if (!(phi.out_alg == psi.out_alg))
    throw std::invalid_argument("pre_range_inclusion: maps must share the output algebra");
  const int dA = phi.din();

  const auto pinch = [&](const CVec& v) {
    return conditional_expectation(phi.in_alg, Mat(v * v.adjoint()));
  };
  const auto f = [&](const CVec& v) {
    return range_inner(phi, psi, pinch(v), opts.solve).value;
  };
  // The inner value near σ behaves like Tr[Φ(σ)G] for the optimal payoff
  // operator G, giving the ascent direction Φ*(G)v for free from one solve.
  const auto grad = [&](const CVec& v) {
    const InnerRange ir = range_inner(phi, psi, pinch(v), opts.solve);
    if (!ir.g.size()) return CVec(CVec::Zero(v.size()));
    const Mat w = conditional_expectation(
        phi.in_alg, apply_map(adjoint_map(phi), ir.g));
    return CVec(2.0 * (w * v));
  };
  const conic::PureSearchResult sr =
      conic::pure_state_search(dA, f, opts.seed, opts.search, grad, extra_seeds);
  const InnerRange fin = range_inner(phi, psi, pinch(sr.state), opts.solve);

  DeficiencyReport rep;
  rep.status = fin.status;
  // Any input certifies a lower bound; the supremum itself is a multistart
  // ascent, so the upper end is the best value found, not a certificate.
  const double eps_state = nonneg(0.5 * fin.value);

  const Mat gprime =
      fin.g.size()
          ? Mat(0.5 * (fin.g + Mat::Identity(fin.g.rows(), fin.g.cols())))
          : Mat(Mat::Identity(phi.dout(), phi.dout()));
  const double gn = op_norm(gprime);
  double eps_wit = 0.0;
  if (gn > 1e-12)
    eps_wit = (op_norm(apply_map(adjoint_map(phi), gprime)) -
               op_norm(apply_map(adjoint_map(psi), gprime))) /
              gn;
  rep.witness_operator = gprime;
  rep.diagnostics["witness_eps"] = eps_wit;
  rep.diagnostics["state_eps"] = eps_state;
  rep.diagnostics["witness_consistency"] = std::abs(eps_wit - eps_state);

  rep.eps_lo = std::max(eps_state, nonneg(eps_wit));
  rep.eps_hi = std::max(rep.eps_lo, eps_state);
  if (rep.diagnostics["witness_consistency"] > 1e-4 * (1.0 + eps_state))
    rep.status = enc::worst(rep.status, SolveStatus::kMaxIter);
  rep.method =
      "trace-norm split sdp per input; multistart pure-input ascent; "
      "payoff-operator witness from the split multipliers";
  return rep;
}

// ── experiments ──────────────────────────────────────────────────────────────

DeficiencyReport experiment_post_deficiency(const Experiment& e,
                                            const Experiment& f,
                                            const BlockAlgebra& decision,
                                            ConeFamily family,
                                            const DeficiencyOptions& opts) {
  if (e.size() != f.size())
    throw std::invalid_argument("experiment_post_deficiency: experiments must have equal length");
  DeficiencyReport rep =
      post_deficiency(family, cq_channel(f), cq_channel(e), decision, opts);
  if (rep.certificate_channel) {
    double worst = 0.0;
    for (int i = 0; i < e.size(); ++i) {
      const Mat moved =
          apply_map(*rep.certificate_channel, e.states[static_cast<size_t>(i)]);
      worst = std::max(
          worst, 0.5 * trace_norm(moved - f.states[static_cast<size_t>(i)]));
    }
    rep.diagnostics["per_index_eps"] = worst;
  }
  rep.method = "experiment comparison through cq channels; " + rep.method;
  return rep;
}

DeficiencyReport experiment_pre_deficiency(const Experiment& e,
                                           const Experiment& f,
                                           const conic::SolveOptions& solve) {
  if (!(e.algebra == f.algebra))
    throw std::invalid_argument("experiment_pre_deficiency: experiments must share the algebra");
  const int d = e.algebra.ambient();
  const int n = e.size();
  DeficiencyReport rep;
  rep.status = SolveStatus::kOptimal;
  rep.mixtures = RMat::Zero(f.size(), n);
  double worst = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    SdpProblem p = SdpProblem::make(0);
    const BlockAlgebra afull = BlockAlgebra::full(d);
    const int pb = conic::add_herm_var(p, afull);
    const int qb = conic::add_herm_var(p, afull);
    const int wb = conic::add_herm_var(p, BlockAlgebra::diagonal(n));
    const AffineExpr pe = conic::herm_var_expr(afull, pb);
    const AffineExpr qe = conic::herm_var_expr(afull, qb);
    const AffineExpr we = conic::herm_var_expr(BlockAlgebra::diagonal(n), wb);
    conic::add_psd_constraint(p, pe);
    conic::add_psd_constraint(p, qe);
    conic::add_psd_constraint(p, we);

    AffineExpr match = conic::sub_expr(pe, qe);
    match.f0 = Mat(match.f0 - f.states[static_cast<size_t>(i)]);
    match = conic::add_expr(match, conic::map_expr(we, [&](const Mat& m) {
                              Mat out = Mat::Zero(d, d);
                              for (int j = 0; j < n; ++j)
                                out += m(j, j) * e.states[static_cast<size_t>(j)];
                              return out;
                            }));
    conic::add_zero_constraint(p, afull, match);

    AffineExpr tr = conic::map_expr(we, [](const Mat& m) {
      Mat t(1, 1);
      t(0, 0) = m.trace();
      return t;
    });
    tr.f0 = Mat(tr.f0 - Mat::Identity(1, 1));
    conic::add_zero_constraint(p, BlockAlgebra::diagonal(1), tr);

    conic::add_trace_objective(p, Mat::Identity(d, d), pe);
    conic::add_trace_objective(p, Mat::Identity(d, d), qe);

    const SolveResult r = conic::solve_sdp(p, solve);
    rep.status = enc::worst(rep.status, r.status);
    if (!r.u.size()) continue;
    worst = std::max(worst, r.value);
    for (int j = 0; j < n; ++j) rep.mixtures(i, j) = r.u(wb + j);
  }
  rep.eps_lo = rep.eps_hi = nonneg(0.5 * worst);
  rep.method = "per-state hull-distance sdp";
  return rep;
}

// ── POVM comparison ──────────────────────────────────────────────────────────

DeficiencyReport povm_post_cleanness(const Povm& m, const Povm& n,
                                     const DeficiencyOptions& opts) {
  if (!(m.algebra == n.algebra))
    throw std::invalid_argument("povm_post_cleanness: POVMs must share the algebra");
  const int d = m.algebra.ambient();
  const int mm = m.outcomes(), nn = n.outcomes();

  // The qc diamond norm program with the relabeled effects Σ_j λ_{ij} N_j
  // entering affinely; Λ ranges over column-stochastic matrices.
  SdpProblem p = SdpProblem::make(0);
  const BlockAlgebra afull = BlockAlgebra::full(d);
  std::vector<int> yb(static_cast<size_t>(mm));
  for (int i = 0; i < mm; ++i)
    yb[static_cast<size_t>(i)] = conic::add_herm_var(p, afull);
  const int lamb = conic::add_herm_var(p, BlockAlgebra::diagonal(mm * nn));
  const int lb = conic::add_herm_var(p, BlockAlgebra::diagonal(1));
  p.objective(lb) = 1.0;

  AffineExpr sum = conic::const_expr(Mat::Zero(d, d));
  for (int i = 0; i < mm; ++i) {
    const AffineExpr yi = conic::herm_var_expr(afull, yb[static_cast<size_t>(i)]);
    AffineExpr minus =
        conic::sub_expr(yi, conic::const_expr(m.effects[static_cast<size_t>(i)]));
    AffineExpr plus =
        conic::add_expr(yi, conic::const_expr(m.effects[static_cast<size_t>(i)]));
    for (int j = 0; j < nn; ++j) {
      minus.terms.emplace_back(lamb + i * nn + j, n.effects[static_cast<size_t>(j)]);
      plus.terms.emplace_back(lamb + i * nn + j,
                              Mat(-n.effects[static_cast<size_t>(j)]));
    }
    conic::add_psd_constraint(p, minus);
    conic::add_psd_constraint(p, plus);
    sum = conic::add_expr(sum, yi);
  }
  sum.terms.emplace_back(lb, Mat(-Mat::Identity(d, d)));
  conic::add_zero_constraint(p, afull, sum);

  for (int j = 0; j < nn; ++j) {
    RVec row = RVec::Zero(p.nvars);
    for (int i = 0; i < mm; ++i) row(lamb + i * nn + j) = 1.0;
    p.add_eq(row, 1.0);
  }
  for (int i = 0; i < mm * nn; ++i) {
    RVec row = RVec::Zero(p.nvars);
    row(lamb + i) = 1.0;
    p.add_ge(row, 0.0);
  }

  const SolveResult r = conic::solve_sdp(p, opts.solve);
  DeficiencyReport rep;
  rep.status = r.status;
  if (r.u.size()) {
    rep.eps_lo = rep.eps_hi = nonneg(0.5 * r.u(lb));
    rep.stochastic = RMat::Zero(mm, nn);
    for (int i = 0; i < mm; ++i)
      for (int j = 0; j < nn; ++j) rep.stochastic(i, j) = r.u(lamb + i * nn + j);
  }
  rep.method = "joint relabeling sdp over column-stochastic matrices";
  return rep;
}

double povm_cleanness_seesaw(const Povm& m, const Povm& n, std::uint64_t seed,
                             int rounds, const conic::SolveOptions& solve) {
  if (!(m.algebra == n.algebra))
    throw std::invalid_argument("povm_cleanness_seesaw: POVMs must share the algebra");
  const int d = m.algebra.ambient();
  const int mm = m.outcomes(), nn = n.outcomes();

  const auto relabeled_diff = [&](const RMat& lam) {
    std::vector<Mat> diff(static_cast<size_t>(mm));
    for (int i = 0; i < mm; ++i) {
      Mat di = m.effects[static_cast<size_t>(i)];
      for (int j = 0; j < nn; ++j)
        di -= lam(i, j) * n.effects[static_cast<size_t>(j)];
      diff[static_cast<size_t>(i)] = di;
    }
    return diff;
  };
  conic::PureSearchOptions search;
  search.samples = 32;
  search.refine_top = 3;
  search.refine_iters = 60;

  // Alternate the exact per-Λ score (the qc diamond SDP, whose ascent side
  // also yields a worst-case input) with a Λ-step against the accumulated
  // pool of worst-case inputs: min over stochastic Λ of the pool's largest
  // purified trace-norm sum.  The pool value is a lower bound and the exact
  // scores are upper bounds, so the exchange terminates when they meet.
  std::vector<Mat> pool = {Mat::Identity(d, d) / d};
  {
    rnd::Rng rng(seed);
    pool.push_back(rnd::state(rng, m.algebra).matrix());
  }

  const auto lam_step = [&](RMat& lam, double& pool_value) {
    SdpProblem p = SdpProblem::make(0);
    const BlockAlgebra afull = BlockAlgebra::full(d);
    const int ns = static_cast<int>(pool.size());
    std::vector<int> pb(static_cast<size_t>(ns * mm)), qb(pb.size());
    for (int s = 0; s < ns * mm; ++s) {
      pb[static_cast<size_t>(s)] = conic::add_herm_var(p, afull);
      qb[static_cast<size_t>(s)] = conic::add_herm_var(p, afull);
    }
    const int lamb = conic::add_herm_var(p, BlockAlgebra::diagonal(mm * nn));
    const int tb = conic::add_herm_var(p, BlockAlgebra::diagonal(1));
    p.objective(tb) = 1.0;

    for (int s = 0; s < ns; ++s) {
      // Worst-case inputs coming back from the score step are typically pure,
      // which makes the √σ·(·)·√σ coefficients rank one and the match rows
      // linearly dependent.  Mixing in a sliver of the maximally mixed state
      // keeps the rows independent and perturbs the pool bound by O(δ).
      const double delta = 1e-6;
      const Mat sigma = Mat((1.0 - delta) * pool[static_cast<size_t>(s)] +
                            (delta / d) * Mat::Identity(d, d));
      const Mat sq = psd_sqrt(sigma);
      RVec bound = RVec::Zero(p.nvars);
      bound(tb) = 1.0;
      for (int i = 0; i < mm; ++i) {
        const int k = s * mm + i;
        const AffineExpr pe =
            conic::herm_var_expr(afull, pb[static_cast<size_t>(k)]);
        const AffineExpr qe =
            conic::herm_var_expr(afull, qb[static_cast<size_t>(k)]);
        conic::add_psd_constraint(p, pe);
        conic::add_psd_constraint(p, qe);
        AffineExpr match = conic::sub_expr(pe, qe);
        match.f0 =
            Mat(match.f0 - herm(sq * m.effects[static_cast<size_t>(i)] * sq));
        for (int j = 0; j < nn; ++j)
          match.terms.emplace_back(
              lamb + i * nn + j,
              herm(sq * n.effects[static_cast<size_t>(j)] * sq));
        conic::add_zero_constraint(p, afull, match);
        // Tr P + Tr Q enters the epigraph row; the diagonal coordinates lead
        // in the hermitian basis of a full block.
        for (int e = 0; e < d; ++e) {
          bound(pb[static_cast<size_t>(k)] + e) -= 1.0;
          bound(qb[static_cast<size_t>(k)] + e) -= 1.0;
        }
      }
      p.add_ge(bound, 0.0);
    }
    for (int j = 0; j < nn; ++j) {
      RVec row = RVec::Zero(p.nvars);
      for (int i = 0; i < mm; ++i) row(lamb + i * nn + j) = 1.0;
      p.add_eq(row, 1.0);
    }
    for (int i = 0; i < mm * nn; ++i) {
      RVec row = RVec::Zero(p.nvars);
      row(lamb + i) = 1.0;
      p.add_ge(row, 0.0);
    }
    SolveResult r = conic::solve_sdp(p, solve);
    if (r.status != conic::SolveStatus::kOptimal) {
      // The pool subproblem is always feasible, so a failure here is
      // numerical; a looser target usually recovers it.
      conic::SolveOptions relaxed = solve;
      relaxed.feas_tol = std::max(relaxed.feas_tol, 1e-7);
      relaxed.gap_tol = std::max(relaxed.gap_tol, 1e-7);
      r = conic::solve_sdp(p, relaxed);
    }
    if (!r.u.size()) return false;
    for (int i = 0; i < mm; ++i)
      for (int j = 0; j < nn; ++j)
        lam(i, j) = std::max(0.0, r.u(lamb + i * nn + j));
    // Re-normalise the columns so the scored relabeling is always a genuine
    // post-processing even when the solve stopped early.
    for (int j = 0; j < nn; ++j) {
      const double colsum = lam.col(j).sum();
      if (colsum > 1e-12)
        lam.col(j) /= colsum;
      else
        lam.col(j).setConstant(1.0 / mm);
    }
    // The pool value is only a trustworthy lower bound at an optimal solve.
    pool_value = r.status == conic::SolveStatus::kOptimal ? 0.5 * r.value : 0.0;
    return true;
  };

  RMat lam(mm, nn);
  lam.setConstant(1.0 / mm);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, rounds); ++r) {
    const NormResult q =
        qc_diamond(relabeled_diff(lam), seed + 101 * static_cast<std::uint64_t>(r),
                   solve, search);
    best = std::min(best, 0.5 * q.value_hi);
    if (q.certificate.size()) pool.push_back(q.certificate);
    double pool_value = 0.0;
    if (!lam_step(lam, pool_value)) break;
    if (best - pool_value <= 1e-8 * (1.0 + best)) {
      const double final_score =
          0.5 * qc_diamond(relabeled_diff(lam), seed + 7, solve, search).value_hi;
      return std::min(best, final_score);
    }
  }
  const double final_score =
      0.5 * qc_diamond(relabeled_diff(lam), seed + 7, solve, search).value_hi;
  return std::min(best, final_score);
}

DeficiencyReport povm_pre_deficiency(const Povm& m, const Povm& n,
                                     const BlockAlgebra& decision,
                                     ConeFamily family,
                                     const DeficiencyOptions& opts) {
  // Pad to a common outcome count with zero effects; the qc channels and the
  // deficiency are unchanged.
  const int k = std::max(m.outcomes(), n.outcomes());
  std::vector<Mat> me = m.effects, ne = n.effects;
  me.resize(static_cast<size_t>(k), Mat::Zero(m.algebra.ambient(), m.algebra.ambient()));
  ne.resize(static_cast<size_t>(k), Mat::Zero(n.algebra.ambient(), n.algebra.ambient()));
  const Povm mp(m.algebra, me), np(n.algebra, ne);

  DeficiencyReport rep = pre_deficiency(family, qc_channel(mp), qc_channel(np),
                                        decision, opts);

  // Payoff-list witnesses: for lists G ⊂ D⁺ the measure-prepare maps Φ_{M,G}
  // obey ‖Φ_{M,G}‖^◇ ≤ ‖Φ_{N,G}‖^◇ + ε·‖Φ^cq_G‖^◇, so any violating list is
  // a certified lower bound.  The collapsed witness map contributes its own
  // list Γ(E_ii); a few random PSD lists are tried as well.
  const auto list_gap = [&](const std::vector<Mat>& g) {
    const double ng = cq_dual_diamond(g, opts.solve).value_hi;
    if (ng < 1e-12) return 0.0;
    const HermitianMap fm = make_measure_prepare(
        m.algebra, decision, me, g);
    const HermitianMap fn = make_measure_prepare(
        n.algebra, decision, ne, g);
    const double na = dual_diamond_norm(family, fm, opts.solve).value_lo;
    const double nb = dual_diamond_norm(family, fn, opts.solve).value_hi;
    return (na - nb) / ng;
  };
  double list_lo = 0.0;
  if (rep.witness_payoff && rep.witness_payoff->in_alg.is_diagonal()) {
    std::vector<Mat> g;
    const int dd = decision.ambient();
    for (int i = 0; i < k; ++i) {
      Mat eii = Mat::Zero(k, k);
      eii(i, i) = 1.0;
      Mat gi = apply_map(*rep.witness_payoff, eii);
      g.push_back(herm(gi) + 1e-12 * Mat::Identity(dd, dd));
    }
    list_lo = std::max(list_lo, list_gap(g));
  }
  rnd::Rng rng(opts.seed);
  for (int t = 0; t < std::max(2, opts.net_samples); ++t) {
    std::vector<Mat> g;
    for (int i = 0; i < k; ++i)
      g.push_back(rnd::psd(rng, decision.ambient()));
    list_lo = std::max(list_lo, list_gap(g));
  }
  rep.diagnostics["payoff_list_lo"] = list_lo;
  rep.eps_lo = std::min(rep.eps_hi, std::max(rep.eps_lo, nonneg(list_lo)));
  rep.method = "povm comparison through qc channels; " + rep.method;
  return rep;
}

// ── classical lifting of payoff maps ─────────────────────────────────────────

CqGammaLift cq_gamma_construct(const HermitianMap& gamma,
                               const conic::SolveOptions& solve) {
  if (!gamma.in_alg.is_full())
    throw std::invalid_argument("cq_gamma_construct: input must be a full matrix algebra");
  const int k = gamma.din(), dh = gamma.dout();
  HermitianMap gpos = gamma;
  {
    // Accept solver-grade inputs: eigenvalues slightly below zero are noise
    // and get clamped, anything materially negative is a caller error.
    const EigResult ev = eig(gamma.choi);
    const double floor = ev.values.minCoeff();
    if (floor < -1e-6 * (1.0 + op_norm(gamma.choi)))
      throw std::invalid_argument("cq_gamma_construct: map is not completely positive");
    if (floor < 0.0) {
      const RVec clipped = ev.values.cwiseMax(0.0);
      gpos = HermitianMap(
          gamma.in_alg, gamma.out_alg,
          Mat(ev.vectors * clipped.asDiagonal() * ev.vectors.adjoint()));
    }
  }

  // Shift-and-phase unitaries U_{ab} = X^a Z^b; conjugating the input factor
  // of the Choi matrix by each and averaging is the twirl a ↦ Tr(a)·I/k.
  Mat x = Mat::Zero(k, k), z = Mat::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    x((i + 1) % k, i) = 1.0;
    z(i, i) = std::polar(1.0, 2.0 * M_PI * i / k);
  }
  std::vector<Mat> us;
  Mat xa = Mat::Identity(k, k);
  for (int a = 0; a < k; ++a) {
    Mat u = xa;
    for (int b = 0; b < k; ++b) {
      us.push_back(u);
      u = u * z;
    }
    xa = x * xa;
  }

  CqGammaLift out;
  for (const Mat& u : us) {
    const Mat w = kron(Mat::Identity(dh, dh), u);
    out.payoff_ops.push_back(herm(w.adjoint() * gpos.choi * w / k));
  }
  for (const Mat& b : hermitian_basis(BlockAlgebra::full(k))) {
    Mat tw = Mat::Zero(k, k);
    for (const Mat& u : us) tw += u.adjoint() * b * u / k;
    out.twirl_defect = std::max(
        out.twirl_defect,
        op_norm(tw - b.trace() * Mat::Identity(k, k)));
  }
  out.cq_map =
      make_cq(tensor(gamma.out_alg, BlockAlgebra::full(k)), out.payoff_ops);
  out.gamma_norm = dual_diamond_norm(ConeFamily::kCp, gpos, solve).value_hi;
  out.lifted_norm = cq_dual_diamond(out.payoff_ops, solve).value_hi;
  return out;
}

// ── bipartite-state factorization ────────────────────────────────────────────

BiStateFactorization bi_state_factorize(const Mat& sigma, int d_h, int d_d) {
  if (sigma.rows() != d_h * d_d || sigma.cols() != d_h * d_d)
    throw std::invalid_argument("bi_state_factorize: dimension mismatch");
  const Mat sig_d = partial_trace_first(sigma, d_h, d_d);
  const PinvSqrtResult ps = pinv_sqrt(sig_d);

  // C = (I⊗σ_D^{-1/2}) σ (I⊗σ_D^{-1/2}) + (1/d_H)·I_H⊗(I − p) is trace
  // preserving: the first summand partial-traces to the support projector p,
  // the second to its complement.  The complement part never touches the
  // reconstruction because σ_D^{1/2}(I − p) = 0.
  const Mat lift = kron(Mat::Identity(d_h, d_h), ps.inv_sqrt);
  Mat c = herm(lift * sigma * lift);
  c += kron(Mat::Identity(d_h, d_h),
            Mat(Mat::Identity(d_d, d_d) - ps.support)) /
       static_cast<double>(d_h);

  BiStateFactorization out;
  out.beta = HermitianMap(BlockAlgebra::full(d_d), BlockAlgebra::full(d_h), c);

  CVec xv(d_d * d_d);
  for (int i = 0; i < d_d; ++i)
    for (int kk = 0; kk < d_d; ++kk) xv(i * d_d + kk) = ps.sqrt(kk, i);
  out.sigma0 = xv * xv.adjoint();

  const Mat recon = apply_on_first(out.beta, out.sigma0, d_d);
  out.reconstruction_error = trace_norm(sigma - recon);
  return out;
}

// ── tensor-lift consistency checks ───────────────────────────────────────────

TensorLiftReport tensor_lift_check(const HermitianMap& phi,
                                   const HermitianMap& psi, int k, double eps,
                                   LiftDirection direction,
                                   const DeficiencyOptions& opts) {
  TensorLiftReport out;
  const HermitianMap idk = identity_map(BlockAlgebra::full(k));
  const HermitianMap phit = tensor_map(phi, idk);
  const HermitianMap psit = tensor_map(psi, idk);

  if (direction == LiftDirection::kPost) {
    const DeficiencyReport q = post_deficiency(ConeFamily::kCp, phi, psi, opts);
    out.eps_quantum_lo = q.eps_lo;
    out.eps_quantum_hi = q.eps_hi;

    // Classical side: lift candidate payoff maps Γ: B(C^k) → A to payoff
    // lists over D_{k²}; the tensored channels turn those cq maps into cq
    // maps again, so every gap is a ratio of exact cq dual-norm programs and
    // a certified classical lower bound.
    std::vector<HermitianMap> candidates;
    if (k == phi.dout() && q.witness_payoff)
      candidates.push_back(*q.witness_payoff);
    rnd::Rng rng(opts.seed);
    const int da = phi.din();
    for (int t = 0; t < 3; ++t) {
      Mat c = rnd::psd(rng, da * k);
      c *= static_cast<double>(k) / c.trace().real();
      candidates.emplace_back(BlockAlgebra::full(k), phi.in_alg, c);
    }
    double cl = 0.0;
    for (const HermitianMap& g : candidates) {
      const CqGammaLift lift = cq_gamma_construct(g, opts.solve);
      out.diagnostics["twirl_defect"] =
          std::max(out.diagnostics["twirl_defect"], lift.twirl_defect);
      if (lift.lifted_norm < 1e-12) continue;
      std::vector<Mat> ta, tb;
      for (const Mat& gj : lift.payoff_ops) {
        ta.push_back(apply_map(phit, gj));
        tb.push_back(apply_map(psit, gj));
      }
      const double na = cq_dual_diamond(ta, opts.solve).value_lo;
      const double nb = cq_dual_diamond(tb, opts.solve).value_hi;
      cl = std::max(cl, (na - nb) / lift.lifted_norm);
    }
    out.eps_classical = nonneg(cl);
    // Proved both ways: the classical value of the tensored pair equals the
    // quantum value at k = dim(out), so the certified classical bound must
    // neither exceed the quantum value nor fall short of it.
    out.slack = std::min(out.eps_quantum_hi - out.eps_classical,
                         out.eps_classical - out.eps_quantum_lo);
    out.holds = out.slack >= -1e-4;
    out.holds_at_eps =
        !(out.eps_classical <= eps) || out.eps_quantum_hi <= eps + 1e-4;
    out.diagnostics["agreement"] =
        std::abs(out.eps_classical - out.eps_quantum_hi);
    return out;
  }

  const DeficiencyReport q = pre_deficiency(ConeFamily::kCp, phi, psi, opts);
  out.eps_quantum_lo = q.eps_lo;
  out.eps_quantum_hi = q.eps_hi;

  // Classical side: range inclusion of the tensored pair.  The proof's
  // sufficient inputs are the purifications x_γ = (I⊗γ^{1/2})Σ|ii⟩, seeded
  // here alongside the generic multistart.
  std::vector<CVec> seeds;
  if (k == phi.din()) {
    rnd::Rng rng(opts.seed + 7);
    std::vector<Mat> gammas = {Mat::Identity(k, k) / k};
    for (int t = 0; t < 3; ++t)
      gammas.push_back(rnd::state(rng, BlockAlgebra::full(k)).matrix());
    for (const Mat& gm : gammas) {
      const Mat half = psd_sqrt(gm);
      CVec xv = CVec::Zero(k * k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) xv(i * k + j) += half(j, i);
      seeds.push_back(xv / xv.norm());
    }
  }
  const DeficiencyReport cl = pre_range_inclusion(phit, psit, opts, seeds);
  out.eps_classical = cl.eps_lo;
  const double root = std::sqrt(nonneg(out.eps_classical));
  // eps₃ ≤ ε_q, and ε_q ≤ eps₃ + ½√eps₃.
  out.slack = std::min(out.eps_quantum_hi - out.eps_classical,
                       out.eps_classical + 0.5 * root - out.eps_quantum_lo);
  out.holds = out.slack >= -1e-4;
  out.holds_at_eps = !(out.eps_classical <= eps) ||
                     out.eps_quantum_hi <= eps + 0.5 * std::sqrt(nonneg(eps)) + 1e-4;
  out.diagnostics["range_inclusion_hi"] = cl.eps_hi;
  return out;
}

// ── pointwise and informationally-complete reductions ───────────────────────

PointwiseReport pointwise_post_check(ConeFamily family, const HermitianMap& phi,
                                     const HermitianMap& psi,
                                     const Experiment& e,
                                     const DeficiencyOptions& opts) {
  if (!(phi.in_alg == e.algebra) || !(psi.in_alg == e.algebra))
    throw std::invalid_argument("pointwise_post_check: experiment algebra mismatch");
  PointwiseReport out;
  out.eps_channels = post_deficiency(family, phi, psi, opts).eps_hi;

  std::vector<Mat> phi_img, psi_img;
  for (const Mat& rho : e.states) {
    phi_img.push_back(apply_map(phi, rho));
    psi_img.push_back(apply_map(psi, rho));
  }
  const Experiment target(phi.out_alg, phi_img);
  const Experiment resource(psi.out_alg, psi_img);
  out.eps_images =
      experiment_post_deficiency(resource, target, phi.out_alg, family, opts)
          .eps_hi;

  RMat coords(e.size(), e.algebra.herm_dim());
  for (int i = 0; i < e.size(); ++i)
    coords.row(i) =
        algebra_coordinates(e.algebra, e.states[static_cast<size_t>(i)])
            .transpose();
  Eigen::ColPivHouseholderQR<RMat> qr(coords);
  qr.setThreshold(1e-9);
  out.spanning = qr.rank() == e.algebra.herm_dim();

  out.consistent = out.eps_images <= out.eps_channels + 1e-6;
  if (out.spanning && out.eps_images <= 1e-9)
    out.consistent = out.consistent && out.eps_channels <= 1e-6;
  return out;
}

bool ic_check(const Povm& e) {
  RMat coords(e.outcomes(), e.algebra.herm_dim());
  for (int i = 0; i < e.outcomes(); ++i)
    coords.row(i) =
        algebra_coordinates(e.algebra, e.effects[static_cast<size_t>(i)])
            .transpose();
  Eigen::ColPivHouseholderQR<RMat> qr(coords);
  qr.setThreshold(1e-9);
  return qr.rank() == e.algebra.herm_dim();
}

IcEquivalenceReport pre_zero_via_ic(const HermitianMap& phi,
                                    const HermitianMap& psi, const Povm& e,
                                    const DeficiencyOptions& opts) {
  if (!(phi.out_alg == psi.out_alg) || !(e.algebra == phi.out_alg))
    throw std::invalid_argument("pre_zero_via_ic: POVM must act on the common output algebra");
  IcEquivalenceReport out;
  out.informationally_complete = ic_check(e);
  out.eps_channels =
      pre_deficiency(ConeFamily::kCp, phi, psi, opts).eps_hi;

  std::vector<Mat> me, ne;
  const HermitianMap phis = adjoint_map(phi), psis = adjoint_map(psi);
  for (const Mat& eff : e.effects) {
    me.push_back(apply_map(phis, eff));
    ne.push_back(apply_map(psis, eff));
  }
  const Povm pull_m(phi.in_alg, me), pull_n(psi.in_alg, ne);
  out.eps_povms =
      povm_pre_deficiency(pull_m, pull_n, phi.in_alg, ConeFamily::kCp, opts)
          .eps_hi;

  const bool zc = out.eps_channels <= 1e-6, zp = out.eps_povms <= 1e-6;
  out.consistent = !out.informationally_complete || zc == zp;
  return out;
}

// ── two-outcome classical margin ─────────────────────────────────────────────

double classical_dichotomy_margin(const Experiment& target,
                                  const Experiment& resource) {
  if (target.size() != 2 || resource.size() != 2)
    throw std::invalid_argument("classical_dichotomy_margin: needs two states per experiment");
  const Mat &r1 = target.states[0], &r2 = target.states[1];
  const Mat &s1 = resource.states[0], &s2 = resource.states[1];

  // Every two-outcome payoff reduces to a weight ratio t between the states;
  // t ≤ 1 is scanned directly and t ≥ 1 through s = 1/t, where multiplying by
  // s > 0 rescales the margin without changing its sign.
  const auto f = [&](double t, bool swapped) {
    return swapped ? trace_norm(t * s1 - s2) - trace_norm(t * r1 - r2)
                   : trace_norm(s1 - t * s2) - trace_norm(r1 - t * r2);
  };
  double best = std::numeric_limits<double>::infinity();
  for (const bool swapped : {false, true}) {
    const int grid = 2000;
    double bt = 0.0, bv = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
      const double t = static_cast<double>(i) / grid;
      const double v = f(t, swapped);
      if (v < bv) {
        bv = v;
        bt = t;
      }
    }
    double lo = std::max(0.0, bt - 1.0 / grid), hi = std::min(1.0, bt + 1.0 / grid);
    for (int pass = 0; pass < 3; ++pass) {
      const int fine = 200;
      double flt = bt;
      for (int i = 0; i <= fine; ++i) {
        const double t = lo + (hi - lo) * i / fine;
        const double v = f(t, swapped);
        if (v < bv) {
          bv = v;
          flt = t;
        }
      }
      const double w = (hi - lo) / fine;
      lo = std::max(0.0, flt - w);
      hi = std::min(1.0, flt + w);
      bt = flt;
    }
    best = std::min(best, bv);
  }
  return best;
}

}  // namespace chandef
