#include "chandef/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chandef/cones.hpp"
#include "chandef/deficiency.hpp"
#include "chandef/json_io.hpp"
#include "chandef/norms.hpp"
#include "chandef/ovs.hpp"
#include "chandef/randomgen.hpp"

namespace chandef::verify {

namespace {

CheckResult check(std::string name, double defect, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.defect = defect;
  r.tolerance = tol;
  r.passed = defect <= tol;
  return r;
}

CheckResult check_flag(std::string name, bool ok) {
  return check(std::move(name), ok ? 0.0 : 1.0, 0.5);
}

RVec rand_rvec(rnd::Rng& rng, int d) {
  RVec v(d);
  for (int i = 0; i < d; ++i) v(i) = rnd::gauss(rng);
  return v;
}

}  // namespace

std::vector<CheckResult> matops_suite(std::uint64_t seed) {
  rnd::Rng rng(seed);
  std::vector<CheckResult> out;

  double recon = 0.0, sqrt_def = 0.0, ptrace = 0.0, ce_def = 0.0;
  for (int t = 0; t < 10; ++t) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const Mat h = rnd::hermitian(rng, d);
    const EigResult e = eig(h);
    recon = std::max(recon, op_norm(Mat(
        e.vectors * e.values.asDiagonal() * e.vectors.adjoint() - h)));

    const Mat p = rnd::psd(rng, d);
    const Mat s = psd_sqrt(p);
    sqrt_def = std::max(sqrt_def, op_norm(Mat(s * s - p)));

    const Mat a = rnd::hermitian(rng, d), b = rnd::hermitian(rng, 3);
    const Mat k = kron(a, b);
    ptrace = std::max(ptrace,
        op_norm(Mat(partial_trace_second(k, d, 3) - a * b.trace())) +
        op_norm(Mat(partial_trace_first(k, d, 3) - b * a.trace())));

    const BlockAlgebra alg({2, 1});
    const Mat h3 = rnd::hermitian(rng, 3);
    const Mat ce = conditional_expectation(alg, h3);
    ce_def = std::max(ce_def, std::abs(ce.trace().real() - h3.trace().real()) +
                                  off_pattern_defect(alg, ce));
  }
  out.push_back(check("matops/eig-reconstruction", recon, 1e-11));
  out.push_back(check("matops/psd-sqrt-squares-back", sqrt_def, 1e-10));
  out.push_back(check("matops/partial-traces-of-kron", ptrace, 1e-11));
  out.push_back(check("matops/conditional-expectation", ce_def, 1e-10));
  return out;
}

std::vector<CheckResult> hmap_suite(std::uint64_t seed) {
  rnd::Rng rng(seed);
  std::vector<CheckResult> out;
  const BlockAlgebra a = BlockAlgebra::full(2), b = BlockAlgebra::full(3);

  double cyc = 0.0, tri = 0.0, sym = 0.0, rt = 0.0, restr = 0.0;
  for (int t = 0; t < 20; ++t) {
    const HermitianMap f = rnd::herm_map(rng, a, b);
    const HermitianMap g = rnd::herm_map(rng, b, a);
    cyc = std::max(cyc, std::abs(strace(compose(g, f)) - strace(compose(f, g))));
    sym = std::max(sym, std::abs(pairing(f, g) - pairing(g, f)));

    // ⟨α∘β, ψ⟩ = ⟨β, ψ∘α⟩ = ⟨α, β∘ψ⟩ with β: A→B, α: B→A, ψ: A→A.
    const HermitianMap psi_aa = rnd::herm_map(rng, a, a);
    const double v1 = pairing(compose(g, f), psi_aa);
    const double v2 = pairing(f, compose(psi_aa, g));
    const double v3 = pairing(g, compose(f, psi_aa));
    tri = std::max({tri, std::abs(v1 - v2), std::abs(v1 - v3)});

    rt = std::max(rt, (HermitianMap(f.in_alg, f.out_alg, f.choi).choi - f.choi)
                          .cwiseAbs().maxCoeff());

    const BlockAlgebra sub({2, 1});
    const HermitianMap fs = rnd::herm_map(rng, sub, sub);
    const HermitianMap psi = rnd::herm_map(rng, sub, sub);
    const HermitianMap epsi(sub, sub,
                            choi_pattern_project(sub, sub, psi.choi));
    restr = std::max(restr, std::abs(pairing(fs, psi) - pairing(fs, epsi)));
  }
  out.push_back(check("hmap/strace-cyclicity", cyc, 1e-10));
  out.push_back(check("hmap/pairing-symmetry", sym, 1e-10));
  out.push_back(check("hmap/triangle-identity", tri, 1e-9));
  out.push_back(check("hmap/choi-round-trip", rt, 0.0));
  out.push_back(check("hmap/subalgebra-restriction", restr, 1e-10));

  double tp = 0.0;
  for (int t = 0; t < 5; ++t) {
    const HermitianMap c = rnd::channel(rng, a, b);
    tp = std::max(tp, tp_defect(c));
    tp = std::max(tp, tp_defect(compose(rnd::channel(rng, b, a), c)));
  }
  out.push_back(check("hmap/channel-trace-preservation", tp, 1e-9));
  return out;
}

std::vector<CheckResult> cones_suite(std::uint64_t seed) {
  rnd::Rng rng(seed);
  std::vector<CheckResult> out;

  bool table = dual_family(ConeFamily::kCp) == ConeFamily::kCp &&
               dual_family(ConeFamily::kEb) == ConeFamily::kPos &&
               dual_family(ConeFamily::kPos) == ConeFamily::kEb &&
               map_cone(ConeFamily::kEb) == ChoiCone::kSep &&
               tilde_cone(ConeFamily::kEb) == ChoiCone::kBlockPos &&
               tilde_cone(ConeFamily::kPos) == ChoiCone::kSep;
  out.push_back(check_flag("cones/family-duality-table", table));

  // Pairings between a family cone and its dual cone are nonnegative.
  const BlockAlgebra a = BlockAlgebra::full(2), b = BlockAlgebra::full(2);
  double neg = 0.0;
  for (int t = 0; t < 10; ++t) {
    for (ConeFamily fam : {ConeFamily::kCp, ConeFamily::kEb, ConeFamily::kPos}) {
      const HermitianMap m = fam == ConeFamily::kEb
                                 ? rnd::eb_channel(rng, a, b)
                                 : rnd::channel(rng, a, b);
      const HermitianMap g = dual_family(fam) == ConeFamily::kEb
                                 ? rnd::eb_channel(rng, b, a)
                                 : rnd::channel(rng, b, a);
      neg = std::max(neg, -pairing(m, g));
    }
  }
  out.push_back(check("cones/dual-pairing-nonnegative", neg, 1e-10));

  bool member = true;
  for (int t = 0; t < 5; ++t) {
    member = member && cp_membership(rnd::channel(rng, a, b)).verdict == Verdict::kIn;
    member = member && eb_membership(rnd::eb_channel(rng, a, b)).verdict == Verdict::kIn;
  }
  out.push_back(check_flag("cones/membership-on-constructed", member));
  return out;
}

std::vector<CheckResult> conic_suite(std::uint64_t seed) {
  rnd::Rng rng(seed);
  std::vector<CheckResult> out;

  // min Tr Y s.t. Y ⪰ ±H has value ‖H‖₁.
  double sdp_gap = 0.0;
  for (int t = 0; t < 3; ++t) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Mat h = rnd::hermitian(rng, d);
    const Interval iv = orderunit_norm(ChoiCone::kPsd, kron(h, Mat::Identity(1, 1)), d, 1);
    sdp_gap = std::max(sdp_gap, std::abs(iv.hi - op_norm(h)));
  }
  out.push_back(check("conic/order-unit-norm-psd-oracle", sdp_gap, 1e-7));

  // An LP in free variables: min Σt s.t. t ± x ≥ 0 gives the ℓ1 norm.
  double lp_gap = 0.0;
  for (int t = 0; t < 3; ++t) {
    const int d = 3 + static_cast<int>(rng() % 4);
    const RVec x = rand_rvec(rng, d);
    RMat ge(3 * d, 2 * d);
    RVec rhs = RVec::Zero(3 * d);
    ge.setZero();
    for (int i = 0; i < d; ++i) {
      ge(i, i) = 1.0;
      ge(i, d + i) = 1.0;
      ge(d + i, i) = 1.0;
      ge(d + i, d + i) = -1.0;
      ge(2 * d + i, i) = 1.0;
    }
    RVec c = RVec::Zero(2 * d);
    c.head(d).setOnes();
    // variables (t, y) with y pinned to x by equalities
    RMat eq(d, 2 * d);
    eq.setZero();
    for (int i = 0; i < d; ++i) eq(i, d + i) = 1.0;
    const conic::SolveResult r = conic::solve_lp(c, eq, x, ge, rhs);
    lp_gap = std::max(lp_gap, std::abs(r.value - x.lpNorm<1>()));
  }
  out.push_back(check("conic/lp-l1-oracle", lp_gap, 1e-8));
  return out;
}

std::vector<CheckResult> norms_suite(std::uint64_t seed) {
  rnd::Rng rng(seed);
  std::vector<CheckResult> out;
  const BlockAlgebra q2 = BlockAlgebra::full(2);

  const HermitianMap id2 = identity_map(q2);
  const double id_diamond = diamond_norm(ConeFamily::kCp, id2).value();
  const double id_dual = dual_diamond_norm(ConeFamily::kCp, id2).value();
  const double repl_dual =
      dual_diamond_norm(ConeFamily::kCp,
                        make_replacer(q2, rnd::state(rng, q2))).value();
  out.push_back(check("norms/identity-diamond-is-one",
                      std::abs(id_diamond - 1.0), 1e-7));
  // The dual unit ball is the replacer order interval, so replacers have
  // dual norm 1 while the identity costs the full d².
  out.push_back(check("norms/replacer-dual-diamond-is-one",
                      std::abs(repl_dual - 1.0), 1e-7));
  out.push_back(check("norms/identity-dual-diamond-is-d-squared",
                      std::abs(id_dual - 4.0), 1e-6));

  double dual_gap = 0.0;
  for (int t = 0; t < 3; ++t) {
    const HermitianMap m = rnd::herm_map(rng, q2, q2);
    dual_gap = std::max(dual_gap,
                        norm_duality_check(ConeFamily::kCp, m, rng()).rel_gap);
  }
  out.push_back(check("norms/diamond-dual-ball-duality", dual_gap, 1e-5));

  double mono = 0.0;
  for (int t = 0; t < 5; ++t) {
    const HermitianMap m = rnd::herm_map(rng, q2, q2);
    const HermitianMap pre = rnd::channel(rng, q2, q2);
    const HermitianMap post = rnd::channel(rng, q2, q2);
    const double base = diamond_norm(ConeFamily::kCp, m).value();
    mono = std::max(mono,
        diamond_norm(ConeFamily::kCp, compose(post, compose(m, pre))).value() - base);
  }
  out.push_back(check("norms/composition-monotonicity", mono, 1e-8));

  double closed = 0.0;
  for (int t = 0; t < 3; ++t) {
    std::vector<Mat> ops;
    const int n = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < n; ++i) ops.push_back(rnd::hermitian(rng, 2));
    closed = std::max(closed,
        std::abs(cq_diamond(ops) -
                 diamond_norm(ConeFamily::kCp, make_cq(q2, ops)).value()));
    closed = std::max(closed,
        std::abs(qc_dual_diamond(ops) -
                 dual_diamond_norm(ConeFamily::kCp, make_qc(q2, ops)).value()));
  }
  out.push_back(check("norms/classical-interface-closed-forms", closed, 1e-6));
  return out;
}

std::vector<CheckResult> deficiency_suite(std::uint64_t seed) {
  rnd::Rng rng(seed);
  std::vector<CheckResult> out;
  const BlockAlgebra q2 = BlockAlgebra::full(2);

  double reflexive = 0.0;
  for (int t = 0; t < 3; ++t) {
    const HermitianMap phi = rnd::channel(rng, q2, q2);
    reflexive = std::max(reflexive,
                         post_deficiency(ConeFamily::kCp, phi, phi).eps_hi);
    reflexive = std::max(reflexive,
                         pre_deficiency(ConeFamily::kCp, phi, phi).eps_hi);
  }
  out.push_back(check("deficiency/reflexivity", reflexive, 1e-7));

  double factor = 0.0;
  for (int t = 0; t < 2; ++t) {
    const HermitianMap psi = rnd::channel(rng, q2, q2);
    const HermitianMap alpha = rnd::channel(rng, q2, q2);
    factor = std::max(factor,
        post_deficiency(ConeFamily::kCp, compose(alpha, psi), psi).eps_hi);
  }
  out.push_back(check("deficiency/exact-factorization-recovered", factor, 1e-6));

  const Povm n = rnd::povm(rng, q2, 3);
  std::vector<Mat> trivial_effects;
  for (int i = 0; i < 2; ++i) trivial_effects.push_back(Mat(0.5 * Mat::Identity(2, 2)));
  const Povm trivial(q2, trivial_effects);
  out.push_back(check("deficiency/trivial-povm-cleanness-zero",
                      povm_post_cleanness(trivial, n).eps_hi, 1e-7));

  double ps = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Mat a = rnd::psd(rng, d), b = rnd::psd(rng, d);
    const double lhs = std::pow(frob_norm(Mat(psd_sqrt(a) - psd_sqrt(b))), 2);
    ps = std::max(ps, lhs - trace_norm(Mat(a - b)));
  }
  out.push_back(check("deficiency/powers-stormer-step", ps, 1e-10));
  return out;
}

std::vector<CheckResult> ovs_suite(std::uint64_t seed) {
  rnd::Rng rng(seed);
  std::vector<CheckResult> out;
  using namespace chandef::ovs;

  // Orthant: self-dual, simplex base gives ℓ1 / ℓ∞ pair.
  std::vector<RVec> axes;
  for (int i = 0; i < 3; ++i) axes.push_back(RVec(RVec::Unit(3, i)));
  const PolyCone orthant = PolyCone::from_generators(3, axes);
  bool self_dual = orthant.generators.size() == 3 && orthant.facets.size() == 3;
  const BaseSection simplex =
      BaseSection::make(orthant, RVec(RVec::Ones(3)), {});
  RVec x(3);
  x << 1.0, -2.0, 0.5;
  out.push_back(check_flag("ovs/orthant-self-dual", self_dual));
  out.push_back(check("ovs/simplex-l1-norm",
                      std::abs(base_section_norm(simplex, x).value - 3.5), 1e-8));
  out.push_back(check("ovs/simplex-dual-linf-norm",
                      std::abs(base_section_norm(dual_section(simplex), x).value - 2.0),
                      1e-8));

  const auto make_random_section = [&](int d) {
    std::vector<RVec> rays;
    for (int i = 0; i < d + 2; ++i) {
      RVec v = rand_rvec(rng, d).normalized();
      v(0) += 1.3;
      rays.push_back(std::move(v));
    }
    const PolyCone q = PolyCone::from_generators(d, rays);
    RVec btilde = RVec::Zero(d), p = RVec::Zero(d);
    for (const RVec& f : q.facets) btilde += f;
    for (const RVec& g : q.generators) p += g;
    return BaseSection::make(q, btilde, {p, rand_rvec(rng, d)});
  };

  double dd = 0.0, dn = 0.0, hi = 0.0;
  for (int t = 0; t < 5; ++t) {
    const int d = 3 + static_cast<int>(rng() % 3);
    const BaseSection b = make_random_section(d);
    const BaseSection bb = dual_section(dual_section(b));
    double worst = bb.vertices.size() == b.vertices.size() ? 0.0 : 1.0;
    for (size_t i = 0; i < b.vertices.size() && worst < 1.0; ++i)
      worst = std::max(worst, (bb.vertices[i] - b.vertices[i]).norm());
    dd = std::max(dd, worst);
    dn = std::max(dn, dual_norm_check(b, rand_rvec(rng, d)));
    RVec w1 = RVec::Zero(d), w2 = RVec::Zero(d);
    for (const RVec& v : b.vertices) {
      w1 += rnd::u01(rng) * v;
      w2 += rnd::u01(rng) * v;
    }
    w1 /= w1.dot(b.base_functional);
    w2 /= w2.dot(b.base_functional);
    hi = std::max(hi, half_identity_check(b, w1, w2).gap);
  }
  out.push_back(check("ovs/double-dual-identity", dd, 1e-8));
  out.push_back(check("ovs/norm-duality", dn, 1e-8));
  out.push_back(check("ovs/half-identity", hi, 1e-8));
  return out;
}

std::vector<CheckResult> run_all(std::uint64_t seed) {
  using Suite = std::vector<CheckResult> (*)(std::uint64_t);
  std::vector<CheckResult> all;
  for (Suite suite : {&matops_suite, &hmap_suite, &cones_suite, &conic_suite,
                      &norms_suite, &deficiency_suite, &ovs_suite}) {
    const std::vector<CheckResult> part = suite(seed);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace chandef::verify
