#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "chandef/cones.hpp"

using namespace chandef;

namespace {

Mat bell_state(int d) {  // normalized maximally entangled projector on d⊗d
  Mat phi = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) phi(i * d + i, j * d + j) = 1.0 / d;
  return phi;
}

Mat swap_op(int d) {
  Mat s = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

Mat random_herm(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
  return herm(m);
}

HermitianMap random_channel(std::mt19937_64& rng, int d, int env = 2) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat gin(d * env, d);
  for (int i = 0; i < d * env; ++i)
    for (int j = 0; j < d; ++j) gin(i, j) = Cx(g(rng), g(rng));
  const Mat v = Eigen::HouseholderQR<Mat>(gin).householderQ() * Mat::Identity(d * env, d);
  return map_from_action(BlockAlgebra::full(d), BlockAlgebra::full(d), [&](const Mat& a) {
    return partial_trace_second(Mat(v * a * v.adjoint()), d, env);
  });
}

}  // namespace

TEST_CASE("family duality table") {
  CHECK(dual_family(ConeFamily::kCp) == ConeFamily::kCp);
  CHECK(dual_family(ConeFamily::kEb) == ConeFamily::kPos);
  CHECK(dual_family(ConeFamily::kPos) == ConeFamily::kEb);
  for (ConeFamily f : {ConeFamily::kCp, ConeFamily::kEb, ConeFamily::kPos})
    CHECK(dual_family(dual_family(f)) == f);

  CHECK(map_cone(ConeFamily::kEb) == ChoiCone::kSep);
  CHECK(tilde_cone(ConeFamily::kEb) == ChoiCone::kBlockPos);
  CHECK(tilde_cone(ConeFamily::kPos) == ChoiCone::kSep);
  CHECK(tilde_cone(ConeFamily::kCp) == ChoiCone::kPsd);

  CHECK(ppt_is_exact(2, 3));
  CHECK(ppt_is_exact(1, 9));
  CHECK_FALSE(ppt_is_exact(3, 3));
}

TEST_CASE("psd membership margins") {
  Mat z = Mat::Identity(3, 3);
  CHECK(psd_membership(z).verdict == Verdict::kIn);
  z(2, 2) = -0.1;
  const Membership m = psd_membership(z);
  CHECK(m.verdict == Verdict::kOut);
  CHECK(m.margin < 0.0);
}

TEST_CASE("werner states cross the separability threshold at one third") {
  // ρ_p = p·|Ψ⁻⟩⟨Ψ⁻| + (1−p)·I/4 is separable exactly for p ≤ 1/3
  Mat psi_minus = Mat::Zero(4, 4);
  psi_minus(1, 1) = psi_minus(2, 2) = 0.5;
  psi_minus(1, 2) = psi_minus(2, 1) = -0.5;
  const auto werner = [&](double p) {
    return Mat(p * psi_minus + (1.0 - p) * 0.25 * Mat::Identity(4, 4));
  };
  CHECK(sep_membership(werner(0.2), 2, 2).verdict == Verdict::kIn);
  CHECK(sep_membership(werner(0.3333), 2, 2).verdict == Verdict::kIn);
  CHECK(sep_membership(werner(0.34), 2, 2).verdict == Verdict::kOut);
  CHECK(sep_membership(werner(0.5), 2, 2).verdict == Verdict::kOut);
  // the ppt margin is the analytic (1−3p)/4 eigenvalue, relative to scale
  const Membership m = sep_membership(werner(0.5), 2, 2);
  CHECK(m.margin * (1.0 + op_norm(werner(0.5))) ==
        doctest::Approx((1.0 - 1.5) / 4.0).epsilon(1e-9));
}

TEST_CASE("swap operator separates the psd and block-positive cones") {
  const Mat s = swap_op(2);
  CHECK(psd_membership(s).verdict == Verdict::kOut);
  CHECK(bp_membership(s, 2, 2).verdict == Verdict::kIn);

  // product expectations of swap fill [0,1]
  CHECK(min_product_expectation(s, 2, 2, 1) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(-min_product_expectation(Mat(-s), 2, 2, 1) == doctest::Approx(1.0).epsilon(1e-9));

  const Mat shifted = s - 0.4 * Mat::Identity(4, 4);
  const Membership m = bp_membership(shifted, 2, 2);
  CHECK(m.verdict == Verdict::kOut);
  CHECK(m.margin * (1.0 + op_norm(shifted)) == doctest::Approx(-0.4).epsilon(1e-6));
}

TEST_CASE("bell state is entangled, its mixtures with noise follow ppt") {
  const Mat phi = bell_state(2);
  CHECK(sep_membership(phi, 2, 2).verdict == Verdict::kOut);
  CHECK(psd_membership(phi).verdict == Verdict::kIn);
}

TEST_CASE("map-level family membership") {
  std::mt19937_64 rng(71);
  SUBCASE("channels are cp, generic ones are not eb") {
    const HermitianMap ch = random_channel(rng, 2);
    CHECK(family_membership(ConeFamily::kCp, ch).verdict == Verdict::kIn);
    const HermitianMap id = identity_map(BlockAlgebra::full(2));
    CHECK(family_membership(ConeFamily::kEb, id).verdict == Verdict::kOut);
    CHECK(family_membership(ConeFamily::kCp, id).verdict == Verdict::kIn);
  }
  SUBCASE("measure-and-prepare maps are eb") {
    Mat e0 = 0.5 * Mat::Identity(2, 2);
    e0(0, 1) = e0(1, 0) = 0.2;
    Mat r0 = random_herm(rng, 2), r1 = random_herm(rng, 2);
    r0 = r0 * r0; r0 /= r0.trace().real();
    r1 = r1 * r1; r1 /= r1.trace().real();
    const HermitianMap mp = make_measure_prepare(
        BlockAlgebra::full(2), BlockAlgebra::full(2),
        {e0, Mat(Mat::Identity(2, 2) - e0)}, {r0, r1});
    CHECK(family_membership(ConeFamily::kEb, mp).verdict == Verdict::kIn);
  }
  SUBCASE("the transpose map is positive but not cp") {
    const HermitianMap t = map_from_action(BlockAlgebra::full(2), BlockAlgebra::full(2),
                                           [](const Mat& a) { return Mat(a.transpose()); });
    CHECK((t.choi - swap_op(2)).norm() == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(family_membership(ConeFamily::kCp, t).verdict == Verdict::kOut);
    CHECK(family_membership(ConeFamily::kPos, t).verdict == Verdict::kIn);
    // duality: transpose ∈ Pos = EB*
    CHECK(dual_family_membership(ConeFamily::kEb, t).verdict == Verdict::kIn);
  }
}

TEST_CASE("separability beyond the ppt-exact range") {
  SUBCASE("near-maximally-mixed operators certify through the ball") {
    std::mt19937_64 rng(73);
    Mat h = random_herm(rng, 8);
    h -= (h.trace() / 8.0) * Mat::Identity(8, 8);
    h *= 0.05 / (1.0 + h.norm());
    const Mat z = Mat::Identity(8, 8) / 8.0 + h;
    const Membership m = sep_membership(z, 2, 4);
    CHECK(m.verdict == Verdict::kIn);
    CHECK(m.method == "separable ball");
  }
  SUBCASE("entanglement across the cut is still detected") {
    const Mat z = kron(bell_state(2), Mat(0.5 * Mat::Identity(2, 2)));
    CHECK(sep_membership(z, 2, 4).verdict == Verdict::kOut);
  }
  SUBCASE("a spread-out separable state is honestly undecided") {
    Mat z = Mat::Zero(9, 9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) z(i * 3 + j, i * 3 + j) = (i == j) ? 0.25 : 0.02;
    z /= z.trace().real();
    const Membership m = sep_membership(z, 3, 3);
    CHECK(m.verdict == Verdict::kUndecided);
  }
}

TEST_CASE("family nesting, duality pairing, and conjugation invariance") {
  std::mt19937_64 rng(107);
  SUBCASE("eb implies cp implies pos on generated maps") {
    for (int t = 0; t < 4; ++t) {
      const HermitianMap ch = random_channel(rng, 2);
      if (eb_membership(ch).verdict == Verdict::kIn)
        CHECK(cp_membership(ch).verdict == Verdict::kIn);
      CHECK(cp_membership(ch).verdict == Verdict::kIn);
      CHECK(pos_membership(ch).verdict == Verdict::kIn);
    }
  }
  SUBCASE("pairing of a family member with a dual-family member is nonnegative") {
    // f ∈ EB paired against g ∈ Pos = EB*, plus the self-dual cp case
    Mat r0 = random_herm(rng, 2), r1 = random_herm(rng, 2);
    r0 = r0 * r0; r0 /= r0.trace().real();
    r1 = r1 * r1; r1 /= r1.trace().real();
    Mat e0 = 0.4 * Mat::Identity(2, 2);
    e0(0, 1) = e0(1, 0) = 0.1;
    const HermitianMap f = make_measure_prepare(
        BlockAlgebra::full(2), BlockAlgebra::full(2),
        {e0, Mat(Mat::Identity(2, 2) - e0)}, {r0, r1});
    const HermitianMap transp = map_from_action(
        BlockAlgebra::full(2), BlockAlgebra::full(2),
        [](const Mat& a) { return Mat(a.transpose()); });
    for (int t = 0; t < 4; ++t) {
      const HermitianMap g = compose(transp, random_channel(rng, 2));
      REQUIRE(pos_membership(g).verdict == Verdict::kIn);
      CHECK(pairing(f, g) >= -1e-8);
      const HermitianMap c1 = random_channel(rng, 2), c2 = random_channel(rng, 2);
      CHECK(pairing(c1, c2) >= -1e-8);
    }
  }
  SUBCASE("verdicts survive local unitary conjugation") {
    std::normal_distribution<double> g(0.0, 1.0);
    const auto haar_unitary = [&](int d) {
      Mat m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
      return Mat(Eigen::HouseholderQR<Mat>(m).householderQ());
    };
    const Mat ua = haar_unitary(2), ub = haar_unitary(2);
    const Mat u = kron(ua, ub);
    for (const Mat& z : {bell_state(2), swap_op(2), Mat(Mat::Identity(4, 4) * 0.25)}) {
      const Mat zc = u * z * u.adjoint();
      CHECK(sep_membership(z, 2, 2).verdict == sep_membership(zc, 2, 2).verdict);
      CHECK(bp_membership(z, 2, 2).verdict == bp_membership(zc, 2, 2).verdict);
    }
  }
  SUBCASE("sandwiching by channels keeps every family") {
    for (ConeFamily fam : {ConeFamily::kCp, ConeFamily::kEb, ConeFamily::kPos}) {
      HermitianMap mid = random_channel(rng, 2);
      if (fam == ConeFamily::kEb)
        mid = compose(mid, make_replacer(BlockAlgebra::full(2),
                                         State(BlockAlgebra::full(2),
                                               Mat(0.5 * Mat::Identity(2, 2)))));
      if (fam == ConeFamily::kPos)
        mid = compose(map_from_action(BlockAlgebra::full(2), BlockAlgebra::full(2),
                                      [](const Mat& a) { return Mat(a.transpose()); }),
                      mid);
      REQUIRE(family_membership(fam, mid).verdict == Verdict::kIn);
      const HermitianMap pre = random_channel(rng, 2), post = random_channel(rng, 2);
      CHECK(family_membership(fam, compose(compose(post, mid), pre)).verdict ==
            Verdict::kIn);
    }
  }
  SUBCASE("tilde wrappers agree with the cone forms") {
    const Mat x = bell_state(2);
    CHECK(orderunit_norm_tilde(ConeFamily::kCp, x, 2, 2).lo ==
          doctest::Approx(op_norm(x)));
    // ‖·‖_{1,P̃}: the EB family feels entanglement (ball constrained to
    // block-positive order), the Pos family does not (ball in the sep order)
    CHECK(base_norm_tilde(ConeFamily::kEb, x, 2, 2).lo ==
          doctest::Approx(3.0).epsilon(1e-6));
    CHECK(base_norm_tilde(ConeFamily::kPos, x, 2, 2).lo ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(base_norm_tilde(ConeFamily::kCp, x, 2, 2).lo ==
          doctest::Approx(trace_norm(x)).epsilon(1e-6));
  }
}

TEST_CASE("order-unit norms") {
  SUBCASE("psd cone reduces to the operator norm") {
    std::mt19937_64 rng(79);
    const Mat x = random_herm(rng, 4);
    const Interval i = orderunit_norm(ChoiCone::kPsd, x, 2, 2);
    CHECK(i.exact);
    CHECK(i.lo == doctest::Approx(op_norm(x)));
  }
  SUBCASE("separable cone on the maximally entangled state") {
    const Interval i = orderunit_norm(ChoiCone::kSep, bell_state(2), 2, 2);
    REQUIRE(i.exact);
    CHECK(i.lo == doctest::Approx(1.0).epsilon(1e-7));  // I−Φ is still separable
  }
  SUBCASE("block-positive cone on swap") {
    const Interval i = orderunit_norm(ChoiCone::kBlockPos, swap_op(2), 2, 2);
    REQUIRE(i.exact);
    CHECK(i.hi == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("cone inclusions order the norms") {
    std::mt19937_64 rng(83);
    for (int t = 0; t < 3; ++t) {
      const Mat x = random_herm(rng, 4);
      const double sep = orderunit_norm(ChoiCone::kSep, x, 2, 2).lo;
      const double psd = orderunit_norm(ChoiCone::kPsd, x, 2, 2).lo;
      const double bp = orderunit_norm(ChoiCone::kBlockPos, x, 2, 2).hi;
      CHECK(sep >= psd - 1e-7);
      CHECK(psd >= bp - 1e-7);
    }
  }
  SUBCASE("bounds bracket at non-exact dimensions") {
    std::mt19937_64 rng(89);
    const Mat x = random_herm(rng, 8);
    const Interval s = orderunit_norm(ChoiCone::kSep, x, 2, 4);
    CHECK_FALSE(s.exact);
    CHECK(s.lo <= s.hi + 1e-9);
    const Interval b = orderunit_norm(ChoiCone::kBlockPos, x, 2, 4);
    CHECK_FALSE(b.exact);
    CHECK(b.lo <= b.hi + 1e-9);
  }
}

TEST_CASE("base norms") {
  SUBCASE("psd cone reduces to the trace norm") {
    std::mt19937_64 rng(97);
    const Mat x = random_herm(rng, 4);
    const Interval i = base_norm(ChoiCone::kPsd, x, 2, 2);
    CHECK(i.exact);
    CHECK(i.lo == doctest::Approx(trace_norm(x)));
  }
  SUBCASE("separable norm of the maximally entangled state is 2d−1") {
    const Interval i = base_norm(ChoiCone::kSep, bell_state(2), 2, 2);
    REQUIRE(i.exact);
    CHECK(i.lo == doctest::Approx(3.0).epsilon(1e-6));
  }
  SUBCASE("block-positive norm of swap is its trace") {
    const Interval i = base_norm(ChoiCone::kBlockPos, swap_op(2), 2, 2);
    REQUIRE(i.exact);
    CHECK(i.lo == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("cone inclusions order the norms") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 3; ++t) {
      const Mat x = random_herm(rng, 4);
      const double sep = base_norm(ChoiCone::kSep, x, 2, 2).lo;
      const double psd = trace_norm(x);
      const double bp = base_norm(ChoiCone::kBlockPos, x, 2, 2).hi;
      CHECK(sep >= psd - 1e-7);
      CHECK(psd >= bp - 1e-7);
    }
  }
  SUBCASE("bounds bracket at non-exact dimensions") {
    std::mt19937_64 rng(103);
    const Mat x = random_herm(rng, 8);
    const Interval s = base_norm(ChoiCone::kSep, x, 2, 4);
    CHECK_FALSE(s.exact);
    CHECK(s.lo <= s.hi + 1e-9);
    const Interval b = base_norm(ChoiCone::kBlockPos, x, 2, 4);
    CHECK_FALSE(b.exact);
    CHECK(b.lo <= b.hi + 1e-9);
  }
}
