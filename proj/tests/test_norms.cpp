#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "chandef/norms.hpp"

using namespace chandef;

namespace {

Mat random_herm(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
  return herm(m);
}

Mat random_psd(std::mt19937_64& rng, int d) {
  const Mat h = random_herm(rng, d);
  return h * h;
}

Mat haar_unitary(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
  return Mat(Eigen::HouseholderQR<Mat>(m).householderQ());
}

HermitianMap random_channel(std::mt19937_64& rng, int din, int dout, int env = 2) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat gin(dout * env, din);
  for (int i = 0; i < dout * env; ++i)
    for (int j = 0; j < din; ++j) gin(i, j) = Cx(g(rng), g(rng));
  const Mat v =
      Eigen::HouseholderQR<Mat>(gin).householderQ() * Mat::Identity(dout * env, din);
  return map_from_action(BlockAlgebra::full(din), BlockAlgebra::full(dout),
                         [&](const Mat& a) {
                           return partial_trace_second(Mat(v * a * v.adjoint()),
                                                       dout, env);
                         });
}

HermitianMap random_herm_map(std::mt19937_64& rng, int din, int dout) {
  return HermitianMap(BlockAlgebra::full(din), BlockAlgebra::full(dout),
                      random_herm(rng, din * dout));
}

HermitianMap depolarizing(double p) {
  return map_from_action(BlockAlgebra::full(2), BlockAlgebra::full(2),
                         [p](const Mat& a) {
                           return Mat((1.0 - p) * a +
                                      p * a.trace() * 0.5 * Mat::Identity(2, 2));
                         });
}

HermitianMap transpose_map(int d) {
  return map_from_action(BlockAlgebra::full(d), BlockAlgebra::full(d),
                         [](const Mat& a) { return Mat(a.transpose()); });
}

}  // namespace

TEST_CASE("channels have norm one in their family") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 3; ++t) {
    const HermitianMap ch = random_channel(rng, 2, 2);
    CHECK(diamond_norm(ConeFamily::kCp, ch).value() == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(diamond_norm(ConeFamily::kPos, ch).value() == doctest::Approx(1.0).epsilon(1e-7));
  }
  // entanglement-breaking channels are base elements of the EB family too
  Mat r0 = random_psd(rng, 2), r1 = random_psd(rng, 2);
  r0 /= r0.trace().real();
  r1 /= r1.trace().real();
  Mat e0 = 0.3 * Mat::Identity(2, 2);
  e0(0, 1) = e0(1, 0) = 0.1;
  const HermitianMap mp = make_measure_prepare(
      BlockAlgebra::full(2), BlockAlgebra::full(2),
      {e0, Mat(Mat::Identity(2, 2) - e0)}, {r0, r1});
  CHECK(diamond_norm(ConeFamily::kEb, mp).value() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(dual_diamond_norm(ConeFamily::kCp, make_replacer(
            BlockAlgebra::full(2),
            State(BlockAlgebra::full(2), r0))).value() ==
        doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("the identity channel seen by the entanglement-breaking family") {
  // isotropic twirling reduces the program to two scalars; the minimum is
  // 2d−1 at dimension d, the separable-decomposition norm of the Bell state
  const NormResult r = diamond_norm(ConeFamily::kEb, identity_map(BlockAlgebra::full(2)));
  CHECK(r.value_lo == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(r.value_hi == doctest::Approx(3.0).epsilon(1e-6));
  // while the transpose map is a base element of the Pos family
  CHECK(diamond_norm(ConeFamily::kPos, transpose_map(2)).value() ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("family orderings from the cone inclusions") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 2; ++t) {
    const HermitianMap m = random_herm_map(rng, 2, 2);
    const double d_eb = diamond_norm(ConeFamily::kEb, m).value();
    const double d_cp = diamond_norm(ConeFamily::kCp, m).value();
    const double d_pos = diamond_norm(ConeFamily::kPos, m).value();
    CHECK(d_eb >= d_cp - 1e-7);
    CHECK(d_cp >= d_pos - 1e-7);
    const double u_pos = dual_diamond_norm(ConeFamily::kPos, m).value();
    const double u_cp = dual_diamond_norm(ConeFamily::kCp, m).value();
    const double u_eb = dual_diamond_norm(ConeFamily::kEb, m).value();
    CHECK(u_pos >= u_cp - 1e-7);
    CHECK(u_cp >= u_eb - 1e-7);
  }
}

TEST_CASE("closed forms against the general programs") {
  std::mt19937_64 rng(17);
  SUBCASE("single-operator examples") {
    const Mat z = (Mat(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
    CHECK(cq_diamond({z}) == doctest::Approx(2.0));
    const HermitianMap cq = make_cq(BlockAlgebra::full(2), {z});
    CHECK(diamond_norm(ConeFamily::kCp, cq).value() == doctest::Approx(2.0).epsilon(1e-7));

    Mat e00 = Mat::Zero(2, 2), e11 = Mat::Zero(2, 2);
    e00(0, 0) = 1.0;
    e11(1, 1) = 1.0;
    CHECK(qc_dual_diamond({e00, e11}) == doctest::Approx(2.0));
    const HermitianMap qc = make_qc(BlockAlgebra::full(2), {e00, e11});
    CHECK(dual_diamond_norm(ConeFamily::kCp, qc).value() ==
          doctest::Approx(2.0).epsilon(1e-7));
    CHECK(qc_dual_diamond({Mat(0.5 * Mat::Identity(2, 2)),
                           Mat(0.5 * Mat::Identity(2, 2))}) == doctest::Approx(1.0));
  }
  SUBCASE("random lists, both directions") {
    for (int t = 0; t < 3; ++t) {
      const int n = 2 + (t % 2), d = 2;
      std::vector<Mat> a;
      for (int i = 0; i < n; ++i) a.push_back(random_herm(rng, d));

      const HermitianMap cq = make_cq(BlockAlgebra::full(d), a);
      CHECK(diamond_norm(ConeFamily::kCp, cq).value() ==
            doctest::Approx(cq_diamond(a)).epsilon(1e-6));
      CHECK(dual_diamond_norm(ConeFamily::kCp, cq).value() ==
            doctest::Approx(cq_dual_diamond(a).value()).epsilon(1e-6));

      const HermitianMap qc = make_qc(BlockAlgebra::full(d), a);
      CHECK(dual_diamond_norm(ConeFamily::kCp, qc).value() ==
            doctest::Approx(qc_dual_diamond(a)).epsilon(1e-6));
      const NormResult qd = qc_diamond(a, 5 + static_cast<std::uint64_t>(t));
      const double general = diamond_norm(ConeFamily::kCp, qc).value();
      CHECK(qd.value_lo <= general + 1e-6);
      CHECK(qd.value_hi >= general - 1e-6);
      CHECK(qd.value_hi - qd.value_lo <= 1e-4 * (1.0 + qd.value_hi));
    }
  }
  SUBCASE("support-covering program examples") {
    CHECK(cq_dual_diamond({Mat::Identity(1, 1)}).value() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cq_dual_diamond({Mat::Identity(2, 2)}).value() == doctest::Approx(2.0).epsilon(1e-7));
    Mat d0 = Mat::Zero(2, 2), d1 = Mat::Zero(2, 2);
    d0(0, 0) = 1.0;
    d1(1, 1) = 1.0;
    const NormResult r = cq_dual_diamond({d0, d1});
    CHECK(r.value() == doctest::Approx(2.0).epsilon(1e-7));
    CHECK_FALSE(r.infinite);
  }
  SUBCASE("qc diamond of a single observable") {
    const Mat z = (Mat(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
    const NormResult r = qc_diamond({z}, 7);
    CHECK(r.value_hi == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.value_lo == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("norm duality") {
  std::mt19937_64 rng(19);
  SUBCASE("identity channel") {
    const DualityGap g = norm_duality_check(ConeFamily::kCp,
                                            identity_map(BlockAlgebra::full(2)));
    CHECK(g.norm_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.rel_gap <= 1e-6);
  }
  SUBCASE("random qubit maps") {
    for (int t = 0; t < 3; ++t) {
      const HermitianMap m = random_herm_map(rng, 2, 2);
      const DualityGap g = norm_duality_check(ConeFamily::kCp, m, 23 + t);
      CHECK(g.rel_gap <= 1e-5);
      // and the other pairing: ball form of the dual norm
      const double u = dual_diamond_norm(ConeFamily::kCp, m).value();
      const double b = dual_diamond_via_ball(ConeFamily::kCp, m).value;
      CHECK(u == doctest::Approx(b).epsilon(1e-6));
    }
  }
  SUBCASE("cq map closed-form cross-check") {
    std::vector<Mat> a = {random_herm(rng, 2), random_herm(rng, 2)};
    const HermitianMap cq = make_cq(BlockAlgebra::full(2), a);
    const DualityGap g = norm_duality_check(ConeFamily::kCp, cq, 29);
    CHECK(g.norm_value == doctest::Approx(cq_diamond(a)).epsilon(1e-6));
    CHECK(g.rel_gap <= 1e-6);
  }
}

TEST_CASE("stabilized pure-input form agrees with the program") {
  std::mt19937_64 rng(31);
  conic::PureSearchOptions heavy;
  heavy.samples = 400;
  heavy.refine_top = 6;
  heavy.refine_iters = 200;
  SUBCASE("identity minus completely depolarizing") {
    const HermitianMap delta =
        identity_map(BlockAlgebra::full(2)) - depolarizing(1.0);
    const double sdp = diamond_norm(ConeFamily::kCp, delta).value();
    const double stab = diamond_pure_input_bound(delta, 41, heavy);
    CHECK(stab == doctest::Approx(sdp).epsilon(1e-5));
  }
  SUBCASE("random channel differences") {
    for (int t = 0; t < 2; ++t) {
      const HermitianMap delta =
          random_channel(rng, 2, 2) - random_channel(rng, 2, 2);
      const double sdp = diamond_norm(ConeFamily::kCp, delta).value();
      const double stab = diamond_pure_input_bound(delta, 43 + t, heavy);
      CHECK(stab <= sdp + 1e-8);
      CHECK(stab == doctest::Approx(sdp).epsilon(1e-5));
    }
  }
}

TEST_CASE("norm axioms and invariances") {
  std::mt19937_64 rng(37);
  const HermitianMap m = random_herm_map(rng, 2, 2);
  SUBCASE("homogeneity and triangle") {
    const double v = diamond_norm(ConeFamily::kCp, m).value();
    CHECK(diamond_norm(ConeFamily::kCp, 2.5 * m).value() ==
          doctest::Approx(2.5 * v).epsilon(1e-8));
    const HermitianMap m2 = random_herm_map(rng, 2, 2);
    const double v2 = diamond_norm(ConeFamily::kCp, m2).value();
    CHECK(diamond_norm(ConeFamily::kCp, m + m2).value() <= v + v2 + 1e-8);
    const double u = dual_diamond_norm(ConeFamily::kCp, m).value();
    CHECK(dual_diamond_norm(ConeFamily::kCp, 2.5 * m).value() ==
          doctest::Approx(2.5 * u).epsilon(1e-8));
  }
  SUBCASE("output-unitary invariance") {
    const Mat u = haar_unitary(rng, 2);
    const HermitianMap conj_u =
        map_from_action(BlockAlgebra::full(2), BlockAlgebra::full(2),
                        [&](const Mat& a) { return Mat(u * a * u.adjoint()); });
    const double before = diamond_norm(ConeFamily::kCp, m).value();
    const double after = diamond_norm(ConeFamily::kCp, compose(conj_u, m)).value();
    CHECK(after == doctest::Approx(before).epsilon(1e-8));
  }
  SUBCASE("monotonicity under channel composition") {
    for (int t = 0; t < 3; ++t) {
      const HermitianMap phi = random_herm_map(rng, 2, 2);
      const HermitianMap alpha = random_channel(rng, 2, 2);
      const HermitianMap beta = random_channel(rng, 2, 2);
      const double base = diamond_norm(ConeFamily::kCp, phi).value();
      CHECK(diamond_norm(ConeFamily::kCp, compose(beta, compose(phi, alpha))).value() <=
            base + 1e-8);
      const double dual_base = dual_diamond_norm(ConeFamily::kCp, phi).value();
      CHECK(dual_diamond_norm(ConeFamily::kCp,
                              compose(beta, compose(phi, alpha))).value() <=
            dual_base + 1e-8);
    }
  }
  SUBCASE("pairing bounded by the product of dual norms") {
    for (int t = 0; t < 3; ++t) {
      const HermitianMap f = random_herm_map(rng, 2, 2);
      const HermitianMap g = random_herm_map(rng, 2, 2);
      CHECK(std::abs(pairing(f, g)) <=
            diamond_norm(ConeFamily::kCp, f).value() *
                    dual_diamond_norm(ConeFamily::kCp, g).value() +
                1e-7);
    }
  }
}

TEST_CASE("interval reporting beyond the exact range") {
  std::mt19937_64 rng(47);
  const HermitianMap m = random_herm_map(rng, 2, 4);
  const NormResult d = diamond_norm(ConeFamily::kEb, m, 53);
  CHECK(d.value_lo <= d.value_hi + 1e-9);
  CHECK(d.value_lo >= diamond_norm(ConeFamily::kCp, m).value() - 1e-6);
  const NormResult u = dual_diamond_norm(ConeFamily::kPos, m);
  CHECK(u.value_lo <= u.value_hi + 1e-9);
  CHECK(u.value_lo >= dual_diamond_norm(ConeFamily::kCp, m).value() - 1e-6);
}
