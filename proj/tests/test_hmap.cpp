#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "chandef/hmap.hpp"

using namespace chandef;

namespace {

Mat ginibre(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Cx(g(rng), g(rng));
  return m;
}

Mat random_herm(std::mt19937_64& rng, int d) { return herm(ginibre(rng, d, d)); }

// Channel a ↦ Tr_env[V a V†] from a Haar-ish isometry V: C^d → C^d ⊗ C^env.
HermitianMap random_channel(std::mt19937_64& rng, int d, int env = 2) {
  const Eigen::HouseholderQR<Mat> qr(ginibre(rng, d * env, d));
  const Mat v = qr.householderQ() * Mat::Identity(d * env, d);
  return map_from_action(BlockAlgebra::full(d), BlockAlgebra::full(d),
                         [&](const Mat& a) {
                           return partial_trace_second(Mat(v * a * v.adjoint()), d, env);
                         });
}

double state_diff(const Mat& a, const Mat& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("choi round trip for a conjugation map") {
  std::mt19937_64 rng(21);
  const int din = 3, dout = 2;
  const Mat x = ginibre(rng, dout, din);
  const auto action = [&](const Mat& a) { return Mat(x * a * x.adjoint()); };
  const HermitianMap m =
      map_from_action(BlockAlgebra::full(din), BlockAlgebra::full(dout), action);

  // entry convention: C[(k,i),(l,j)] = ⟨k|φ(|i⟩⟨j|)|l⟩
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      Mat unit = Mat::Zero(din, din);
      unit(i, j) = 1.0;
      const Mat img = action(unit);
      for (int k = 0; k < dout; ++k)
        for (int l = 0; l < dout; ++l)
          CHECK(std::abs(m.choi(k * din + i, l * din + j) - img(k, l)) ==
                doctest::Approx(0.0).epsilon(1e-12));
    }

  const Mat a = random_herm(rng, din);
  CHECK(state_diff(apply_map(m, a), action(a)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identity map and the entangled functional") {
  const HermitianMap id = identity_map(BlockAlgebra::full(3));
  CHECK(state_diff(id.choi, max_entangled(3)) == doctest::Approx(0.0));
  std::mt19937_64 rng(2);
  const Mat a = random_herm(rng, 3);
  CHECK(state_diff(apply_map(id, a), a) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(strace(id) == doctest::Approx(9.0));  // Σ_ij ⟨i|(|i⟩⟨j|)|j⟩ = d²
  CHECK(is_trace_preserving(id));

  // on a diagonal subalgebra the pattern collapses to the classical identity
  const HermitianMap idc = identity_map(BlockAlgebra::diagonal(2));
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = 1.0;  // (out 0, in 0)
  want(3, 3) = 1.0;  // (out 1, in 1)
  CHECK(state_diff(idc.choi, want) == doctest::Approx(0.0));
}

TEST_CASE("trace preservation detection") {
  std::mt19937_64 rng(23);
  const HermitianMap ch = random_channel(rng, 3);
  CHECK(tp_defect(ch) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(is_trace_preserving(ch));

  HermitianMap scaled = ch;
  scaled *= 1.5;
  CHECK_FALSE(is_trace_preserving(scaled));
}

TEST_CASE("composition matches nested application") {
  std::mt19937_64 rng(29);
  const HermitianMap f = random_channel(rng, 2);
  const HermitianMap g = random_channel(rng, 2, 3);
  const HermitianMap gf = compose(g, f);
  const Mat a = random_herm(rng, 2);
  CHECK(state_diff(apply_map(gf, a), apply_map(g, apply_map(f, a))) ==
        doctest::Approx(0.0).epsilon(1e-11));
  CHECK(is_trace_preserving(gf));

  const HermitianMap wrong_mid = random_channel(rng, 3);
  CHECK_THROWS_AS(compose(f, wrong_mid), std::invalid_argument);
}

TEST_CASE("adjoint satisfies the trace pairing identity") {
  std::mt19937_64 rng(31);
  const Mat x = ginibre(rng, 3, 2);
  const HermitianMap m = map_from_action(
      BlockAlgebra::full(2), BlockAlgebra::full(3),
      [&](const Mat& a) { return Mat(x * a * x.adjoint()); });
  const HermitianMap ma = adjoint_map(m);

  const Mat a = random_herm(rng, 2);
  const Mat b = random_herm(rng, 3);
  const Cx lhs = (b * apply_map(m, a)).trace();
  const Cx rhs = (apply_map(ma, b) * a).trace();
  CHECK(std::abs(lhs - rhs) == doctest::Approx(0.0).epsilon(1e-12));

  const HermitianMap maa = adjoint_map(ma);
  CHECK(state_diff(maa.choi, m.choi) == doctest::Approx(0.0).epsilon(1e-13));

  // a channel's adjoint is unital
  const HermitianMap ch = random_channel(rng, 3);
  CHECK(state_diff(apply_map(adjoint_map(ch), Mat::Identity(3, 3)), Mat::Identity(3, 3)) ==
        doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("tensor map acts factorwise") {
  std::mt19937_64 rng(37);
  const HermitianMap f = random_channel(rng, 2);
  const HermitianMap g = random_channel(rng, 3);
  const HermitianMap fg = tensor_map(f, g);
  const Mat a = random_herm(rng, 2);
  const Mat b = random_herm(rng, 3);
  CHECK(state_diff(apply_map(fg, kron(a, b)), kron(apply_map(f, a), apply_map(g, b))) ==
        doctest::Approx(0.0).epsilon(1e-11));
  CHECK(is_trace_preserving(fg));

  // entangled inputs once more, against the partial-application helpers
  const Mat m6 = random_herm(rng, 6);
  const Mat via_first = apply_on_second(g, apply_on_first(f, m6, 3), 2);
  CHECK(state_diff(apply_map(fg, m6), via_first) == doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("partial application on either tensor factor") {
  std::mt19937_64 rng(41);
  const HermitianMap f = random_channel(rng, 2, 3);
  const Mat a = random_herm(rng, 2);
  const Mat b = random_herm(rng, 3);
  CHECK(state_diff(apply_on_first(f, kron(a, b), 3), kron(apply_map(f, a), b)) ==
        doctest::Approx(0.0).epsilon(1e-11));
  CHECK(state_diff(apply_on_second(f, kron(b, a), 3), kron(b, apply_map(f, a))) ==
        doctest::Approx(0.0).epsilon(1e-11));
  CHECK_THROWS_AS(apply_on_first(f, kron(a, a), 3), std::invalid_argument);  // 4×4 vs 2·3
}

TEST_CASE("pairing equals the composition functional") {
  std::mt19937_64 rng(43);
  const Mat x = ginibre(rng, 3, 2), y = ginibre(rng, 2, 3);
  const HermitianMap f = map_from_action(
      BlockAlgebra::full(2), BlockAlgebra::full(3),
      [&](const Mat& a) { return Mat(x * a * x.adjoint()); });
  const HermitianMap g = map_from_action(
      BlockAlgebra::full(3), BlockAlgebra::full(2),
      [&](const Mat& a) { return Mat(y * a * y.adjoint()); });

  CHECK(pairing(f, g) == doctest::Approx(strace(compose(g, f))).epsilon(1e-11));

  // ⟨α∘β, ψ⟩ = ⟨β, ψ∘α⟩ for β: A→B, α: B→C, ψ: C→A
  const HermitianMap beta = random_channel(rng, 2);
  const Mat z = ginibre(rng, 3, 2);
  const HermitianMap alpha = map_from_action(
      BlockAlgebra::full(2), BlockAlgebra::full(3),
      [&](const Mat& a) { return Mat(z * a * z.adjoint()); });
  const Mat w = ginibre(rng, 2, 3);
  const HermitianMap psi = map_from_action(
      BlockAlgebra::full(3), BlockAlgebra::full(2),
      [&](const Mat& a) { return Mat(w * a * w.adjoint()); });
  CHECK(pairing(compose(alpha, beta), psi) ==
        doctest::Approx(pairing(beta, compose(psi, alpha))).epsilon(1e-11));

  // channels pair to 1 with any state replacer on the output side
  const HermitianMap ch = random_channel(rng, 3);
  const Mat rho_raw = ginibre(rng, 3, 3);
  Mat rho = rho_raw * rho_raw.adjoint();
  rho /= rho.trace().real();
  const HermitianMap rep = make_replacer(BlockAlgebra::full(3), State(BlockAlgebra::full(3), rho));
  CHECK(pairing(ch, rep) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(strace(rep) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classical-quantum constructors") {
  std::mt19937_64 rng(47);
  Mat b0 = ginibre(rng, 2, 2), b1 = ginibre(rng, 2, 2);
  b0 = b0 * b0.adjoint();
  b1 = b1 * b1.adjoint();
  b0 /= b0.trace().real();
  b1 /= b1.trace().real();

  SUBCASE("cq map sends point masses to the listed states") {
    const HermitianMap cq = make_cq(BlockAlgebra::full(2), {b0, b1});
    CHECK(cq.din() == 2);
    CHECK(cq.in_alg.is_diagonal());
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 0.3;
    p(1, 1) = 0.7;
    CHECK(state_diff(apply_map(cq, p), Mat(0.3 * b0 + 0.7 * b1)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(is_trace_preserving(cq));
  }

  SUBCASE("qc map lists expectation values on the diagonal") {
    Mat e0 = 0.5 * Mat::Identity(2, 2), e1 = 0.5 * Mat::Identity(2, 2);
    e0(0, 1) = e0(1, 0) = 0.25;
    e1(0, 1) = e1(1, 0) = -0.25;
    const HermitianMap qc = make_qc(BlockAlgebra::full(2), {e0, e1});
    CHECK(qc.out_alg.is_diagonal());
    const Mat a = random_herm(rng, 2);
    const Mat img = apply_map(qc, a);
    CHECK(std::abs(img(0, 0) - (e0 * a).trace()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(img(1, 1) - (e1 * a).trace()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(img(0, 1)) == doctest::Approx(0.0));
    CHECK(is_trace_preserving(qc));
  }

  SUBCASE("experiment and povm channel wrappers") {
    const Experiment e(BlockAlgebra::full(2), {b0, b1});
    const HermitianMap cq = cq_channel(e);
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 1.0;
    CHECK(state_diff(apply_map(cq, p), b0) == doctest::Approx(0.0).epsilon(1e-12));

    Mat e0 = 0.25 * Mat::Identity(2, 2);
    const Povm povm(BlockAlgebra::full(2), {e0, Mat(Mat::Identity(2, 2) - e0)});
    const HermitianMap qc = qc_channel(povm);
    CHECK(is_trace_preserving(qc));
  }
}

TEST_CASE("measure-and-prepare maps") {
  std::mt19937_64 rng(53);
  Mat f0 = ginibre(rng, 2, 2), f1 = ginibre(rng, 2, 2);
  f0 = f0 * f0.adjoint();
  f1 = f1 * f1.adjoint();
  Mat r0 = ginibre(rng, 3, 3), r1 = ginibre(rng, 3, 3);
  r0 = r0 * r0.adjoint();
  r1 = r1 * r1.adjoint();
  r0 /= r0.trace().real();
  r1 /= r1.trace().real();

  const HermitianMap mp = make_measure_prepare(BlockAlgebra::full(2), BlockAlgebra::full(3),
                                               {f0, f1}, {r0, r1});
  const Mat a = random_herm(rng, 2);
  const Mat want = std::real((f0 * a).trace()) * r0 + std::real((f1 * a).trace()) * r1;
  CHECK(state_diff(apply_map(mp, a), want) == doctest::Approx(0.0).epsilon(1e-11));

  SUBCASE("normalization produces a genuine povm without changing the map") {
    const MeasurePrepare norm = normalize_measure_prepare(BlockAlgebra::full(2), {f0, f1}, {r0, r1});
    CHECK_NOTHROW(Povm(BlockAlgebra::full(2), norm.effects));
    const HermitianMap mp2 = make_measure_prepare(
        BlockAlgebra::full(2), BlockAlgebra::full(3), norm.effects, norm.preparations);
    CHECK(state_diff(mp2.choi, mp.choi) == doctest::Approx(0.0).epsilon(1e-11));
  }
}

TEST_CASE("replacer and trace-identity maps") {
  std::mt19937_64 rng(59);
  Mat s = ginibre(rng, 2, 2);
  s = s * s.adjoint();
  s /= s.trace().real();
  const State sigma(BlockAlgebra::full(2), s);

  const HermitianMap rep = make_replacer(BlockAlgebra::full(3), sigma);
  const Mat a = random_herm(rng, 3);
  CHECK(state_diff(apply_map(rep, a), Mat(a.trace() * s)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(state_diff(rep.choi, kron(s, Mat::Identity(3, 3))) == doctest::Approx(0.0));
  CHECK(is_trace_preserving(rep));

  const HermitianMap ti = make_trace_identity(BlockAlgebra::full(3), BlockAlgebra::full(2));
  CHECK(state_diff(apply_map(ti, a), Mat(a.trace() * Mat::Identity(2, 2))) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("map arithmetic stays on the common signature") {
  std::mt19937_64 rng(61);
  const HermitianMap f = random_channel(rng, 2);
  const HermitianMap g = random_channel(rng, 2);
  const HermitianMap d = f - g;
  const Mat a = random_herm(rng, 2);
  CHECK(state_diff(apply_map(d, a), Mat(apply_map(f, a) - apply_map(g, a))) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const HermitianMap h = random_channel(rng, 3);
  CHECK_THROWS_AS(f + h, std::invalid_argument);
}

TEST_CASE("subalgebra maps keep the product block pattern") {
  // embedded qc/cq composite on D_2 → B(C^2) → D_2
  std::mt19937_64 rng(67);
  const HermitianMap ch = random_channel(rng, 2);
  Mat e0 = 0.5 * Mat::Identity(2, 2);
  e0(0, 1) = e0(1, 0) = 0.3;
  const Povm povm(BlockAlgebra::full(2), {e0, Mat(Mat::Identity(2, 2) - e0)});
  const HermitianMap qc = qc_channel(povm);

  const HermitianMap classical = compose(qc, compose(ch, cq_channel(Experiment(
      BlockAlgebra::full(2), {Mat(0.5 * Mat::Identity(2, 2)), Mat(0.5 * Mat::Identity(2, 2))}))));
  CHECK(classical.in_alg.is_diagonal());
  CHECK(classical.out_alg.is_diagonal());
  // Choi of a classical map only has ((k,i),(k,i)) entries
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c) CHECK(std::abs(classical.choi(r, c)) == doctest::Approx(0.0));
  CHECK(is_trace_preserving(classical));
}
