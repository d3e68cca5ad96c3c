#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "chandef/matops.hpp"

using namespace chandef;

namespace {

// Local seeded generators; the library-level random module is tested separately.
Mat random_herm(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
  return herm(m);
}

Mat random_psd(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
  return m * m.adjoint();
}

}  // namespace

TEST_CASE("block algebra bookkeeping") {
  const BlockAlgebra alg({2, 3, 1});
  CHECK(alg.ambient() == 6);
  CHECK(alg.num_blocks() == 3);
  CHECK(alg.herm_dim() == 4 + 9 + 1);
  CHECK_FALSE(alg.is_full());
  CHECK_FALSE(alg.is_diagonal());
  CHECK(alg.block_start(1) == 2);
  CHECK(alg.block_of(0) == 0);
  CHECK(alg.block_of(4) == 1);
  CHECK(alg.block_of(5) == 2);
  CHECK(alg.same_block(2, 4));
  CHECK_FALSE(alg.same_block(1, 2));

  CHECK(BlockAlgebra::full(4).is_full());
  CHECK(BlockAlgebra::diagonal(4).is_diagonal());
  CHECK(BlockAlgebra::diagonal(1).is_full());

  CHECK_THROWS_AS(BlockAlgebra(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(BlockAlgebra({2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(BlockAlgebra({-1}), std::invalid_argument);
}

TEST_CASE("tensor products of algebras") {
  SUBCASE("second factor full: blocks scale") {
    const BlockAlgebra t = tensor(BlockAlgebra({2, 1}), BlockAlgebra::full(3));
    CHECK(t.blocks == std::vector<int>{6, 3});
  }
  SUBCASE("both diagonal: diagonal of the product size") {
    const BlockAlgebra t = tensor(BlockAlgebra::diagonal(2), BlockAlgebra::diagonal(3));
    CHECK(t.is_diagonal());
    CHECK(t.ambient() == 6);
  }
  SUBCASE("unrepresentable pattern is rejected") {
    CHECK_THROWS_AS(tensor(BlockAlgebra::full(2), BlockAlgebra::diagonal(2)),
                    std::invalid_argument);
  }
}

TEST_CASE("hermitian basis is orthonormal and spans the pattern") {
  const BlockAlgebra alg({2, 3});
  const auto basis = hermitian_basis(alg);
  REQUIRE(static_cast<int>(basis.size()) == alg.herm_dim());
  for (size_t s = 0; s < basis.size(); ++s) {
    CHECK(herm_defect(basis[s]) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(off_pattern_defect(alg, basis[s]) == doctest::Approx(0.0).epsilon(1e-14));
    for (size_t t = 0; t < basis.size(); ++t) {
      const double want = (s == t) ? 1.0 : 0.0;
      CHECK(std::real((basis[s] * basis[t]).trace()) == doctest::Approx(want).epsilon(1e-12));
    }
  }

  std::mt19937_64 rng(11);
  const Mat h = conditional_expectation(alg, random_herm(rng, alg.ambient()));
  const RVec coords = algebra_coordinates(alg, h);
  Mat rebuilt = Mat::Zero(alg.ambient(), alg.ambient());
  for (size_t s = 0; s < basis.size(); ++s) rebuilt += coords(static_cast<int>(s)) * basis[s];
  CHECK((rebuilt - h).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eigendecomposition reconstructs and sorts descending") {
  std::mt19937_64 rng(7);
  const Mat h = random_herm(rng, 5);
  const EigResult e = eig(h);
  Mat rebuilt = Mat::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    rebuilt += e.values(i) * e.vectors.col(i) * e.vectors.col(i).adjoint();
  CHECK((rebuilt - h).norm() == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i + 1 < 5; ++i) CHECK(e.values(i) >= e.values(i + 1));
  CHECK((e.vectors * e.vectors.adjoint() - Mat::Identity(5, 5)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral norms") {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 3.0;
  h(1, 1) = -4.0;
  CHECK(trace_norm(h) == doctest::Approx(7.0));
  CHECK(op_norm(h) == doctest::Approx(4.0));

  std::mt19937_64 rng(3);
  const Mat r = random_herm(rng, 6);
  const EigResult e = eig(r);
  CHECK(trace_norm(r) == doctest::Approx(e.values.cwiseAbs().sum()).epsilon(1e-12));
  CHECK(op_norm(r) == doctest::Approx(e.values.cwiseAbs().maxCoeff()).epsilon(1e-12));
  CHECK(trace_norm(r) >= op_norm(r));
  CHECK(frob_norm(r) * frob_norm(r) ==
        doctest::Approx(e.values.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("psd square roots") {
  std::mt19937_64 rng(5);
  const Mat p = random_psd(rng, 4);
  const Mat s = psd_sqrt(p);
  CHECK((s * s - p).norm() == doctest::Approx(0.0).epsilon(1e-10));

  // negative part is clipped
  const Mat h = random_herm(rng, 4);
  const EigResult e = eig(h);
  Mat pos = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    pos += std::max(e.values(i), 0.0) * e.vectors.col(i) * e.vectors.col(i).adjoint();
  const Mat sh = psd_sqrt(h);
  CHECK((sh * sh - pos).norm() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("pseudo-inverse square root on a rank-deficient operator") {
  std::mt19937_64 rng(9);
  Mat v(4, 2);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) v(i, j) = Cx(g(rng), g(rng));
  const Mat p = v * v.adjoint();  // rank 2 PSD on C^4

  const PinvSqrtResult r = pinv_sqrt(p);
  CHECK(r.rank == 2);
  CHECK((r.support * p * r.support - p).norm() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK((r.inv_sqrt * p * r.inv_sqrt - r.support).norm() ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK((r.sqrt * r.sqrt - p).norm() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK((r.sqrt * r.inv_sqrt - r.support).norm() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("partial traces against the duality oracle") {
  std::mt19937_64 rng(13);
  const int da = 3, db = 2;
  const Mat m = random_herm(rng, da * db);
  const Mat a = random_herm(rng, da);
  const Mat b = random_herm(rng, db);

  // Tr[(A⊗I)M] = Tr[A · Tr_2(M)]  and  Tr[(I⊗B)M] = Tr[B · Tr_1(M)]
  const Cx lhs1 = (kron(a, Mat::Identity(db, db)) * m).trace();
  const Cx rhs1 = (a * partial_trace_second(m, da, db)).trace();
  CHECK(std::abs(lhs1 - rhs1) == doctest::Approx(0.0).epsilon(1e-12));

  const Cx lhs2 = (kron(Mat::Identity(da, da), b) * m).trace();
  const Cx rhs2 = (b * partial_trace_first(m, da, db)).trace();
  CHECK(std::abs(lhs2 - rhs2) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK((partial_trace_first(kron(a, b), da, db) - a.trace() * b).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK((partial_trace_second(kron(a, b), da, db) - b.trace() * a).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("partial transpose on the second factor") {
  std::mt19937_64 rng(17);
  const int da = 2, db = 3;
  const Mat a = random_herm(rng, da);
  const Mat b = random_herm(rng, db);
  CHECK((partial_transpose_second(kron(a, b), da, db) - kron(a, b.transpose())).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));

  const Mat m = random_herm(rng, da * db);
  const Mat mtt = partial_transpose_second(partial_transpose_second(m, da, db), da, db);
  CHECK((mtt - m).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(partial_transpose_second(m, da, db).trace() - m.trace()) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("conditional expectation onto a block pattern") {
  const BlockAlgebra alg({1, 2});
  std::mt19937_64 rng(19);
  const Mat x = random_herm(rng, 3);
  const Mat ex = conditional_expectation(alg, x);

  CHECK(off_pattern_defect(alg, ex) == doctest::Approx(0.0));
  CHECK(std::abs(ex.trace() - x.trace()) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK((conditional_expectation(alg, ex) - ex).norm() == doctest::Approx(0.0));

  // self-adjointness against patterned test operators
  const Mat y = conditional_expectation(alg, random_herm(rng, 3));
  const Cx lhs = (ex * y).trace();
  const Cx rhs = (x * y).trace();
  CHECK(std::abs(lhs - rhs) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("operator wrapper symmetrizes and projects") {
  const BlockAlgebra alg({1, 1});
  Mat raw(2, 2);
  raw << Cx(1.0, 0.0), Cx(0.2, 0.1), Cx(0.0, 0.0), Cx(2.0, 0.0);
  const HermitianOperator h(alg, raw);
  CHECK(herm_defect(h.entries) == doctest::Approx(0.0));
  CHECK(off_pattern_defect(alg, h.entries) == doctest::Approx(0.0));
  CHECK(std::real(h.entries(0, 0)) == doctest::Approx(1.0));
  CHECK(std::real(h.entries(1, 1)) == doctest::Approx(2.0));

  CHECK_THROWS_AS(HermitianOperator(alg, Mat::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("state validation") {
  const BlockAlgebra alg = BlockAlgebra::full(2);
  Mat ok(2, 2);
  ok << 0.5, 0.0, 0.0, 0.5;
  CHECK_NOTHROW(State(alg, ok));

  Mat neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(State(alg, neg), std::invalid_argument);

  Mat bad_tr(2, 2);
  bad_tr << 0.7, 0.0, 0.0, 0.7;
  CHECK_THROWS_AS(State(alg, bad_tr), std::invalid_argument);

  const State mm = State::maximally_mixed(BlockAlgebra({2, 1}));
  CHECK(std::abs(mm.matrix().trace() - Cx(1.0, 0.0)) == doctest::Approx(0.0));
  CHECK(op_norm(mm.matrix()) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("povm validation") {
  const BlockAlgebra alg = BlockAlgebra::full(2);
  Mat e0(2, 2), e1(2, 2);
  e0 << 0.75, 0.0, 0.0, 0.25;
  e1 << 0.25, 0.0, 0.0, 0.75;
  CHECK_NOTHROW(Povm(alg, {e0, e1}));
  CHECK(Povm(alg, {e0, e1}).outcomes() == 2);

  CHECK_THROWS_AS(Povm(alg, {e0, e0}), std::invalid_argument);              // sum ≠ I
  CHECK_THROWS_AS(Povm(alg, {2.0 * e0, Mat(Mat::Identity(2, 2) - 2.0 * e0)}),
                  std::invalid_argument);                                   // negative effect
}

TEST_CASE("kron uses first-factor-major ordering") {
  Mat a(2, 2), b(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  b << 0.0, 1.0, 1.0, 0.0;
  const Mat k = kron(a, b);
  REQUIRE(k.rows() == 4);
  // entry ((a_r,b_r),(a_c,b_c)) = a(a_r,a_c)·b(b_r,b_c)
  CHECK(std::real(k(0 * 2 + 0, 1 * 2 + 1)) == doctest::Approx(2.0 * 1.0));  // a(0,1)·b(0,1)
  CHECK(std::real(k(0 * 2 + 1, 1 * 2 + 0)) == doctest::Approx(2.0 * 1.0));  // a(0,1)·b(1,0)
  CHECK(std::real(k(1 * 2 + 0, 1 * 2 + 0)) == doctest::Approx(4.0 * 0.0));  // a(1,1)·b(0,0)
  CHECK(std::real(k(1 * 2 + 1, 1 * 2 + 0)) == doctest::Approx(4.0 * 1.0));  // a(1,1)·b(1,0)
}
