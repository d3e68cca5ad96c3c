#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "chandef/conic.hpp"

using namespace chandef;
using namespace chandef::conic;

namespace {

Mat random_herm(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Cx(g(rng), g(rng));
  return herm(m);
}

double min_eig(const Mat& h) { return eig(h).values.minCoeff(); }

}  // namespace

TEST_CASE("operator norm as a two-sided lmi bound") {
  std::mt19937_64 rng(101);
  const Mat h = random_herm(rng, 4);
  const double want = op_norm(h);

  SdpProblem p = SdpProblem::make(1);
  p.objective = RVec::Ones(1);
  const int plus = p.add_lmi(4);
  const int minus = p.add_lmi(4);
  p.set_f0(plus, -h);
  p.set_coeff(plus, 0, Mat::Identity(4, 4));  // λI − h ⪰ 0 … F0 = −h
  p.set_f0(minus, h);
  p.set_coeff(minus, 0, Mat::Identity(4, 4));  // λI + h ⪰ 0

  const SolveResult r = solve_sdp(p);
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(want).epsilon(1e-7));
  CHECK(r.gap <= 1e-6 * (1.0 + std::abs(r.value)));

  // dual certificate: PSD multipliers with unit total trace reproduce the value
  REQUIRE(r.lmi_duals.size() == 2);
  CHECK(min_eig(r.lmi_duals[0]) >= -1e-8);
  CHECK(min_eig(r.lmi_duals[1]) >= -1e-8);
  const double tr_sum =
      std::real(r.lmi_duals[0].trace() + r.lmi_duals[1].trace());
  CHECK(tr_sum == doctest::Approx(1.0).epsilon(1e-6));
  const double recovered =
      std::real((h * r.lmi_duals[0]).trace() - (h * r.lmi_duals[1]).trace());
  CHECK(recovered == doctest::Approx(want).epsilon(1e-6));

  // complementarity between slack and multiplier
  CHECK(std::abs((r.lmi_slacks[0] * r.lmi_duals[0]).trace()) <= 1e-6);
}

TEST_CASE("trace norm via a positive decomposition") {
  std::mt19937_64 rng(103);
  const int d = 3;
  const Mat h = random_herm(rng, d);
  const double want = trace_norm(h);

  // variables: coordinates of P in the Hermitian basis; Q = P − h
  const auto basis = hermitian_basis(BlockAlgebra::full(d));
  const int n = static_cast<int>(basis.size());
  SdpProblem p = SdpProblem::make(n);
  const int lp = p.add_lmi(d);  // P ⪰ 0
  const int lq = p.add_lmi(d);  // P − h ⪰ 0
  p.set_f0(lq, -h);
  for (int s = 0; s < n; ++s) {
    p.set_coeff(lp, s, basis[static_cast<size_t>(s)]);
    p.set_coeff(lq, s, basis[static_cast<size_t>(s)]);
    p.objective(s) = 2.0 * std::real(basis[static_cast<size_t>(s)].trace());
  }
  // objective handled Tr(P+Q) = 2Tr(P) − Tr(h)
  const SolveResult r = solve_sdp(p);
  REQUIRE(r.ok());
  CHECK(r.value - std::real(h.trace()) == doctest::Approx(want).epsilon(1e-7));
}

TEST_CASE("smallest eigenvalue with the variable on the negative side") {
  std::mt19937_64 rng(107);
  const Mat h = random_herm(rng, 5);
  SdpProblem p = SdpProblem::make(1);
  p.objective(0) = -1.0;  // maximize t
  const int l = p.add_lmi(5);
  p.set_f0(l, h);
  p.set_coeff(l, 0, -Mat::Identity(5, 5));  // h − tI ⪰ 0
  const SolveResult r = solve_sdp(p);
  REQUIRE(r.ok());
  CHECK(-r.value == doctest::Approx(min_eig(h)).epsilon(1e-7));
}

TEST_CASE("linear programs") {
  SUBCASE("unique vertex") {
    RVec c(2);
    c << 2.0, 1.0;
    RMat ge(3, 2);
    ge << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
    RVec gb(3);
    gb << 1.0, 2.0, 4.0;
    const SolveResult r = solve_lp(c, RMat(0, 2), RVec(0), ge, gb);
    REQUIRE(r.ok());
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(r.u(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.u(1) == doctest::Approx(3.0).epsilon(1e-6));
    for (int i = 0; i < 3; ++i) CHECK(r.ge_duals(i) >= -1e-9);
  }
  SUBCASE("equality multiplier has the textbook value") {
    RVec c(1);
    c << 3.0;
    RMat eq(1, 1);
    eq << 1.0;
    RVec eb(1);
    eb << 2.0;
    const SolveResult r = solve_lp(c, eq, eb, RMat(0, 1), RVec(0));
    REQUIRE(r.ok());
    CHECK(r.value == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(r.dual_value == doctest::Approx(6.0).epsilon(1e-7));
    CHECK(r.eq_duals(0) == doctest::Approx(3.0).epsilon(1e-6));
  }
  SUBCASE("infeasible inequalities are classified") {
    RVec c(1);
    c << 1.0;
    RMat ge(2, 1);
    ge << 1.0, -1.0;
    RVec gb(2);
    gb << 1.0, 0.0;  // x ≥ 1 and −x ≥ 0
    const SolveResult r = solve_lp(c, RMat(0, 1), RVec(0), ge, gb);
    CHECK(r.status == SolveStatus::kInfeasible);
    CHECK(r.primal_infeasible);
  }
  SUBCASE("unbounded objective is classified as dual infeasible") {
    RVec c(1);
    c << -1.0;
    RMat ge(1, 1);
    ge << 1.0;
    RVec gb(1);
    gb << 0.0;  // min −x, x ≥ 0
    const SolveResult r = solve_lp(c, RMat(0, 1), RVec(0), ge, gb);
    CHECK(r.status == SolveStatus::kInfeasible);
    CHECK(r.dual_infeasible);
  }
}

TEST_CASE("infeasible lmi yields a primal infeasibility certificate") {
  SdpProblem p = SdpProblem::make(1);
  p.objective(0) = 1.0;
  const int l = p.add_lmi(3);
  p.set_f0(l, -Mat::Identity(3, 3));  // −I + 0·u ⪰ 0, unsatisfiable
  const SolveResult r = solve_sdp(p);
  CHECK(r.status == SolveStatus::kInfeasible);
  CHECK(r.primal_infeasible);
}

TEST_CASE("mixed lmi with scalar inequalities") {
  std::mt19937_64 rng(109);
  const Mat h = random_herm(rng, 3);
  const double lam_max = eig(h).values(0);

  SdpProblem p = SdpProblem::make(1);
  p.objective(0) = 1.0;
  const int l = p.add_lmi(3);
  p.set_f0(l, -h);
  p.set_coeff(l, 0, Mat::Identity(3, 3));
  RVec row(1);
  row << 1.0;
  p.add_ge(row, lam_max + 1.0);  // λ ≥ λmax + 1 dominates the lmi
  const SolveResult r = solve_sdp(p);
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(lam_max + 1.0).epsilon(1e-7));
  CHECK(r.ge_duals(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("determinism of the solve") {
  std::mt19937_64 rng(113);
  const Mat h = random_herm(rng, 4);
  SdpProblem p = SdpProblem::make(1);
  p.objective(0) = 1.0;
  const int plus = p.add_lmi(4);
  p.set_f0(plus, -h);
  p.set_coeff(plus, 0, Mat::Identity(4, 4));
  const SolveResult a = solve_sdp(p);
  const SolveResult b = solve_sdp(p);
  CHECK(a.value == b.value);  // bitwise: identical iterate sequence
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("alternating maximization driver") {
  const auto round = [](int i) { return 1.0 - std::pow(0.5, i + 1); };
  const SeesawResult r = run_seesaw(round, 100, 1e-6);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.rounds < 30);
  REQUIRE(r.trace.size() == static_cast<size_t>(r.rounds));
  for (size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1]);
}

TEST_CASE("pure state search finds the top eigenvector") {
  std::mt19937_64 rng(127);
  const Mat h = random_herm(rng, 4);
  const double want = eig(h).values(0);
  const auto f = [&](const CVec& x) { return std::real(x.dot(h * x)); };

  SUBCASE("finite differences") {
    const PureSearchResult r = pure_state_search(4, f, 7, {});
    CHECK(r.value == doctest::Approx(want).epsilon(1e-4));
    CHECK(r.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("analytic gradient") {
    const auto grad = [&](const CVec& x) { return CVec(2.0 * (h * x)); };
    const PureSearchResult r = pure_state_search(4, f, 7, {}, grad);
    CHECK(r.value == doctest::Approx(want).epsilon(1e-6));
  }
  SUBCASE("caller seeds are honored") {
    const CVec top = eig(h).vectors.col(0);
    PureSearchOptions opts;
    opts.samples = 1;
    opts.refine_top = 1;
    opts.refine_iters = 0;
    const PureSearchResult r = pure_state_search(4, f, 7, opts, nullptr, {top});
    CHECK(r.value == doctest::Approx(want).epsilon(1e-10));
  }
  SUBCASE("same seed, same answer") {
    const PureSearchResult a = pure_state_search(4, f, 42, {});
    const PureSearchResult b = pure_state_search(4, f, 42, {});
    CHECK(a.value == b.value);
  }
}
