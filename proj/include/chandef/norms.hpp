#pragma once
//
// Diamond and dual-diamond norms of Hermitian maps under a cone family.
//
// For a family P with norm cone P̃ (see cones.hpp) the two norms are
//
//     ‖φ‖_◇  = min { λ : Tr_out Y = λ·I_in,  Y ± C(φ) ∈ P̃ }
//     ‖φ‖^◇  = min { Tr X : X ⪰ 0,  X⊗I_in ± C(φ) ∈ P̃ }
//
// and they are dual to each other under ⟨f,g⟩ = Tr C(f)C(g*).  For the CP
// family P̃ is the PSD cone and both programs are exact; for Pos (P̃ = Sep)
// and EB (P̃ = block-positive) the cone is replaced by certified outer and
// inner approximations, giving an enclosing interval that collapses at
// product dimension ≤ 6 where the partial-transpose criterion is exact.
//
// Maps on block algebras are handled through their ambient embeddings: the
// embedding composes with conditional expectations, which are channels, so
// by monotonicity the ambient and subalgebra norms coincide.

#include <cstdint>
#include <string>
#include <vector>

#include "chandef/cones.hpp"
#include "chandef/conic.hpp"
#include "chandef/hmap.hpp"

namespace chandef {

struct NormResult {
  double value_lo = 0.0;
  double value_hi = 0.0;
  Mat certificate;     // optimizer of the formula named in `method`
  std::string method;
  conic::SolveStatus status = conic::SolveStatus::kMaxIter;
  bool infinite = false;  // solver certified the feasible set empty

  bool exact() const { return value_hi - value_lo <= 1e-9 * (1.0 + value_hi); }
  double value() const { return value_hi; }
};

// ‖m‖_◇.  For the CP family the SDP value is cross-checked against the
// stabilized form  sup_ρ pure  ‖(m ⊗ id)(ρ)‖_1  when `stabilized_check` is
// set; a shortfall of the search is recorded in `method`, never in the
// values.  Certificate: Y/λ, the Choi matrix of the optimal dominating
// channel.
NormResult diamond_norm(ConeFamily family, const HermitianMap& m,
                        std::uint64_t seed = 1,
                        const conic::SolveOptions& opts = {},
                        bool stabilized_check = true);

// ‖m‖^◇ through the trace-scaled program in X = λσ.  Certificate: X; the
// optimal reference state is X / Tr X.
NormResult dual_diamond_norm(ConeFamily family, const HermitianMap& m,
                             const conic::SolveOptions& opts = {});

// Suprema over the unit ball of the respective dual norm.  The witness is a
// genuine ball element, so `value` is always a certified lower bound and
// matches the corresponding minimization exactly when the cone encoding is
// exact.
struct BallSupResult {
  double value = 0.0;
  Mat witness;      // Choi matrix of the optimal ball element
  Mat normalizer;   // X (resp. σ) certifying the witness's ball membership
  conic::SolveStatus status = conic::SolveStatus::kMaxIter;
};

// sup { ⟨m, g⟩ : ‖g‖^◇ ≤ 1 } = ‖m‖_◇ with g: B → A.
BallSupResult diamond_via_dual_ball(ConeFamily family, const HermitianMap& m,
                                    const conic::SolveOptions& opts = {});
// sup { ⟨ψ, m⟩ : ‖ψ‖_◇ ≤ 1 } = ‖m‖^◇ with ψ: B → A for m: A → B.
BallSupResult dual_diamond_via_ball(ConeFamily family, const HermitianMap& m,
                                    const conic::SolveOptions& opts = {});

// Two independent computations of ‖m‖_◇: the minimization and the dual-ball
// supremum (optimized, plus a few sampled ball elements as sanity floors).
struct DualityGap {
  double norm_value = 0.0;
  double ball_value = 0.0;
  double rel_gap = 0.0;
};
DualityGap norm_duality_check(ConeFamily family, const HermitianMap& m,
                              std::uint64_t seed = 1,
                              const conic::SolveOptions& opts = {});

// ── classical↔quantum closed forms ──────────────────────────────────────────
//
// A cq map is determined by the operator list A_i = φ(E_ii); a qc map by the
// effect list of φ(a) = Σ_i Tr(A_i a) E_ii.

// ‖Φ^cq‖_◇ = max_i ‖A_i‖_1.
double cq_diamond(const std::vector<Mat>& a);
// ‖Φ^qc‖^◇ = Σ_i ‖A_i‖.
double qc_dual_diamond(const std::vector<Mat>& a);

// ‖Φ^cq‖^◇ = min { Tr X : X ⪰ ±A_i ∀i }, the trace-scaled form of
// inf_σ max_i ‖σ^{-1/2} A_i σ^{-1/2}‖ with X = λσ absorbing singular σ.
NormResult cq_dual_diamond(const std::vector<Mat>& a,
                           const conic::SolveOptions& opts = {});

// ‖Φ^qc‖_◇: value_hi from the SDP min { λ : Σ_i Y_i = λI, Y_i ⪰ ±A_i },
// value_lo from the purified multi-start ascent of
// sup_σ Σ_i ‖σ^{1/2} A_i σ^{1/2}‖_1.  Certificate: the best input state σ.
NormResult qc_diamond(const std::vector<Mat>& a, std::uint64_t seed = 1,
                      const conic::SolveOptions& opts = {},
                      const conic::PureSearchOptions& search = {});

// Certified lower bound on ‖m‖_◇ (CP family) by sampling and refining pure
// inputs of the stabilized formula.
double diamond_pure_input_bound(const HermitianMap& m, std::uint64_t seed,
                                const conic::PureSearchOptions& search = {});

}  // namespace chandef
