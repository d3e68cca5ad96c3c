#pragma once
//
// ε-deficiency between channels under post- and pre-processing.
//
// A channel Ψ is (ε,D)-post-processing deficient w.r.t. Φ when every decision
// rule applied after Φ can be matched, up to payoff loss ε, by one applied
// after Ψ.  Four equivalent characterizations connect this to the two norms:
// the payoff inequalities themselves, the dual-norm comparison
// ‖Φ∘Γ‖^◇ ≤ ‖Ψ∘Γ‖^◇ + ε‖Γ‖^◇ over payoff maps Γ, and the channel form
// min_{α′} ‖α∘Φ − α′∘Ψ‖_◇ ≤ 2ε.  When the identity is admissible the choice
// D = out(Φ) with α = id dominates, collapsing the minimal ε to one joint
// SDP over (α′, Y, λ).  Pre-processing mirrors this on the input side with
// the collapse at D = in(Φ).
//
// Reports carry certified two-sided bounds: eps_hi from the channel
// minimization, eps_lo from an explicit payoff map violating the dual-norm
// inequality (built from the optimal dual-ball witness, shifted into the
// dual cone by a replacer, and polished by a few see-saw rounds).
//

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chandef/norms.hpp"

namespace chandef {

// A decision algebra with its payoff data: an operator list G (classical and
// experiment problems) or a payoff map Γ in the dual cone.
struct DecisionSpace {
  BlockAlgebra algebra;
  std::vector<Mat> payoff_ops;
  std::optional<HermitianMap> payoff_map;
};

struct DeficiencyOptions {
  conic::SolveOptions solve{};
  int witness_rounds = 3;  // see-saw sweeps refining the payoff lower bound
  int net_samples = 0;     // sampled decision rules (general-D lower bound)
  std::uint64_t seed = 1;
  // Multistart budget of the pure-input ascents (range inclusion, see-saws).
  conic::PureSearchOptions search{48, 4, 60, 1e-6};
};

struct DeficiencyReport {
  double eps_lo = 0.0;
  double eps_hi = 0.0;
  std::optional<HermitianMap> certificate_channel;  // optimal α′ resp. β′
  std::optional<HermitianMap> witness_payoff;       // Γ achieving eps_lo
  Mat witness_operator;  // payoff operator G (range-inclusion witness)
  RMat stochastic;       // relabeling matrix Λ (POVM cleanness)
  RMat mixtures;         // per-index hull weights (experiment pre-deficiency)
  conic::SolveStatus status = conic::SolveStatus::kMaxIter;
  std::string method;
  std::map<std::string, double> diagnostics;
};

// Per-index payoffs Tr α(ρ_i) G_i and their total, which equals the pairing
// ⟨α∘Φ^cq_E, Φ^qc_G⟩; both are returned so callers can check the identity.
struct PayoffResult {
  RVec per_index;
  double total = 0.0;
  double total_via_pairing = 0.0;
};
PayoffResult payoff(const Experiment& e, const HermitianMap& alpha,
                    const std::vector<Mat>& g);

// Minimal ε with Ψ ⪰_{ε,D} Φ (post-processing).  Φ, Ψ share the input
// algebra.  With decision == out(Φ) the value is exact (joint SDP, one cone
// interval per family); for other D the report combines the collapse upper
// bound with sampled decision-rule and payoff lower bounds.
DeficiencyReport post_deficiency(ConeFamily family, const HermitianMap& phi,
                                 const HermitianMap& psi,
                                 const BlockAlgebra& decision,
                                 const DeficiencyOptions& opts = {});
DeficiencyReport post_deficiency(ConeFamily family, const HermitianMap& phi,
                                 const HermitianMap& psi,
                                 const DeficiencyOptions& opts = {});

// Minimal ε with Ψ ⪰^{ε,D} Φ (pre-processing).  Φ, Ψ share the output
// algebra; the collapse point is decision == in(Φ).
DeficiencyReport pre_deficiency(ConeFamily family, const HermitianMap& phi,
                                const HermitianMap& psi,
                                const BlockAlgebra& decision,
                                const DeficiencyOptions& opts = {});
DeficiencyReport pre_deficiency(ConeFamily family, const HermitianMap& phi,
                                const HermitianMap& psi,
                                const DeficiencyOptions& opts = {});

// Classical pre-processing deficiency ½ sup_σ inf_ρ ‖Φ(σ) − Ψ(ρ)‖₁: the
// inner infimum is an SDP, the outer supremum a multistart pure-state ascent
// (the inner value is convex in σ, so pure inputs suffice).  eps_lo is
// certified by the best input state and by a payoff-operator witness G′
// recovered from the inner dual; eps_hi is the search value.
DeficiencyReport pre_range_inclusion(const HermitianMap& phi,
                                     const HermitianMap& psi,
                                     const DeficiencyOptions& opts = {},
                                     const std::vector<CVec>& extra_seeds = {});

// Experiment comparison E ⪰?⪰ F through the cq channels; the certificate's
// per-index trace distances max_i ‖α′(σ_i) − ρ_i‖₁ land in diagnostics.
DeficiencyReport experiment_post_deficiency(const Experiment& e,
                                            const Experiment& f,
                                            const BlockAlgebra& decision,
                                            ConeFamily family = ConeFamily::kCp,
                                            const DeficiencyOptions& opts = {});

// min over stochastic Λ of ½‖Φ^qc_M − Φ^qc_{Λ(N)}‖_◇, one joint SDP; the
// column-stochastic certificate lands in `stochastic`.
DeficiencyReport povm_post_cleanness(const Povm& m, const Povm& n,
                                     const DeficiencyOptions& opts = {});

// Independent upper bound for the same minimum: alternate the best input
// state (purified multistart ascent) with the best relabeling (trace-norm
// epigraph SDP), then score the final Λ exactly.
double povm_cleanness_seesaw(const Povm& m, const Povm& n,
                             std::uint64_t seed = 1, int rounds = 6,
                             const conic::SolveOptions& solve = {});

// Pre-processing deficiency of POVMs through their qc channels.
DeficiencyReport povm_pre_deficiency(const Povm& m, const Povm& n,
                                     const BlockAlgebra& decision,
                                     ConeFamily family = ConeFamily::kCp,
                                     const DeficiencyOptions& opts = {});

// Lifts a CP payoff map Γ: B(C^k) → B(H) to the classical payoff list
// G_j = (id ⊗ θ_j)(C(Γ)) over the k² shift-and-phase twirl maps θ_j; the cq
// map over D_{k²} with these operators has the same dual-diamond norm as Γ.
struct CqGammaLift {
  std::vector<Mat> payoff_ops;
  HermitianMap cq_map;
  double gamma_norm = 0.0;    // ‖Γ‖^◇
  double lifted_norm = 0.0;   // ‖Φ^cq_G‖^◇
  double twirl_defect = 0.0;  // ‖Σ_j θ_j(a) − Tr(a)·I‖ over a basis
};
CqGammaLift cq_gamma_construct(const HermitianMap& gamma,
                               const conic::SolveOptions& solve = {});

// Writes a bipartite state σ on H⊗D as (β ⊗ id)(σ₀) with β: D → H trace
// preserving and σ₀ = |x⟩⟨x| the purification of σ_D across D⊗D.
struct BiStateFactorization {
  HermitianMap beta;
  Mat sigma0;
  double reconstruction_error = 0.0;  // ‖σ − (β⊗id)(σ₀)‖₁
};
BiStateFactorization bi_state_factorize(const Mat& sigma, int d_h, int d_d);

// Numerical check of the lift theorems tying quantum deficiency of (Φ, Ψ) to
// classical deficiency of the pair tensored with id_{C^k}.  Post direction:
// the classical payoff lower bound on the tensored pair may not exceed the
// quantum value.  Pre direction: the range-inclusion value eps₃ of the
// tensored pair obeys eps₃ ≤ ε_q and ε_q ≤ eps₃ + ½√eps₃.
enum class LiftDirection { kPost, kPre };
struct TensorLiftReport {
  double eps_quantum_lo = 0.0;
  double eps_quantum_hi = 0.0;
  double eps_classical = 0.0;  // certified lower bound (post) / eps₃ (pre)
  double slack = 0.0;          // min slack across the checked implications
  bool holds = false;          // slack ≥ -1e-4
  bool holds_at_eps = false;   // boolean implication at the given ε
  std::map<std::string, double> diagnostics;
};
TensorLiftReport tensor_lift_check(const HermitianMap& phi,
                                   const HermitianMap& psi, int k, double eps,
                                   LiftDirection direction,
                                   const DeficiencyOptions& opts = {});

// ε(images of E) ≤ ε(channels); at ε = 0 with a spanning experiment the two
// verdicts must agree.
struct PointwiseReport {
  double eps_channels = 0.0;
  double eps_images = 0.0;
  bool spanning = false;
  bool consistent = false;
};
PointwiseReport pointwise_post_check(ConeFamily family, const HermitianMap& phi,
                                     const HermitianMap& psi,
                                     const Experiment& e,
                                     const DeficiencyOptions& opts = {});

// Effects span the full Hermitian space of the algebra.
bool ic_check(const Povm& e);

// Zero-ε equivalence between pre-processing deficiency of the channels and of
// the pulled-back POVMs Φ*(E) vs Ψ*(E) for an informationally complete E.
struct IcEquivalenceReport {
  double eps_channels = 0.0;
  double eps_povms = 0.0;
  bool informationally_complete = false;
  bool consistent = false;
};
IcEquivalenceReport pre_zero_via_ic(const HermitianMap& phi,
                                    const HermitianMap& psi, const Povm& e,
                                    const DeficiencyOptions& opts = {});

// Pre-processing deficiency of experiments: ½ max_i of the trace-norm
// distance from σ_i to the convex hull of E, each an SDP in the mixture
// weights; the optimal weights are returned row-wise in `mixtures`.
DeficiencyReport experiment_pre_deficiency(const Experiment& e,
                                           const Experiment& f,
                                           const conic::SolveOptions& solve = {});

// Two-outcome testing margin for state pairs: min over weight ratios t ≥ 0 of
// ‖σ₁ − tσ₂‖₁ − ‖ρ₁ − tρ₂‖₁ (target pair ρ, resource pair σ).  Nonnegative
// exactly when every dichotomy discriminates the resource pair at least as
// well, i.e. the pair comparison is classically 0-deficient.
double classical_dichotomy_margin(const Experiment& target,
                                  const Experiment& resource);

}  // namespace chandef
