#pragma once
//
// Hermitian linear maps between block algebras, stored by their Choi matrix.
//
// A map φ: A → B with dim(A)=n, dim(B)=m is represented on B(C^m ⊗ C^n)
// (output factor first) by C(φ) = Σ_ij φ(|i⟩⟨j|) ⊗ |i⟩⟨j| with the
// *unnormalized* maximally entangled functional, Tr C(id) = n.  Maps between
// proper subalgebras are stored as their embedding E_B ∘ φ ∘ E_A, which
// confines the Choi matrix to the product block pattern of (B, A).
//

#include <functional>
#include <vector>

#include "chandef/matops.hpp"

namespace chandef {

// Trace-preservation defect accepted by is_trace_preserving.
inline constexpr double kTpTol = 1e-9;

struct HermitianMap {
  BlockAlgebra in_alg, out_alg;
  Mat choi;  // Hermitian, (out·in)², supported on the product block pattern

  HermitianMap() = default;
  // Symmetrizes and projects the raw matrix onto the product block pattern.
  HermitianMap(BlockAlgebra in, BlockAlgebra out, const Mat& raw_choi);

  int din() const { return in_alg.ambient(); }
  int dout() const { return out_alg.ambient(); }

  HermitianMap& operator+=(const HermitianMap& o);
  HermitianMap& operator-=(const HermitianMap& o);
  HermitianMap& operator*=(double t);
  friend HermitianMap operator+(HermitianMap a, const HermitianMap& b) { return a += b; }
  friend HermitianMap operator-(HermitianMap a, const HermitianMap& b) { return a -= b; }
  friend HermitianMap operator*(double t, HermitianMap a) { return a *= t; }
};

// Unnormalized maximally entangled functional Σ_ab |aa⟩⟨bb| on C^d ⊗ C^d.
Mat max_entangled(int d);

// The Choi projection pattern: keep entry ((k,i),(l,j)) iff k,l share an
// out-block and i,j share an in-block.
Mat choi_pattern_project(const BlockAlgebra& in, const BlockAlgebra& out, const Mat& raw);

// ── constructors ────────────────────────────────────────────────────────────

HermitianMap identity_map(const BlockAlgebra& alg);

// Build from an action a ↦ φ(a) by applying it to all matrix units.
HermitianMap map_from_action(const BlockAlgebra& in, const BlockAlgebra& out,
                             const std::function<Mat(const Mat&)>& action);

// Classical-to-quantum map a ↦ Σ_i ⟨i|a|i⟩ B_i on the diagonal algebra D_n.
HermitianMap make_cq(const BlockAlgebra& out, const std::vector<Mat>& b_ops);

// Quantum-to-classical map b ↦ Σ_i Tr(A_i b) |i⟩⟨i| into D_{#A}.
HermitianMap make_qc(const BlockAlgebra& in, const std::vector<Mat>& a_ops);

// Measure-and-prepare map a ↦ Σ_i prep_i · Tr(effect_i a).
HermitianMap make_measure_prepare(const BlockAlgebra& in, const BlockAlgebra& out,
                                  const std::vector<Mat>& effects,
                                  const std::vector<Mat>& preparations);

// State replacer Φ_{I,σ}: a ↦ Tr(a)·σ.
HermitianMap make_replacer(const BlockAlgebra& in, const State& sigma);

// Trace-times-identity map a ↦ Tr(a)·I_out.
HermitianMap make_trace_identity(const BlockAlgebra& in, const BlockAlgebra& out);

// Rescale a measure-and-prepare pair so the effects form a genuine POVM
// (appending a complementary effect with null preparation). The represented
// map is unchanged.
struct MeasurePrepare {
  std::vector<Mat> effects;
  std::vector<Mat> preparations;
};
MeasurePrepare normalize_measure_prepare(const BlockAlgebra& in,
                                         const std::vector<Mat>& effects,
                                         const std::vector<Mat>& preparations);

// ── actions and functionals ─────────────────────────────────────────────────

Mat apply_map(const HermitianMap& m, const Mat& a);

// (m ⊗ id)(M) and (id ⊗ m)(M) for M on the indicated product space.
Mat apply_on_first(const HermitianMap& m, const Mat& big, int d_other);
Mat apply_on_second(const HermitianMap& m, const Mat& big, int d_other);

HermitianMap compose(const HermitianMap& g, const HermitianMap& f);  // g ∘ f
HermitianMap adjoint_map(const HermitianMap& m);
HermitianMap tensor_map(const HermitianMap& a, const HermitianMap& b);

// Trace-like functional s(φ) = Σ_ij ⟨i|φ(|i⟩⟨j|)|j⟩ of a square map.
double strace(const HermitianMap& m);

// Bilinear pairing ⟨f,g⟩ = s(g∘f) = Tr C(f) C(g*) for f: A→B, g: B→A.
double pairing(const HermitianMap& f, const HermitianMap& g);

// Trace-preservation defect ‖Tr_out C − I_in‖_max, and the ≤ kTpTol test.
double tp_defect(const HermitianMap& m);
bool is_trace_preserving(const HermitianMap& m);

// ── experiments ─────────────────────────────────────────────────────────────

// A finite family of states of a common algebra.
struct Experiment {
  BlockAlgebra algebra;
  std::vector<Mat> states;

  Experiment() = default;
  Experiment(BlockAlgebra alg, std::vector<Mat> raw_states);
  int size() const { return static_cast<int>(states.size()); }
};

// The cq channel D_n → A associated with an experiment.
HermitianMap cq_channel(const Experiment& e);
// The qc channel A → D_n associated with a POVM.
HermitianMap qc_channel(const Povm& p);

}  // namespace chandef
