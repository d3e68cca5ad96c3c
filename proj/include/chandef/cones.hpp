#pragma once
//
// Admissible cone families of Hermitian maps and the operator cones their
// Choi matrices live in.
//
// A family P assigns to every pair of algebras the cone P(A,B) of maps it
// admits; membership is decided on the Choi matrix.  The three families and
// their Choi cones:
//
//     completely positive   φ ∈ CP  ⇔  C(φ) ⪰ 0
//     entanglement breaking φ ∈ EB  ⇔  C(φ) separable across out ⊗ in
//     positive              φ ∈ Pos ⇔  C(φ) block-positive
//
// Under the trace pairing the families are mutually dual: CP* = CP,
// Pos* = EB, EB* = Pos.  Separability and block-positivity are decided
// exactly through the partial-transpose criterion when the product dimension
// is at most 6; beyond that the tests fall back to one-sided certificates
// and may report kUndecided.
//

#include <cstdint>
#include <string>

#include "chandef/hmap.hpp"

namespace chandef {

enum class ConeFamily { kCp, kEb, kPos };

ConeFamily dual_family(ConeFamily f);  // kCp→kCp, kEb→kPos, kPos→kEb
std::string family_name(ConeFamily f);

// Operator cones on a bipartite space C^da ⊗ C^db.
enum class ChoiCone { kPsd, kSep, kBlockPos };

// Choi cone of the family itself: membership of a map in P(A,B).
ChoiCone map_cone(ConeFamily f);
// Choi cone P̃ generating the family's norms (the dual family's map cone):
// kCp→kPsd, kPos→kSep, kEb→kBlockPos.
ChoiCone tilde_cone(ConeFamily f);

// The partial-transpose criterion is conclusive exactly here.
bool ppt_is_exact(int da, int db);

// Radius of the separable Frobenius ball around the maximally mixed state.
double sep_ball_radius(int dim);

// ── membership ──────────────────────────────────────────────────────────────

enum class Verdict { kIn, kOut, kUndecided };

struct Membership {
  Verdict verdict = Verdict::kUndecided;
  // Signed slack of the decisive test (eigenvalue or pairing value), relative
  // to the operator's scale; nonnegative inside.
  double margin = 0.0;
  std::string method;
};

// Relative slack below which an operator is treated as inside the cone.
inline constexpr double kMembershipTol = 1e-8;

Membership psd_membership(const Mat& z);
Membership sep_membership(const Mat& z, int da, int db);
Membership bp_membership(const Mat& z, int da, int db);
Membership cone_membership(ChoiCone k, const Mat& z, int da, int db);

// Map-level tests on the Choi matrix (da = dout, db = din).
Membership family_membership(ConeFamily f, const HermitianMap& m);
// Membership of m: B → A in the dual cone P*(B,A).
Membership dual_family_membership(ConeFamily f, const HermitianMap& m);

// Named per-family entry points.
Membership cp_membership(const HermitianMap& m);
Membership eb_membership(const HermitianMap& m);
Membership pos_membership(const HermitianMap& m);
Membership dual_membership(ConeFamily f, const HermitianMap& m);

// Smallest product-state expectation min ⟨x⊗y|z|x⊗y⟩ found by an alternating
// eigenvector descent from `starts` seeded starting points.  An upper bound
// on the true minimum, and exact whenever the verdict logic only needs a
// negative witness.
double min_product_expectation(const Mat& z, int da, int db, std::uint64_t seed,
                               int starts = 12);

// ── cone norms of bipartite Hermitian operators ─────────────────────────────
//
// Order-unit norm  min { λ : λ·I ± x ∈ K }  and base norm
// min { Tr(p+q) : x = p − q, p,q ∈ K }.  Both are computed as two-sided
// enclosures that coincide (up to solver tolerance) whenever the cone is
// exactly representable: always for kPsd, and at product dimension ≤ 6 for
// kSep and kBlockPos.  Beyond that the bounds come from the partial-transpose
// relaxation, the decomposable (p + qᵀ²) cone, the separable ball, and
// product-state search, and `exact` is false.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;
  std::string method;
};

Interval orderunit_norm(ChoiCone k, const Mat& x, int da, int db);
Interval base_norm(ChoiCone k, const Mat& x, int da, int db);

// The same norms taken in the cone P̃ that generates the family's map norms.
Interval orderunit_norm_tilde(ConeFamily f, const Mat& x, int da, int db);
Interval base_norm_tilde(ConeFamily f, const Mat& x, int da, int db);

}  // namespace chandef
