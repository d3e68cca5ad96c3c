#pragma once
//
// Polyhedral ordered vector spaces, base sections, and the norms they induce.
//
// A proper cone Q ⊂ ℝ^d is kept in both representations at once: extreme
// rays and facet inequalities, converted into each other by the double
// description method.  A base section B = T ∩ S is the intersection of a
// base S = {q ∈ Q, ⟨q, b̃⟩ = 1} with a subspace T that meets the cone's
// interior; it generates the norm whose unit ball is the order-interval hull
//
//     O_B = {x, ∃b ∈ B, −b ≤ x ≤ b}.
//
// The dual section B̃ = {b* ∈ Q*, ⟨b, b*⟩ = 1 for all b ∈ B} generates the
// dual norm.  Everything in this module is exact polyhedral computation plus
// small linear programs; the quantum cones are handled by the SDP modules,
// and the two meet in the classical-algebra bridge tests, where the channel
// base of a diagonal-algebra pair is literally one of these sections.
//
// Enumeration is capped at ambient dimension 12 and 10⁴ rays.
//

#include <cstdint>
#include <vector>

#include "chandef/matops.hpp"

namespace chandef::ovs {

// Extreme rays of {x ∈ ℝ^dim : ⟨a, x⟩ ≥ 0 for every a in halfspaces}.  The
// result must be pointed, i.e. the normals must span ℝ^dim; rays come back
// unit-normalized, one per extreme direction.
std::vector<RVec> extreme_rays(int dim, const std::vector<RVec>& halfspaces);

struct PolyCone {
  int dim = 0;
  std::vector<RVec> generators;  // unit extreme rays
  std::vector<RVec> facets;      // unit inward normals: x ∈ Q ⇔ ⟨x, f⟩ ≥ 0

  // Both constructors canonicalize: the stored generators are the extreme
  // rays and the stored facets the irredundant inequalities, whatever
  // redundancy the input carried.  Throws if the cone is not proper.
  static PolyCone from_generators(int dim, const std::vector<RVec>& rays);
  static PolyCone from_facets(int dim, const std::vector<RVec>& normals);

  bool contains(const RVec& x, double tol = 1e-10) const;
  bool strictly_inside(const RVec& x, double tol = 1e-10) const;
};

// Generators and facets trade places.
PolyCone dual_cone(const PolyCone& q);

struct BaseSection {
  PolyCone cone;
  RVec base_functional;           // b̃, strictly positive on Q ∖ {0}
  std::vector<RVec> subspace;     // orthonormal basis of T
  RVec interior_point;            // vertex barycenter, lies in B ∩ int(Q)
  std::vector<RVec> vertices;     // extreme points of B

  // Validates b̃ ∈ int(Q*), enumerates the vertices of T ∩ S ∩ Q, and checks
  // that their barycenter is interior to Q.  An empty subspace list means
  // T = ℝ^dim, i.e. B is the full base S.
  static BaseSection make(const PolyCone& cone, const RVec& base_functional,
                          const std::vector<RVec>& subspace);
};

// B̃ as a base section of the dual cone: subspace b̃ + B^⊥, base functional
// the interior point of B.  Applying it twice returns the original vertex
// set.
BaseSection dual_section(const BaseSection& b);

// Krein extension: some q* ∈ Q* with ⟨v, q*⟩ = ⟨lin, v⟩ + aff on all of B.
// The functional must be nonnegative on B's vertices.
RVec krein_extend(const BaseSection& b, const RVec& lin, double aff);

struct SectionNorm {
  double value = 0.0;
  bool finite = true;   // false when x is outside the span of O_B
  RVec certificate;     // optimal c ∈ cone(B) with −c ≤ x ≤ c, ⟨c, b̃⟩ = value
};

// ‖x‖_B by linear program: minimize ⟨c, b̃⟩ over c ∈ cone(B) with c ± x ∈ Q.
SectionNorm base_section_norm(const BaseSection& b, const RVec& x);

// The points 2q − v with v a vertex of B and q a vertex of the order
// interval [0, v].  They all lie in the unit ball O_B and include ±v; for a
// simplicial cone they are exactly the extreme points of O_B, but in general
// O_B has further vertices over the faces of B.
std::vector<RVec> order_interval_vertices(const BaseSection& b);

// |sup over O_B of ⟨·, x*⟩  −  ‖x*‖_B̃|, which vanishes because the dual of
// ‖·‖_B is the section norm of B̃.  The supremum is taken by linear program
// over the lifted unit-ball description {x, ∃ν ≥ 0, Σν ≤ 1, Vν ± x ∈ Q}.
double dual_norm_check(const BaseSection& b, const RVec& xstar);

struct HalfIdentityReport {
  double lhs = 0.0;  // sup over O_B̃ ∩ Q* of ⟨b1 − b2, ·⟩
  double rhs = 0.0;  // ½‖b1 − b2‖_B
  double gap = 0.0;
};
HalfIdentityReport half_identity_check(const BaseSection& b, const RVec& b1,
                                       const RVec& b2);

// Norm of a positive linear map between sections: the supremum of ‖T(b)‖_B₂
// over vertices b of B₁, which equals the operator norm over the whole unit
// ball.  Throws if T does not map Q₁ into Q₂.
double positive_map_norm(const RMat& t, const BaseSection& b1,
                         const BaseSection& b2);

struct SandwichReport {
  double norm = 0.0;        // ‖x‖_B
  double vertex_sup = 0.0;  // sup over B̃ vertices of ⟨x, ·⟩, equals norm on Q
  double inf_side = 0.0;    // best sampled order-unit norm ‖x‖_b, b ∈ ri(B)
  double sup_side = 0.0;    // best sampled base norm over bases of Q
  bool pass = false;
};

// The two-sided bracket ‖x‖_{S_b̃} ≤ ‖x‖_B ≤ ‖x‖_b for x ∈ Q, sampled over
// Dirichlet-weighted vertex mixtures plus mixtures seeded by the optimal
// certificate so both sides provably close to within the mixing weight.
SandwichReport sandwich_check(const BaseSection& b, const RVec& x,
                              std::uint64_t seed, int samples = 1000);

}  // namespace chandef::ovs
