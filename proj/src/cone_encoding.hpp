#pragma once
//
// Shared one-sided SDP encodings of the three operator cones (internal to the
// norm and deficiency translation units; not part of the public interface).
//

#include <cmath>
#include <stdexcept>

#include "chandef/cones.hpp"
#include "chandef/conic.hpp"

namespace chandef::enc {

// Hermitian signum: the trace-norm subgradient sgn(M) = Σ_k sign(λ_k) P_k.
inline Mat herm_sign(const Mat& m) {
  const EigResult e = eig(m);
  Mat s = Mat::Zero(m.rows(), m.cols());
  for (int k = 0; k < e.values.size(); ++k) {
    const double sg = e.values(k) > 0.0 ? 1.0 : (e.values(k) < 0.0 ? -1.0 : 0.0);
    s += sg * e.vectors.col(k) * e.vectors.col(k).adjoint();
  }
  return s;
}

inline conic::SolveStatus worst(conic::SolveStatus a, conic::SolveStatus b) {
  if (a == conic::SolveStatus::kInfeasible || b == conic::SolveStatus::kInfeasible)
    return conic::SolveStatus::kInfeasible;
  if (a == conic::SolveStatus::kMaxIter || b == conic::SolveStatus::kMaxIter)
    return conic::SolveStatus::kMaxIter;
  return conic::SolveStatus::kOptimal;
}

// Second-order cone ‖coords(z − (tr z/D)·I)‖_2 ≤ s·tr(z) as an arrow-head
// LMI of size 1 + D².  With s = sep_ball_radius(D) this is the separable
// Frobenius ball; with s = √((D−1)/D) it is the dual of that ball, an outer
// cone of the block-positive operators.
inline conic::AffineExpr arrow_expr(const conic::AffineExpr& z, double s) {
  const int dim = static_cast<int>(z.f0.rows());
  const BlockAlgebra alg = BlockAlgebra::full(dim);
  const int n = alg.herm_dim();
  const auto piece = [&](const Mat& m) {
    const double tr = m.trace().real();
    const Mat m0 = m - (tr / dim) * Mat::Identity(dim, dim);
    const RVec c = algebra_coordinates(alg, m0);
    Mat a = (s * tr) * Mat::Identity(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
      a(0, k + 1) += c(k);
      a(k + 1, 0) += c(k);
    }
    return a;
  };
  conic::AffineExpr out;
  out.f0 = piece(z.f0);
  for (const auto& [i, m] : z.terms) out.terms.emplace_back(i, piece(m));
  return out;
}

// Certified one-sided encodings of the three operator cones.  kOuter imposes
// a superset (valid relaxation), kInner a subset (valid restriction); the two
// coincide with the cone itself whenever `exact` holds.
enum class EncMode { kOuter, kInner };

struct ConeEnc {
  ChoiCone cone;
  EncMode mode;
  int da, db;
  bool exact;
  int aux = -1;  // decomposable-split variable, when needed

  ConeEnc(ChoiCone c, EncMode m, int a, int b)
      : cone(c), mode(m), da(a), db(b),
        exact(c == ChoiCone::kPsd || ppt_is_exact(a, b)) {}

  void declare(conic::SdpProblem& p) {
    if (cone == ChoiCone::kBlockPos && (exact || mode == EncMode::kInner))
      aux = conic::add_herm_var(p, BlockAlgebra::full(da * db));
  }

  void impose(conic::SdpProblem& p, const conic::AffineExpr& z) const {
    const auto t2 = [this](const Mat& m) {
      return partial_transpose_second(m, da, db);
    };
    switch (cone) {
      case ChoiCone::kPsd:
        conic::add_psd_constraint(p, z);
        return;
      case ChoiCone::kSep:
        if (exact || mode == EncMode::kOuter) {
          conic::add_psd_constraint(p, z);
          conic::add_psd_constraint(p, conic::map_expr(z, t2));
        } else {
          conic::add_psd_constraint(p, arrow_expr(z, sep_ball_radius(da * db)));
        }
        return;
      case ChoiCone::kBlockPos:
        if (exact || mode == EncMode::kInner) {
          const conic::AffineExpr q =
              conic::herm_var_expr(BlockAlgebra::full(da * db), aux);
          conic::add_psd_constraint(p, q);
          conic::add_psd_constraint(p, conic::sub_expr(z, conic::map_expr(q, t2)));
        } else {
          conic::add_psd_constraint(
              p, arrow_expr(z, std::sqrt((da * db - 1.0) / (da * db))));
        }
        return;
    }
    throw std::logic_error("ConeEnc: bad enum");
  }
};

inline const char* enc_name(ChoiCone c, bool exact) {
  switch (c) {
    case ChoiCone::kPsd: return "psd";
    case ChoiCone::kSep: return exact ? "sep (ppt exact)" : "sep interval";
    case ChoiCone::kBlockPos:
      return exact ? "block-positive (decomposable exact)"
                   : "block-positive interval";
  }
  return "?";
}

}  // namespace chandef::enc
