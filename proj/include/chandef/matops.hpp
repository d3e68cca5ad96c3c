#pragma once
//
// Dense Hermitian-matrix primitives over finite-dimensional block *-algebras.
//
// An algebra A = ⊕_k B(C^{d_k}) is represented by its ordered list of block
// dimensions inside an ambient matrix space of dimension Σ d_k.  Operators
// carry their algebra so that higher layers can restrict variables and
// conditional expectations to the correct block pattern.
//

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace chandef {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Hermiticity slack accepted when validating stored entries.
inline constexpr double kHermTol = 1e-12;
// Eigenvalue floor when validating states and POVM effects.
inline constexpr double kPsdTol = 1e-10;
// Relative spectral cutoff (times the operator norm) below which eigenvalues
// are treated as zero by pseudo-inverse square roots.
inline constexpr double kPinvRelCutoff = 1e-10;
// POVM completeness slack: ‖Σ_i M_i − I‖ must stay below this.
inline constexpr double kPovmSumTol = 1e-9;

// ── block algebras ─────────────────────────────────────────────────────────

struct BlockAlgebra {
  std::vector<int> blocks;

  BlockAlgebra() = default;
  explicit BlockAlgebra(std::vector<int> dims);

  static BlockAlgebra full(int d) { return BlockAlgebra({d}); }
  static BlockAlgebra diagonal(int n) {
    return BlockAlgebra(std::vector<int>(static_cast<size_t>(n), 1));
  }

  int ambient() const { return ambient_; }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  bool is_full() const { return blocks.size() == 1; }
  bool is_diagonal() const;

  // Real dimension of the Hermitian part, Σ_k d_k².
  int herm_dim() const;

  int block_of(int index) const;          // which block an ambient index is in
  int block_start(int k) const { return starts_[static_cast<size_t>(k)]; }
  bool same_block(int i, int j) const { return block_of(i) == block_of(j); }

  bool operator==(const BlockAlgebra& o) const { return blocks == o.blocks; }

 private:
  int ambient_ = 0;
  std::vector<int> starts_;
};

// Tensor product A ⊗ B with A-major index ordering (a,b) ↦ a·dim(B)+b.
// Supported whenever the resulting block pattern is again a direct sum of
// contiguous full blocks: B full, or both algebras diagonal.
BlockAlgebra tensor(const BlockAlgebra& a, const BlockAlgebra& b);

// Orthonormal Hermitian basis of the algebra (Tr(B_s B_t) = δ_st), in a
// deterministic order: per block, diagonal units first, then the real and
// imaginary off-diagonal pairs.
std::vector<Mat> hermitian_basis(const BlockAlgebra& alg);

// Coordinates of a Hermitian matrix in hermitian_basis(alg).
RVec algebra_coordinates(const BlockAlgebra& alg, const Mat& h);

// ── elementary matrix helpers ──────────────────────────────────────────────

inline Mat herm(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double herm_defect(const Mat& m);  // ‖m − m†‖_max

Mat kron(const Mat& a, const Mat& b);

// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
struct EigResult {
  RVec values;   // descending
  Mat vectors;   // columns, matching order
};
EigResult eig(const Mat& h);

double trace_norm(const Mat& h);   // Σ|λ_i| of the symmetrized matrix
double op_norm(const Mat& h);      // max|λ_i|
inline double frob_norm(const Mat& m) { return m.norm(); }

// Positive-part square root; negative eigenvalues are clipped to zero.
Mat psd_sqrt(const Mat& h);

// Pseudo-inverse square root with relative cutoff kPinvRelCutoff · op_norm.
struct PinvSqrtResult {
  Mat inv_sqrt;   // Σ λ_i^{-1/2} v_i v_i†  over kept eigenvalues
  Mat sqrt;       // Σ λ_i^{+1/2} v_i v_i†
  Mat support;    // projector onto the kept eigenspace
  int rank = 0;
};
PinvSqrtResult pinv_sqrt(const Mat& h);

// Partial trace over one tensor factor of a (da·db)×(da·db) matrix,
// with A-major index ordering.
Mat partial_trace_first(const Mat& m, int da, int db);   // result db×db
Mat partial_trace_second(const Mat& m, int da, int db);  // result da×da

// Partial transpose on the second factor (used by PPT tests).
Mat partial_transpose_second(const Mat& m, int da, int db);

// Trace-preserving conditional expectation onto a block algebra
// (block pinching: off-block entries are zeroed, blocks kept verbatim).
Mat conditional_expectation(const BlockAlgebra& alg, const Mat& h);

// Largest |entry| outside the block pattern of alg.
double off_pattern_defect(const BlockAlgebra& alg, const Mat& h);

// ── carried-algebra operator and derived value types ───────────────────────

struct HermitianOperator {
  BlockAlgebra algebra;
  Mat entries;

  HermitianOperator() = default;
  // Symmetrizes and projects onto the block pattern.  Throws on shape
  // mismatch or when the input violates the pattern/hermiticity grossly.
  HermitianOperator(BlockAlgebra alg, const Mat& raw);

  int dim() const { return algebra.ambient(); }
};

struct State {
  HermitianOperator op;

  State() = default;
  // Validates positivity (eigenvalues ≥ −kPsdTol) and unit trace (±1e-10).
  State(BlockAlgebra alg, const Mat& raw);

  const Mat& matrix() const { return op.entries; }
  const BlockAlgebra& algebra() const { return op.algebra; }
  static State maximally_mixed(const BlockAlgebra& alg);
};

struct Povm {
  BlockAlgebra algebra;
  std::vector<Mat> effects;

  Povm() = default;
  // Validates effect positivity and completeness Σ_i M_i = I.
  Povm(BlockAlgebra alg, std::vector<Mat> raw_effects);

  int outcomes() const { return static_cast<int>(effects.size()); }
};

}  // namespace chandef
