#include "chandef/matops.hpp"

#include <algorithm>
#include <cmath>

namespace chandef {

// ── BlockAlgebra ────────────────────────────────────────────────────────────

BlockAlgebra::BlockAlgebra(std::vector<int> dims) : blocks(std::move(dims)) {
  if (blocks.empty()) throw std::invalid_argument("BlockAlgebra: empty block list");
  starts_.reserve(blocks.size());
  for (int d : blocks) {
    if (d <= 0) throw std::invalid_argument("BlockAlgebra: nonpositive block dimension");
    starts_.push_back(ambient_);
    ambient_ += d;
  }
}

bool BlockAlgebra::is_diagonal() const {
  return std::all_of(blocks.begin(), blocks.end(), [](int d) { return d == 1; });
}

int BlockAlgebra::herm_dim() const {
  int n = 0;
  for (int d : blocks) n += d * d;
  return n;
}

int BlockAlgebra::block_of(int index) const {
  if (index < 0 || index >= ambient_)
    throw std::out_of_range("BlockAlgebra: index outside ambient space");
  int k = 0;
  while (k + 1 < num_blocks() && starts_[static_cast<size_t>(k + 1)] <= index) ++k;
  return k;
}

BlockAlgebra tensor(const BlockAlgebra& a, const BlockAlgebra& b) {
  if (b.is_full()) {
    std::vector<int> dims;
    dims.reserve(a.blocks.size());
    for (int d : a.blocks) dims.push_back(d * b.ambient());
    return BlockAlgebra(dims);
  }
  if (a.is_diagonal() && b.is_diagonal())
    return BlockAlgebra::diagonal(a.ambient() * b.ambient());
  // Other combinations have a non-contiguous block pattern under the
  // (a,b) ↦ a·dim(B)+b index convention and are not representable here.
  throw std::invalid_argument(
      "tensor(BlockAlgebra): second factor must be a full algebra, or both diagonal");
}

std::vector<Mat> hermitian_basis(const BlockAlgebra& alg) {
  const int n = alg.ambient();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Mat> basis;
  basis.reserve(static_cast<size_t>(alg.herm_dim()));
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const int s = alg.block_start(k);
    const int d = alg.blocks[static_cast<size_t>(k)];
    for (int i = 0; i < d; ++i) {
      Mat e = Mat::Zero(n, n);
      e(s + i, s + i) = 1.0;
      basis.push_back(e);
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        Mat re = Mat::Zero(n, n);
        re(s + i, s + j) = inv_sqrt2;
        re(s + j, s + i) = inv_sqrt2;
        basis.push_back(re);
        Mat im = Mat::Zero(n, n);
        im(s + i, s + j) = Cx(0.0, inv_sqrt2);
        im(s + j, s + i) = Cx(0.0, -inv_sqrt2);
        basis.push_back(im);
      }
    }
  }
  return basis;
}

RVec algebra_coordinates(const BlockAlgebra& alg, const Mat& h) {
  const auto basis = hermitian_basis(alg);
  RVec c(basis.size());
  for (size_t t = 0; t < basis.size(); ++t)
    c(static_cast<Eigen::Index>(t)) = std::real((basis[t].adjoint() * h).trace());
  return c;
}

// ── elementary helpers ──────────────────────────────────────────────────────

double herm_defect(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

EigResult eig(const Mat& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eig: matrix not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(h));
  if (es.info() != Eigen::Success) throw std::runtime_error("eig: decomposition failed");
  const Eigen::Index n = h.rows();
  EigResult r;
  r.values = RVec(n);
  r.vectors = Mat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {  // Eigen sorts ascending; flip
    r.values(i) = es.eigenvalues()(n - 1 - i);
    r.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return r;
}

double trace_norm(const Mat& h) {
  return eig(h).values.cwiseAbs().sum();
}

double op_norm(const Mat& h) {
  const auto v = eig(h).values;
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

Mat psd_sqrt(const Mat& h) {
  const auto e = eig(h);
  Mat out = Mat::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > 0.0)
      out += std::sqrt(e.values(i)) * e.vectors.col(i) * e.vectors.col(i).adjoint();
  }
  return herm(out);
}

PinvSqrtResult pinv_sqrt(const Mat& h) {
  const auto e = eig(h);
  const double scale = std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
  const double cutoff = kPinvRelCutoff * scale;
  PinvSqrtResult r;
  r.inv_sqrt = Mat::Zero(h.rows(), h.cols());
  r.sqrt = Mat::Zero(h.rows(), h.cols());
  r.support = Mat::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double lam = e.values(i);
    if (lam <= cutoff) continue;  // negative or near-null directions dropped
    const Mat proj = e.vectors.col(i) * e.vectors.col(i).adjoint();
    r.inv_sqrt += proj / std::sqrt(lam);
    r.sqrt += std::sqrt(lam) * proj;
    r.support += proj;
    ++r.rank;
  }
  r.inv_sqrt = herm(r.inv_sqrt);
  r.sqrt = herm(r.sqrt);
  r.support = herm(r.support);
  return r;
}

static void check_product_dims(const Mat& m, int da, int db, const char* who) {
  if (da <= 0 || db <= 0 || m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(da) * db)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

Mat partial_trace_first(const Mat& m, int da, int db) {
  check_product_dims(m, da, db, "partial_trace_first");
  Mat out = Mat::Zero(db, db);
  for (int b = 0; b < db; ++b)
    for (int bp = 0; bp < db; ++bp)
      for (int a = 0; a < da; ++a) out(b, bp) += m(a * db + b, a * db + bp);
  return out;
}

Mat partial_trace_second(const Mat& m, int da, int db) {
  check_product_dims(m, da, db, "partial_trace_second");
  Mat out = Mat::Zero(da, da);
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap)
      for (int b = 0; b < db; ++b) out(a, ap) += m(a * db + b, ap * db + b);
  return out;
}

Mat partial_transpose_second(const Mat& m, int da, int db) {
  check_product_dims(m, da, db, "partial_transpose_second");
  Mat out(m.rows(), m.cols());
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap)
      for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp)
          out(a * db + b, ap * db + bp) = m(a * db + bp, ap * db + b);
  return out;
}

Mat conditional_expectation(const BlockAlgebra& alg, const Mat& h) {
  if (h.rows() != alg.ambient() || h.cols() != alg.ambient())
    throw std::invalid_argument("conditional_expectation: shape mismatch");
  Mat out = Mat::Zero(h.rows(), h.cols());
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const int s = alg.block_start(k);
    const int d = alg.blocks[static_cast<size_t>(k)];
    out.block(s, s, d, d) = h.block(s, s, d, d);
  }
  return out;
}

double off_pattern_defect(const BlockAlgebra& alg, const Mat& h) {
  return (h - conditional_expectation(alg, h)).cwiseAbs().maxCoeff();
}

// ── value types ─────────────────────────────────────────────────────────────

HermitianOperator::HermitianOperator(BlockAlgebra alg, const Mat& raw)
    : algebra(std::move(alg)) {
  if (raw.rows() != algebra.ambient() || raw.cols() != algebra.ambient())
    throw std::invalid_argument("HermitianOperator: shape does not match algebra");
  entries = conditional_expectation(algebra, herm(raw));
}

State::State(BlockAlgebra alg, const Mat& raw) : op(std::move(alg), raw) {
  const double tr = std::real(op.entries.trace());
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::invalid_argument("State: trace differs from one");
  const auto e = eig(op.entries);
  if (e.values(e.values.size() - 1) < -kPsdTol)
    throw std::invalid_argument("State: negative eigenvalue beyond tolerance");
}

State State::maximally_mixed(const BlockAlgebra& alg) {
  const int n = alg.ambient();
  return State(alg, Mat::Identity(n, n) / static_cast<double>(n));
}

Povm::Povm(BlockAlgebra alg, std::vector<Mat> raw_effects) : algebra(std::move(alg)) {
  if (raw_effects.empty()) throw std::invalid_argument("Povm: no effects");
  const int n = algebra.ambient();
  Mat sum = Mat::Zero(n, n);
  effects.reserve(raw_effects.size());
  for (const Mat& m : raw_effects) {
    HermitianOperator h(algebra, m);
    const auto e = eig(h.entries);
    if (e.values(e.values.size() - 1) < -kPsdTol)
      throw std::invalid_argument("Povm: effect has negative eigenvalue beyond tolerance");
    sum += h.entries;
    effects.push_back(h.entries);
  }
  if ((sum - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > kPovmSumTol)
    throw std::invalid_argument("Povm: effects do not sum to the identity");
}

}  // namespace chandef
