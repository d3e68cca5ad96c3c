#include "chandef/hmap.hpp"

#include <cmath>

namespace chandef {

// ── representation ──────────────────────────────────────────────────────────

Mat choi_pattern_project(const BlockAlgebra& in, const BlockAlgebra& out, const Mat& raw) {
  const int n = in.ambient(), m = out.ambient();
  if (raw.rows() != static_cast<Eigen::Index>(m) * n || raw.cols() != raw.rows())
    throw std::invalid_argument("choi_pattern_project: shape mismatch");
  Mat c = Mat::Zero(raw.rows(), raw.cols());
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      if (!out.same_block(k, l)) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (!in.same_block(i, j)) continue;
          c(k * n + i, l * n + j) = raw(k * n + i, l * n + j);
        }
    }
  return c;
}

HermitianMap::HermitianMap(BlockAlgebra in, BlockAlgebra out, const Mat& raw_choi)
    : in_alg(std::move(in)), out_alg(std::move(out)) {
  choi = choi_pattern_project(in_alg, out_alg, herm(raw_choi));
}

static void require_same_signature(const HermitianMap& a, const HermitianMap& b,
                                   const char* who) {
  if (!(a.in_alg == b.in_alg) || !(a.out_alg == b.out_alg))
    throw std::invalid_argument(std::string(who) + ": algebra mismatch");
}

HermitianMap& HermitianMap::operator+=(const HermitianMap& o) {
  require_same_signature(*this, o, "HermitianMap::operator+=");
  choi += o.choi;
  return *this;
}

HermitianMap& HermitianMap::operator-=(const HermitianMap& o) {
  require_same_signature(*this, o, "HermitianMap::operator-=");
  choi -= o.choi;
  return *this;
}

HermitianMap& HermitianMap::operator*=(double t) {
  choi *= t;
  return *this;
}

Mat max_entangled(int d) {
  Mat x = Mat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) x(a * d + a, b * d + b) = 1.0;
  return x;
}

// ── constructors ────────────────────────────────────────────────────────────

HermitianMap identity_map(const BlockAlgebra& alg) {
  const int d = alg.ambient();
  return HermitianMap(alg, alg, max_entangled(d));
}

HermitianMap map_from_action(const BlockAlgebra& in, const BlockAlgebra& out,
                             const std::function<Mat(const Mat&)>& action) {
  const int n = in.ambient(), m = out.ambient();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat unit = Mat::Zero(n, n);
      unit(i, j) = 1.0;
      const Mat img = action(unit);
      if (img.rows() != m || img.cols() != m)
        throw std::invalid_argument("map_from_action: action output shape mismatch");
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) c(k * n + i, l * n + j) = img(k, l);
    }
  return HermitianMap(in, out, c);
}

HermitianMap make_cq(const BlockAlgebra& out, const std::vector<Mat>& b_ops) {
  const int n = static_cast<int>(b_ops.size());
  if (n == 0) throw std::invalid_argument("make_cq: empty operator list");
  const BlockAlgebra in = BlockAlgebra::diagonal(n);
  const int m = out.ambient();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < n; ++i) {
    const Mat b = HermitianOperator(out, b_ops[static_cast<size_t>(i)]).entries;
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) c(k * n + i, l * n + i) = b(k, l);
  }
  return HermitianMap(in, out, c);
}

HermitianMap make_qc(const BlockAlgebra& in, const std::vector<Mat>& a_ops) {
  const int m = static_cast<int>(a_ops.size());
  if (m == 0) throw std::invalid_argument("make_qc: empty operator list");
  const BlockAlgebra out = BlockAlgebra::diagonal(m);
  const int n = in.ambient();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (int k = 0; k < m; ++k) {
    const Mat a = HermitianOperator(in, a_ops[static_cast<size_t>(k)]).entries;
    // φ(|i⟩⟨j|) = Σ_k Tr(A_k |i⟩⟨j|) |k⟩⟨k| = Σ_k ⟨j|A_k|i⟩ |k⟩⟨k|
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(k * n + i, k * n + j) = a(j, i);
  }
  return HermitianMap(in, out, c);
}

HermitianMap make_measure_prepare(const BlockAlgebra& in, const BlockAlgebra& out,
                                  const std::vector<Mat>& effects,
                                  const std::vector<Mat>& preparations) {
  if (effects.size() != preparations.size() || effects.empty())
    throw std::invalid_argument("make_measure_prepare: effect/preparation count mismatch");
  const int n = in.ambient(), m = out.ambient();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (size_t t = 0; t < effects.size(); ++t) {
    const Mat f = HermitianOperator(in, effects[t]).entries;
    const Mat rho = HermitianOperator(out, preparations[t]).entries;
    // a ↦ ρ_t Tr(F_t a) contributes ρ_t ⊗ F_t^T to the Choi matrix.
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) c(k * n + i, l * n + j) += rho(k, l) * f(j, i);
  }
  return HermitianMap(in, out, c);
}

HermitianMap make_replacer(const BlockAlgebra& in, const State& sigma) {
  const int n = in.ambient(), m = sigma.algebra().ambient();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < n; ++i) c(k * n + i, l * n + i) = sigma.matrix()(k, l);
  return HermitianMap(in, sigma.algebra(), c);
}

HermitianMap make_trace_identity(const BlockAlgebra& in, const BlockAlgebra& out) {
  const int n = in.ambient(), m = out.ambient();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i) c(k * n + i, k * n + i) = 1.0;
  return HermitianMap(in, out, c);
}

MeasurePrepare normalize_measure_prepare(const BlockAlgebra& in,
                                         const std::vector<Mat>& effects,
                                         const std::vector<Mat>& preparations) {
  if (effects.size() != preparations.size() || effects.empty())
    throw std::invalid_argument("normalize_measure_prepare: count mismatch");
  const int n = in.ambient();
  Mat sum = Mat::Zero(n, n);
  for (const Mat& f : effects) sum += HermitianOperator(in, f).entries;
  const double t = op_norm(sum);
  if (t <= 0.0) throw std::invalid_argument("normalize_measure_prepare: zero effect sum");
  MeasurePrepare out;
  Mat scaled_sum = Mat::Zero(n, n);
  for (size_t s = 0; s < effects.size(); ++s) {
    out.effects.push_back(effects[s] / t);
    scaled_sum += effects[s] / t;
    out.preparations.push_back(t * preparations[s]);
  }
  out.effects.push_back(Mat::Identity(n, n) - scaled_sum);
  out.preparations.push_back(Mat::Zero(preparations[0].rows(), preparations[0].cols()));
  return out;
}

// ── actions ─────────────────────────────────────────────────────────────────

Mat apply_map(const HermitianMap& m, const Mat& a) {
  const int n = m.din(), mm = m.dout();
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("apply: argument shape mismatch");
  Mat out = Mat::Zero(mm, mm);
  for (int k = 0; k < mm; ++k)
    for (int l = 0; l < mm; ++l) {
      Cx acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += a(i, j) * m.choi(k * n + i, l * n + j);
      out(k, l) = acc;
    }
  return out;
}

// Realignment (d1·d2)² matrix → d1² × d2² matrix, M[(b,a),(b',a')] ↦ M̃[(b,b'),(a,a')].
static Mat realign(const Mat& m, int d1, int d2) {
  Mat out(static_cast<Eigen::Index>(d1) * d1, static_cast<Eigen::Index>(d2) * d2);
  for (int b = 0; b < d1; ++b)
    for (int bp = 0; bp < d1; ++bp)
      for (int a = 0; a < d2; ++a)
        for (int ap = 0; ap < d2; ++ap)
          out(b * d1 + bp, a * d2 + ap) = m(b * d2 + a, bp * d2 + ap);
  return out;
}

static Mat unrealign(const Mat& m, int d1, int d2) {
  Mat out(static_cast<Eigen::Index>(d1) * d2, static_cast<Eigen::Index>(d1) * d2);
  for (int b = 0; b < d1; ++b)
    for (int bp = 0; bp < d1; ++bp)
      for (int a = 0; a < d2; ++a)
        for (int ap = 0; ap < d2; ++ap)
          out(b * d2 + a, bp * d2 + ap) = m(b * d1 + bp, a * d2 + ap);
  return out;
}

Mat apply_on_first(const HermitianMap& m, const Mat& big, int d_other) {
  const int n = m.din(), mm = m.dout();
  if (big.rows() != static_cast<Eigen::Index>(n) * d_other || big.cols() != big.rows())
    throw std::invalid_argument("apply_on_first: shape mismatch");
  // out[(c,a),(c',a')] = Σ_{b,b'} C[(c,b),(c',b')] · big[(b,a),(b',a')]
  const Mat lhs = realign(m.choi, mm, n);
  const Mat rhs = realign(big, n, d_other);
  return unrealign(lhs * rhs, mm, d_other);
}

Mat apply_on_second(const HermitianMap& m, const Mat& big, int d_other) {
  const int n = m.din(), mm = m.dout();
  if (big.rows() != static_cast<Eigen::Index>(d_other) * n || big.cols() != big.rows())
    throw std::invalid_argument("apply_on_second: shape mismatch");
  Mat out = Mat::Zero(static_cast<Eigen::Index>(d_other) * mm,
                      static_cast<Eigen::Index>(d_other) * mm);
  for (int x = 0; x < d_other; ++x)
    for (int xp = 0; xp < d_other; ++xp) {
      // apply m to the (x,x') block of big, an n×n matrix
      Mat blk(n, n);
      for (int b = 0; b < n; ++b)
        for (int bp = 0; bp < n; ++bp) blk(b, bp) = big(x * n + b, xp * n + bp);
      const Mat img = apply_map(m, blk);
      for (int c = 0; c < mm; ++c)
        for (int cp = 0; cp < mm; ++cp) out(x * mm + c, xp * mm + cp) = img(c, cp);
    }
  return out;
}

HermitianMap compose(const HermitianMap& g, const HermitianMap& f) {
  if (!(g.in_alg == f.out_alg))
    throw std::invalid_argument("compose: middle algebra mismatch");
  return HermitianMap(f.in_alg, g.out_alg, apply_on_first(g, f.choi, f.din()));
}

HermitianMap adjoint_map(const HermitianMap& m) {
  const int n = m.din(), mm = m.dout();
  Mat c(static_cast<Eigen::Index>(n) * mm, static_cast<Eigen::Index>(n) * mm);
  // C(φ*)[(i,k),(j,l)] = C(φ)[(l,j),(k,i)]
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < mm; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < mm; ++l)
          c(i * mm + k, j * mm + l) = m.choi(l * n + j, k * n + i);
  return HermitianMap(m.out_alg, m.in_alg, c);
}

HermitianMap tensor_map(const HermitianMap& a, const HermitianMap& b) {
  const BlockAlgebra in = tensor(a.in_alg, b.in_alg);
  const BlockAlgebra out = tensor(a.out_alg, b.out_alg);
  const int na = a.din(), nb = b.din(), ma = a.dout(), mb = b.dout();
  const int n = na * nb, m = ma * mb;
  Mat c(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (int k1 = 0; k1 < ma; ++k1)
    for (int k2 = 0; k2 < mb; ++k2)
      for (int i1 = 0; i1 < na; ++i1)
        for (int i2 = 0; i2 < nb; ++i2) {
          const int row = (k1 * mb + k2) * n + (i1 * nb + i2);
          for (int l1 = 0; l1 < ma; ++l1)
            for (int l2 = 0; l2 < mb; ++l2)
              for (int j1 = 0; j1 < na; ++j1)
                for (int j2 = 0; j2 < nb; ++j2) {
                  const int col = (l1 * mb + l2) * n + (j1 * nb + j2);
                  c(row, col) = a.choi(k1 * na + i1, l1 * na + j1) *
                                b.choi(k2 * nb + i2, l2 * nb + j2);
                }
        }
  return HermitianMap(in, out, c);
}

// ── functionals ─────────────────────────────────────────────────────────────

double strace(const HermitianMap& m) {
  if (m.din() != m.dout())
    throw std::invalid_argument("strace: map is not square");
  const int n = m.din();
  Cx acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc += m.choi(i * n + i, j * n + j);
  return std::real(acc);
}

double pairing(const HermitianMap& f, const HermitianMap& g) {
  if (f.din() != g.dout() || f.dout() != g.din())
    throw std::invalid_argument("pairing: maps are not dual-shaped");
  const HermitianMap gs = adjoint_map(g);
  return std::real((f.choi * gs.choi).trace());
}

double tp_defect(const HermitianMap& m) {
  const Mat red = partial_trace_first(m.choi, m.dout(), m.din());
  return (red - Mat::Identity(m.din(), m.din())).cwiseAbs().maxCoeff();
}

bool is_trace_preserving(const HermitianMap& m) { return tp_defect(m) <= kTpTol; }

// ── experiments ─────────────────────────────────────────────────────────────

Experiment::Experiment(BlockAlgebra alg, std::vector<Mat> raw_states)
    : algebra(std::move(alg)) {
  if (raw_states.empty()) throw std::invalid_argument("Experiment: no states");
  states.reserve(raw_states.size());
  for (const Mat& s : raw_states) states.push_back(State(algebra, s).matrix());
}

HermitianMap cq_channel(const Experiment& e) { return make_cq(e.algebra, e.states); }

HermitianMap qc_channel(const Povm& p) { return make_qc(p.algebra, p.effects); }

}  // namespace chandef
