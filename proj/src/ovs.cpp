#include "chandef/ovs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "chandef/conic.hpp"

namespace chandef::ovs {

namespace {

constexpr int kMaxDim = 12;
constexpr int kMaxRays = 10000;
constexpr double kTight = 1e-10;

// Tight-index sets as fixed-width bitsets over the processed halfspaces.
using Bits = std::vector<std::uint64_t>;

Bits make_bits(int n) { return Bits(static_cast<size_t>((n + 63) / 64), 0); }

void set_bit(Bits& b, int i) {
  b[static_cast<size_t>(i >> 6)] |= std::uint64_t(1) << (i & 63);
}

// small ⊆ big
bool covers(const Bits& big, const Bits& small) {
  for (size_t w = 0; w < big.size(); ++w)
    if ((small[w] & big[w]) != small[w]) return false;
  return true;
}

Bits intersect(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (size_t w = 0; w < a.size(); ++w) out[w] = a[w] & b[w];
  return out;
}

struct Ray {
  RVec v;
  Bits tight;
};

int rank_of(const std::vector<RVec>& rows, int dim) {
  if (rows.empty()) return 0;
  RMat a(static_cast<Eigen::Index>(rows.size()), dim);
  for (size_t i = 0; i < rows.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = rows[i];
  Eigen::ColPivHouseholderQR<RMat> qr(a);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

// Deterministic ordering: lexicographic on a 1e-9 grid, exact tiebreak.
bool lex_less(const RVec& a, const RVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto ga = std::llround(a(i) * 1e9), gb = std::llround(b(i) * 1e9);
    if (ga != gb) return ga < gb;
  }
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return false;
}

void sort_dedupe(std::vector<RVec>& vs, double tol) {
  std::sort(vs.begin(), vs.end(), lex_less);
  std::vector<RVec> out;
  for (const RVec& v : vs) {
    if (!out.empty() && (out.back() - v).norm() <= tol) continue;
    out.push_back(v);
  }
  vs = std::move(out);
}

}  // namespace

std::vector<RVec> extreme_rays(int dim, const std::vector<RVec>& halfspaces) {
  if (dim < 1 || dim > kMaxDim + 1)
    throw std::invalid_argument("extreme_rays: dimension out of range");
  std::vector<RVec> rows;
  for (const RVec& h : halfspaces) {
    if (h.size() != dim)
      throw std::invalid_argument("extreme_rays: halfspace dimension mismatch");
    const double n = h.norm();
    if (n > 1e-12) rows.push_back(RVec(h / n));
  }
  const int m = static_cast<int>(rows.size());
  if (rank_of(rows, dim) < dim)
    throw std::invalid_argument("extreme_rays: cone contains a line");

  RMat a(m, dim);
  for (int i = 0; i < m; ++i) a.row(i) = rows[static_cast<size_t>(i)];

  // Seed with a well-conditioned simplicial subcone: d independent rows,
  // chosen by pivoted QR, whose inverse columns are its extreme rays.
  Eigen::ColPivHouseholderQR<RMat> qr(a.transpose());
  qr.setThreshold(1e-9);
  std::vector<int> init(static_cast<size_t>(dim));
  for (int j = 0; j < dim; ++j) init[static_cast<size_t>(j)] = qr.colsPermutation().indices()(j);
  std::vector<char> in_init(static_cast<size_t>(m), 0);
  for (int i : init) in_init[static_cast<size_t>(i)] = 1;

  RMat ai(dim, dim);
  for (int j = 0; j < dim; ++j) ai.row(j) = rows[static_cast<size_t>(init[static_cast<size_t>(j)])];
  const RMat inv = ai.inverse();

  std::vector<Ray> rays;
  for (int j = 0; j < dim; ++j) {
    Ray r;
    r.v = RVec(inv.col(j).normalized());
    r.tight = make_bits(m);
    for (int i : init)
      if (std::abs(rows[static_cast<size_t>(i)].dot(r.v)) <= kTight) set_bit(r.tight, i);
    rays.push_back(std::move(r));
  }

  for (int h = 0; h < m; ++h) {
    if (in_init[static_cast<size_t>(h)]) continue;
    const RVec& ah = rows[static_cast<size_t>(h)];
    std::vector<int> pos, neg, zer;
    std::vector<double> s(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) {
      s[i] = ah.dot(rays[i].v);
      if (s[i] > kTight)
        pos.push_back(static_cast<int>(i));
      else if (s[i] < -kTight)
        neg.push_back(static_cast<int>(i));
      else
        zer.push_back(static_cast<int>(i));
    }
    if (neg.empty()) {
      for (int i : zer) set_bit(rays[static_cast<size_t>(i)].tight, h);
      continue;
    }

    std::vector<Ray> next;
    for (int i : pos) next.push_back(rays[static_cast<size_t>(i)]);
    for (int i : zer) {
      next.push_back(rays[static_cast<size_t>(i)]);
      set_bit(next.back().tight, h);
    }
    for (int ip : pos) {
      for (int in : neg) {
        // Only adjacent pairs spawn an extreme ray: no third ray may be tight
        // on everything the pair shares.
        const Bits shared = intersect(rays[static_cast<size_t>(ip)].tight,
                                      rays[static_cast<size_t>(in)].tight);
        bool adjacent = true;
        for (size_t k = 0; k < rays.size(); ++k) {
          if (static_cast<int>(k) == ip || static_cast<int>(k) == in) continue;
          if (covers(rays[k].tight, shared)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray r;
        r.v = RVec((s[static_cast<size_t>(ip)] * rays[static_cast<size_t>(in)].v -
                    s[static_cast<size_t>(in)] * rays[static_cast<size_t>(ip)].v)
                       .normalized());
        r.tight = shared;
        set_bit(r.tight, h);
        next.push_back(std::move(r));
        if (static_cast<int>(next.size()) > kMaxRays)
          throw std::runtime_error("extreme_rays: ray cap exceeded");
      }
    }
    if (next.empty())
      throw std::invalid_argument("extreme_rays: cone is degenerate");
    rays = std::move(next);
  }

  std::vector<RVec> out;
  out.reserve(rays.size());
  for (const Ray& r : rays) out.push_back(r.v);
  sort_dedupe(out, 1e-9);
  return out;
}

PolyCone PolyCone::from_generators(int dim, const std::vector<RVec>& rays) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("PolyCone: dimension out of range");
  if (rank_of(rays, dim) < dim)
    throw std::invalid_argument("PolyCone: cone is not full-dimensional");
  PolyCone q;
  q.dim = dim;
  q.facets = extreme_rays(dim, rays);
  if (rank_of(q.facets, dim) < dim)
    throw std::invalid_argument("PolyCone: cone is not pointed");
  q.generators = extreme_rays(dim, q.facets);
  for (const RVec& g : q.generators)
    for (const RVec& f : q.facets)
      if (g.dot(f) < -1e-10)
        throw std::runtime_error("PolyCone: representations are inconsistent");
  return q;
}

PolyCone PolyCone::from_facets(int dim, const std::vector<RVec>& normals) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("PolyCone: dimension out of range");
  if (rank_of(normals, dim) < dim)
    throw std::invalid_argument("PolyCone: cone is not pointed");
  PolyCone q;
  q.dim = dim;
  q.generators = extreme_rays(dim, normals);
  if (rank_of(q.generators, dim) < dim)
    throw std::invalid_argument("PolyCone: cone is not full-dimensional");
  q.facets = extreme_rays(dim, q.generators);
  for (const RVec& g : q.generators)
    for (const RVec& f : q.facets)
      if (g.dot(f) < -1e-10)
        throw std::runtime_error("PolyCone: representations are inconsistent");
  return q;
}

bool PolyCone::contains(const RVec& x, double tol) const {
  const double scale = 1.0 + x.norm();
  for (const RVec& f : facets)
    if (x.dot(f) < -tol * scale) return false;
  return true;
}

bool PolyCone::strictly_inside(const RVec& x, double tol) const {
  const double scale = 1.0 + x.norm();
  for (const RVec& f : facets)
    if (x.dot(f) <= tol * scale) return false;
  return true;
}

PolyCone dual_cone(const PolyCone& q) {
  PolyCone d;
  d.dim = q.dim;
  d.generators = q.facets;
  d.facets = q.generators;
  return d;
}

BaseSection BaseSection::make(const PolyCone& cone, const RVec& base_functional,
                              const std::vector<RVec>& subspace) {
  if (base_functional.size() != cone.dim)
    throw std::invalid_argument("BaseSection: base functional dimension mismatch");
  for (const RVec& g : cone.generators)
    if (g.dot(base_functional) <= 1e-10)
      throw std::invalid_argument(
          "BaseSection: base functional is not interior to the dual cone");

  // Orthonormal basis of T (the whole space when no vectors are given).
  RMat basis;
  if (subspace.empty()) {
    basis = RMat::Identity(cone.dim, cone.dim);
  } else {
    RMat raw(cone.dim, static_cast<Eigen::Index>(subspace.size()));
    for (size_t j = 0; j < subspace.size(); ++j) {
      if (subspace[j].size() != cone.dim)
        throw std::invalid_argument("BaseSection: subspace dimension mismatch");
      raw.col(static_cast<Eigen::Index>(j)) = subspace[j];
    }
    Eigen::ColPivHouseholderQR<RMat> qr(raw);
    qr.setThreshold(1e-9);
    const int rank = static_cast<int>(qr.rank());
    if (rank == 0)
      throw std::invalid_argument("BaseSection: subspace is trivial");
    basis = qr.householderQ() * RMat::Identity(cone.dim, rank);
  }
  const int k = static_cast<int>(basis.cols());

  // The cone T ∩ Q in T-coordinates; its extreme rays normalize to the
  // vertices of B.
  std::vector<RVec> pulled;
  for (const RVec& f : cone.facets) {
    RVec r = basis.transpose() * f;
    if (r.norm() > 1e-12) pulled.push_back(std::move(r));
  }
  const std::vector<RVec> rays = extreme_rays(k, pulled);

  BaseSection b;
  b.cone = cone;
  b.base_functional = base_functional;
  for (int j = 0; j < k; ++j) b.subspace.push_back(RVec(basis.col(j)));
  for (const RVec& c : rays) {
    const RVec x = basis * c;
    const double s = x.dot(base_functional);
    if (s <= 1e-12)
      throw std::runtime_error("BaseSection: ray escapes the base");
    b.vertices.push_back(RVec(x / s));
  }
  if (b.vertices.empty())
    throw std::invalid_argument("BaseSection: section is empty");
  if (static_cast<int>(b.vertices.size()) > kMaxRays)
    throw std::runtime_error("BaseSection: vertex cap exceeded");
  sort_dedupe(b.vertices, 1e-9);

  RVec avg = RVec::Zero(cone.dim);
  for (const RVec& v : b.vertices) avg += v;
  avg /= static_cast<double>(b.vertices.size());
  if (!cone.strictly_inside(avg, 1e-10))
    throw std::invalid_argument(
        "BaseSection: section does not meet the cone interior");
  b.interior_point = avg;
  return b;
}

BaseSection dual_section(const BaseSection& b) {
  const int d = b.cone.dim;
  RMat v(d, static_cast<Eigen::Index>(b.vertices.size()));
  for (size_t j = 0; j < b.vertices.size(); ++j)
    v.col(static_cast<Eigen::Index>(j)) = b.vertices[j];
  Eigen::ColPivHouseholderQR<RMat> qr(v);
  qr.setThreshold(1e-9);
  const int rank = static_cast<int>(qr.rank());
  const RMat qfull = qr.householderQ() * RMat::Identity(d, d);

  // T̃ = span{b̃} ⊕ B^⊥, with B^⊥ read off the tail of the vertex QR.
  std::vector<RVec> span_dual = {b.base_functional};
  for (int j = rank; j < d; ++j) span_dual.push_back(RVec(qfull.col(j)));
  return BaseSection::make(dual_cone(b.cone), b.interior_point, span_dual);
}

RVec krein_extend(const BaseSection& b, const RVec& lin, double aff) {
  const int d = b.cone.dim;
  if (lin.size() != d)
    throw std::invalid_argument("krein_extend: functional dimension mismatch");
  const int nv = static_cast<int>(b.vertices.size());
  RVec fv(nv);
  for (int i = 0; i < nv; ++i) {
    fv(i) = lin.dot(b.vertices[static_cast<size_t>(i)]) + aff;
    if (fv(i) < -1e-9 * (1.0 + std::abs(aff) + lin.norm()))
      throw std::invalid_argument("krein_extend: functional is negative on the section");
  }

  const std::vector<RVec>& gens = b.cone.facets;  // generators of Q*
  const int nd = static_cast<int>(gens.size());
  RMat eq(nv, nd);
  for (int i = 0; i < nv; ++i)
    for (int k = 0; k < nd; ++k)
      eq(i, k) = b.vertices[static_cast<size_t>(i)].dot(gens[static_cast<size_t>(k)]);
  RMat ge = RMat::Identity(nd, nd);
  const RVec c = RVec::Ones(nd);

  const conic::SolveResult r =
      conic::solve_lp(c, eq, fv, ge, RVec::Zero(nd));
  if (r.status == conic::SolveStatus::kInfeasible || !r.u.size())
    throw std::invalid_argument("krein_extend: no positive extension found");
  RVec q = RVec::Zero(d);
  for (int k = 0; k < nd; ++k)
    q += std::max(0.0, r.u(k)) * gens[static_cast<size_t>(k)];
  return q;
}

SectionNorm base_section_norm(const BaseSection& b, const RVec& x) {
  const int d = b.cone.dim;
  if (x.size() != d)
    throw std::invalid_argument("base_section_norm: dimension mismatch");
  const int nv = static_cast<int>(b.vertices.size());
  const int nf = static_cast<int>(b.cone.facets.size());

  // minimize Σν  s.t.  ⟨f, Vν ± x⟩ ≥ 0,  ν ≥ 0; the value is ⟨c, b̃⟩ because
  // every vertex pairs to 1 with the base functional.
  RMat ge(2 * nf + nv, nv);
  RVec rhs(2 * nf + nv);
  for (int j = 0; j < nf; ++j) {
    const RVec& f = b.cone.facets[static_cast<size_t>(j)];
    for (int i = 0; i < nv; ++i)
      ge(j, i) = ge(nf + j, i) = f.dot(b.vertices[static_cast<size_t>(i)]);
    rhs(j) = -f.dot(x);
    rhs(nf + j) = f.dot(x);
  }
  ge.block(2 * nf, 0, nv, nv) = RMat::Identity(nv, nv);
  rhs.segment(2 * nf, nv).setZero();

  const conic::SolveResult r =
      conic::solve_lp(RVec::Ones(nv), RMat(0, nv), RVec(0), ge, rhs);
  SectionNorm out;
  if (r.status == conic::SolveStatus::kInfeasible || !r.u.size()) {
    out.finite = false;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.certificate = RVec::Zero(d);
  double total = 0.0;
  for (int i = 0; i < nv; ++i) {
    const double w = std::max(0.0, r.u(i));
    total += w;
    out.certificate += w * b.vertices[static_cast<size_t>(i)];
  }
  out.value = total;
  return out;
}

std::vector<RVec> order_interval_vertices(const BaseSection& b) {
  const int d = b.cone.dim;
  std::vector<RVec> out;
  for (const RVec& v : b.vertices) {
    // Vertices of [0, v], found as the rays of the homogenization
    // {(q, t):  q ∈ Q,  tv − q ∈ Q,  t ≥ 0}; boundedness forces t > 0.
    std::vector<RVec> rows;
    for (const RVec& f : b.cone.facets) {
      RVec lo = RVec::Zero(d + 1), hi = RVec::Zero(d + 1);
      lo.head(d) = f;
      hi.head(d) = -f;
      hi(d) = f.dot(v);
      rows.push_back(std::move(lo));
      rows.push_back(std::move(hi));
    }
    RVec tpos = RVec::Zero(d + 1);
    tpos(d) = 1.0;
    rows.push_back(std::move(tpos));

    for (const RVec& r : extreme_rays(d + 1, rows)) {
      if (r(d) <= 1e-9) continue;
      const RVec q = r.head(d) / r(d);
      out.push_back(RVec(2.0 * q - v));
      if (static_cast<int>(out.size()) > kMaxRays)
        throw std::runtime_error("order_interval_vertices: vertex cap exceeded");
    }
  }
  sort_dedupe(out, 1e-9);
  return out;
}

double dual_norm_check(const BaseSection& b, const RVec& xstar) {
  // sup ⟨x, x*⟩ over O_B through the lifted description: x free, ν ≥ 0,
  // Σν ≤ 1, and Vν ± x ∈ Q.  Vertex enumeration would not do here: the
  // support function of [−b, b] is concave in b, so the supremum can sit
  // over a face midpoint of B whenever the cone is not simplicial.
  const int d = b.cone.dim;
  if (xstar.size() != d)
    throw std::invalid_argument("dual_norm_check: dimension mismatch");
  const int nv = static_cast<int>(b.vertices.size());
  const int nf = static_cast<int>(b.cone.facets.size());
  const int nvar = d + nv;

  RMat ge(2 * nf + nv + 1, nvar);
  RVec rhs = RVec::Zero(2 * nf + nv + 1);
  ge.setZero();
  for (int j = 0; j < nf; ++j) {
    const RVec& f = b.cone.facets[static_cast<size_t>(j)];
    ge.row(j).head(d) = -f;
    ge.row(nf + j).head(d) = f;
    for (int i = 0; i < nv; ++i)
      ge(j, d + i) = ge(nf + j, d + i) = f.dot(b.vertices[static_cast<size_t>(i)]);
  }
  ge.block(2 * nf, d, nv, nv) = RMat::Identity(nv, nv);
  ge.row(2 * nf + nv).segment(d, nv).setConstant(-1.0);
  rhs(2 * nf + nv) = -1.0;

  RVec c = RVec::Zero(nvar);
  c.head(d) = -xstar;
  const conic::SolveResult r = conic::solve_lp(c, RMat(0, nvar), RVec(0), ge, rhs);
  if (!r.u.size()) return std::numeric_limits<double>::infinity();
  const double sup = -r.value;

  const SectionNorm dual = base_section_norm(dual_section(b), xstar);
  if (!dual.finite) return std::numeric_limits<double>::infinity();
  return std::abs(sup - dual.value);
}

namespace {

void require_in_section(const BaseSection& b, const RVec& x, const char* who) {
  bool ok = b.cone.contains(x, 1e-8) &&
            std::abs(x.dot(b.base_functional) - 1.0) <= 1e-8;
  if (ok) {
    RVec proj = RVec::Zero(b.cone.dim);
    for (const RVec& t : b.subspace) proj += t.dot(x) * t;
    ok = (x - proj).norm() <= 1e-8 * (1.0 + x.norm());
  }
  if (!ok)
    throw std::invalid_argument(std::string(who) + ": point is not in the section");
}

}  // namespace

HalfIdentityReport half_identity_check(const BaseSection& b, const RVec& b1,
                                       const RVec& b2) {
  require_in_section(b, b1, "half_identity_check");
  require_in_section(b, b2, "half_identity_check");
  const BaseSection bt = dual_section(b);
  const std::vector<RVec>& dgen = b.cone.facets;  // generators of Q*
  const int nd = static_cast<int>(dgen.size());
  const int nt = static_cast<int>(bt.vertices.size());
  const int ng = static_cast<int>(b.cone.generators.size());
  const int nvar = nd + nt;

  // maximize ⟨b1 − b2, q*⟩ over q* = Σμ d ∈ Q* dominated by some b̃ ∈ B̃:
  // b̃ = Σβ ṽ with Σβ = 1 and b̃ ± q* ∈ Q*.
  RMat eq(1, nvar);
  eq.setZero();
  for (int j = 0; j < nt; ++j) eq(0, nd + j) = 1.0;
  RVec eqb(1);
  eqb(0) = 1.0;

  RMat ge(2 * ng + nvar, nvar);
  RVec rhs = RVec::Zero(2 * ng + nvar);
  ge.setZero();
  for (int i = 0; i < ng; ++i) {
    const RVec& g = b.cone.generators[static_cast<size_t>(i)];
    for (int k = 0; k < nd; ++k) {
      const double gd = g.dot(dgen[static_cast<size_t>(k)]);
      ge(i, k) = -gd;
      ge(ng + i, k) = gd;
    }
    for (int j = 0; j < nt; ++j) {
      const double gv = g.dot(bt.vertices[static_cast<size_t>(j)]);
      ge(i, nd + j) = gv;
      ge(ng + i, nd + j) = gv;
    }
  }
  ge.block(2 * ng, 0, nvar, nvar) = RMat::Identity(nvar, nvar);

  RVec c = RVec::Zero(nvar);
  const RVec diff = b1 - b2;
  for (int k = 0; k < nd; ++k) c(k) = -diff.dot(dgen[static_cast<size_t>(k)]);

  const conic::SolveResult r = conic::solve_lp(c, eq, eqb, ge, rhs);
  HalfIdentityReport rep;
  rep.lhs = r.u.size() ? -r.value : 0.0;
  rep.rhs = 0.5 * base_section_norm(b, diff).value;
  rep.gap = std::abs(rep.lhs - rep.rhs);
  return rep;
}

double positive_map_norm(const RMat& t, const BaseSection& b1,
                         const BaseSection& b2) {
  if (t.cols() != b1.cone.dim || t.rows() != b2.cone.dim)
    throw std::invalid_argument("positive_map_norm: shape mismatch");
  for (const RVec& g : b1.cone.generators)
    if (!b2.cone.contains(RVec(t * g), 1e-9))
      throw std::invalid_argument("positive_map_norm: map is not positive");
  double sup = 0.0;
  for (const RVec& v : b1.vertices)
    sup = std::max(sup, base_section_norm(b2, RVec(t * v)).value);
  return sup;
}

SandwichReport sandwich_check(const BaseSection& b, const RVec& x,
                              std::uint64_t seed, int samples) {
  if (!b.cone.contains(x, 1e-8))
    throw std::invalid_argument("sandwich_check: point must lie in the cone");
  SandwichReport rep;
  const SectionNorm sn = base_section_norm(b, x);
  rep.norm = sn.value;
  const BaseSection bt = dual_section(b);
  rep.vertex_sup = 0.0;
  for (const RVec& vt : bt.vertices)
    rep.vertex_sup = std::max(rep.vertex_sup, x.dot(vt));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(1e-12, 1.0);
  const auto dirichlet = [&](const std::vector<RVec>& vs) {
    RVec w(static_cast<Eigen::Index>(vs.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = -std::log(u01(rng));
    w /= w.sum();
    RVec p = RVec::Zero(vs[0].size());
    for (size_t i = 0; i < vs.size(); ++i) p += w(static_cast<Eigen::Index>(i)) * vs[i];
    return p;
  };
  // ‖x‖_p for an interior p has the closed form max_f |⟨f,x⟩|/⟨f,p⟩.
  const auto unit_norm = [&](const RVec& p) {
    double t = 0.0;
    for (const RVec& f : b.cone.facets)
      t = std::max(t, std::abs(f.dot(x)) / f.dot(p));
    return t;
  };

  rep.inf_side = std::numeric_limits<double>::infinity();
  rep.sup_side = 0.0;
  for (int s = 0; s < samples; ++s) {
    rep.inf_side = std::min(rep.inf_side, unit_norm(dirichlet(b.vertices)));
    rep.sup_side = std::max(rep.sup_side, x.dot(dirichlet(bt.vertices)));
  }
  // Mixtures seeded by the optimal certificate close both gaps to O(τ).
  for (const double tau : {1e-4, 1e-3, 1e-2}) {
    if (rep.norm > 1e-12 && sn.certificate.size()) {
      const RVec p = RVec((1.0 - tau) * sn.certificate / rep.norm +
                          tau * b.interior_point);
      rep.inf_side = std::min(rep.inf_side, unit_norm(p));
    }
    double best = 0.0;
    const RVec* arg = nullptr;
    for (const RVec& vt : bt.vertices)
      if (x.dot(vt) > best) {
        best = x.dot(vt);
        arg = &vt;
      }
    if (arg)
      rep.sup_side = std::max(
          rep.sup_side,
          x.dot(RVec((1.0 - tau) * (*arg) + tau * bt.interior_point)));
  }

  const double tol = 1e-3 * (1.0 + rep.norm);
  rep.pass = rep.inf_side >= rep.norm - 1e-8 &&
             rep.sup_side <= rep.norm + 1e-8 &&
             rep.inf_side - rep.norm <= tol && rep.norm - rep.sup_side <= tol &&
             std::abs(rep.vertex_sup - rep.norm) <= 1e-8 * (1.0 + rep.norm);
  return rep;
}

}  // namespace chandef::ovs
