#include "chandef/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chandef::io {

namespace {

void number_text(double x, std::string& out) {
  if (!std::isfinite(x))
    throw std::invalid_argument("dump: non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void dump_rec(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * static_cast<size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<size_t>(depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += Json(key).dump();
        out += ": ";
        dump_rec(val, depth + 1, out);
      }
      out += '\n';
      out += pad;
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const Json& val : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(val, depth + 1, out);
      }
      out += '\n';
      out += pad;
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      number_text(j.get<double>(), out);
      return;
    default:
      out += j.dump();  // ints, bools, strings, null
      return;
  }
}

double as_number(const Json& j, const char* where) {
  if (!j.is_number())
    throw ParseError(std::string(where) + ": expected a number");
  return j.get<double>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<int> parse_blocks(const Json& j, const char* key) {
  const Json& b = field(j, key);
  if (!b.is_array() || b.empty())
    throw ParseError(std::string(key) + ": expected a nonempty array");
  std::vector<int> out;
  for (const Json& v : b) {
    if (!v.is_number_integer() || v.get<int>() <= 0)
      throw ParseError(std::string(key) + ": block sizes must be positive integers");
    out.push_back(v.get<int>());
  }
  return out;
}

Json blocks_json(const BlockAlgebra& alg) {
  Json b = Json::array();
  for (int d : alg.blocks) b.push_back(d);
  return b;
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  dump_rec(j, 0, out);
  out += '\n';
  return out;
}

Json parse_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  return j;
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << dump(j) << '\n';
}

Json matrix_json(const Mat& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      entries.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
  return entries;
}

Mat parse_matrix(const Json& j, int rows, int cols) {
  if (!j.is_array()) throw ParseError("matrix: expected an array");
  if (static_cast<int>(j.size()) != rows * cols)
    throw ShapeError("matrix: expected " + std::to_string(rows * cols) +
                     " entries, got " + std::to_string(j.size()));
  Mat m(rows, cols);
  int n = 0;
  for (const Json& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw ParseError("matrix: entries must be [re, im] pairs");
    m(n / cols, n % cols) = Cx(as_number(e[0], "matrix"), as_number(e[1], "matrix"));
    ++n;
  }
  return m;
}

Json rvec_json(const RVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RVec parse_rvec(const Json& j) {
  if (!j.is_array()) throw ParseError("vector: expected an array");
  RVec v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const Json& e : j) v(i++) = as_number(e, "vector");
  return v;
}

Json rmat_json(const RMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(rvec_json(m.row(i)));
  return rows;
}

RMat parse_rmat(const Json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("real matrix: expected a nonempty array of rows");
  std::vector<RVec> rows;
  for (const Json& r : j) rows.push_back(parse_rvec(r));
  RMat m(static_cast<Eigen::Index>(rows.size()), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw ShapeError("real matrix: ragged rows");
    m.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  return m;
}

Json map_json(const HermitianMap& m) {
  Json j;
  j["in_blocks"] = blocks_json(m.in_alg);
  j["out_blocks"] = blocks_json(m.out_alg);
  j["choi"] = matrix_json(m.choi);
  return j;
}

HermitianMap parse_map(const Json& j) {
  const BlockAlgebra in(parse_blocks(j, "in_blocks"));
  const BlockAlgebra out(parse_blocks(j, "out_blocks"));
  const int d = out.ambient() * in.ambient();
  return HermitianMap(in, out, parse_matrix(field(j, "choi"), d, d));
}

Json experiment_json(const Experiment& e) {
  Json j;
  j["blocks"] = blocks_json(e.algebra);
  Json states = Json::array();
  for (const Mat& s : e.states) states.push_back(matrix_json(s));
  j["states"] = states;
  return j;
}

Experiment parse_experiment(const Json& j) {
  const BlockAlgebra alg(parse_blocks(j, "blocks"));
  const Json& states = field(j, "states");
  if (!states.is_array() || states.empty())
    throw ParseError("states: expected a nonempty array");
  std::vector<Mat> out;
  const int d = alg.ambient();
  for (const Json& s : states) out.push_back(parse_matrix(s, d, d));
  return Experiment(alg, std::move(out));
}

Json povm_json(const Povm& p) {
  Json j;
  j["blocks"] = blocks_json(p.algebra);
  Json effects = Json::array();
  for (const Mat& e : p.effects) effects.push_back(matrix_json(e));
  j["effects"] = effects;
  return j;
}

Povm parse_povm(const Json& j) {
  const BlockAlgebra alg(parse_blocks(j, "blocks"));
  const Json& effects = field(j, "effects");
  if (!effects.is_array() || effects.empty())
    throw ParseError("effects: expected a nonempty array");
  std::vector<Mat> out;
  const int d = alg.ambient();
  for (const Json& e : effects) out.push_back(parse_matrix(e, d, d));
  return Povm(alg, std::move(out));
}

Json cone_json(const ovs::PolyCone& q) {
  Json j;
  j["dim"] = q.dim;
  Json gens = Json::array(), facets = Json::array();
  for (const RVec& g : q.generators) gens.push_back(rvec_json(g));
  for (const RVec& f : q.facets) facets.push_back(rvec_json(f));
  j["generators"] = gens;
  j["facets"] = facets;
  return j;
}

ovs::PolyCone parse_cone(const Json& j) {
  const Json& dim = field(j, "dim");
  if (!dim.is_number_integer() || dim.get<int>() <= 0)
    throw ParseError("dim: expected a positive integer");
  const int d = dim.get<int>();
  const Json& gens = field(j, "generators");
  if (!gens.is_array() || gens.empty())
    throw ParseError("generators: expected a nonempty array");
  std::vector<RVec> rays;
  for (const Json& g : gens) {
    RVec r = parse_rvec(g);
    if (r.size() != d) throw ShapeError("generators: dimension mismatch");
    rays.push_back(std::move(r));
  }
  const ovs::PolyCone q = ovs::PolyCone::from_generators(d, rays);
  if (j.contains("facets")) {
    // Stored facets must describe the same cone the generators span.
    const Json& facets = j.at("facets");
    if (!facets.is_array() || facets.size() != q.facets.size())
      throw ShapeError("facets: inconsistent with generators");
    for (const Json& f : facets) {
      const RVec n = parse_rvec(f);
      if (n.size() != d) throw ShapeError("facets: dimension mismatch");
      bool found = false;
      for (const RVec& qf : q.facets)
        if ((qf - n.normalized()).norm() <= 1e-8) found = true;
      if (!found) throw ShapeError("facets: inconsistent with generators");
    }
  }
  return q;
}

Json section_json(const ovs::BaseSection& b) {
  Json j;
  j["cone"] = cone_json(b.cone);
  Json basis = Json::array();
  for (const RVec& t : b.subspace) basis.push_back(rvec_json(t));
  j["subspace_basis"] = basis;
  j["base_functional"] = rvec_json(b.base_functional);
  j["interior_point"] = rvec_json(b.interior_point);
  return j;
}

ovs::BaseSection parse_section(const Json& j) {
  const ovs::PolyCone q = parse_cone(field(j, "cone"));
  const Json& basis = field(j, "subspace_basis");
  if (!basis.is_array()) throw ParseError("subspace_basis: expected an array");
  std::vector<RVec> span;
  for (const Json& t : basis) {
    RVec v = parse_rvec(t);
    if (v.size() != q.dim) throw ShapeError("subspace_basis: dimension mismatch");
    span.push_back(std::move(v));
  }
  const RVec btilde = parse_rvec(field(j, "base_functional"));
  if (btilde.size() != q.dim)
    throw ShapeError("base_functional: dimension mismatch");
  ovs::BaseSection b = ovs::BaseSection::make(q, btilde, span);
  if (j.contains("interior_point")) {
    const RVec p = parse_rvec(j.at("interior_point"));
    if (p.size() != q.dim)
      throw ShapeError("interior_point: dimension mismatch");
    RVec proj = RVec::Zero(q.dim);
    for (const RVec& t : b.subspace) proj += t.dot(p) * t;
    if (!q.strictly_inside(p, 1e-12) ||
        std::abs(p.dot(btilde) - 1.0) > 1e-8 ||
        (p - proj).norm() > 1e-8 * (1.0 + p.norm()))
      throw ShapeError("interior_point: not interior to the section");
    b.interior_point = p;
  }
  return b;
}

}  // namespace chandef::io
