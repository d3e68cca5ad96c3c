#pragma once
//
// JSON wire formats for the CLI: Hermitian maps, experiments, POVMs,
// polyhedral cones, and base sections.
//
// Numbers are printed with 17 significant digits, which round-trips every
// finite double exactly, and objects keep insertion order, so serializing
// the same values always produces the same bytes.  Matrices travel as flat
// row-major lists of [re, im] pairs with dimensions implied by the algebra
// block lists; real vectors and matrices as plain number lists.
//

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "chandef/hmap.hpp"
#include "chandef/ovs.hpp"

namespace chandef::io {

using Json = nlohmann::ordered_json;

// Malformed JSON or a value of the wrong kind (CLI exit 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Well-formed input whose dimensions do not fit together (CLI exit 3).
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic serialization: 2-space indent, one scalar per line, floats
// via %.17g.  Throws std::invalid_argument on non-finite numbers.
std::string dump(const Json& j);

Json parse_text(const std::string& text);  // ParseError on bad syntax
Json load_file(const std::string& path);   // ParseError on missing/bad file
void write_file(const std::string& path, const Json& j);

// ── matrices and vectors ────────────────────────────────────────────────────

Json matrix_json(const Mat& m);
Mat parse_matrix(const Json& j, int rows, int cols);

Json rvec_json(const RVec& v);
RVec parse_rvec(const Json& j);

Json rmat_json(const RMat& m);  // nested rows
RMat parse_rmat(const Json& j);

// ── domain objects ──────────────────────────────────────────────────────────

// {in_blocks, out_blocks, choi}
Json map_json(const HermitianMap& m);
HermitianMap parse_map(const Json& j);

// {blocks, states}
Json experiment_json(const Experiment& e);
Experiment parse_experiment(const Json& j);

// {blocks, effects}
Json povm_json(const Povm& p);
Povm parse_povm(const Json& j);

// {dim, generators, facets}; parsing re-canonicalizes from the generators
// and checks the stored facets agree.
Json cone_json(const ovs::PolyCone& q);
ovs::PolyCone parse_cone(const Json& j);

// {cone, subspace_basis, base_functional, interior_point}; parsing rebuilds
// the section and validates the stored interior point before keeping it.
Json section_json(const ovs::BaseSection& b);
ovs::BaseSection parse_section(const Json& j);

}  // namespace chandef::io
