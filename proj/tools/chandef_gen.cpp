//
// chandef-gen: seeded random corpus generator for the chandef CLI.
//
// Emits one JSON object per run: a channel, Hermitian map, POVM, experiment,
// state, polyhedral cone, or base section.  The same (kind, parameters, seed)
// always produces the same bytes, so generated corpora are reproducible.
//

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chandef/json_io.hpp"
#include "chandef/matops.hpp"
#include "chandef/ovs.hpp"
#include "chandef/randomgen.hpp"

namespace {

using chandef::BlockAlgebra;
using chandef::RVec;
using chandef::io::Json;

BlockAlgebra algebra_from(const std::string& s) {
  std::vector<int> blocks;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t stop = std::min(s.find(',', start), s.size());
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s.substr(start, stop - start), &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != stop - start || v <= 0)
      throw chandef::io::ParseError(
          "blocks: expected comma-separated positive integers, got '" + s + "'");
    blocks.push_back(v);
    if (stop == s.size()) break;
    start = stop + 1;
  }
  return BlockAlgebra(blocks);
}

// A random proper cone: `rays` unit Gaussian directions pulled toward a
// common axis so they always fit in one halfspace.
chandef::ovs::PolyCone random_cone(chandef::rnd::Rng& rng, int dim, int rays) {
  std::vector<RVec> dirs;
  for (int i = 0; i < rays; ++i) {
    RVec v(dim);
    for (int k = 0; k < dim; ++k) v(k) = chandef::rnd::gauss(rng);
    v.normalize();
    v(0) += 1.3;
    dirs.push_back(v.normalized());
  }
  return chandef::ovs::PolyCone::from_generators(dim, dirs);
}

chandef::ovs::BaseSection random_section(chandef::rnd::Rng& rng,
                                         const chandef::ovs::PolyCone& q,
                                         int span) {
  RVec bt = RVec::Zero(q.dim);
  for (const RVec& f : q.facets) bt += f;
  std::vector<RVec> dirs;
  RVec sum = RVec::Zero(q.dim);
  for (const RVec& g : q.generators) sum += g;
  dirs.push_back(sum);
  for (int i = 1; i < span; ++i) {
    RVec v(q.dim);
    for (int k = 0; k < q.dim; ++k) v(k) = chandef::rnd::gauss(rng);
    dirs.push_back(v);
  }
  return chandef::ovs::BaseSection::make(q, bt, dirs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded random corpus generator"};

  std::string kind, in_blocks = "2", out_blocks = "2", out_path;
  std::uint64_t seed = 1;
  int outcomes = 2, count = 3, rank = 0, dim = 3, rays = 6, span = 0;
  app.add_option("--kind", kind, "channel, herm-map, povm, experiment, state, cone, or section")
      ->required()
      ->check(CLI::IsMember({"channel", "herm-map", "povm", "experiment",
                             "state", "cone", "section"}));
  app.add_option("--in", in_blocks, "input algebra blocks, e.g. 2 or 1,1,1");
  app.add_option("--out-alg", out_blocks, "output algebra blocks");
  app.add_option("--outcomes", outcomes, "POVM outcomes");
  app.add_option("--count", count, "experiment states");
  app.add_option("--rank", rank, "state rank (0 = full)");
  app.add_option("--dim", dim, "cone ambient dimension");
  app.add_option("--rays", rays, "cone generator count");
  app.add_option("--span", span, "section subspace dimension (0 = full base)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out_path, "also write the object here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    chandef::rnd::Rng rng(seed);
    const BlockAlgebra in = algebra_from(in_blocks);
    const BlockAlgebra out = algebra_from(out_blocks);
    Json j;
    if (kind == "channel") {
      j = chandef::io::map_json(chandef::rnd::channel(rng, in, out));
    } else if (kind == "herm-map") {
      j = chandef::io::map_json(chandef::rnd::herm_map(rng, in, out));
    } else if (kind == "povm") {
      j = chandef::io::povm_json(chandef::rnd::povm(rng, in, outcomes));
    } else if (kind == "experiment") {
      j = chandef::io::experiment_json(
          chandef::rnd::experiment(rng, in, count, rank));
    } else if (kind == "state") {
      const chandef::State s = chandef::rnd::state(rng, in, rank);
      j["blocks"] = Json(in.blocks);
      j["matrix"] = chandef::io::matrix_json(s.matrix());
    } else if (kind == "cone") {
      j = chandef::io::cone_json(random_cone(rng, dim, rays));
    } else {
      const chandef::ovs::PolyCone q = random_cone(rng, dim, rays);
      j = chandef::io::section_json(
          random_section(rng, q, span > 0 ? span : dim));
    }
    const std::string text = chandef::io::dump(j) + "\n";
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (!out_path.empty()) chandef::io::write_file(out_path, j);
    return 0;
  } catch (const chandef::io::ParseError& err) {
    std::fprintf(stderr, "chandef-gen: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "chandef-gen: %s\n", err.what());
    return 1;
  }
}
