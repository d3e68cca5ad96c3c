//
// chandef: channel norms, deficiency, and cleanness reports from JSON files.
//
// Every command prints exactly one JSON report to stdout (and to --out when
// given).  The report embeds the optimizer's certificate together with the
// residuals that re-verify the headline value, so a reader can check the
// claim without repeating the optimization.  Output bytes depend only on the
// input files, the seed, and the version string.
//
// Exit codes: 0 success, 2 parse error, 3 dimension/shape error, 4 iteration
// limit without a certified interval, 5 verification failure.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"

#include "chandef/cones.hpp"
#include "chandef/conic.hpp"
#include "chandef/deficiency.hpp"
#include "chandef/hmap.hpp"
#include "chandef/json_io.hpp"
#include "chandef/matops.hpp"
#include "chandef/norms.hpp"
#include "chandef/ovs.hpp"
#include "chandef/verify.hpp"

namespace {

using chandef::BlockAlgebra;
using chandef::ConeFamily;
using chandef::DeficiencyOptions;
using chandef::DeficiencyReport;
using chandef::HermitianMap;
using chandef::Mat;
using chandef::Membership;
using chandef::NormResult;
using chandef::RMat;
using chandef::RVec;
using chandef::Verdict;
using chandef::io::Json;

constexpr const char* kVersion = "0.1.0";

// A command succeeds (exit 0) when the solver converged or left a certified
// two-sided bracket, and the embedded certificate checks pass.
struct Outcome {
  chandef::conic::SolveStatus status = chandef::conic::SolveStatus::kOptimal;
  bool certified = true;
  bool verified = true;
};

void apply_thread_cap() {
  if (const char* env = std::getenv("CHANDEF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

ConeFamily family_from(const std::string& s) {
  if (s == "cp") return ConeFamily::kCp;
  if (s == "eb") return ConeFamily::kEb;
  return ConeFamily::kPos;
}

std::string status_name(chandef::conic::SolveStatus s) {
  switch (s) {
    case chandef::conic::SolveStatus::kOptimal: return "optimal";
    case chandef::conic::SolveStatus::kInfeasible: return "infeasible";
    default: return "maxiter";
  }
}

std::vector<int> parse_block_list(const std::string& s) {
  std::vector<int> out;
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
          "block list: expected comma-separated positive integers, got '" + s + "'");
    out.push_back(v);
    if (stop == s.size()) break;
    start = stop + 1;
  }
  if (out.empty())
    throw chandef::io::ParseError("block list: empty");
  return out;
}

RVec parse_real_list(const std::string& s) {
  std::vector<double> vals;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t stop = std::min(s.find(',', start), s.size());
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s.substr(start, stop - start), &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != stop - start)
      throw chandef::io::ParseError(
          "coordinate list: expected comma-separated reals, got '" + s + "'");
    vals.push_back(v);
    if (stop == s.size()) break;
    start = stop + 1;
  }
  RVec out(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = vals[i];
  return out;
}

Json membership_json(const Membership& m) {
  Json j;
  j["verdict"] = m.verdict == Verdict::kIn
                     ? "in"
                     : (m.verdict == Verdict::kOut ? "out" : "undecided");
  j["margin"] = m.margin;
  j["method"] = m.method;
  return j;
}

Json diagnostics_json(const std::map<std::string, double>& d) {
  Json j = Json::object();
  for (const auto& [key, value] : d) j[key] = value;
  return j;
}

Json report_header(const std::string& command, std::uint64_t seed) {
  Json rep;
  rep["version"] = kVersion;
  rep["command"] = command;
  rep["seed"] = seed;
  return rep;
}

int finish(const Json& rep, const std::string& out_path, const Outcome& oc) {
  const std::string text = chandef::io::dump(rep) + "\n";
  std::fwrite(text.data(), 1, text.size(), stdout);
  if (!out_path.empty()) chandef::io::write_file(out_path, rep);
  if (oc.status == chandef::conic::SolveStatus::kMaxIter && !oc.certified)
    return 4;
  if (!oc.verified) return 5;
  return 0;
}

chandef::conic::SolveOptions solve_options(double tol) {
  chandef::conic::SolveOptions solve;
  if (tol > 0.0) {
    solve.feas_tol = tol;
    solve.gap_tol = tol;
  }
  return solve;
}

// Residual tolerance for the embedded certificate checks, looser than the
// solver target because it measures reconstructed quantities.
double check_tol(double tol, double scale) {
  return std::max(1e-6, 100.0 * tol) * (1.0 + std::abs(scale));
}

// ── norm / dual-norm ────────────────────────────────────────────────────────

int run_norm(bool dual, ConeFamily family, const std::string& map_path,
             std::uint64_t seed, double tol, const std::string& out_path) {
  const HermitianMap m = chandef::io::parse_map(chandef::io::load_file(map_path));
  const auto solve = solve_options(tol);
  const NormResult r = dual ? chandef::dual_diamond_norm(family, m, solve)
                            : chandef::diamond_norm(family, m, seed, solve);

  Json rep = report_header(dual ? "dual-norm" : "norm", seed);
  rep["family"] = family_name(family);
  Outcome oc;
  oc.status = r.status;
  if (r.infinite) {
    rep["infinite"] = true;
    rep["status"] = status_name(r.status);
    return finish(rep, out_path, oc);
  }
  rep["value_lo"] = r.value_lo;
  rep["value_hi"] = r.value_hi;
  rep["exact"] = r.exact();
  rep["status"] = status_name(r.status);
  rep["method"] = r.method;
  oc.certified = std::isfinite(r.value_lo) && std::isfinite(r.value_hi) &&
                 r.value_lo <= r.value_hi + 1e-9;
  if (r.certificate.size() == 0) {
    Json chk;
    chk["verified"] = oc.certified;
    rep["certificate_check"] = chk;
    oc.verified = oc.certified;
    return finish(rep, out_path, oc);
  }
  rep["certificate"] = chandef::io::matrix_json(r.certificate);

  // Re-verify value_hi from the certificate alone.  Diamond: the certificate
  // is the Choi matrix of the dominating channel, so its scale by value_hi
  // must have identity marginal and sandwich ±C(m) in the norm cone.  Dual:
  // the certificate X must be PSD with trace value_hi and X ⊗ I ± C(m) in
  // the norm cone.
  const double ctol = check_tol(tol, r.value_hi);
  const chandef::ChoiCone tilde = chandef::tilde_cone(family);
  Json chk;
  bool ok = oc.certified;
  Mat dominating;
  if (dual) {
    const Membership psd = chandef::psd_membership(r.certificate);
    const double trace_defect = std::abs(r.certificate.trace().real() - r.value_hi);
    chk["trace_defect"] = trace_defect;
    chk["psd"] = membership_json(psd);
    ok = ok && psd.verdict != Verdict::kOut && trace_defect <= ctol;
    dominating = chandef::kron(r.certificate, Mat::Identity(m.din(), m.din()));
  } else {
    const HermitianMap cert_map(m.in_alg, m.out_alg, r.certificate);
    const double marginal_defect = chandef::tp_defect(cert_map);
    chk["marginal_defect"] = marginal_defect;
    ok = ok && marginal_defect <= ctol;
    dominating = r.value_hi * r.certificate;
  }
  const Membership plus =
      chandef::cone_membership(tilde, Mat(dominating + m.choi), m.dout(), m.din());
  const Membership minus =
      chandef::cone_membership(tilde, Mat(dominating - m.choi), m.dout(), m.din());
  chk["plus_membership"] = membership_json(plus);
  chk["minus_membership"] = membership_json(minus);
  ok = ok && plus.verdict != Verdict::kOut && minus.verdict != Verdict::kOut;
  chk["verified"] = ok;
  rep["certificate_check"] = chk;
  oc.verified = ok;
  return finish(rep, out_path, oc);
}

// ── deficiency-post / deficiency-pre ────────────────────────────────────────

void put_deficiency_body(Json& rep, const DeficiencyReport& r) {
  rep["eps_lo"] = r.eps_lo;
  rep["eps_hi"] = r.eps_hi;
  rep["status"] = status_name(r.status);
  rep["method"] = r.method;
  rep["diagnostics"] = diagnostics_json(r.diagnostics);
}

int run_deficiency(bool post, ConeFamily family, const std::string& phi_path,
                   const std::string& psi_path, const std::string& decision_s,
                   std::uint64_t seed, double tol, const std::string& out_path) {
  const HermitianMap phi = chandef::io::parse_map(chandef::io::load_file(phi_path));
  const HermitianMap psi = chandef::io::parse_map(chandef::io::load_file(psi_path));
  DeficiencyOptions opts;
  opts.seed = seed;
  opts.solve = solve_options(tol);

  DeficiencyReport r;
  Json rep = report_header(post ? "deficiency-post" : "deficiency-pre", seed);
  rep["family"] = family_name(family);
  if (!decision_s.empty()) {
    const BlockAlgebra decision(parse_block_list(decision_s));
    rep["decision_blocks"] = Json(decision.blocks);
    r = post ? chandef::post_deficiency(family, phi, psi, decision, opts)
             : chandef::pre_deficiency(family, phi, psi, decision, opts);
  } else {
    r = post ? chandef::post_deficiency(family, phi, psi, opts)
             : chandef::pre_deficiency(family, phi, psi, opts);
  }
  put_deficiency_body(rep, r);

  Outcome oc;
  oc.status = r.status;
  oc.certified = std::isfinite(r.eps_lo) && std::isfinite(r.eps_hi) &&
                 r.eps_lo <= r.eps_hi + 1e-9;
  const double ctol = check_tol(tol, r.eps_hi);
  bool ok = oc.certified;
  Json chk;
  if (r.certificate_channel) {
    rep["certificate_channel"] = chandef::io::map_json(*r.certificate_channel);
    const double tp = chandef::tp_defect(*r.certificate_channel);
    const Membership fam = chandef::family_membership(family, *r.certificate_channel);
    chk["certificate_tp_defect"] = tp;
    chk["certificate_family"] = membership_json(fam);
    // Independent recomputation of the headline: the certified lower bound
    // on ½‖Φ − α′∘Ψ‖ (resp. ½‖Φ − Ψ∘β′‖) may not exceed eps_hi.
    const HermitianMap resid =
        post ? phi - chandef::compose(*r.certificate_channel, psi)
             : phi - chandef::compose(psi, *r.certificate_channel);
    const NormResult d =
        chandef::diamond_norm(family, resid, seed, opts.solve, false);
    chk["half_distance_lo"] = 0.5 * d.value_lo;
    chk["half_distance_hi"] = 0.5 * d.value_hi;
    ok = ok && tp <= ctol && fam.verdict != Verdict::kOut &&
         0.5 * d.value_lo <= r.eps_hi + ctol;
  }
  if (r.witness_payoff) {
    rep["witness_payoff"] = chandef::io::map_json(*r.witness_payoff);
    const Membership dual =
        chandef::dual_membership(family, *r.witness_payoff);
    chk["witness_dual"] = membership_json(dual);
    ok = ok && dual.verdict != Verdict::kOut;
  }
  chk["verified"] = ok;
  rep["certificate_check"] = chk;
  oc.verified = ok;
  return finish(rep, out_path, oc);
}

// ── range-inclusion ─────────────────────────────────────────────────────────

int run_range_inclusion(const std::string& phi_path, const std::string& psi_path,
                        std::uint64_t seed, double tol,
                        const std::string& out_path) {
  const HermitianMap phi = chandef::io::parse_map(chandef::io::load_file(phi_path));
  const HermitianMap psi = chandef::io::parse_map(chandef::io::load_file(psi_path));
  DeficiencyOptions opts;
  opts.seed = seed;
  opts.solve = solve_options(tol);
  const DeficiencyReport r = chandef::pre_range_inclusion(phi, psi, opts);

  Json rep = report_header("range-inclusion", seed);
  put_deficiency_body(rep, r);
  if (r.witness_operator.size() > 0)
    rep["witness_operator"] = chandef::io::matrix_json(r.witness_operator);

  Outcome oc;
  oc.status = r.status;
  oc.certified = std::isfinite(r.eps_lo) && std::isfinite(r.eps_hi) &&
                 r.eps_lo <= r.eps_hi + 1e-9;
  Json chk;
  chk["bracket_width"] = r.eps_hi - r.eps_lo;
  chk["verified"] = oc.certified;
  rep["certificate_check"] = chk;
  oc.verified = oc.certified;
  return finish(rep, out_path, oc);
}

// ── cleanness ───────────────────────────────────────────────────────────────

int run_cleanness(const std::string& m_path, const std::string& n_path,
                  std::uint64_t seed, double tol, const std::string& out_path) {
  const chandef::Povm m = chandef::io::parse_povm(chandef::io::load_file(m_path));
  const chandef::Povm n = chandef::io::parse_povm(chandef::io::load_file(n_path));
  DeficiencyOptions opts;
  opts.seed = seed;
  opts.solve = solve_options(tol);
  const DeficiencyReport r = chandef::povm_post_cleanness(m, n, opts);
  const double seesaw =
      chandef::povm_cleanness_seesaw(m, n, seed, 6, opts.solve);

  Json rep = report_header("cleanness", seed);
  put_deficiency_body(rep, r);
  rep["seesaw"] = seesaw;
  rep["stochastic"] = chandef::io::rmat_json(r.stochastic);

  Outcome oc;
  oc.status = r.status;
  oc.certified = std::isfinite(r.eps_hi);
  const double ctol = check_tol(tol, r.eps_hi);
  if (r.stochastic.size() == 0) {
    Json chk;
    chk["verified"] = false;
    rep["certificate_check"] = chk;
    oc.verified = false;
    return finish(rep, out_path, oc);
  }
  // Λ must be column-stochastic, and relabeling N by it must reproduce the
  // headline distance to M.
  double min_entry = 0.0, colsum_defect = 0.0;
  for (int j = 0; j < r.stochastic.cols(); ++j) {
    colsum_defect = std::max(colsum_defect, std::abs(r.stochastic.col(j).sum() - 1.0));
    min_entry = std::min(min_entry, r.stochastic.col(j).minCoeff());
  }
  std::vector<Mat> relabeled(static_cast<size_t>(m.outcomes()));
  for (int i = 0; i < m.outcomes(); ++i) {
    Mat acc = Mat::Zero(m.algebra.ambient(), m.algebra.ambient());
    for (int j = 0; j < n.outcomes(); ++j)
      acc += r.stochastic(i, j) * n.effects[static_cast<size_t>(j)];
    relabeled[static_cast<size_t>(i)] = acc;
  }
  const HermitianMap resid = chandef::make_qc(m.algebra, m.effects) -
                             chandef::make_qc(m.algebra, relabeled);
  const NormResult d =
      chandef::diamond_norm(ConeFamily::kCp, resid, seed, opts.solve, false);
  Json chk;
  chk["column_sum_defect"] = colsum_defect;
  chk["min_entry"] = min_entry;
  chk["half_distance_lo"] = 0.5 * d.value_lo;
  chk["half_distance_hi"] = 0.5 * d.value_hi;
  chk["seesaw_gap"] = seesaw - r.eps_hi;
  const bool ok = oc.certified && colsum_defect <= ctol && min_entry >= -ctol &&
                  0.5 * d.value_lo <= r.eps_hi + ctol && seesaw >= r.eps_hi - ctol;
  chk["verified"] = ok;
  rep["certificate_check"] = chk;
  oc.verified = ok;
  return finish(rep, out_path, oc);
}

// ── experiment ──────────────────────────────────────────────────────────────

int run_experiment(const std::string& e_path, const std::string& f_path,
                   const std::string& direction, ConeFamily family,
                   const std::string& decision_s, std::uint64_t seed, double tol,
                   const std::string& out_path) {
  const chandef::Experiment e =
      chandef::io::parse_experiment(chandef::io::load_file(e_path));
  const chandef::Experiment f =
      chandef::io::parse_experiment(chandef::io::load_file(f_path));
  DeficiencyOptions opts;
  opts.seed = seed;
  opts.solve = solve_options(tol);

  Json rep = report_header("experiment", seed);
  rep["direction"] = direction;
  Outcome oc;
  Json chk;
  bool ok = true;
  if (direction == "post") {
    const BlockAlgebra decision = decision_s.empty()
                                      ? e.algebra
                                      : BlockAlgebra(parse_block_list(decision_s));
    rep["family"] = family_name(family);
    rep["decision_blocks"] = Json(decision.blocks);
    const DeficiencyReport r =
        chandef::experiment_post_deficiency(e, f, decision, family, opts);
    put_deficiency_body(rep, r);
    oc.status = r.status;
    oc.certified = std::isfinite(r.eps_lo) && std::isfinite(r.eps_hi) &&
                   r.eps_lo <= r.eps_hi + 1e-9;
    ok = oc.certified;
    const double ctol = check_tol(tol, r.eps_hi);
    if (r.certificate_channel) {
      rep["certificate_channel"] = chandef::io::map_json(*r.certificate_channel);
      const double tp = chandef::tp_defect(*r.certificate_channel);
      double worst = 0.0;
      for (int i = 0; i < e.size(); ++i) {
        const Mat moved = chandef::apply_map(*r.certificate_channel,
                                             e.states[static_cast<size_t>(i)]);
        worst = std::max(worst,
                         0.5 * chandef::trace_norm(
                                   Mat(moved - f.states[static_cast<size_t>(i)])));
      }
      chk["certificate_tp_defect"] = tp;
      chk["per_index_eps"] = worst;
      ok = ok && tp <= ctol && worst <= r.eps_hi + ctol;
    }
  } else {
    const DeficiencyReport r = chandef::experiment_pre_deficiency(e, f, opts.solve);
    put_deficiency_body(rep, r);
    rep["mixtures"] = chandef::io::rmat_json(r.mixtures);
    oc.status = r.status;
    oc.certified = std::isfinite(r.eps_hi);
    ok = oc.certified;
    const double ctol = check_tol(tol, r.eps_hi);
    // Each row of `mixtures` must be a distribution whose blend of the
    // resource states sits within eps_hi of the matching target state.
    double worst = 0.0, row_defect = 0.0, min_entry = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      row_defect = std::max(row_defect, std::abs(r.mixtures.row(i).sum() - 1.0));
      min_entry = std::min(min_entry, r.mixtures.row(i).minCoeff());
      Mat blend = Mat::Zero(e.algebra.ambient(), e.algebra.ambient());
      for (int j = 0; j < e.size(); ++j)
        blend += r.mixtures(i, j) * e.states[static_cast<size_t>(j)];
      worst = std::max(worst, 0.5 * chandef::trace_norm(
                                        Mat(f.states[static_cast<size_t>(i)] - blend)));
    }
    chk["row_sum_defect"] = row_defect;
    chk["min_entry"] = min_entry;
    chk["per_index_eps"] = worst;
    ok = ok && row_defect <= ctol && min_entry >= -ctol && worst <= r.eps_hi + ctol;
  }
  chk["verified"] = ok;
  rep["certificate_check"] = chk;
  oc.verified = ok;
  return finish(rep, out_path, oc);
}

// ── ovs ─────────────────────────────────────────────────────────────────────

int run_ovs(const std::string& section_path, const std::string& x_s,
            std::uint64_t seed, double tol, const std::string& out_path) {
  const chandef::ovs::BaseSection b =
      chandef::io::parse_section(chandef::io::load_file(section_path));
  Json rep = report_header("ovs", seed);
  rep["dim"] = b.cone.dim;
  rep["num_generators"] = static_cast<int>(b.cone.generators.size());
  rep["num_facets"] = static_cast<int>(b.cone.facets.size());
  rep["num_vertices"] = static_cast<int>(b.vertices.size());

  Outcome oc;
  if (x_s.empty()) {
    // No vector given: summarize the section and its dual.
    Json verts = Json::array();
    for (const RVec& v : b.vertices) verts.push_back(chandef::io::rvec_json(v));
    rep["vertices"] = verts;
    const chandef::ovs::BaseSection bt = chandef::ovs::dual_section(b);
    Json dual_verts = Json::array();
    for (const RVec& v : bt.vertices) dual_verts.push_back(chandef::io::rvec_json(v));
    rep["dual_vertices"] = dual_verts;
    return finish(rep, out_path, oc);
  }

  const RVec x = parse_real_list(x_s);
  if (x.size() != b.cone.dim)
    throw chandef::io::ShapeError("--x: expected " + std::to_string(b.cone.dim) +
                                  " coordinates, got " + std::to_string(x.size()));
  const chandef::ovs::SectionNorm r = chandef::ovs::base_section_norm(b, x);
  rep["finite"] = r.finite;
  if (!r.finite) {
    oc.verified = true;
    return finish(rep, out_path, oc);
  }
  rep["value"] = r.value;
  rep["certificate"] = chandef::io::rvec_json(r.certificate);

  // The certificate c must dominate ±x inside the cone and pair with the
  // base functional to the headline value; both checks are exact polyhedral
  // arithmetic.
  const double ctol = check_tol(tol, r.value);
  double plus_margin = std::numeric_limits<double>::infinity();
  double minus_margin = plus_margin;
  for (const RVec& fct : b.cone.facets) {
    plus_margin = std::min(plus_margin, fct.dot(r.certificate + x));
    minus_margin = std::min(minus_margin, fct.dot(r.certificate - x));
  }
  const double pairing_defect = std::abs(b.base_functional.dot(r.certificate) - r.value);
  Json chk;
  chk["plus_margin"] = plus_margin;
  chk["minus_margin"] = minus_margin;
  chk["pairing_defect"] = pairing_defect;
  const bool ok = plus_margin >= -ctol && minus_margin >= -ctol &&
                  pairing_defect <= ctol;
  chk["verified"] = ok;
  rep["certificate_check"] = chk;
  oc.verified = ok;
  return finish(rep, out_path, oc);
}

// ── verify ──────────────────────────────────────────────────────────────────

int run_verify(std::uint64_t seed, const std::string& out_path) {
  const std::vector<chandef::verify::CheckResult> checks =
      chandef::verify::run_all(seed);
  int failures = 0;
  Json list = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["defect"] = c.defect;
    j["tolerance"] = c.tolerance;
    list.push_back(j);
    if (!c.passed) ++failures;
  }
  Json rep = report_header("verify", seed);
  rep["checks"] = list;
  rep["failures"] = failures;
  Outcome oc;
  oc.verified = failures == 0;
  return finish(rep, out_path, oc);
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"diamond and dual-diamond norms, channel deficiency, POVM "
               "cleanness, and polyhedral section norms"};
  app.require_subcommand(1);

  std::string family_s = "cp", out_path, decision_s, direction = "post";
  std::string map_path, phi_path, psi_path, m_path, n_path, e_path, f_path;
  std::string section_path, x_s;
  std::uint64_t seed = 1;
  double tol = 0.0;

  const auto add_common = [&](CLI::App* c, bool with_family) {
    if (with_family)
      c->add_option("--family", family_s, "cone family")
          ->check(CLI::IsMember({"cp", "eb", "pos"}));
    c->add_option("--seed", seed, "random seed");
    c->add_option("--tol", tol, "solver tolerance override");
    c->add_option("--out", out_path, "also write the report here");
  };

  CLI::App* norm = app.add_subcommand("norm", "diamond norm of a Hermitian map");
  norm->add_option("--map", map_path, "map JSON file")->required();
  add_common(norm, true);

  CLI::App* dual = app.add_subcommand("dual-norm", "dual diamond norm");
  dual->add_option("--map", map_path, "map JSON file")->required();
  add_common(dual, true);

  CLI::App* dpost =
      app.add_subcommand("deficiency-post", "post-processing deficiency of psi w.r.t. phi");
  dpost->add_option("--phi", phi_path, "target map JSON file")->required();
  dpost->add_option("--psi", psi_path, "resource map JSON file")->required();
  dpost->add_option("--decision-alg", decision_s,
                    "decision algebra blocks, e.g. 1,1,1 or 2");
  add_common(dpost, true);

  CLI::App* dpre =
      app.add_subcommand("deficiency-pre", "pre-processing deficiency of psi w.r.t. phi");
  dpre->add_option("--phi", phi_path, "target map JSON file")->required();
  dpre->add_option("--psi", psi_path, "resource map JSON file")->required();
  dpre->add_option("--decision-alg", decision_s,
                   "decision algebra blocks, e.g. 1,1,1 or 2");
  add_common(dpre, true);

  CLI::App* range = app.add_subcommand(
      "range-inclusion", "classical pre-processing deficiency via output ranges");
  range->add_option("--phi", phi_path, "target map JSON file")->required();
  range->add_option("--psi", psi_path, "resource map JSON file")->required();
  add_common(range, false);

  CLI::App* clean =
      app.add_subcommand("cleanness", "reachability of POVM m by relabeling POVM n");
  clean->add_option("--m", m_path, "target POVM JSON file")->required();
  clean->add_option("--n", n_path, "resource POVM JSON file")->required();
  add_common(clean, false);

  CLI::App* expt = app.add_subcommand("experiment", "deficiency between experiments");
  expt->add_option("--e", e_path, "resource experiment JSON file")->required();
  expt->add_option("--f", f_path, "target experiment JSON file")->required();
  expt->add_option("--direction", direction, "post or pre")
      ->check(CLI::IsMember({"post", "pre"}));
  expt->add_option("--decision-alg", decision_s,
                   "decision algebra blocks (post only)");
  add_common(expt, true);

  CLI::App* ovs_cmd =
      app.add_subcommand("ovs", "base-section norm over a polyhedral cone");
  ovs_cmd->add_option("--section", section_path, "section JSON file")->required();
  ovs_cmd->add_option("--x", x_s, "vector coordinates, comma-separated");
  add_common(ovs_cmd, false);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the library invariant suites");
  add_common(verify_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    const ConeFamily family = family_from(family_s);
    if (app.got_subcommand(norm))
      return run_norm(false, family, map_path, seed, tol, out_path);
    if (app.got_subcommand(dual))
      return run_norm(true, family, map_path, seed, tol, out_path);
    if (app.got_subcommand(dpost))
      return run_deficiency(true, family, phi_path, psi_path, decision_s, seed,
                            tol, out_path);
    if (app.got_subcommand(dpre))
      return run_deficiency(false, family, phi_path, psi_path, decision_s, seed,
                            tol, out_path);
    if (app.got_subcommand(range))
      return run_range_inclusion(phi_path, psi_path, seed, tol, out_path);
    if (app.got_subcommand(clean))
      return run_cleanness(m_path, n_path, seed, tol, out_path);
    if (app.got_subcommand(expt))
      return run_experiment(e_path, f_path, direction, family, decision_s, seed,
                            tol, out_path);
    if (app.got_subcommand(ovs_cmd))
      return run_ovs(section_path, x_s, seed, tol, out_path);
    return run_verify(seed, out_path);
  } catch (const chandef::io::ParseError& err) {
    std::fprintf(stderr, "chandef: %s\n", err.what());
    return 2;
  } catch (const chandef::io::ShapeError& err) {
    std::fprintf(stderr, "chandef: %s\n", err.what());
    return 3;
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "chandef: %s\n", err.what());
    return 3;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "chandef: %s\n", err.what());
    return 1;
  }
}
