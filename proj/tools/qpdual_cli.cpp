#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpdual/certificates.hpp"
#include "qpdual/copositivity.hpp"
#include "qpdual/corpus.hpp"
#include "qpdual/json_io.hpp"
#include "qpdual/oracle.hpp"
#include "qpdual/reformulate.hpp"
#include "qpdual/semilag_dual.hpp"

namespace {

using nlohmann::json;
using namespace qpdual;

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 2 infeasible, 3 parse error, 4 kind mismatch,
// 5 weak-duality breach.
enum ExitCode { kOk = 0, kInfeasible = 2, kParse = 3, kKindMismatch = 4, kBreach = 5 };

struct Config {
  std::string input;
  std::string format = "text";
  std::string target = "pd";
  double tol_gap = 1e-4;
  double eps_cop = 1e-9;
  double u_cap = 1e4;
  std::size_t grid = 33;
  unsigned seed = 0;
};

json provenance(const Config& cfg, const std::string& command) {
  return json{{"tool", "qpdual"},
              {"version", kVersion},
              {"command", command},
              {"tolerances",
               {{"tol_gap", cfg.tol_gap}, {"eps_cop", cfg.eps_cop}, {"u_cap", cfg.u_cap}}},
              {"grid", cfg.grid},
              {"seed", cfg.seed}};
}

void emit(const Config& cfg, const json& report, const std::string& text) {
  if (cfg.format == "json")
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

const char* primal_status_name(PrimalStatus s) {
  switch (s) {
    case PrimalStatus::attained: return "attained";
    case PrimalStatus::infeasible: return "infeasible";
    case PrimalStatus::unbounded_below: return "unbounded_below";
    default: return "undecided";
  }
}

json primal_to_json(const PrimalResult& r) {
  json j{{"status", primal_status_name(r.status)},
         {"method", r.method},
         {"approximate", r.approximate}};
  if (std::isfinite(r.value)) j["value"] = r.value;
  else j["value"] = r.value > 0 ? "inf" : "-inf";
  if (!r.argmin.empty()) j["argmin"] = r.argmin;
  if (r.approximate) j["error_bar"] = r.error_bar;
  if (r.possibly_infeasible) j["possibly_infeasible"] = true;
  return j;
}

const char* termination_name(DualTermination t) {
  switch (t) {
    case DualTermination::converged: return "converged";
    case DualTermination::iteration_cap: return "iteration_cap";
    case DualTermination::dual_unbounded_below_everywhere:
      return "dual_unbounded_below_everywhere";
    default: return "undecided_inner";
  }
}

json dual_to_json(const DualResult& r) {
  json j{{"termination", termination_name(r.termination)},
         {"iterations", r.history.size()}};
  if (r.finite()) {
    j["value"] = r.best_value;
    j["u"] = r.best_u;
  } else {
    j["value"] = "-inf";
  }
  return j;
}

const char* gap_class_name(GapClass g) {
  switch (g) {
    case GapClass::zero_gap: return "zero_gap";
    case GapClass::positive_gap: return "positive_gap";
    case GapClass::infinite_gap: return "infinite_gap";
    default: return "inconclusive";
  }
}

const char* verdict_name(CertificateVerdict v) {
  switch (v) {
    case CertificateVerdict::holds: return "holds";
    case CertificateVerdict::fails: return "fails";
    default: return "undecided";
  }
}

const char* kind_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::hqp_strong_convexifiable: return "hqp_strong_convexifiable";
    case CertificateKind::uniform_strong_convexifiable:
      return "uniform_strong_convexifiable";
    case CertificateKind::regularity_RA: return "regularity_RA";
    case CertificateKind::thm31_cone: return "thm31_cone";
    case CertificateKind::thm41_cone: return "thm41_cone";
    default: return "none_applicable";
  }
}

json cert_to_json(const Certificate& c) {
  json j{{"kind", kind_name(c.kind)},
         {"verdict", verdict_name(c.verdict)},
         {"evidence", c.evidence}};
  if (!c.witness.empty()) j["witness"] = c.witness;
  return j;
}

PrimalResult run_primal(const ParsedInstance& inst, const Config& cfg) {
  GridOptions g;
  g.points = cfg.grid;
  if (inst.kind == "qp") return solve_qp_bruteforce(inst.qp, g);
  if (inst.kind == "miqp") return solve_miqp_bruteforce(inst.miqp);
  if (inst.kind == "hqp") {
    try {
      // Exact route: inf = min{0, alpha*} when B is strictly copositive.
      PrimalResult r;
      r.status = PrimalStatus::attained;
      r.value = std::min(0.0, standard_form_alpha_star(inst.hqp));
      r.method = "alpha_star";
      return r;
    } catch (const std::exception&) {
      return solve_qp_bruteforce(hqp_to_qp(inst.hqp), g);
    }
  }
  if (inst.kind == "uniform")
    return solve_qp_bruteforce(uniform_to_qp(inst.uniform), g);
  return solve_robust_bruteforce(inst.robust);
}

QPInstance dual_view(const ParsedInstance& inst) {
  if (inst.kind == "qp") return inst.qp;
  if (inst.kind == "hqp") return hqp_to_qp(inst.hqp);
  if (inst.kind == "uniform") return uniform_to_qp(inst.uniform);
  if (inst.kind == "miqp") return miqp_to_pd(inst.miqp).target;
  return robust_to_ap(inst.robust).target;
}

std::vector<Certificate> run_certificates(const ParsedInstance& inst) {
  std::vector<Certificate> certs;
  if (inst.kind == "hqp") {
    certs.push_back(check_hqp(inst.hqp));
  } else if (inst.kind == "uniform") {
    certs.push_back(check_uniform(inst.uniform));
  } else if (inst.kind == "miqp") {
    certs.push_back(check_RA(inst.miqp));
    certs.push_back(check_thm31_cone(inst.miqp));
  } else if (inst.kind == "robust_miqp") {
    certs.push_back(check_thm41_cone(inst.robust));
    MixedIntegerQP eq;
    eq.n = inst.robust.n;
    eq.eq_normals = inst.robust.eq_normals;
    eq.eq_rhs = inst.robust.eq_rhs;
    eq.s = inst.robust.s;
    certs.push_back(check_RA(eq));
  }
  return certs;
}

int cmd_solve(const ParsedInstance& inst, const Config& cfg) {
  PrimalResult r = run_primal(inst, cfg);
  json rep = provenance(cfg, "solve");
  rep["result"] = primal_to_json(r);
  std::string text = "status: " + std::string(primal_status_name(r.status)) + "\n";
  if (r.status == PrimalStatus::attained) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "value: %.12g\n", r.value);
    text += buf;
  }
  emit(cfg, rep, text);
  if (r.status == PrimalStatus::infeasible || r.possibly_infeasible)
    return kInfeasible;
  return kOk;
}

int cmd_dual(const ParsedInstance& inst, const Config& cfg) {
  DualOptions opts;
  opts.u_cap = cfg.u_cap;
  DualResult r = maximize_dual(dual_view(inst), opts);
  json rep = provenance(cfg, "dual");
  rep["result"] = dual_to_json(r);
  std::string text = "termination: " + std::string(termination_name(r.termination)) + "\n";
  if (r.finite()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "dual value: %.12g\n", r.best_value);
    text += buf;
  } else {
    text += "dual value: -inf\n";
  }
  emit(cfg, rep, text);
  return kOk;
}

int cmd_gap(const ParsedInstance& inst, const Config& cfg) {
  PrimalResult primal = run_primal(inst, cfg);
  PrimalSummary summary;
  summary.value = primal.value;
  summary.finite = primal.status == PrimalStatus::attained;
  summary.reliable = !primal.approximate;

  DualOptions opts;
  opts.u_cap = cfg.u_cap;
  QPInstance view = dual_view(inst);
  DualResult dual = maximize_dual(view, opts);

  std::vector<std::string> holding;
  for (const auto& c : run_certificates(inst))
    if (c.verdict == CertificateVerdict::holds) holding.push_back(kind_name(c.kind));

  GapReport gap;
  try {
    gap = gap_report(view, summary, dual, holding, cfg.tol_gap);
  } catch (const WeakDualityViolation& e) {
    std::cerr << "weak duality violated: " << e.what() << "\n";
    return kBreach;
  }

  json rep = provenance(cfg, "gap");
  rep["result"] = {{"classification", gap_class_name(gap.classification)},
                   {"primal", primal_to_json(primal)},
                   {"dual", dual_to_json(dual)},
                   {"certificates", holding}};
  if (std::isfinite(gap.gap)) rep["result"]["gap"] = gap.gap;
  std::string text =
      "classification: " + std::string(gap_class_name(gap.classification)) + "\n";
  {
    char buf[128];
    if (summary.finite) {
      std::snprintf(buf, sizeof buf, "primal: %.12g\n", primal.value);
      text += buf;
    }
    std::snprintf(buf, sizeof buf, "dual: %s\n",
                  dual.finite() ? std::to_string(dual.best_value).c_str() : "-inf");
    text += buf;
  }
  emit(cfg, rep, text);
  return kOk;
}

int cmd_certify(const ParsedInstance& inst, const Config& cfg) {
  json rep = provenance(cfg, "certify");
  json list = json::array();
  std::string text;
  if (inst.kind == "qp") {
    if (inst.qp.constraint_count() + 1 <= 3) {
      ConvexifiabilitySample s = sample_convexifiability(inst.qp);
      const char* d =
          s.diagnosis == ConvexifiabilityDiagnosis::consistent_with_convexifiable
              ? "consistent_with_convexifiable"
              : (s.diagnosis == ConvexifiabilityDiagnosis::counterexample_found
                     ? "counterexample_found"
                     : "inconclusive");
      list.push_back({{"kind", "sample_convexifiability"},
                      {"diagnosis", d},
                      {"hull_slice_min", s.hull_slice_min},
                      {"membership_slice_min", s.membership_slice_min},
                      {"note", s.note}});
      text += std::string("sample_convexifiability: ") + d + "\n";
    } else {
      list.push_back({{"kind", "none_applicable"}, {"verdict", "undecided"}});
      text += "no certificate applicable\n";
    }
  } else {
    for (const auto& c : run_certificates(inst)) {
      list.push_back(cert_to_json(c));
      text += std::string(kind_name(c.kind)) + ": " + verdict_name(c.verdict) + "\n";
    }
  }
  rep["result"] = {{"certificates", list}};
  emit(cfg, rep, text);
  return kOk;
}

int cmd_reformulate(const ParsedInstance& inst, const Config& cfg) {
  json rep = provenance(cfg, "reformulate");
  if (cfg.target == "pd") {
    if (inst.kind != "miqp") {
      std::cerr << "reformulate --target pd needs a miqp instance\n";
      return kKindMismatch;
    }
    ReformulationMap map = miqp_to_pd(inst.miqp);
    json out = json::parse(to_json(map.target));
    json prov = json::array();
    for (const auto& p : map.provenance)
      prov.push_back({{"family", p.family}, {"source_idx", p.source_idx}});
    rep["provenance_block"] = prov;
    rep["instance"] = out;
    emit(cfg, rep, to_json(map.target) + "\n");
    return kOk;
  }
  if (cfg.target == "ap") {
    if (inst.kind != "robust_miqp") {
      std::cerr << "reformulate --target ap needs a robust_miqp instance\n";
      return kKindMismatch;
    }
    ReformulationMap map = robust_to_ap(inst.robust);
    rep["instance"] = json::parse(to_json(map.target));
    json vars = json::array();
    for (const auto& v : map.variable_map)
      vars.push_back({{"role", v.role}, {"source_idx", v.source_idx}, {"column", v.column}});
    rep["variable_map"] = vars;
    emit(cfg, rep, to_json(map.target) + "\n");
    return kOk;
  }
  if (cfg.target == "cp") {
    if (inst.kind != "qp") {
      std::cerr << "reformulate --target cp needs a qp instance\n";
      return kKindMismatch;
    }
    CopositiveRelaxation cp = build_copositive_relaxation(inst.qp);
    auto dump = [](const Matrix& M) {
      json j = json::array();
      for (std::size_t i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        j.push_back(row);
      }
      return j;
    };
    json his = json::array();
    for (const auto& H : cp.His) his.push_back(dump(H));
    rep["relaxation"] = {{"H", dump(cp.H)}, {"His", his}, {"J0", dump(cp.J0)}};
    emit(cfg, rep, rep["relaxation"].dump(2) + "\n");
    return kOk;
  }
  std::cerr << "unknown target \"" << cfg.target << "\"\n";
  return kKindMismatch;
}

int cmd_corpus(const Config& cfg) {
  json table = json::array();
  bool all_pass = true;
  std::string text;
  for (const auto& entry : builtin_corpus()) {
    std::string status = "pass";
    std::string detail;
    try {
      ParsedInstance inst = parse_instance(entry.json);
      PrimalResult r = run_primal(inst, cfg);
      if (entry.expected_infeasible) {
        if (r.status != PrimalStatus::infeasible && !r.possibly_infeasible) {
          status = "FAIL";
          detail = "expected infeasible";
        }
      } else if (std::isfinite(entry.expected_value)) {
        double tol = 1e-6 + r.error_bar;
        if (r.status != PrimalStatus::attained ||
            std::fabs(r.value - entry.expected_value) > tol) {
          status = "FAIL";
          detail = "value mismatch";
        }
      }
      if (!entry.expected_gap.empty() && status == "pass") {
        DualOptions opts;
        opts.u_cap = cfg.u_cap;
        QPInstance view = dual_view(inst);
        DualResult dual = maximize_dual(view, opts);
        PrimalSummary summary;
        summary.value = r.value;
        summary.finite = r.status == PrimalStatus::attained;
        GapReport gap = gap_report(view, summary, dual, {}, cfg.tol_gap);
        if (gap_class_name(gap.classification) != entry.expected_gap) {
          status = "FAIL";
          detail = std::string("gap class ") + gap_class_name(gap.classification);
        }
      }
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
    }
    if (status != "pass") all_pass = false;
    table.push_back({{"name", entry.name}, {"status", status}, {"detail", detail}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %-5s %s\n", entry.name.c_str(),
                  status.c_str(), detail.c_str());
    text += buf;
  }
  json rep = provenance(cfg, "corpus");
  rep["result"] = table;
  emit(cfg, rep, text);
  return all_pass ? kOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-Lagrangian duality toolkit for QPs over the nonnegative orthant"};
  app.require_subcommand(1);

  Config cfg;
  app.add_option("--tol-gap", cfg.tol_gap, "gap classification tolerance");
  app.add_option("--eps-cop", cfg.eps_cop, "copositivity zero band");
  app.add_option("--u-cap", cfg.u_cap, "initial multiplier box cap");
  app.add_option("--grid", cfg.grid, "grid points per dimension");
  app.add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", cfg.seed, "seed for randomized sweeps");

  auto* solve = app.add_subcommand("solve", "brute-force primal value");
  auto* dual = app.add_subcommand("dual", "maximize the semi-Lagrangian dual");
  auto* gap = app.add_subcommand("gap", "duality-gap report");
  auto* certify = app.add_subcommand("certify", "zero-gap certificates");
  auto* reformulate = app.add_subcommand("reformulate", "emit a reformulation");
  auto* corpus = app.add_subcommand("corpus", "run the built-in example corpus");
  for (auto* sc : {solve, dual, gap, certify, reformulate, corpus})
    sc->fallthrough();
  for (auto* sc : {solve, dual, gap, certify, reformulate})
    sc->add_option("input", cfg.input, "instance JSON path")->required();
  reformulate->add_option("--target", cfg.target, "pd | ap | cp")
      ->check(CLI::IsMember({"pd", "ap", "cp"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (corpus->parsed()) return cmd_corpus(cfg);
    ParsedInstance inst;
    try {
      inst = load_instance(cfg.input);
    } catch (const ParseError& e) {
      std::cerr << e.what() << "\n";
      return kParse;
    }
    if (solve->parsed()) return cmd_solve(inst, cfg);
    if (dual->parsed()) return cmd_dual(inst, cfg);
    if (gap->parsed()) return cmd_gap(inst, cfg);
    if (certify->parsed()) return cmd_certify(inst, cfg);
    if (reformulate->parsed()) return cmd_reformulate(inst, cfg);
  } catch (const WeakDualityViolation& e) {
    std::cerr << "weak duality violated: " << e.what() << "\n";
    return kBreach;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
