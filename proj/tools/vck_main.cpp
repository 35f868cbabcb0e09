// vck: exact VC_k dimension, trace bounds, packing covers, PAC_k learning
// experiments and slice-wise regularity checks over finite product domains.
//
// Exit status: 0 success, 1 check failure or budget exhaustion (partial
// report), 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "vck/io.hpp"

namespace {

using vck::Json;
using vck::Rational;

struct CommonArgs {
  std::string input;
  std::string measure;
  std::string epsilon = "1/10";
  std::string delta = "1/10";
  std::uint64_t seed = 0;
  int trials = 100;
  int budget_terms = 1;
  int budget_fibers = 0;
  int budget_centers = 1;
  int anchors = 4;
  std::string mode = "almost_all";
  std::string output;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_measure) {
  cmd->add_option("--input", a.input, "family/relation JSON file")->required();
  auto* m = cmd->add_option("--measure", a.measure, "measure JSON file");
  if (needs_measure) m->required();
  cmd->add_option("--epsilon", a.epsilon, "epsilon as p/q");
  cmd->add_option("--delta", a.delta, "delta as p/q");
  cmd->add_option("--seed", a.seed, "seed for all randomness");
  cmd->add_option("--trials", a.trials, "trial count");
  cmd->add_option("--budget-terms", a.budget_terms, "max DNF terms per witness");
  cmd->add_option("--budget-fibers", a.budget_fibers, "max distinct fiber atoms per witness");
  cmd->add_option("--budget-centers", a.budget_centers, "max distinct center atoms per witness");
  cmd->add_option("--anchors", a.anchors, "anchor count for slice-wise search");
  cmd->add_option("--mode", a.mode, "almost_all|all")
      ->check(CLI::IsMember({"almost_all", "all"}));
  cmd->add_option("--output", a.output, "output path (default stdout)");
  cmd->add_option("--format", a.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const CommonArgs& a, const Json& report, const Json& csv_rows) {
  std::string text =
      a.format == "csv" ? vck::csv_from_rows(csv_rows) : report.dump(2) + "\n";
  if (a.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw vck::InputError("cannot open output file: " + a.output);
    out << text;
  }
}

vck::ProductMeasure load_measure(const CommonArgs& a, const vck::ProductDomain& dom) {
  if (a.measure.empty()) return vck::ProductMeasure::uniform(dom);
  return vck::measure_from_json(vck::load_json_file(a.measure), dom);
}

vck::ExprBudget budget_of(const CommonArgs& a, int k) {
  return vck::ExprBudget{a.budget_centers, a.budget_fibers, a.budget_terms,
                         std::max(0, std::min(a.budget_fibers > 0 ? k - 1 : 0, k - 1))};
}

int run_dim(const CommonArgs& a, bool as_relation) {
  vck::SetFamily fam = vck::family_from_json(vck::load_json_file(a.input));
  Json report;
  report["input"] = a.input;
  try {
    if (as_relation) {
      if (fam.size() != 1)
        throw vck::InputError("--as-relation expects a single-member family");
      int k = fam.domain.arity() - 1;
      report["k"] = k;
      report["vck"] = vck::vck_of_relation(fam[0], k);
    } else {
      auto res = vck::vck_dimension_witness(fam);
      report["vck"] = res.dim;
      if (res.witness) report["witness"] = vck::box_to_json(*res.witness);
    }
  } catch (const vck::BudgetExceeded& e) {
    report["partial"] = true;
    report["error"] = e.what();
    if (e.lower_bound >= 0) report["vck_lower_bound"] = e.lower_bound;
    emit(a, report, Json::array({report}));
    return 1;
  }
  emit(a, report, Json::array({report}));
  return 0;
}

int run_sauer(const CommonArgs& a, int m, int d) {
  vck::SetFamily fam = vck::family_from_json(vck::load_json_file(a.input));
  vck::SauerOptions opt;
  opt.seed = a.seed;
  std::vector<vck::TraceReport> rows;
  Json report;
  report["m"] = m;
  report["d"] = d;
  try {
    rows = vck::sauer_shelah_check(fam, m, d, opt);
  } catch (const vck::BudgetExceeded& e) {
    report["partial"] = true;
    report["error"] = e.what();
    emit(a, report, Json::array({report}));
    return 1;
  }
  bool pass = true;
  for (const auto& r : rows) pass = pass && r.pass;
  report["pass"] = pass;
  Json jrows = vck::trace_reports_to_json(rows);
  report["boxes"] = jrows;
  emit(a, report, jrows);
  return pass ? 0 : 1;
}

int run_pack(const CommonArgs& a) {
  vck::SetFamily fam = vck::family_from_json(vck::load_json_file(a.input));
  vck::ProductMeasure mu = load_measure(a, fam.domain);
  Rational eps = vck::parse_rational(a.epsilon);

  vck::PackingCertificate cert = vck::greedy_packing(fam, mu, eps);
  if (fam.domain.arity() >= 2 && a.budget_fibers > 0) {
    vck::ExprBudget budget = budget_of(a, fam.domain.arity());
    cert = vck::fiber_cover_search(fam, mu, eps, cert.centers, budget);
  }
  bool ok = vck::verify_certificate(cert, fam, mu);
  bool complete = ok;
  for (const auto& w : cert.per_member) complete = complete && w.has_value();

  Json report = vck::certificate_to_json(cert);
  report["verified"] = ok;
  emit(a, report, report["witnesses"]);
  return complete ? 0 : 1;
}

int run_learn(const CommonArgs& a, int n1, const std::string& rho_hat,
              const std::string& concepts) {
  vck::SetFamily fam = vck::family_from_json(vck::load_json_file(a.input));
  vck::ProductMeasure mu = load_measure(a, fam.domain);

  vck::LearnerConfig cfg;
  cfg.epsilon = vck::parse_rational(a.epsilon);
  cfg.delta = vck::parse_rational(a.delta);
  cfg.n1 = n1;
  cfg.budget = budget_of(a, fam.domain.arity());
  cfg.seed = a.seed;
  if (!rho_hat.empty()) cfg.rho_hat = vck::parse_rational(rho_hat);

  vck::PacReport rep = vck::pac_experiment(
      fam, mu, cfg, a.trials,
      concepts == "sampled" ? vck::ConceptMode::Sampled : vck::ConceptMode::AllMembers);

  Json report = vck::pac_report_to_json(rep);
  report["config"]["epsilon"] = vck::rational_str(cfg.epsilon);
  report["config"]["delta"] = vck::rational_str(cfg.delta);
  report["config"]["seed"] = a.seed;
  report["config"]["trials"] = a.trials;
  emit(a, report, report["concepts"]);
  return 0;
}

int run_regularity(const CommonArgs& a, int k, const std::string& decomposition,
                   bool do_net, bool do_search) {
  vck::SetFamily fam = vck::family_from_json(vck::load_json_file(a.input));
  if (fam.size() != 1) throw vck::InputError("regularity expects a single-member family");
  const vck::Relation& e = fam[0];
  vck::ProductMeasure mu = load_measure(a, fam.domain);
  Rational eps = vck::parse_rational(a.epsilon);

  Json report;
  report["slicewise"] = vck::slicewise_report_to_json(vck::slicewise_vck(e, k));

  int status = 0;
  if (do_net) {
    if (fam.domain.arity() != 3) throw vck::InputError("--net needs a 3-ary relation");
    std::vector<int> head{0, 1};
    std::vector<std::vector<Rational>> head_axes{mu.axes()[0], mu.axes()[1]};
    vck::ProductMeasure mu_head(vck::ProductDomain({fam.domain.size(0), fam.domain.size(1)}),
                                head_axes);
    vck::FiberNet net = vck::fiber_eps_net_with_assignment(e, mu_head, eps);
    report["net"] = Json{{"epsilon", vck::rational_str(eps)},
                         {"centers", net.centers},
                         {"assignment", net.assignment}};
    vck::Decomposition dec = vck::induced_decomposition(e, net);
    vck::DecompReport dr = vck::verify_decomposition(e, dec, mu, eps, vck::DecompMode::All);
    report["induced_decomposition"] = vck::decomposition_to_json(dec);
    report["induced_verify"] = vck::decomp_report_to_json(dr, vck::DecompMode::All, eps);
    if (!dr.pass) status = 1;
  }
  if (!decomposition.empty()) {
    vck::Decomposition dec = vck::decomposition_from_json(vck::load_json_file(decomposition));
    vck::DecompMode mode = a.mode == "all" ? vck::DecompMode::All : vck::DecompMode::AlmostAll;
    vck::DecompReport dr = vck::verify_decomposition(e, dec, mu, eps, mode);
    report["verify"] = vck::decomp_report_to_json(dr, mode, eps);
    if (!dr.pass) status = 1;
  }
  if (do_search) {
    vck::ExprBudget budget = budget_of(a, k + 1);
    vck::SlicewiseCertificate cert =
        vck::slicewise_packing_search(e, mu, k, eps, budget, a.anchors);
    report["search"] = vck::slicewise_certificate_to_json(cert);
    for (const auto& row : cert.rows)
      if (!row.witness) status = 1;
  }
  emit(a, report, Json::array({report}));
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"higher-arity VC dimension, packing and PAC learning toolkit"};
  app.require_subcommand(1);

  CommonArgs dim_args, sauer_args, pack_args, learn_args, reg_args;
  bool as_relation = false;
  int sauer_m = 3, sauer_d = 2;
  int learn_n1 = 1 << 20;
  std::string learn_rho, learn_concepts = "all";
  int reg_k = 1;
  std::string reg_dec;
  bool reg_net = false, reg_search = false;

  CLI::App* dim = app.add_subcommand("dim", "exact VC_k dimension of a family");
  add_common(dim, dim_args, false);
  dim->add_flag("--as-relation", as_relation,
                "treat the single member as a (k+1)-ary relation");

  CLI::App* sauer = app.add_subcommand("sauer", "trace bound check over m-boxes");
  add_common(sauer, sauer_args, false);
  sauer->add_option("--m", sauer_m, "box side")->required();
  sauer->add_option("--d", sauer_d, "claimed dimension bound (VC_k < d)")->required();

  CLI::App* pack = app.add_subcommand("pack", "greedy packing / fiber cover certificates");
  add_common(pack, pack_args, false);

  CLI::App* learn = app.add_subcommand("learn", "seeded PAC_k learning experiment");
  add_common(learn, learn_args, false);
  learn->add_option("--n1", learn_n1, "cap on packing centers");
  learn->add_option("--rho-hat", learn_rho, "skip rate estimation with this rho");
  learn->add_option("--concepts", learn_concepts, "all|sampled")
      ->check(CLI::IsMember({"all", "sampled"}));

  CLI::App* reg = app.add_subcommand("regularity", "slice-wise dimension and packing checks");
  add_common(reg, reg_args, false);
  reg->add_option("--k", reg_k, "slice arity parameter");
  reg->add_option("--decomposition", reg_dec, "decomposition JSON to verify");
  reg->add_flag("--net", reg_net, "build the last-axis slice net and verify it");
  reg->add_flag("--search", reg_search, "run the slice-wise packing search");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dim->parsed()) return run_dim(dim_args, as_relation);
    if (sauer->parsed()) return run_sauer(sauer_args, sauer_m, sauer_d);
    if (pack->parsed()) return run_pack(pack_args);
    if (learn->parsed()) return run_learn(learn_args, learn_n1, learn_rho, learn_concepts);
    if (reg->parsed()) return run_regularity(reg_args, reg_k, reg_dec, reg_net, reg_search);
  } catch (const vck::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const vck::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
