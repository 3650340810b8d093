#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modlie/report.hpp"
#include "modlie/verify.hpp"

namespace {

using namespace modlie;

Fq make_field(std::uint32_t p, std::uint32_t ext) {
  return ext <= 1 ? Fq::prime(p) : Fq::ext(p, ext);
}

/// MODLIE_DATA points at a JSON array of {"p", "k", "coeffs"} rows; each row
/// replaces the built-in modulus for F_{p^k}.
void apply_modulus_table(const char* path) {
  std::ifstream in(path);
  check(in.good(), "SpecMismatch", std::string("cannot read modulus table ") + path);
  json table = json::parse(in);
  for (const auto& row : table)
    Fq::set_modulus_override(row.at("p").get<std::uint32_t>(), row.at("k").get<std::uint32_t>(),
                             row.at("coeffs").get<std::vector<std::uint32_t>>());
}

/// Sparse vector syntax: "idx:coeff,idx:coeff" with integer coefficients.
Vec parse_sparse_vec(const Fq& F, int dim, const std::string& s) {
  Vec v = vec_zero(dim);
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t colon = s.find(':', pos);
    check(colon != std::string::npos, "SpecMismatch", "expected idx:coeff in " + s);
    std::size_t comma = s.find(',', colon);
    if (comma == std::string::npos) comma = s.size();
    int idx = std::stoi(s.substr(pos, colon - pos));
    long long c = std::stoll(s.substr(colon + 1, comma - colon - 1));
    check(idx >= 0 && idx < dim, "SpecMismatch", "coordinate index out of range in " + s);
    v[static_cast<std::size_t>(idx)] = F.from_int(c);
    pos = comma + 1;
  }
  return v;
}

void print_assertions(const json& rep) {
  for (const auto& a : rep.at("assertions")) {
    std::cout << "assert " << a.at("name").get<std::string>() << ": "
              << (a.at("pass").get<bool>() ? "pass" : "FAIL");
    std::string detail = a.at("detail").get<std::string>();
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
  }
}

int emit_report(json& rep, const std::string& out) {
  finalize_report(rep);
  print_assertions(rep);
  std::cout << "report hash " << rep.at("meta").at("hash").get<std::string>() << "\n";
  if (!out.empty()) {
    append_report(out, rep);
    std::cout << "appended to " << out << "\n";
  }
  return report_all_pass(rep) ? 0 : 1;
}

struct GenConfig {
  std::string algebra;
  std::uint32_t p = 5;
  std::uint32_t ext = 1;
  std::string experiment;
  long long trials = 500;
  std::uint64_t seed = 0;
  std::string out;
  long long budget_pairs = 100000000;
  int cap_dim = 250;
  std::string x_spec;
};

void run_census(const GenConfig& cfg, const Fq& F, json& rep) {
  LieAlgebra L = algebra_by_name(F, cfg.algebra, cfg.cap_dim);
  long double pairs = 1;
  for (int i = 0; i < 2 * L.dim(); ++i) pairs *= static_cast<long double>(F.q());
  SamplingPlan plan = pairs <= static_cast<long double>(cfg.budget_pairs)
                          ? SamplingPlan::all()
                          : SamplingPlan::sample(cfg.seed, cfg.trials);
  StrataCensus c = strata_census(L, plan, static_cast<double>(cfg.budget_pairs));
  rep["parameters"]["plan"] = c.plan;
  rep["histograms"]["closure_dim"] = census_to_json(c).at("histogram");
  report_add_assertion(rep, "counts-sum", true, std::to_string(c.total) + " pairs");
  int top = c.histogram.empty() ? 0 : c.histogram.rbegin()->first;
  report_add_assertion(rep, "strata-within-dimension", top <= L.dim(),
                       "largest stratum " + std::to_string(top));
}

void run_recipe(const GenConfig& cfg, const Fq& F, json& rep) {
  WittAlgebra W = witt_by_name(F, cfg.algebra, cfg.cap_dim);
  GradedRecipe r = graded_recipe_pair(W, cfg.seed);
  rep["certificates"].push_back(certificate_to_json(r.cert));
  report_add_assertion(rep, "closure-full", r.cert.closure_dim == W.L.dim(),
                       "dim " + std::to_string(r.cert.closure_dim));
  report_add_assertion(rep, "replay", replay(W.L, r.cert));
}

void run_theoremB(const GenConfig& cfg, const Fq& F, json& rep) {
  ClassicalAlgebra g = classical_by_name(F, cfg.algebra);
  Rng base(cfg.seed);
  long long ok = 0;
  std::uint32_t worst_k = F.k();
  std::map<std::uint32_t, long long> ext_hist;
  for (long long t = 0; t < cfg.trials; ++t) {
    Rng rng = base.fork(static_cast<std::uint64_t>(t));
    Vec x = random_nonzero_vec(F, g.L.dim(), rng);
    GenerationCertificate c = theoremB_partner(g, x, rng);
    std::uint32_t kk = c.algebra.L.field().k();
    ++ext_hist[kk];
    worst_k = std::max(worst_k, kk);
    ++ok;
    if (rep["certificates"].size() < 10)
      rep["certificates"].push_back(certificate_to_json(
          PairCertificate{g.L.name(), F.p(), kk, c.x, c.y, g.L.dim(), "theoremB", cfg.seed}));
  }
  json h = json::object();
  for (const auto& [kk, n] : ext_hist) h[std::to_string(kk)] = n;
  rep["histograms"]["extension_degree"] = h;
  report_add_assertion(rep, "all-certified", ok == cfg.trials,
                       std::to_string(ok) + "/" + std::to_string(cfg.trials));
  report_add_assertion(rep, "extension-at-most-quadratic", worst_k <= 2 * F.k(),
                       "max degree " + std::to_string(worst_k));
}

void run_zassenhaus_sweep(const GenConfig& cfg, const Fq& F, json& rep) {
  WittAlgebra Z = witt_by_name(F, cfg.algebra, cfg.cap_dim);
  check(Z.m == 1, "SpecMismatch", "the sweep needs W(1, n)");
  const int d = Z.L.dim();
  long double full = 1;
  for (int i = 0; i < d; ++i) full *= static_cast<long double>(F.p());
  bool exhaustive = full - 1 <= static_cast<long double>(cfg.trials);
  rep["parameters"]["plan"] = exhaustive ? "exhaustive over prime-field coordinates"
                                         : "random prime-field coordinates";
  long long fails = 0, total = 0;
  int worst = 1;
  std::map<int, long long> ext_hist;
  auto probe = [&](const Vec& x) {
    ZassenhausPartner zp = zassenhaus_partner(Z, x);
    ++ext_hist[zp.ext_mult];
    worst = std::max(worst, zp.ext_mult);
    if (zp.cert.closure_dim != d) ++fails;
    if (rep["certificates"].size() < 5) rep["certificates"].push_back(certificate_to_json(zp.cert));
    ++total;
  };
  if (exhaustive) {
    for (std::uint64_t c = 1; c < static_cast<std::uint64_t>(full); ++c) {
      Vec x = vec_zero(d);
      std::uint64_t v = c;
      for (int i = 0; i < d; ++i) {
        x[static_cast<std::size_t>(i)] = F.from_int(static_cast<std::int64_t>(v % F.p()));
        v /= F.p();
      }
      probe(x);
    }
  } else {
    Rng base(cfg.seed);
    for (long long t = 0; t < cfg.trials; ++t) {
      Rng rng = base.fork(static_cast<std::uint64_t>(t));
      Vec x = vec_zero(d);
      bool nz = false;
      while (!nz) {
        for (int i = 0; i < d; ++i) {
          x[static_cast<std::size_t>(i)] =
              F.from_int(static_cast<std::int64_t>(rng.uniform(F.p())));
          nz = nz || !x[static_cast<std::size_t>(i)].is_zero();
        }
      }
      probe(x);
    }
  }
  json h = json::object();
  for (const auto& [m, n] : ext_hist) h[std::to_string(m)] = n;
  rep["histograms"]["extension_multiplier"] = h;
  report_add_assertion(rep, "partner-for-every-x", fails == 0,
                       std::to_string(total - fails) + "/" + std::to_string(total));
  report_add_assertion(rep, "extension-multiplier-bound", worst <= 2,
                       "max multiplier " + std::to_string(worst));
}

void run_obstruction(const GenConfig& cfg, const Fq& F, json& rep) {
  WittAlgebra W = witt_by_name(F, cfg.algebra, cfg.cap_dim);
  std::vector<std::pair<std::string, Vec>> tops;
  if (!cfg.x_spec.empty()) {
    tops.emplace_back(cfg.x_spec, parse_sparse_vec(F, W.L.dim(), cfg.x_spec));
  } else {
    for (int i = 0; i < W.L.dim(); ++i)
      if (W.L.degrees()[static_cast<std::size_t>(i)] == W.s)
        tops.emplace_back(W.L.labels()[static_cast<std::size_t>(i)], unit_vec(W.L.dim(), i));
  }
  std::map<int, long long> derived_hist, k_hist;
  for (const auto& [label, x] : tops) {
    ObstructionReport r = obstruction_report(W, x, static_cast<int>(cfg.trials), cfg.seed);
    for (const ObstructionSample& smp : r.samples) {
      ++derived_hist[smp.derived_dim];
      ++k_hist[smp.k];
    }
    report_add_assertion(rep, "bounded:" + label, r.all_bounded,
                         "p^|n| = " + std::to_string(r.bound));
    report_add_assertion(rep, "no-generation:" + label, r.none_generates,
                         "dim W = " + std::to_string(r.dim_w));
    report_add_assertion(rep, "envelope:" + label, r.envelopes_hold);
  }
  json dh = json::object(), kh = json::object();
  for (const auto& [v, n] : derived_hist) dh[std::to_string(v)] = n;
  for (const auto& [v, n] : k_hist) kh[std::to_string(v)] = n;
  rep["histograms"]["derived_dim"] = dh;
  rep["histograms"]["k_invariant"] = kh;
}

void run_search(const GenConfig& cfg, const Fq& F, json& rep) {
  LieAlgebra L = algebra_by_name(F, cfg.algebra, cfg.cap_dim);
  Rng rng(cfg.seed);
  Vec x = cfg.x_spec.empty() ? random_nonzero_vec(F, L.dim(), rng)
                             : parse_sparse_vec(F, L.dim(), cfg.x_spec);
  SearchOptions opt;
  opt.seed = cfg.seed;
  opt.budget = cfg.trials;
  SearchOutcome out;
  if (cfg.algebra.rfind("W:", 0) == 0 || cfg.algebra.rfind("Zass:", 0) == 0) {
    WittAlgebra W = witt_by_name(F, cfg.algebra, cfg.cap_dim);
    out = one_and_half_search(W, x, Strategy::random, opt);
  } else {
    out = one_and_half_search(classical_by_name(F, cfg.algebra), x, Strategy::random, opt);
  }
  rep["parameters"]["searched"] = out.searched;
  rep["parameters"]["tested"] = out.tested;
  if (out.cert) {
    rep["certificates"].push_back(certificate_to_json(*out.cert));
    Fq K = out.cert->field_k == F.k() ? F : Fq::ext(F.p(), out.cert->field_k);
    report_add_assertion(rep, "replay", replay(algebra_by_name(K, cfg.algebra, cfg.cap_dim), *out.cert));
    report_add_assertion(rep, "found", true, "after " + std::to_string(out.tested) + " samples");
  } else {
    report_add_assertion(rep, "found", false, "searched: " + out.searched);
  }
}

int cmd_gen(const GenConfig& cfg) {
  Fq F = make_field(cfg.p, cfg.ext);
  json rep = make_report(cfg.algebra, F, cfg.experiment,
                         json{{"trials", cfg.trials},
                              {"seed", cfg.seed},
                              {"budget_pairs", cfg.budget_pairs},
                              {"cap_dim", cfg.cap_dim},
                              {"x", cfg.x_spec}});
  try {
    if (cfg.experiment == "census")
      run_census(cfg, F, rep);
    else if (cfg.experiment == "recipe")
      run_recipe(cfg, F, rep);
    else if (cfg.experiment == "theoremB")
      run_theoremB(cfg, F, rep);
    else if (cfg.experiment == "zassenhaus-sweep")
      run_zassenhaus_sweep(cfg, F, rep);
    else if (cfg.experiment == "obstruction")
      run_obstruction(cfg, F, rep);
    else if (cfg.experiment == "search")
      run_search(cfg, F, rep);
    else
      fail("SpecMismatch", "unknown experiment " + cfg.experiment);
  } catch (const Error& e) {
    // budget and step failures are results, not configuration mistakes
    if (e.code() == "BudgetExceeded" || e.code() == "RecipeStepFailed" ||
        e.code() == "NoAlphaInSearchedExtensions" || e.code() == "SearchBudgetExhausted") {
      report_add_assertion(rep, e.code(), false, e.what());
    } else {
      throw;
    }
  }
  return emit_report(rep, cfg.out);
}

int cmd_build(const std::string& desc, std::uint32_t p, std::uint32_t ext, int cap,
              std::string out) {
  Fq F = make_field(p, ext);
  LieAlgebra L = algebra_by_name(F, desc, cap);
  if (auto issue = L.validate()) {
    std::cerr << "validation failed: " << issue->kind << " at (" << issue->i << ", " << issue->j
              << ", " << issue->k << ")\n";
    return 1;
  }
  if (out.empty()) out = "algebra.json";
  std::ofstream f(out, std::ios::trunc);
  check(f.good(), "SpecMismatch", "cannot write " + out);
  f << algebra_to_json(L).dump(2) << "\n";
  std::cout << L.name() << " dim=" << L.dim() << " over " << F.describe() << " -> " << out
            << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& algebra, std::uint32_t p,
               std::uint32_t ext, int cap, const std::string& only, std::uint64_t seed,
               const std::string& out) {
  Fq F = make_field(p, ext);
  std::vector<CheckResult> results;
  if (suite == "axioms" || suite == "all") {
    std::vector<std::string> roster =
        algebra.empty() ? default_axiom_roster() : std::vector<std::string>{algebra};
    for (const std::string& name : roster)
      results.push_back(check_axioms(algebra_by_name(F, name, cap), seed));
  }
  if (suite == "lemmas" || suite == "all") {
    std::vector<CheckResult> named = run_named_checks(F, seed, only);
    results.insert(results.end(), named.begin(), named.end());
  }
  check(!results.empty(), "SpecMismatch", "unknown suite " + suite);
  json rep = make_report(algebra.empty() ? "roster" : algebra, F, "verify-" + suite,
                         json{{"seed", seed}, {"check", only}});
  for (const CheckResult& r : results) report_add_assertion(rep, r.name, r.pass, r.detail);
  return emit_report(rep, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact generation experiments for simple Lie algebras over finite fields"};
  app.require_subcommand(1);

  std::string build_desc, build_out;
  std::uint32_t build_p = 5, build_ext = 1;
  int build_cap = 250;
  CLI::App* b = app.add_subcommand("build", "construct, validate, and serialize an algebra");
  b->add_option("descriptor", build_desc, "A1..D9, G2, sl:n, psl:n, gl:n, pgl:n, W:m:n1,..., Zass:n")
      ->required();
  b->add_option("--p", build_p, "field characteristic (prime > 3)");
  b->add_option("--ext", build_ext, "extension degree k for F_{p^k}");
  b->add_option("--cap-dim", build_cap, "refuse algebras above this dimension");
  b->add_option("--out", build_out, "output path (default algebra.json)");

  std::string ver_suite, ver_algebra, ver_check, ver_out;
  std::uint32_t ver_p = 5, ver_ext = 1;
  int ver_cap = 250;
  std::uint64_t ver_seed = 0;
  CLI::App* v = app.add_subcommand("verify", "run assertion suites");
  v->add_option("suite", ver_suite, "axioms | lemmas | all")->required();
  v->add_option("--algebra", ver_algebra, "restrict the axiom roster to one descriptor");
  v->add_option("--p", ver_p, "field characteristic");
  v->add_option("--ext", ver_ext, "extension degree");
  v->add_option("--cap-dim", ver_cap, "construction cap");
  v->add_option("--check", ver_check, "run a single named lemma check");
  v->add_option("--seed", ver_seed, "seed for randomized checks");
  v->add_option("--out", ver_out, "append the JSON report here");

  GenConfig cfg;
  CLI::App* g = app.add_subcommand("gen", "run a generation experiment and emit a report");
  g->add_option("--algebra", cfg.algebra, "algebra descriptor")->required();
  g->add_option("--p", cfg.p, "field characteristic");
  g->add_option("--ext", cfg.ext, "extension degree");
  g->add_option("--experiment", cfg.experiment,
                "census | recipe | theoremB | zassenhaus-sweep | obstruction | search")
      ->required();
  g->add_option("--trials", cfg.trials, "sample count / per-level budget");
  g->add_option("--seed", cfg.seed, "random seed");
  g->add_option("--out", cfg.out, "append the JSON report here");
  g->add_option("--budget-pairs", cfg.budget_pairs, "max pairs for exhaustive censuses");
  g->add_option("--cap-dim", cfg.cap_dim, "construction cap");
  g->add_option("--x", cfg.x_spec, "fixed x as idx:coeff[,idx:coeff...]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (const char* data = std::getenv("MODLIE_DATA")) apply_modulus_table(data);
    if (app.got_subcommand(b)) return cmd_build(build_desc, build_p, build_ext, build_cap, build_out);
    if (app.got_subcommand(v))
      return cmd_verify(ver_suite, ver_algebra, ver_p, ver_ext, ver_cap, ver_check, ver_seed,
                        ver_out);
    return cmd_gen(cfg);
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error " << e.what() << "\n";
    return 2;
  }
}
