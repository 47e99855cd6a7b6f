// Command-line front end: order comparisons, moral-hazard solves, theorem
// sweeps, oracle checks, and exact SVG plots. All output is JSON on stdout
// (schemas documented in the README); identical invocations produce
// byte-identical output.
//
// Exit codes: 0 = affirmative answer / report produced, 3 = negative
// verdict, 1 = usage or input error, 2 = internal error.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expord/json_io.hpp"
#include "expord/svg.hpp"

namespace {

using expord::io::Json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 3;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("EXPORD_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

expord::Experiment load_experiment(const std::string& path) {
  return expord::io::parse_experiment(expord::io::load_json(path));
}

expord::Prior load_prior(const std::string& path) {
  return expord::io::parse_prior(expord::io::load_json(path));
}

expord::RatVector parse_csv_rationals(const std::string& text) {
  expord::RatVector out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(expord::parse_rational(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Json g_last_output;

void emit(const Json& j) {
  g_last_output = j;
  std::cout << j.dump(2) << "\n";
}

expord::OrderKind parse_order(const std::string& name) {
  if (name == "col") return expord::OrderKind::Col;
  if (name == "cone") return expord::OrderKind::Cone;
  if (name == "zon") return expord::OrderKind::Zon;
  if (name == "blackwell") return expord::OrderKind::Blackwell;
  throw CLI::ValidationError("order must be col|cone|zon|blackwell|all");
}

// ---- subcommand implementations -----------------------------------------

int run_validate(const std::string& file) {
  try {
    const expord::Experiment e = load_experiment(file);
    Json j;
    j["valid"] = true;
    j["experiment"] = expord::io::to_json(e);
    emit(j);
    return kExitYes;
  } catch (const expord::NegativeEntry& err) {
    Json j;
    j["valid"] = false;
    j["error"] = {{"kind", "negative_entry"}, {"row", err.row}, {"col", err.col}};
    emit(j);
    return kExitNo;
  } catch (const expord::RowSumNotOne& err) {
    Json j;
    j["valid"] = false;
    j["error"] = {{"kind", "row_sum_not_one"}, {"row", err.row}, {"sum", err.sum}};
    emit(j);
    return kExitNo;
  }
}

int run_compare(const std::string& order, const std::string& file_a,
                const std::string& file_b) {
  const expord::Experiment a = load_experiment(file_a), b = load_experiment(file_b);
  if (order == "all") {
    const auto summary = expord::relations_summary(a, b);
    Json j;
    j["a"] = file_a;
    j["b"] = file_b;
    j.update(expord::io::to_json(summary));
    emit(j);
    return kExitYes;
  }
  const auto verdict = expord::dominates(parse_order(order), a, b);
  emit(expord::io::to_json(verdict));
  return verdict.dominates ? kExitYes : kExitNo;
}

int run_posteriors(const std::string& file_e, const std::string& file_prior) {
  const auto d = expord::posteriors(load_experiment(file_e), load_prior(file_prior));
  emit(expord::io::to_json(d));
  return kExitYes;
}

int run_mh_solve(const std::string& file_e, const std::string& file_env) {
  const auto e = load_experiment(file_e);
  const auto env = expord::io::parse_environment(expord::io::load_json(file_env));
  emit(expord::io::to_json(expord::mh::solve(e, env)));
  return kExitYes;  // an infeasible solve is a valid answer (cost "inf")
}

int run_mh_implementable(const std::string& file_e, const std::string& file_env,
                         bool keep_pc) {
  const auto e = load_experiment(file_e);
  const auto env = expord::io::parse_environment(expord::io::load_json(file_env));
  const bool ok = expord::mh::implementable(e, env, keep_pc);
  Json j;
  j["implementable"] = ok;
  emit(j);
  return ok ? kExitYes : kExitNo;
}

int run_mh_counterexample(const std::string& order, const std::string& file_a,
                          const std::string& file_b, const std::string& out_path) {
  const auto a = load_experiment(file_a), b = load_experiment(file_b);
  const auto kind = parse_order(order);
  const auto ce = expord::mh::construct_counterexample(kind, a, b);
  const Json j = expord::io::to_json(ce, file_a, file_b);
  expord::io::save_text(out_path, expord::io::to_json(ce.env).dump(2) + "\n");
  Json full;
  full["order"] = order;
  full.update(j);
  full["environment_file"] = out_path;
  emit(full);
  return kExitYes;
}

// Randomized cost-comparison sweep behind one theorem. Dominance holding
// means the sweep must find zero violations; a failed order instead yields
// the constructed counterexample.
int run_sweep(int theorem, const std::string& file_a, const std::string& file_b,
              std::size_t trials, std::uint64_t seed) {
  const auto a = load_experiment(file_a), b = load_experiment(file_b);
  const std::size_t n = a.states();
  using expord::mh::Constraints;
  const expord::OrderKind kind = theorem == 1   ? expord::OrderKind::Col
                                 : theorem == 2 ? expord::OrderKind::Cone
                                                : expord::OrderKind::Zon;
  const auto verdict = expord::dominates(kind, a, b);

  Json report;
  report["theorem"] = theorem;
  report["a"] = file_a;
  report["b"] = file_b;
  report["digest_a"] = expord::io::file_digest(file_a);
  report["digest_b"] = expord::io::file_digest(file_b);
  report["order"] = expord::order_name(kind);
  report["dominates"] = verdict.dominates;
  report["trials"] = trials;
  report["seed"] = seed;

  if (!verdict.dominates) {
    const auto ce = expord::mh::construct_counterexample(kind, a, b);
    report["counterexample"] = expord::io::to_json(ce, file_a, file_b);
    emit(report);
    return kExitYes;
  }

  Json violations = Json::array();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    expord::Rng rng = expord::Rng::derive(seed, trial);
    expord::mh::Environment env;
    env.mu0.mu = rng.coin() ? expord::gen::random_interior_prior(rng, n)
                            : expord::gen::random_prior(rng, n);
    env.cost.gradient = expord::gen::random_vector(rng, n, 4, 3);
    env.cost.cost_level = rng.nonneg_rational(2, 3);
    env.outside_option = 0;
    env.utility = expord::mh::UtilitySpec::rn();
    const expord::Rational budget = expord::rat(rng.int_in(1, 4), rng.int_in(1, 2));
    switch (theorem) {
      case 1: env.constraints = Constraints::none(); break;
      case 2: env.constraints = rng.coin() ? Constraints::ll() : Constraints::b_only(budget); break;
      default: env.constraints = Constraints::ll_b(budget); break;
    }
    const auto sa = expord::mh::solve(a, env);
    const auto sb = expord::mh::solve(b, env);
    const bool violated = sb.optimal && (!sa.optimal || sa.cost > sb.cost);
    if (violated) {
      Json v;
      v["trial"] = trial;
      v["environment"] = expord::io::to_json(env);
      v["cost_a"] = sa.optimal ? expord::render(sa.cost) : "inf";
      v["cost_b"] = sb.optimal ? expord::render(sb.cost) : "inf";
      violations.push_back(std::move(v));
    }
  }
  report["violations"] = std::move(violations);
  emit(report);
  return kExitYes;
}

int run_oracle_facets(const std::string& file_e, const std::string& point_csv) {
  const auto e = load_experiment(file_e);
  const bool member = expord::oracle::zon_membership_by_facets(e, parse_csv_rationals(point_csv));
  Json j;
  j["member"] = member;
  emit(j);
  return member ? kExitYes : kExitNo;
}

int run_oracle_bestresponse(const std::string& file_e, const std::string& contract_csv,
                            const std::string& center_csv, const std::string& scale,
                            std::size_t k, const std::string& utility_file) {
  const auto e = load_experiment(file_e);
  expord::oracle::QuadraticCost cost;
  cost.center = expord::validate_prior(parse_csv_rationals(center_csv));
  cost.scale = expord::parse_rational(scale);
  auto u = expord::mh::UtilitySpec::rn();
  if (!utility_file.empty())
    u = expord::io::parse_utility(expord::io::load_json(utility_file));
  const auto grid = expord::oracle::SimplexGrid::make(k, e.states());
  const auto arg = expord::oracle::grid_best_response(e, parse_csv_rationals(contract_csv), u,
                                                      cost, grid);
  Json j;
  j["argmax"] = expord::io::rat_array(arg);
  j["grid_resolution"] = k;
  emit(j);
  return kExitYes;
}

int run_oracle_lcx(const std::string& file_a, const std::string& file_b,
                   const std::string& prior_file, std::size_t trials, std::uint64_t seed,
                   bool inject_witness) {
  const auto a = load_experiment(file_a), b = load_experiment(file_b);
  const auto mu0 = load_prior(prior_file);
  std::vector<expord::RatVector> extra;
  if (inject_witness) {
    const auto verdict = expord::zon_dominates(a, b);
    if (!verdict.dominates) {
      const auto& w = std::get<expord::Witness>(verdict.certificate);
      extra.push_back(w.beta);
      expord::RatVector weighted(w.beta.size());
      for (std::size_t i = 0; i < w.beta.size(); ++i) weighted[i] = w.beta[i] / mu0.mu[i];
      extra.push_back(std::move(weighted));
    }
  }
  const bool ok = expord::oracle::mc_lcx_check(a, b, mu0, trials, seed, extra);
  Json j;
  j["consistent_with_lcx"] = ok;
  j["trials"] = trials;
  j["seed"] = seed;
  emit(j);
  return ok ? kExitYes : kExitNo;
}

int run_oracle_lagrangian(const std::string& file_a, const std::string& file_b,
                          const std::string& beta_csv, const std::string& prior_file,
                          const std::string& utility_file) {
  const auto a = load_experiment(file_a), b = load_experiment(file_b);
  auto u = expord::mh::UtilitySpec::rn();
  if (!utility_file.empty())
    u = expord::io::parse_utility(expord::io::load_json(utility_file));
  const auto [left, right] = expord::oracle::lagrangian_gap(
      a, b, parse_csv_rationals(beta_csv), load_prior(prior_file), u);
  auto side = [](const expord::oracle::LagrangianValue& v) {
    Json j;
    j["finite"] = v.finite;
    j["value"] = v.finite ? expord::render(v.value) : "inf";
    j["unbounded_columns"] = v.unbounded_columns;
    return j;
  };
  Json j;
  j["left"] = side(left);
  j["right"] = side(right);
  emit(j);
  return kExitYes;
}

int run_plot(const std::string& kind, const std::vector<std::string>& files,
             const std::string& prior_file, const std::string& out_path) {
  std::vector<expord::Experiment> es;
  std::vector<std::string> names;
  for (const auto& f : files) {
    es.push_back(load_experiment(f));
    const std::size_t slash = f.find_last_of('/');
    names.push_back(slash == std::string::npos ? f : f.substr(slash + 1));
  }
  std::string svg;
  if (kind == "zon") {
    svg = expord::svg::render_zon(es, names);
  } else if (kind == "cone") {
    svg = expord::svg::render_cone(es, names);
  } else if (kind == "posteriors") {
    if (prior_file.empty()) throw CLI::ValidationError("posteriors plot needs --prior");
    svg = expord::svg::render_posteriors(es, names, load_prior(prior_file));
  } else {
    throw CLI::ValidationError("plot kind must be cone|zon|posteriors");
  }
  expord::io::save_text(out_path, svg);
  Json j;
  j["written"] = out_path;
  j["bytes"] = svg.size();
  emit(j);
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact comparisons of statistical experiments in moral-hazard problems"};
  app.require_subcommand(1);

  std::string order, file_a, file_b, file_env, prior_file, point_csv, contract_csv;
  std::string center_csv, scale = "1", utility_file, out_path = "env.json", plot_kind;
  std::string report_path;
  std::vector<std::string> plot_files;
  std::size_t trials = 100, grid_k = 100;
  std::uint64_t seed = default_seed();
  bool keep_pc = false, inject_witness = false;
  int theorem = 1;

  app.add_option("--report", report_path,
                 "write a run report (command, input digests, seed, elapsed_ms) to this file");

  auto* validate = app.add_subcommand("validate", "check an experiment file");
  validate->add_option("experiment", file_a)->required();

  auto* compare = app.add_subcommand("compare", "decide one order (or `all`) with certificates");
  compare->add_option("order", order)->required();
  compare->add_option("a", file_a)->required();
  compare->add_option("b", file_b)->required();

  auto* post = app.add_subcommand("posteriors", "Bayes posterior distribution");
  post->add_option("experiment", file_a)->required();
  post->add_option("prior", file_b)->required();

  auto* mh = app.add_subcommand("mh", "moral-hazard contracting problems");
  mh->require_subcommand(1);
  auto* mh_solve = mh->add_subcommand("solve", "minimize the expected payment");
  mh_solve->add_option("experiment", file_a)->required();
  mh_solve->add_option("environment", file_env)->required();
  auto* mh_impl = mh->add_subcommand("implementable", "is the target distribution implementable");
  mh_impl->add_option("experiment", file_a)->required();
  mh_impl->add_option("environment", file_env)->required();
  mh_impl->add_flag("--keep-pc", keep_pc, "retain the participation constraint");
  auto* mh_ce = mh->add_subcommand("counterexample", "strict reversal for a failed order");
  mh_ce->add_option("--order", order)->required()->check(CLI::IsMember({"col", "cone", "zon"}));
  mh_ce->add_option("a", file_a)->required();
  mh_ce->add_option("b", file_b)->required();
  mh_ce->add_option("--out", out_path, "where to write the environment (default env.json)");

  auto* sweep = app.add_subcommand("sweep", "randomized theorem sweep");
  sweep->add_option("theorem", theorem)->required()->check(CLI::Range(1, 3));
  sweep->add_option("a", file_a)->required();
  sweep->add_option("b", file_b)->required();
  sweep->add_option("--trials", trials);
  sweep->add_option("--seed", seed);

  auto* oracle = app.add_subcommand("oracle", "independent brute-force verifiers");
  oracle->require_subcommand(1);
  auto* ofacets = oracle->add_subcommand("facets", "zonotope membership by facet normals");
  ofacets->add_option("experiment", file_a)->required();
  ofacets->add_option("--point", point_csv, "comma-separated rationals")->required();
  auto* obr = oracle->add_subcommand("bestresponse", "agent grid best response");
  obr->add_option("experiment", file_a)->required();
  obr->add_option("--contract", contract_csv)->required();
  obr->add_option("--center", center_csv, "free option of the quadratic cost")->required();
  obr->add_option("--scale", scale);
  obr->add_option("--k", grid_k, "grid resolution");
  obr->add_option("--utility", utility_file, "utility JSON (default risk neutral)");
  auto* olcx = oracle->add_subcommand("lcx", "Monte Carlo linear-convex-order sampler");
  olcx->add_option("a", file_a)->required();
  olcx->add_option("b", file_b)->required();
  olcx->add_option("--prior", prior_file)->required();
  olcx->add_option("--trials", trials);
  olcx->add_option("--seed", seed);
  olcx->add_flag("--inject-witness", inject_witness,
                 "add the zonotope witness direction to the trial set");
  auto* olag = oracle->add_subcommand("lagrangian", "both sides of the Lagrangian bound");
  olag->add_option("a", file_a)->required();
  olag->add_option("b", file_b)->required();
  olag->add_option("--beta", point_csv)->required();
  olag->add_option("--prior", prior_file)->required();
  olag->add_option("--utility", utility_file);

  auto* plot = app.add_subcommand("plot", "exact SVG rendering of the N = 2 geometry");
  plot->add_option("kind", plot_kind)->required();
  plot->add_option("files", plot_files)->required()->expected(1, 4);
  plot->add_option("--prior", prior_file);
  plot->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitYes;
  }

  try {
    const auto started = std::chrono::steady_clock::now();
    int code = kExitUsage;
    if (*validate) code = run_validate(file_a);
    else if (*compare) code = run_compare(order, file_a, file_b);
    else if (*post) code = run_posteriors(file_a, file_b);
    else if (*mh_solve) code = run_mh_solve(file_a, file_env);
    else if (*mh_impl) code = run_mh_implementable(file_a, file_env, keep_pc);
    else if (*mh_ce) code = run_mh_counterexample(order, file_a, file_b, out_path);
    else if (*sweep) code = run_sweep(theorem, file_a, file_b, trials, seed);
    else if (*ofacets) code = run_oracle_facets(file_a, point_csv);
    else if (*obr)
      code = run_oracle_bestresponse(file_a, contract_csv, center_csv, scale, grid_k,
                                     utility_file);
    else if (*olcx)
      code = run_oracle_lcx(file_a, file_b, prior_file, trials, seed, inject_witness);
    else if (*olag)
      code = run_oracle_lagrangian(file_a, file_b, point_csv, prior_file, utility_file);
    else if (*plot) code = run_plot(plot_kind, plot_files, prior_file, out_path);
    else {
      std::cerr << "no subcommand\n";
      return kExitUsage;
    }
    if (!report_path.empty()) {
      // Timing lives only in the report file; stdout stays byte-identical
      // across identical invocations.
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - started)
                               .count();
      Json report;
      std::string command;
      for (int i = 0; i < argc; ++i) {
        if (i) command += " ";
        command += argv[i];
      }
      report["command"] = command;
      report["inputs"] = Json::object();
      for (const std::string& f : {file_a, file_b, file_env, prior_file})
        if (!f.empty()) report["inputs"][f] = expord::io::file_digest(f);
      report["seed"] = seed;
      report["elapsed_ms"] = elapsed;
      report["exit_code"] = code;
      report["output"] = g_last_output;
      expord::io::save_text(report_path, report.dump(2) + "\n");
    }
    return code;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const expord::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
