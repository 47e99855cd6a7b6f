// Acceptance suite: one pass/fail line per criterion; the exit code is the
// number of failed criteria. Arguments: <cli binary> <data dir> <golden dir>.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "expord/json_io.hpp"
#include "expord/svg.hpp"

using namespace expord;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli, g_data, g_golden;
int g_failures = 0;

struct Check {
  std::string name;
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

void run_criterion(int number, const std::string& name,
                   const std::function<void(Check&)>& body,
                   double time_limit_seconds = 0) {
  Check check{name};
  const auto start = Clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  if (time_limit_seconds > 0 && elapsed > time_limit_seconds)
    check.require(false, "time limit exceeded");
  std::printf("%s  %2d  %-58s (%.2f s)\n", check.ok ? "PASS" : "FAIL", number,
              name.c_str(), elapsed);
  if (!check.ok) {
    ++g_failures;
    for (const auto& n : check.notes) std::printf("         - %s\n", n.c_str());
  }
}

Experiment make(std::initializer_list<std::initializer_list<Rational>> rows) {
  return validate_experiment(RatMatrix(rows));
}

Experiment example_e1() {
  return make({{rat(3, 5), rat(2, 5)}, {rat(2, 5), rat(3, 5)}});
}
Experiment example_e2() {
  return make({{rat(1, 2), rat(2, 5), rat(1, 10)}, {rat(1, 10), rat(2, 5), rat(1, 2)}});
}
Experiment example_e3() {
  return make({{rat(1, 2), rat(3, 10), rat(1, 10), rat(1, 10)},
               {rat(1, 10), rat(1, 10), rat(3, 10), rat(1, 2)}});
}

// ---- seeded generators ---------------------------------------------------

Experiment random_experiment(Rng& rng, std::size_t n, std::size_t m) {
  return validate_experiment(gen::random_stochastic(rng, n, m));
}

/// A pair where the requested order is guaranteed or likely to hold:
/// garbling, column split, or column permutation of the first experiment.
std::pair<Experiment, Experiment> related_pair(Rng& rng, std::size_t n, std::size_t m_a,
                                               std::size_t m_b) {
  Experiment a = random_experiment(rng, n, m_a);
  if (rng.below(4) == 0 && m_a >= 2) {  // split first column
    RatMatrix s(n, m_a + 1);
    const Rational alpha = rat(rng.int_in(1, 3), 4);
    for (std::size_t i = 0; i < n; ++i) {
      s(i, 0) = a.matrix(i, 0) * alpha;
      s(i, 1) = a.matrix(i, 0) * (1 - alpha);
      for (std::size_t j = 1; j < m_a; ++j) s(i, j + 1) = a.matrix(i, j);
    }
    return {a, validate_experiment(s)};
  }
  const RatMatrix g = gen::random_stochastic(rng, m_a, m_b);
  return {a, validate_experiment(a.matrix * g)};
}

std::pair<Experiment, Experiment> mixed_pair(Rng& rng, std::size_t n, std::size_t m_a,
                                             std::size_t m_b) {
  if (rng.coin()) return related_pair(rng, n, m_a, m_b);
  return {random_experiment(rng, n, m_a), random_experiment(rng, n, m_b)};
}

mh::Environment random_rn_env(Rng& rng, std::size_t n, mh::Constraints cls) {
  mh::Environment env;
  env.mu0.mu = rng.below(4) == 0 ? gen::random_prior(rng, n)
                                 : gen::random_interior_prior(rng, n);
  env.cost.gradient = gen::random_vector(rng, n, 4, 3);
  env.cost.cost_level = rng.nonneg_rational(2, 3);
  env.outside_option = rng.nonneg_rational(1, 2);
  env.utility = mh::UtilitySpec::rn();
  env.constraints = std::move(cls);
  return env;
}

mh::UtilitySpec random_plc(Rng& rng) {
  const long segments = rng.int_in(1, 3);
  const long den = rng.int_in(1, 2);
  std::vector<std::pair<Rational, Rational>> bps{{rat(0), rat(0)}};
  Rational t = 0, u = 0;
  long slope_num = rng.int_in(segments + 1, segments + 4);
  for (long k = 0; k < segments; ++k) {
    const Rational dt = rat(rng.int_in(1, 3));
    t += dt;
    u += rat(slope_num, den) * dt;
    bps.emplace_back(t, u);
    if (slope_num > 1) slope_num = rng.int_in(1, slope_num - 1);
  }
  return mh::UtilitySpec::plc(std::move(bps));
}

/// Comparison with the infinity convention: cost(a) <= cost(b).
bool cost_leq(const mh::MhSolution& a, const mh::MhSolution& b) {
  if (!b.optimal) return true;        // anything <= infinity
  if (!a.optimal) return false;       // infinity <= finite fails
  return a.cost <= b.cost;
}

std::string run_cli(const std::string& args, int* exit_code) {
  const std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t got;
  while (pipe && (got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pipe ? pclose(pipe) : -1;
  if (exit_code) *exit_code = WEXITSTATUS(status);
  return out;
}

// ---- criteria ------------------------------------------------------------

void criterion1(Check& c) {
  const auto e1 = example_e1(), e2 = example_e2(), e3 = example_e3();
  c.require(col_dominates(e1, e2).dominates, "Col(E1,E2)");
  c.require(col_dominates(e2, e1).dominates, "Col(E2,E1)");
  c.require(col_dominates(e2, e3).dominates, "Col(E2,E3)");
  c.require(col_dominates(e3, e2).dominates, "Col(E3,E2)");

  const auto cone12 = cone_dominates(e1, e2);
  c.require(!cone12.dominates, "Cone(E1,E2) must fail");
  if (!cone12.dominates) {
    const auto& w = std::get<Witness>(cone12.certificate);
    const RatVector be = vec_times(w.beta, e1.matrix);
    bool sep = dot(w.beta, w.point) > 0;
    for (const auto& v : be) sep = sep && v <= 0;
    c.require(sep, "Cone witness must separate exactly");
  }
  c.require(cone_dominates(e2, e3).dominates, "Cone(E2,E3)");
  c.require(cone_dominates(e3, e2).dominates, "Cone(E3,E2)");

  const auto zon23 = zon_dominates(e2, e3);
  c.require(!zon23.dominates, "Zon(E2,E3) must fail");
  if (!zon23.dominates) {
    const auto& w = std::get<Witness>(zon23.certificate);
    c.require(dot(w.beta, w.point) > support_function(e2, w.beta),
              "Zon witness must violate the support inequality");
    // the witness point is a genuine partial column sum of E3
    bool found = false;
    for (const auto& s : subset_sums(e3.matrix)) found = found || s.point == w.point;
    c.require(found, "Zon witness must be a subset sum of E3 columns");
  }

  // the published factorization E3 = E2 G with 0 <= G <= 1
  const RatMatrix g{{rat(1), rat(1, 2), rat(0), rat(0)},
                    {rat(0), rat(1, 8), rat(1, 8), rat(0)},
                    {rat(0), rat(0), rat(1, 2), rat(1)}};
  c.require(e2.matrix * g == e3.matrix, "E3 = E2 G exact product");
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      c.require(g(i, j) >= 0 && g(i, j) <= 1, "0 <= G <= 1");
}

void criterion2(Check& c) {
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng = Rng::derive(1001, trial);
    const std::size_t n = 2 + rng.below(3);
    auto [a, b] = mixed_pair(rng, n, 2 + rng.below(5), 2 + rng.below(5));
    const bool bw = blackwell_dominates(a, b).dominates;
    const bool zon = zon_dominates(a, b).dominates;
    const bool cone = cone_dominates(a, b).dominates;
    const bool col = col_dominates(a, b).dominates;
    if ((bw && !zon) || (zon && !cone) || (cone && !col)) ++violations;
  }
  c.require(violations == 0, "nesting violations: " + std::to_string(violations));
}

void criterion3(Check& c) {
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng = Rng::derive(1002, trial);
    auto [a, b] = mixed_pair(rng, 2, 2 + rng.below(4), 2 + rng.below(4));
    if (zon_dominates(a, b).dominates != blackwell_dominates(a, b).dominates) ++mismatches;
  }
  c.require(mismatches == 0, "zon vs blackwell mismatches: " + std::to_string(mismatches));
}

void criterion4(Check& c) {
  int col_rank_done = 0, mismatches = 0;
  for (std::uint64_t stream = 0; col_rank_done < 100; ++stream) {
    Rng rng = Rng::derive(1003, stream);
    const std::size_t n = 2 + rng.below(3);
    const std::size_t m = 1 + rng.below(n);  // m <= n
    const Experiment a = random_experiment(rng, n, m);
    if (rank(a.matrix) != m) continue;  // need full column rank
    ++col_rank_done;
    const auto b = rng.coin() ? related_pair(rng, n, m, 2 + rng.below(4)).second
                              : random_experiment(rng, n, 2 + rng.below(4));
    if (cone_dominates(a, b).dominates != blackwell_dominates(a, b).dominates) ++mismatches;
  }
  c.require(mismatches == 0,
            "cone vs blackwell under full column rank: " + std::to_string(mismatches));

  int full_rank_done = 0;
  mismatches = 0;
  for (std::uint64_t stream = 0; full_rank_done < 100; ++stream) {
    Rng rng = Rng::derive(1004, stream);
    const std::size_t n = 2 + rng.below(3);
    const std::size_t m = 2 + rng.below(4);
    const Experiment a = random_experiment(rng, n, m);
    if (rank(a.matrix) != std::min(n, m)) continue;
    ++full_rank_done;
    const auto b = rng.coin() ? related_pair(rng, n, m, 2 + rng.below(4)).second
                              : random_experiment(rng, n, 2 + rng.below(4));
    if (zon_dominates(a, b).dominates != blackwell_dominates(a, b).dominates) ++mismatches;
  }
  c.require(mismatches == 0,
            "zon vs blackwell under full rank: " + std::to_string(mismatches));
}

void criterion5(Check& c) {
  // 50 pairs where the column-space order holds: cost comparison and
  // implementability inclusion over 100 unconstrained risk-neutral
  // environments each.
  int pairs_done = 0, violations = 0;
  for (std::uint64_t stream = 0; pairs_done < 50; ++stream) {
    Rng rng = Rng::derive(1005, stream);
    const std::size_t n = 2 + rng.below(3);
    auto [a, b] = related_pair(rng, n, 2 + rng.below(4), 2 + rng.below(4));
    if (!col_dominates(a, b).dominates) continue;
    ++pairs_done;
    for (int env_i = 0; env_i < 100; ++env_i) {
      Rng erng = Rng::derive(2005 + stream, env_i);
      const auto env = random_rn_env(erng, n, mh::Constraints::none());
      if (!cost_leq(mh::solve(a, env), mh::solve(b, env))) ++violations;
      if (mh::implementable(b, env) && !mh::implementable(a, env)) ++violations;
    }
  }
  c.require(violations == 0, "theorem-1 sweep violations: " + std::to_string(violations));

  int fails_done = 0, bad = 0;
  for (std::uint64_t stream = 0; fails_done < 20; ++stream) {
    Rng rng = Rng::derive(1006, stream);
    const std::size_t n = 2 + rng.below(3);
    // duplicated row forces a rank-deficient column space
    RatMatrix low = gen::random_stochastic(rng, n, 2 + rng.below(4));
    for (std::size_t j = 0; j < low.cols(); ++j) low(n - 1, j) = low(0, j);
    const Experiment a = validate_experiment(low);
    const Experiment b = random_experiment(rng, n, 2 + rng.below(4));
    if (col_dominates(a, b).dominates) continue;
    ++fails_done;
    const auto ce = mh::construct_counterexample(OrderKind::Col, a, b);
    if (ce.under_e.optimal) ++bad;        // must be infinite
    if (!ce.under_e2.optimal) ++bad;      // must be finite
  }
  c.require(bad == 0, "theorem-1 counterexamples not strict: " + std::to_string(bad));
}

void criterion6(Check& c) {
  // Positive direction under LL and budget-only.
  int pairs_done = 0, violations = 0;
  for (std::uint64_t stream = 0; pairs_done < 50; ++stream) {
    Rng rng = Rng::derive(1007, stream);
    const std::size_t n = 2 + rng.below(3);
    auto [a, b] = related_pair(rng, n, 2 + rng.below(4), 2 + rng.below(4));
    if (!cone_dominates(a, b).dominates) continue;
    ++pairs_done;
    for (int env_i = 0; env_i < 100; ++env_i) {
      Rng erng = Rng::derive(3007 + stream, env_i);
      const mh::Constraints cls =
          env_i % 2 == 0 ? mh::Constraints::ll()
                         : mh::Constraints::b_only(rat(erng.int_in(1, 4), erng.int_in(1, 2)));
      const auto env = random_rn_env(erng, n, cls);
      if (!cost_leq(mh::solve(a, env), mh::solve(b, env))) ++violations;
    }
  }
  c.require(violations == 0, "theorem-2 sweep violations: " + std::to_string(violations));

  // The worked counterexample must reproduce the exact costs 3/10 and 1.
  const auto ce = mh::construct_counterexample(OrderKind::Cone, example_e1(), example_e2());
  c.require(ce.under_e2.optimal && ce.under_e2.cost == rat(3, 10), "K^LL(E2) = 3/10");
  c.require(ce.under_e.optimal && ce.under_e.cost == rat(1), "K^LL(E1) = 1");
  c.require(ce.env.cost.gradient == RatVector({rat(1, 2), rat(1, 10)}),
            "counterexample gradient is the failing column");

  // Constructed reversals for 20 failing pairs, plus the budget-only
  // reversal built directly from the witness: g = B 1 - x makes the target
  // implementable under b at cost mu0 . g but infeasible under a.
  int fails_done = 0, bad = 0;
  for (std::uint64_t stream = 0; fails_done < 20; ++stream) {
    Rng rng = Rng::derive(1008, stream);
    const std::size_t n = 2 + rng.below(3);
    const Experiment a = random_experiment(rng, n, 2 + rng.below(4));
    const Experiment b = random_experiment(rng, n, 2 + rng.below(4));
    const auto verdict = cone_dominates(a, b);
    if (verdict.dominates) continue;
    ++fails_done;
    const auto rev = mh::construct_counterexample(OrderKind::Cone, a, b);
    const bool strict = rev.under_e2.optimal &&
                        (!rev.under_e.optimal || rev.under_e.cost > rev.under_e2.cost);
    if (!strict) ++bad;

    const RatVector x = std::get<Witness>(verdict.certificate).point;
    mh::Environment env;
    env.mu0.mu.assign(n, make_rational(1, Integer(n)));
    env.cost.gradient.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) env.cost.gradient[i] = 1 - x[i];
    env.cost.cost_level = dot(env.mu0.mu, env.cost.gradient);
    env.outside_option = 0;
    env.utility = mh::UtilitySpec::rn();
    env.constraints = mh::Constraints::b_only(1);
    const auto sa = mh::solve(a, env), sb = mh::solve(b, env);
    if (!sb.optimal || sa.optimal) ++bad;  // K^B(a) = inf > K^B(b) finite
  }
  c.require(bad == 0, "theorem-2 reversals not strict: " + std::to_string(bad));
}

void criterion7(Check& c) {
  // (4): risk-neutral LL+B sweep over zonotope-dominant pairs.
  int pairs_done = 0, violations = 0;
  std::vector<std::pair<Experiment, Experiment>> dominant;
  for (std::uint64_t stream = 0; pairs_done < 50; ++stream) {
    Rng rng = Rng::derive(1009, stream);
    const std::size_t n = 2 + rng.below(3);
    auto [a, b] = related_pair(rng, n, 2 + rng.below(4), 2 + rng.below(4));
    if (!zon_dominates(a, b).dominates) continue;
    ++pairs_done;
    if (dominant.size() < 20) dominant.emplace_back(a, b);
    for (int env_i = 0; env_i < 100; ++env_i) {
      Rng erng = Rng::derive(4009 + stream, env_i);
      const auto env = random_rn_env(
          erng, n, mh::Constraints::ll_b(rat(erng.int_in(1, 4), erng.int_in(1, 2))));
      if (!cost_leq(mh::solve(a, env), mh::solve(b, env))) ++violations;
    }
  }
  c.require(violations == 0, "theorem-3 (4) sweep violations: " + std::to_string(violations));

  // (5)/(5'): 20 random piecewise-linear concave utilities under LL and
  // LL+B on the zonotope-dominant pairs.
  violations = 0;
  for (std::size_t pair_i = 0; pair_i < dominant.size(); ++pair_i) {
    const auto& [a, b] = dominant[pair_i];
    const std::size_t n = a.states();
    for (int u_i = 0; u_i < 20; ++u_i) {
      Rng urng = Rng::derive(5009 + pair_i, u_i);
      const auto u = random_plc(urng);
      for (int env_i = 0; env_i < 5; ++env_i) {
        Rng erng = Rng::derive(6009 + 100 * pair_i + u_i, env_i);
        auto env = random_rn_env(erng, n, mh::Constraints::ll());
        env.utility = u;
        if (!cost_leq(mh::solve(a, env), mh::solve(b, env))) ++violations;
        env.constraints = mh::Constraints::ll_b(rat(erng.int_in(1, 4)));
        if (!cost_leq(mh::solve(a, env), mh::solve(b, env))) ++violations;
      }
    }
  }
  c.require(violations == 0,
            "theorem-3 (5)/(5') sweep violations: " + std::to_string(violations));

  // Lemma (6): 200 accepted points per pair stay accepted under the
  // dominant experiment (random priors, utilities, budgets).
  violations = 0;
  for (std::size_t pair_i = 0; pair_i < dominant.size(); ++pair_i) {
    const auto& [a, b] = dominant[pair_i];
    const std::size_t n = a.states();
    for (int pt = 0; pt < 200; ++pt) {
      Rng rng = Rng::derive(7009 + pair_i, pt);
      const Prior mu0{gen::random_interior_prior(rng, n)};
      const auto u = rng.coin() ? mh::UtilitySpec::rn() : random_plc(rng);
      RatVector t(b.realizations());
      for (auto& v : t) v = rng.nonneg_rational(3, 2);
      const Rational budget = dot(vec_times(mu0.mu, b.matrix), t) + rat(1, rng.int_in(1, 9));
      const RatVector x = b.matrix * u.value(t);
      if (!mh::vplus_membership(b, x, mu0, u, budget)) ++violations;
      if (!mh::vplus_membership(a, x, mu0, u, budget)) ++violations;
    }
  }
  c.require(violations == 0, "lemma (6) membership violations: " + std::to_string(violations));

  // Failing pairs yield constructed strict reversals.
  int fails_done = 0, bad = 0;
  for (std::uint64_t stream = 0; fails_done < 20; ++stream) {
    Rng rng = Rng::derive(1010, stream);
    const std::size_t n = 2 + rng.below(3);
    const Experiment a = random_experiment(rng, n, 2 + rng.below(4));
    const Experiment b = random_experiment(rng, n, 2 + rng.below(4));
    if (zon_dominates(a, b).dominates) continue;
    ++fails_done;
    const auto rev = mh::construct_counterexample(OrderKind::Zon, a, b);
    const bool strict = rev.under_e2.optimal &&
                        (!rev.under_e.optimal || rev.under_e.cost > rev.under_e2.cost);
    if (!strict) ++bad;
  }
  c.require(bad == 0, "theorem-3 reversals not strict: " + std::to_string(bad));
}

void criterion8(Check& c) {
  int disagreements = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng = Rng::derive(1011, trial);
    const std::size_t n = 2 + rng.below(2), m = 1 + rng.below(5);
    const Experiment e = random_experiment(rng, n, m);
    RatVector p(n);
    if (rng.coin()) {
      for (auto& v : p) v = rng.nonneg_rational(4, 4);
    } else {
      const auto sums = subset_sums(e.matrix);
      p = sums[rng.below(sums.size())].point;
      if (rng.coin()) p[rng.below(n)] += rng.small_rational(1, 9);
    }
    const bool by_lp = detail::zon_membership(e.matrix, p).status == LpStatus::Optimal;
    if (oracle::zon_membership_by_facets(e, p) != by_lp) ++disagreements;
  }
  c.require(disagreements == 0,
            "facet oracle vs LP disagreements: " + std::to_string(disagreements));

  int support_mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng = Rng::derive(1012, trial);
    const std::size_t n = 2 + rng.below(3), m = 1 + rng.below(5);
    const Experiment e = random_experiment(rng, n, m);
    const RatVector beta = gen::random_direction(rng, n);
    LpProblem p;
    p.sense = Sense::Max;
    p.c = vec_times(beta, e.matrix);
    p.a = RatMatrix(0, m);
    p.bounds.assign(m, Bound::box(0, 1));
    const auto o = solve_lp(p);
    if (o.status != LpStatus::Optimal || o.value != support_function(e, beta))
      ++support_mismatches;
  }
  c.require(support_mismatches == 0,
            "support function vs LP mismatches: " + std::to_string(support_mismatches));
}

void criterion9(Check& c) {
  // Every optimal contract satisfies the first-order condition and the
  // participation constraint exactly, across classes and utilities.
  int optimal_solutions = 0, unsound = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Rng rng = Rng::derive(1013, trial);
    const std::size_t n = 2 + rng.below(3);
    const Experiment e = random_experiment(rng, n, 1 + rng.below(5));
    mh::Constraints cls;
    switch (rng.below(4)) {
      case 0: cls = mh::Constraints::none(); break;
      case 1: cls = mh::Constraints::ll(); break;
      case 2: cls = mh::Constraints::ll_b(rat(rng.int_in(1, 4))); break;
      default: cls = mh::Constraints::b_only(rat(rng.int_in(1, 4)));
    }
    auto env = random_rn_env(rng, n, cls);
    if (rng.below(3) == 0) env.utility = random_plc(rng);
    const auto sol = mh::solve(e, env);
    if (!sol.optimal) continue;
    ++optimal_solutions;
    if (!mh::check_ic(e, sol.t, env)) ++unsound;
    const Rational pc =
        dot(env.mu0.mu, e.matrix * env.utility.value(sol.t)) - env.cost.cost_level;
    if (pc < env.outside_option) ++unsound;
  }
  c.require(optimal_solutions >= 80, "too few optimal solutions to be meaningful");
  c.require(unsound == 0, "unsound optimal solutions: " + std::to_string(unsound));

  // Grid best response with k = 200 lands within 1/200 of the target.
  const std::size_t k = 200;
  int instances = 0, off_grid = 0;
  for (std::uint64_t stream = 0; instances < 50; ++stream) {
    Rng rng = Rng::derive(1014, stream);
    const std::size_t n = 2 + rng.below(2);
    const Experiment e = random_experiment(rng, n, 2 + rng.below(3));
    oracle::QuadraticCost cost;
    cost.center = Prior{gen::random_interior_prior(rng, n)};
    cost.scale = rat(rng.int_in(1, 3));
    Prior mu0;
    if (n == 2) {
      mu0.mu = gen::random_interior_prior(rng, n);
    } else {
      // components on the k-grid keep the nearest-point bound exact
      const long a = rng.int_in(1, 198);
      const long b = rng.int_in(1, 199 - a);
      mu0.mu = {rat(a, 200), rat(b, 200), rat(200 - a - b, 200)};
    }
    mh::Environment env;
    env.mu0 = mu0;
    env.cost.gradient = cost.gradient(mu0.mu);
    env.cost.cost_level = cost.value(mu0.mu);
    env.outside_option = 0;
    env.utility = mh::UtilitySpec::rn();
    env.constraints = mh::Constraints::ll();
    const auto sol = mh::solve(e, env);
    if (!sol.optimal) continue;
    ++instances;
    const auto grid = oracle::SimplexGrid::make(k, n);
    const auto arg = oracle::grid_best_response(e, sol.t, env.utility, cost, grid);
    for (std::size_t i = 0; i < n; ++i)
      if (abs_value(arg[i] - mu0.mu[i]) > rat(1, static_cast<long>(k))) ++off_grid;
  }
  c.require(off_grid == 0, "best responses off target: " + std::to_string(off_grid));
}

void criterion10(Check& c) {
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = Rng::derive(1015, trial);
    const std::size_t n = 2 + rng.below(3);
    const Experiment e = random_experiment(rng, n, 1 + rng.below(5));
    auto env = random_rn_env(rng, n, rng.coin() ? mh::Constraints::ll()
                                                : mh::Constraints::none());
    env.mu0.mu = gen::random_interior_prior(rng, n);
    const Rational shift = rng.small_rational(3, 2);
    auto shifted = env;
    for (auto& g : shifted.cost.gradient) g += shift;
    const auto s0 = mh::solve(e, env), s1 = mh::solve(e, shifted);
    if (s0.optimal != s1.optimal) ++violations;
    if (s0.optimal && s1.optimal &&
        (s0.cost != s1.cost || s0.t != s1.t || s1.lambda != s0.lambda - shift))
      ++violations;
  }
  c.require(violations == 0, "normalization violations: " + std::to_string(violations));
}

void criterion11(Check& c) {
  const auto e1 = example_e1(), e2 = example_e2(), e3 = example_e3();

  // Panel A: conic spans of E1 and E2; boundary-ray endpoints are the
  // exact column-slope clips.
  const std::string panel_a =
      svg::render_cone({e1, e2}, {"E1.json", "E2.json"});
  c.require(panel_a == svg::render_cone({e1, e2}, {"E1.json", "E2.json"}),
            "panel A render must be deterministic");
  c.require(panel_a == io::read_text(g_golden + "/panelA.svg"), "panel A golden bytes");
  for (const auto& endpoint :
       {svg::point_text(rat(1), rat(2, 3)), svg::point_text(rat(2, 3), rat(1)),
        svg::point_text(rat(1), rat(1, 5)), svg::point_text(rat(1, 5), rat(1))}) {
    // line endpoints render as x2=.. y2=..; reuse the comma text split
    const auto comma = endpoint.find(',');
    const std::string needle =
        "x2=\"" + endpoint.substr(0, comma) + "\" y2=\"" + endpoint.substr(comma + 1) + "\"";
    c.require(panel_a.find(needle) != std::string::npos, "panel A ray endpoint " + endpoint);
  }

  // Panel B: zonotopes of E2 and E3; polygon lists equal the exact hulls.
  const std::string panel_b = svg::render_zon({e2, e3}, {"E2.json", "E3.json"});
  c.require(panel_b == io::read_text(g_golden + "/panelB.svg"), "panel B golden bytes");
  for (const auto& e : {e2, e3}) {
    const auto hull = svg::hull2d(zonotope_vertices(e));
    std::string points;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      if (i) points += " ";
      points += svg::point_text(hull[i][0], hull[i][1]);
    }
    c.require(panel_b.find("<polygon points=\"" + points + "\"") != std::string::npos,
              "panel B exact hull coordinates");
  }

  // The CLI reproduces the goldens byte for byte, twice.
  int code = 0;
  run_cli("plot cone " + g_data + "/E1.json " + g_data + "/E2.json --out /tmp/acc_panelA.svg",
          &code);
  c.require(code == 0, "plot cone exit code");
  run_cli("plot zon " + g_data + "/E2.json " + g_data + "/E3.json --out /tmp/acc_panelB.svg",
          &code);
  c.require(code == 0, "plot zon exit code");
  c.require(io::read_text("/tmp/acc_panelA.svg") == io::read_text(g_golden + "/panelA.svg"),
            "CLI panel A bytes");
  c.require(io::read_text("/tmp/acc_panelB.svg") == io::read_text(g_golden + "/panelB.svg"),
            "CLI panel B bytes");
  run_cli("plot zon " + g_data + "/E2.json " + g_data + "/E3.json --out /tmp/acc_panelB2.svg",
          &code);
  c.require(io::read_text("/tmp/acc_panelB2.svg") == io::read_text("/tmp/acc_panelB.svg"),
            "CLI rerun byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: %s <cli binary> <data dir> <golden dir>\n", argv[0]);
    return 64;
  }
  g_cli = argv[1];
  g_data = argv[2];
  g_golden = argv[3];

  run_criterion(1, "worked-example verdict table and factorization", criterion1, 1.0);
  run_criterion(2, "order nesting on 500 seeded pairs", criterion2, 60.0);
  run_criterion(3, "binary-state collapse: zon equals blackwell", criterion3);
  run_criterion(4, "full-rank collapses onto blackwell", criterion4);
  run_criterion(5, "column-space order: costs, implementability, reversal", criterion5);
  run_criterion(6, "conic-span order: LL and budget-only sweeps, reversal", criterion6);
  run_criterion(7, "zonotope order: LL+B, concave utilities, V+ inclusion", criterion7);
  run_criterion(8, "oracle agreement: facet normals and support function", criterion8);
  run_criterion(9, "solver soundness and grid best response", criterion9);
  run_criterion(10, "gradient normalization invariance", criterion10);
  run_criterion(11, "figure reproduction: golden SVG panels", criterion11);

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", g_failures);
  }
  return g_failures;
}
