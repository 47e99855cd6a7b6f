#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "expord/orders.hpp"

namespace expord::mh {

/// Agent's utility from money, normalized so u(0) = 0. Risk-neutral
/// (u(t) = t) or piecewise-linear concave: breakpoints start at (0, 0), both
/// coordinates strictly increase, segment slopes are positive and
/// non-increasing, and the final slope extends to +infinity. Below zero the
/// first segment's slope extends down, making u a bijection on R.
struct UtilitySpec {
  bool risk_neutral = true;
  std::vector<std::pair<Rational, Rational>> breakpoints;  // (t, u(t)), PLC only

  static UtilitySpec rn() { return {}; }
  static UtilitySpec plc(std::vector<std::pair<Rational, Rational>> bps) {
    UtilitySpec u;
    u.risk_neutral = false;
    u.breakpoints = std::move(bps);
    u.validate();
    return u;
  }

  std::size_t segments() const { return breakpoints.size() - 1; }

  Rational slope(std::size_t k) const {  // segment k = 1..K
    return (breakpoints[k].second - breakpoints[k - 1].second) /
           (breakpoints[k].first - breakpoints[k - 1].first);
  }

  void validate() const {
    if (risk_neutral) return;
    if (breakpoints.size() < 2) throw InvalidUtility("need at least two breakpoints");
    if (breakpoints[0].first != 0 || breakpoints[0].second != 0)
      throw InvalidUtility("breakpoints must start at (0, 0)");
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
      if (breakpoints[k].first <= breakpoints[k - 1].first ||
          breakpoints[k].second <= breakpoints[k - 1].second)
        throw InvalidUtility("breakpoints must strictly increase");
      if (slope(k) <= 0) throw InvalidUtility("slopes must be positive");
      if (k > 1 && slope(k) > slope(k - 1))
        throw InvalidUtility("slopes must be non-increasing");
    }
  }

  Rational value(const Rational& t) const {
    if (risk_neutral) return t;
    std::size_t k = 1;
    while (k + 1 < breakpoints.size() && t > breakpoints[k].first) ++k;
    return breakpoints[k - 1].second + slope(k) * (t - breakpoints[k - 1].first);
  }

  Rational inverse(const Rational& v) const {
    if (risk_neutral) return v;
    std::size_t k = 1;
    while (k + 1 < breakpoints.size() && v > breakpoints[k].second) ++k;
    return breakpoints[k - 1].first + (v - breakpoints[k - 1].second) / slope(k);
  }

  RatVector value(const RatVector& t) const {
    RatVector out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = value(t[i]);
    return out;
  }
};

/// Local cost data at the target distribution: the solver only ever needs
/// the gradient of C at mu0 and the level C(mu0).
struct CostSpec {
  RatVector gradient;   // marginal cost per state
  Rational cost_level;  // C(mu0) >= 0
};

enum class ConstraintClass { None, LL, LlB, BOnly };

struct Constraints {
  ConstraintClass kind = ConstraintClass::None;
  Rational budget = 0;  // B for LlB / BOnly

  static Constraints none() { return {ConstraintClass::None, 0}; }
  static Constraints ll() { return {ConstraintClass::LL, 0}; }
  static Constraints ll_b(Rational b) { return {ConstraintClass::LlB, std::move(b)}; }
  static Constraints b_only(Rational b) { return {ConstraintClass::BOnly, std::move(b)}; }
};

struct Environment {
  Prior mu0;
  CostSpec cost;
  Rational outside_option = 0;
  UtilitySpec utility;
  Constraints constraints;
};

/// Solver output. Optimal solutions satisfy the agent's first-order
/// condition E u(t) = g + lambda 1 + eta with eta supported on the
/// zero-probability states, the participation constraint, and the class
/// bounds; cost = mu0 . E t. Infeasible means K = infinity.
struct MhSolution {
  bool optimal = false;
  Rational cost = 0;
  RatVector t;
  Rational lambda = 0;
  RatVector eta;

  static MhSolution infeasible() { return {}; }
};

namespace detail {

inline std::vector<std::size_t> boundary_states(const Prior& mu0) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < mu0.mu.size(); ++n)
    if (mu0.mu[n] == 0) out.push_back(n);
  return out;
}

inline Bound class_bound_t(const Constraints& c) {
  switch (c.kind) {
    case ConstraintClass::None: return Bound::free();
    case ConstraintClass::LL: return Bound::nonneg();
    case ConstraintClass::LlB: return Bound::box(0, c.budget);
    case ConstraintClass::BOnly: return Bound::at_most(c.budget);
  }
  throw Error("unknown constraint class");
}

inline Bound class_bound_v(const Constraints& c, const UtilitySpec& u) {
  switch (c.kind) {
    case ConstraintClass::None: return Bound::free();
    case ConstraintClass::LL: return Bound::nonneg();
    case ConstraintClass::LlB: return Bound::box(0, u.value(c.budget));
    case ConstraintClass::BOnly: return Bound::at_most(u.value(c.budget));
  }
  throw Error("unknown constraint class");
}

struct Program {
  LpProblem lp;
  std::size_t t_base = 0, v_base = 0, lambda_index = 0, eta_base = 0;
  std::vector<std::size_t> boundary;
};

/// Builds the cost-minimization LP. Risk-neutral: variables (t, lambda,
/// eta_boundary, pc slack). PLC: additionally v = u(t) with t tied to the
/// convex piecewise-linear inverse through epigraph rows; the objective
/// presses t down onto u^{-1}(v) wherever it has weight.
inline Program build_program(const Experiment& e, const Environment& env, bool with_pc) {
  const std::size_t n = e.states(), m = e.realizations();
  if (env.mu0.mu.size() != n || env.cost.gradient.size() != n)
    throw DimensionMismatch("environment dimensions");
  env.utility.validate();

  Program pr;
  pr.boundary = boundary_states(env.mu0);
  const bool rn = env.utility.risk_neutral;
  const std::size_t segs = rn ? 0 : env.utility.segments();

  // Variable layout.
  std::size_t nv = 0;
  pr.t_base = nv;
  nv += m;
  if (!rn) {
    pr.v_base = nv;
    nv += m;
  }
  pr.lambda_index = nv++;
  pr.eta_base = nv;
  nv += pr.boundary.size();
  const std::size_t pc_slack = with_pc ? nv++ : 0;
  const std::size_t epi_base = nv;
  if (!rn) nv += m * segs;

  const std::size_t foc_rows = n;
  const std::size_t pc_rows = with_pc ? 1 : 0;
  const std::size_t epi_rows = rn ? 0 : m * segs;

  LpProblem& lp = pr.lp;
  lp.sense = Sense::Min;
  lp.c.assign(nv, Rational(0));
  lp.bounds.assign(nv, Bound::free());
  lp.a = RatMatrix(foc_rows + pc_rows + epi_rows, nv);
  lp.b.assign(foc_rows + pc_rows + epi_rows, Rational(0));

  const RatVector mu_e = vec_times(env.mu0.mu, e.matrix);
  for (std::size_t j = 0; j < m; ++j) lp.c[pr.t_base + j] = mu_e[j];

  // Bounds: the contract class restricts t directly under risk neutrality
  // and the utility v = u(t) otherwise (u(0) = 0 makes them equivalent).
  for (std::size_t j = 0; j < m; ++j) {
    if (rn)
      lp.bounds[pr.t_base + j] = class_bound_t(env.constraints);
    else
      lp.bounds[pr.v_base + j] = class_bound_v(env.constraints, env.utility);
  }
  for (std::size_t k = 0; k < pr.boundary.size(); ++k)
    lp.bounds[pr.eta_base + k] = Bound::nonneg();
  if (with_pc) lp.bounds[pc_slack] = Bound::nonneg();

  // FOC rows: E u(t) - lambda 1 - eta = g, with eta only on boundary states.
  // The gradient enters normalized so its last component is zero; adding a
  // constant to every marginal cost only shifts lambda, so solving the
  // normalized program makes that invariance hold identically (same pivot
  // path, same contract). solve() shifts lambda back.
  const std::size_t util_base = rn ? pr.t_base : pr.v_base;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) lp.a(i, util_base + j) = e.matrix(i, j);
    lp.a(i, pr.lambda_index) = -1;
    lp.b[i] = env.cost.gradient[i] - env.cost.gradient[n - 1];
  }
  for (std::size_t k = 0; k < pr.boundary.size(); ++k)
    lp.a(pr.boundary[k], pr.eta_base + k) = -1;

  // PC row: mu0 . E u(t) - C(mu0) >= outside option.
  if (with_pc) {
    const std::size_t row = n;
    for (std::size_t j = 0; j < m; ++j) lp.a(row, util_base + j) = mu_e[j];
    lp.a(row, pc_slack) = -1;
    lp.b[row] = env.cost.cost_level + env.outside_option;
  }

  // Epigraph rows: t_m - v_m / s_k - w_{m,k} = t_{k-1} - u_{k-1} / s_k.
  if (!rn) {
    const auto& bp = env.utility.breakpoints;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 1; k <= segs; ++k) {
        const std::size_t row = foc_rows + pc_rows + j * segs + (k - 1);
        const std::size_t w = epi_base + j * segs + (k - 1);
        const Rational s = env.utility.slope(k);
        lp.a(row, pr.t_base + j) = 1;
        lp.a(row, pr.v_base + j) = -1 / s;
        lp.a(row, w) = -1;
        lp.b[row] = bp[k - 1].first - bp[k - 1].second / s;
        lp.bounds[w] = Bound::nonneg();
      }
  }
  return pr;
}

}  // namespace detail

/// Minimizes the expected payment subject to the agent's first-order
/// condition, the participation constraint, and the constraint class.
/// Infeasible solves mean K = infinity.
inline MhSolution solve(const Experiment& e, const Environment& env) {
  auto pr = detail::build_program(e, env, /*with_pc=*/true);
  const LpOutcome r = solve_lp(pr.lp);
  if (r.status == LpStatus::Infeasible) return MhSolution::infeasible();
  if (r.status != LpStatus::Optimal)
    throw Error("cost program unbounded; participation constraint missing?");

  MhSolution sol;
  sol.optimal = true;
  sol.t.assign(r.x.begin() + pr.t_base, r.x.begin() + pr.t_base + e.realizations());
  if (!env.utility.risk_neutral) {
    // Zero-weight realizations can leave t above the inverse image; snap
    // them down so u(t) = v holds exactly everywhere.
    for (std::size_t j = 0; j < e.realizations(); ++j)
      sol.t[j] = env.utility.inverse(r.x[pr.v_base + j]);
  }
  sol.lambda = r.x[pr.lambda_index] - env.cost.gradient[e.states() - 1];
  sol.eta.assign(e.states(), Rational(0));
  for (std::size_t k = 0; k < pr.boundary.size(); ++k)
    sol.eta[pr.boundary[k]] = r.x[pr.eta_base + k];
  sol.cost = dot(vec_times(env.mu0.mu, e.matrix), sol.t);
  return sol;
}

/// Whether the target distribution is implementable at all: feasibility of
/// the incentive system with the participation constraint dropped (it can be
/// restored by a lump sum when payments are unconstrained). Pass
/// keep_pc = true to retain it, which matters under LL-type classes.
inline bool implementable(const Experiment& e, const Environment& env, bool keep_pc = false) {
  auto pr = detail::build_program(e, env, keep_pc);
  pr.lp.c.assign(pr.lp.c.size(), Rational(0));
  return solve_lp(pr.lp).status == LpStatus::Optimal;
}

/// Does contract t make mu0 an optimal choice for the agent? Checks for
/// multipliers (lambda, eta >= 0 with eta mu0 = 0) solving
/// E u(t) = g + lambda 1 + eta.
inline bool check_ic(const Experiment& e, const RatVector& t, const Environment& env) {
  if (t.size() != e.realizations()) throw DimensionMismatch("contract length");
  const RatVector w = e.matrix * env.utility.value(t);
  std::optional<Rational> lambda;
  for (std::size_t n = 0; n < e.states(); ++n) {
    if (env.mu0.mu[n] == 0) continue;
    const Rational l = w[n] - env.cost.gradient[n];
    if (!lambda)
      lambda = l;
    else if (*lambda != l)
      return false;
  }
  for (std::size_t n = 0; n < e.states(); ++n)
    if (env.mu0.mu[n] == 0 && w[n] - env.cost.gradient[n] - *lambda < 0) return false;
  return true;
}

/// Membership in V+_{mu0,u,B}(E): does some t >= 0 generate state utility
/// x = E u(t) within the ex ante budget mu0 . E t <= B?
inline bool vplus_membership(const Experiment& e, const RatVector& x, const Prior& mu0,
                             const UtilitySpec& u, const Rational& budget) {
  const std::size_t n = e.states(), m = e.realizations();
  if (x.size() != n || mu0.mu.size() != n) throw DimensionMismatch("vplus dimensions");
  u.validate();
  const bool rn = u.risk_neutral;
  const std::size_t segs = rn ? 0 : u.segments();

  LpProblem lp;
  std::size_t nv = 0;
  const std::size_t t_base = nv;
  nv += m;
  const std::size_t v_base = rn ? t_base : nv;
  if (!rn) nv += m;
  const std::size_t budget_slack = nv++;
  const std::size_t epi_base = nv;
  if (!rn) nv += m * segs;

  lp.c.assign(nv, Rational(0));
  lp.bounds.assign(nv, Bound::free());
  lp.a = RatMatrix(n + 1 + m * segs, nv);
  lp.b.assign(n + 1 + m * segs, Rational(0));

  for (std::size_t j = 0; j < m; ++j)
    lp.bounds[rn ? t_base + j : v_base + j] = Bound::nonneg();
  lp.bounds[budget_slack] = Bound::nonneg();

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) lp.a(i, v_base + j) = e.matrix(i, j);
    lp.b[i] = x[i];
  }
  const RatVector mu_e = vec_times(mu0.mu, e.matrix);
  for (std::size_t j = 0; j < m; ++j) lp.a(n, t_base + j) = mu_e[j];
  lp.a(n, budget_slack) = 1;
  lp.b[n] = budget;

  if (!rn) {
    const auto& bp = u.breakpoints;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 1; k <= segs; ++k) {
        const std::size_t row = n + 1 + j * segs + (k - 1);
        const std::size_t w = epi_base + j * segs + (k - 1);
        const Rational s = u.slope(k);
        lp.a(row, t_base + j) = 1;
        lp.a(row, v_base + j) = -1 / s;
        lp.a(row, w) = -1;
        lp.b[row] = bp[k - 1].first - bp[k - 1].second / s;
        lp.bounds[w] = Bound::nonneg();
      }
  }
  return solve_lp(lp).status == LpStatus::Optimal;
}

/// Agent's expected payoff from producing mu under contract t (Eq. U = mu .
/// E u(t) - C(mu)); the caller supplies the cost level at mu.
inline Rational agent_payoff(const Prior& mu, const Experiment& e, const RatVector& t,
                             const Environment& env, const Rational& cost_at_mu) {
  if (mu.mu.size() != e.states()) throw DimensionMismatch("prior length");
  return dot(mu.mu, e.matrix * env.utility.value(t)) - cost_at_mu;
}

/// A constructed environment under which the dominated experiment is
/// strictly cheaper, witnessing the failure of the order.
struct Counterexample {
  Environment env;
  MhSolution under_e;   // the experiment that fails to dominate
  MhSolution under_e2;  // the other side; always feasible
  RatVector gradient_used;
};

namespace detail {

inline bool strictly_worse(const MhSolution& a, const MhSolution& b) {
  // a strictly worse than b, with infinity for infeasible.
  if (!b.optimal) return false;
  if (!a.optimal) return true;
  return a.cost > b.cost;
}

inline Environment reversal_env(const Prior& mu0, RatVector g, Constraints cls) {
  Environment env;
  env.mu0 = mu0;
  // witnesses are columns or subset sums of a stochastic matrix, so
  // mu0 . g lands in [0, 1] and the level is a valid slack-making choice
  env.cost.cost_level = min_value(dot(mu0.mu, g), Rational(1)) / 2;
  env.cost.gradient = std::move(g);
  env.outside_option = 0;
  env.utility = UtilitySpec::rn();
  env.constraints = std::move(cls);
  return env;
}

}  // namespace detail

/// Builds the contrapositive environment for a failed order: interior mu0,
/// risk-neutral agent, gradient at the witness point, constraint class
/// matched to the order (Col: none, Cone: LL, Zon: LL+B with B = 1). For the
/// zonotope order the witness or its central reflection 1 - x works; both
/// are tried and the reflection is kept when needed.
inline Counterexample construct_counterexample(OrderKind order, const Experiment& e,
                                               const Experiment& e2) {
  if (order == OrderKind::Blackwell) throw Error("no constructor for the Blackwell order");
  const OrderVerdict verdict = dominates(order, e, e2);
  if (verdict.dominates) throw OrderActuallyHolds();
  const RatVector x = std::get<Witness>(verdict.certificate).point;

  const std::size_t n = e.states();
  Prior mu0;
  mu0.mu.assign(n, make_rational(1, Integer(n)));

  Constraints cls = order == OrderKind::Col   ? Constraints::none()
                    : order == OrderKind::Cone ? Constraints::ll()
                                               : Constraints::ll_b(1);

  Environment env = detail::reversal_env(mu0, x, cls);
  Counterexample out{env, solve(e, env), solve(e2, env), x};
  if (order == OrderKind::Zon && !detail::strictly_worse(out.under_e, out.under_e2)) {
    RatVector reflected(n);
    for (std::size_t i = 0; i < n; ++i) reflected[i] = 1 - x[i];
    env = detail::reversal_env(mu0, reflected, cls);
    out = Counterexample{env, solve(e, env), solve(e2, env), reflected};
  }
  if (!detail::strictly_worse(out.under_e, out.under_e2))
    throw Error("counterexample construction failed to produce a strict gap");
  return out;
}

}  // namespace expord::mh
