#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "expord/moralhazard.hpp"
#include "expord/rng.hpp"

namespace expord::oracle {

/// Canonical concrete cost family: C(mu) = scale * |mu - center|^2, plus an
/// optional KL-shaped boundary barrier barrier * KL(center || mu) whose
/// value explodes at the simplex boundary. The quadratic part and the full
/// gradient are exact; the barrier's value needs logarithms and is only ever
/// evaluated numerically inside oracle comparisons.
struct QuadraticCost {
  Prior center;  // free option, C(center) = 0
  Rational scale = 1;
  std::optional<Rational> barrier;

  Rational value(const RatVector& mu) const {
    Rational s = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const Rational d = mu[i] - center.mu[i];
      s += d * d;
    }
    return scale * s;
  }

  double value_numeric(const RatVector& mu) const {
    double v = static_cast<double>(value(mu));
    if (barrier) {
      for (std::size_t i = 0; i < mu.size(); ++i) {
        if (center.mu[i] == 0) continue;
        const double c = static_cast<double>(center.mu[i]);
        v += static_cast<double>(*barrier) * c *
             (std::log(c) - std::log(static_cast<double>(mu[i])));
      }
    }
    return v;
  }

  RatVector gradient(const RatVector& mu) const {
    RatVector g(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      g[i] = 2 * scale * (mu[i] - center.mu[i]);
      if (barrier) g[i] -= *barrier * center.mu[i] / mu[i];
    }
    return g;
  }
};

/// All compositions of k into N parts divided by k, in lexicographic order.
struct SimplexGrid {
  std::size_t resolution = 1;
  std::vector<RatVector> points;

  static SimplexGrid make(std::size_t k, std::size_t n) {
    SimplexGrid grid;
    grid.resolution = k;
    RatVector point(n);
    std::vector<std::size_t> q(n, 0);
    enumerate(k, 0, q, n, grid);
    return grid;
  }

 private:
  static void enumerate(std::size_t remaining, std::size_t i, std::vector<std::size_t>& q,
                        std::size_t n, SimplexGrid& grid) {
    if (i + 1 == n) {
      q[i] = remaining;
      RatVector p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = make_rational(Integer(static_cast<long>(q[j])),
                             Integer(static_cast<long>(grid.resolution)));
      grid.points.push_back(std::move(p));
      return;
    }
    for (std::size_t v = 0; v <= remaining; ++v) {
      q[i] = v;
      enumerate(remaining - v, i + 1, q, n, grid);
    }
  }
};

/// Zonotope membership decided by enumerating candidate facet normals
/// instead of solving an LP: a second decision path that shares no code with
/// the simplex. Facets of a zonotope of rank r are spanned by r-1
/// generators, so normals come from the orthogonal directions of
/// (r-1)-subsets of columns taken inside Col E, plus the coordinate axes.
/// Support inequalities are valid for every direction, so extra candidates
/// never reject a member.
inline bool zon_membership_by_facets(const Experiment& e, const RatVector& p) {
  const std::size_t n = e.states(), m = e.realizations();
  if (n > 4 || m > 12)
    throw DimensionCap("facet oracle capped at N <= 4, M <= 12");
  if (p.size() != n) throw DimensionMismatch("point length");
  const RatMatrix& a = e.matrix;

  if (!solve_exact(a, p)) return false;  // p must lie in Col E

  std::vector<RatVector> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    RatVector axis(n, Rational(0));
    axis[i] = 1;
    candidates.push_back(axis);
    axis[i] = -1;
    candidates.push_back(axis);
  }

  const std::size_t r = rank(a);
  const auto left_null = nullspace_basis(a.transpose());  // Col(E)^perp

  // Every (r-1)-subset of columns spanning r-1 dimensions determines one
  // facet direction inside Col E (up to sign).
  auto emit = [&](const std::vector<std::size_t>& cols) {
    RatMatrix constraints(cols.size() + left_null.size(), n);
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (std::size_t row = 0; row < n; ++row)
        constraints(i, row) = a(row, cols[i]);
    for (std::size_t i = 0; i < left_null.size(); ++i)
      for (std::size_t row = 0; row < n; ++row)
        constraints(cols.size() + i, row) = left_null[i][row];
    if (rank(constraints) + 1 != n) return;  // degenerate subset
    auto beta = nullspace_vector(constraints);
    RatVector minus(n);
    for (std::size_t i = 0; i < n; ++i) minus[i] = -(*beta)[i];
    candidates.push_back(*beta);
    candidates.push_back(std::move(minus));
  };
  std::vector<std::size_t> idx(r - 1);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (;;) {
    emit(idx);
    std::size_t i = idx.size();
    while (i > 0 && idx[i - 1] == m - (idx.size() - (i - 1))) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
  }

  for (const auto& beta : candidates)
    if (dot(beta, p) > support_function(a, beta)) return false;
  return true;
}

/// Agent's grid best response: argmax over grid points of
/// mu . E u(t) - C(mu), ties broken lexicographically (the grid is already
/// in lexicographic order). With a barrier the comparison is numeric; the
/// pure quadratic path is exact.
inline RatVector grid_best_response(const Experiment& e, const RatVector& t,
                                    const mh::UtilitySpec& u, const QuadraticCost& cost,
                                    const SimplexGrid& grid) {
  const RatVector w = e.matrix * u.value(t);
  const bool numeric = cost.barrier.has_value();
  std::size_t best = 0;
  Rational best_exact = 0;
  double best_num = 0;
  bool first = true;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const RatVector& mu = grid.points[i];
    if (numeric) {
      const double val = static_cast<double>(dot(mu, w)) - cost.value_numeric(mu);
      if (first || val > best_num) {
        best_num = val;
        best = i;
        first = false;
      }
    } else {
      const Rational val = dot(mu, w) - cost.value(mu);
      if (first || val > best_exact) {
        best_exact = val;
        best = i;
        first = false;
      }
    }
  }
  return grid.points[best];
}

namespace detail {

/// Piecewise-linear convex test function phi(s) = slope0 * s +
/// sum_j add_slope_j * max(0, s - kink_j).
struct ConvexPl {
  Rational slope0;
  std::vector<std::pair<Rational, Rational>> kinks;  // (location, added slope >= 0)

  Rational operator()(const Rational& s) const {
    Rational v = slope0 * s;
    for (const auto& [at, add] : kinks)
      if (s > at) v += add * (s - at);
    return v;
  }
};

inline Rational expect(const PosteriorDistribution& d, const RatVector& beta,
                       const ConvexPl& phi) {
  Rational s = 0;
  for (const auto& atom : d.atoms) s += atom.weight * phi(dot(beta, atom.posterior));
  return s;
}

}  // namespace detail

/// Monte Carlo necessary-condition check of <E|mu0> >=lcx <E'|mu0>: samples
/// random directions and piecewise-linear convex functions (kinks placed
/// inside the observed range) and returns false on the first strict
/// violation. Never a proof of dominance. Directions in `extra_betas` are
/// tried first, each with a sweep of hinge functions including
/// phi(s) = max(0, s), so an injected separating direction is guaranteed to
/// trigger its violation.
inline bool mc_lcx_check(const Experiment& e, const Experiment& e2, const Prior& mu0,
                         std::size_t trials, std::uint64_t seed,
                         const std::vector<RatVector>& extra_betas = {}) {
  for (std::size_t i = 0; i < mu0.mu.size(); ++i)
    if (mu0.mu[i] == 0) throw NonInteriorPrior(i + 1);
  const PosteriorDistribution da = posteriors(e, mu0);
  const PosteriorDistribution db = posteriors(e2, mu0);

  auto range = [&](const RatVector& beta) {
    Rational lo, hi;
    bool first = true;
    for (const auto* d : {&da, &db})
      for (const auto& atom : d->atoms) {
        const Rational s = dot(beta, atom.posterior);
        if (first || s < lo) lo = s;
        if (first || s > hi) hi = s;
        first = false;
      }
    return std::pair{lo, hi};
  };
  auto violates = [&](const RatVector& beta, const detail::ConvexPl& phi) {
    return detail::expect(da, beta, phi) < detail::expect(db, beta, phi);
  };

  for (const auto& beta : extra_betas) {
    auto [lo, hi] = range(beta);
    for (int j = 0; j <= 4; ++j) {
      const Rational theta = j == 0 ? Rational(0) : Rational(lo + (hi - lo) * rat(j - 1, 3));
      if (violates(beta, detail::ConvexPl{0, {{theta, 1}}})) return false;
    }
  }

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::derive(seed, trial);
    const RatVector beta = gen::random_direction(rng, e.states());
    auto [lo, hi] = range(beta);
    detail::ConvexPl phi;
    phi.slope0 = rat(rng.int_in(-2, 2));
    const long kink_count = rng.int_in(1, 3);
    for (long k = 0; k < kink_count; ++k) {
      const Rational frac = rat(rng.int_in(0, 12), 12);
      phi.kinks.push_back({lo + (hi - lo) * frac, rat(rng.int_in(1, 3))});
    }
    if (violates(beta, phi)) return false;
  }
  return true;
}

/// One side of the Lagrangian comparison; infinite when some column's
/// maximum diverges (reported per column, never guessed).
struct LagrangianValue {
  bool finite = true;
  Rational value = 0;
  std::vector<std::size_t> unbounded_columns;  // 1-based
};

namespace detail {

inline LagrangianValue lagrangian_side(const RatMatrix& mat, const RatVector& beta,
                                       const RatVector& mu0, const mh::UtilitySpec& u) {
  const RatVector a = vec_times(beta, mat);
  const RatVector b = vec_times(mu0, mat);
  LagrangianValue out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (u.risk_neutral) {
      if (a[j] > b[j]) {
        out.finite = false;
        out.unbounded_columns.push_back(j + 1);
      }
      continue;  // finite maximum is 0, at t = 0
    }
    const std::size_t segs = u.segments();
    if (a[j] > 0 && a[j] * u.slope(segs) > b[j]) {
      out.finite = false;
      out.unbounded_columns.push_back(j + 1);
      continue;
    }
    Rational best = 0;  // t = 0 gives a u(0) - b 0 = 0
    for (std::size_t k = 1; k <= segs; ++k) {
      const Rational v = a[j] * u.breakpoints[k].second - b[j] * u.breakpoints[k].first;
      if (v > best) best = v;
    }
    out.value += best;
  }
  if (!out.finite) out.value = 0;
  return out;
}

}  // namespace detail

/// Evaluates both sides of max_{t >= 0} beta . E u(t) - mu0 . E t exactly by
/// per-column maximization over the utility's breakpoints. Under zonotope
/// dominance of e over e2 the left side weakly exceeds the right (with
/// infinity ranking above everything).
inline std::pair<LagrangianValue, LagrangianValue> lagrangian_gap(
    const Experiment& e, const Experiment& e2, const RatVector& beta, const Prior& mu0,
    const mh::UtilitySpec& u) {
  if (beta.size() != e.states() || mu0.mu.size() != e.states())
    throw DimensionMismatch("lagrangian dimensions");
  u.validate();
  return {detail::lagrangian_side(e.matrix, beta, mu0.mu, u),
          detail::lagrangian_side(e2.matrix, beta, mu0.mu, u)};
}

}  // namespace expord::oracle
