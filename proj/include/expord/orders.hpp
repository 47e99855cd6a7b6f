#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "expord/experiment.hpp"
#include "expord/lp.hpp"

namespace expord {

enum class OrderKind { Col, Cone, Zon, Blackwell };

inline std::string order_name(OrderKind k) {
  switch (k) {
    case OrderKind::Col: return "col";
    case OrderKind::Cone: return "cone";
    case OrderKind::Zon: return "zon";
    case OrderKind::Blackwell: return "blackwell";
  }
  return "?";
}

/// E' = E G; for Cone additionally G >= 0, for Blackwell G >= 0 and G 1 = 1.
struct FactorG {
  RatMatrix g;
};

/// One column per deduplicated subset sum p of E' columns: E h = p with
/// 0 <= h <= 1. `mask` is the lowest representative subset (bit m = column
/// m+1 of E').
struct FactorH {
  struct Column {
    std::uint32_t mask;
    RatVector point;
    RatVector h;
  };
  std::vector<Column> columns;
};

struct Garbling {
  RatMatrix g;
};

/// Non-dominance witness. For Col/Cone/Zon: `point` lies in the dominated
/// set but not the dominating one and `beta` separates exactly. For
/// Blackwell: `farkas` is the infeasibility certificate of the garbling LP.
struct Witness {
  RatVector point;
  RatVector beta;
  RatVector farkas;
};

using Certificate = std::variant<FactorG, FactorH, Garbling, Witness>;

struct OrderVerdict {
  OrderKind order;
  bool dominates;
  Certificate certificate;
};

namespace detail {

inline void require_same_states(const Experiment& a, const Experiment& b) {
  if (a.states() != b.states()) throw StateCountMismatch(a.states(), b.states());
}

/// Feasibility of A v = p, v >= 0 (cone membership).
inline LpOutcome cone_membership(const RatMatrix& a, const RatVector& p) {
  LpProblem lp;
  lp.c.assign(a.cols(), Rational(0));
  lp.a = a;
  lp.b = p;
  lp.bounds.assign(a.cols(), Bound::nonneg());
  return solve_lp(lp);
}

/// Feasibility of A v = p, 0 <= v <= 1 (zonotope membership).
inline LpOutcome zon_membership(const RatMatrix& a, const RatVector& p) {
  LpProblem lp;
  lp.c.assign(a.cols(), Rational(0));
  lp.a = a;
  lp.b = p;
  lp.bounds.assign(a.cols(), Bound::box(0, 1));
  return solve_lp(lp);
}

struct ZonInclusion {
  bool included;
  FactorH factor;    // when included
  Witness witness;   // when not
};

/// Zon A ⊇ Zon B, decided point-wise over the deduplicated subset sums of
/// B's columns (every vertex of Zon B is such a sum). The Farkas vector of a
/// failing membership LP is exactly a direction with
/// beta . p > support_function(A, beta).
inline ZonInclusion zon_includes(const RatMatrix& a, const RatMatrix& b,
                                 std::size_t cap = kRealizationCap) {
  ZonInclusion out{true, {}, {}};
  for (const auto& s : subset_sums(b, cap)) {
    if (s.mask == 0) {
      out.factor.columns.push_back({0, s.point, RatVector(a.cols(), Rational(0))});
      continue;
    }
    const LpOutcome r = zon_membership(a, s.point);
    if (r.status == LpStatus::Optimal) {
      out.factor.columns.push_back({s.mask, s.point, r.x});
    } else {
      out.included = false;
      out.witness = Witness{s.point, r.farkas, {}};
      out.factor = {};
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Col E ⊇ Col E': every column of e2 must solve exactly in Col(e). On
/// failure the separating beta comes from the left null space of e.
inline OrderVerdict col_dominates(const Experiment& e, const Experiment& e2) {
  detail::require_same_states(e, e2);
  RatMatrix g(e.realizations(), e2.realizations());
  for (std::size_t j = 0; j < e2.realizations(); ++j) {
    const RatVector p = e2.matrix.col(j);
    auto x = solve_exact(e.matrix, p);
    if (!x) {
      // beta with beta^T E = 0 and beta . p = 1 exists exactly when p is
      // outside Col(e): solve the stacked system [E^T; p^T] beta = e_last.
      RatMatrix stacked(e.realizations() + 1, e.states());
      for (std::size_t m = 0; m < e.realizations(); ++m)
        for (std::size_t n = 0; n < e.states(); ++n) stacked(m, n) = e.matrix(n, m);
      for (std::size_t n = 0; n < e.states(); ++n)
        stacked(e.realizations(), n) = p[n];
      RatVector rhs(e.realizations() + 1, Rational(0));
      rhs.back() = 1;
      auto beta = solve_exact(stacked, rhs);
      return {OrderKind::Col, false, Witness{p, beta.value(), {}}};
    }
    g.set_col(j, *x);
  }
  return {OrderKind::Col, true, FactorG{std::move(g)}};
}

/// Cone E ⊇ Cone E': one feasibility LP per column of e2.
inline OrderVerdict cone_dominates(const Experiment& e, const Experiment& e2) {
  detail::require_same_states(e, e2);
  RatMatrix g(e.realizations(), e2.realizations());
  for (std::size_t j = 0; j < e2.realizations(); ++j) {
    const RatVector p = e2.matrix.col(j);
    const LpOutcome r = detail::cone_membership(e.matrix, p);
    if (r.status != LpStatus::Optimal)
      return {OrderKind::Cone, false, Witness{p, r.farkas, {}}};
    g.set_col(j, r.x);
  }
  return {OrderKind::Cone, true, FactorG{std::move(g)}};
}

/// Zon E ⊇ Zon E' via membership of every partial column sum of e2.
inline OrderVerdict zon_dominates(const Experiment& e, const Experiment& e2,
                                  std::size_t cap = kRealizationCap) {
  detail::require_same_states(e, e2);
  auto inc = detail::zon_includes(e.matrix, e2.matrix, cap);
  if (inc.included) return {OrderKind::Zon, true, std::move(inc.factor)};
  return {OrderKind::Zon, false, std::move(inc.witness)};
}

/// Blackwell: one feasibility LP for a garbling G >= 0, G 1 = 1 with
/// E G = E'. Variable (m, m') sits at index m * M' + m'.
inline OrderVerdict blackwell_dominates(const Experiment& e, const Experiment& e2) {
  detail::require_same_states(e, e2);
  const std::size_t n = e.states(), m = e.realizations(), m2 = e2.realizations();
  LpProblem lp;
  lp.c.assign(m * m2, Rational(0));
  lp.bounds.assign(m * m2, Bound::nonneg());
  lp.a = RatMatrix(n * m2 + m, m * m2);
  lp.b.assign(n * m2 + m, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m2; ++j) {
      const std::size_t row = i * m2 + j;
      for (std::size_t k = 0; k < m; ++k) lp.a(row, k * m2 + j) = e.matrix(i, k);
      lp.b[row] = e2.matrix(i, j);
    }
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t row = n * m2 + k;
    for (std::size_t j = 0; j < m2; ++j) lp.a(row, k * m2 + j) = 1;
    lp.b[row] = 1;
  }
  const LpOutcome r = solve_lp(lp);
  if (r.status != LpStatus::Optimal)
    return {OrderKind::Blackwell, false, Witness{{}, {}, r.farkas}};
  RatMatrix g(m, m2);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m2; ++j) g(k, j) = r.x[k * m2 + j];
  return {OrderKind::Blackwell, true, Garbling{std::move(g)}};
}

inline OrderVerdict dominates(OrderKind kind, const Experiment& e, const Experiment& e2,
                              std::size_t cap = kRealizationCap) {
  switch (kind) {
    case OrderKind::Col: return col_dominates(e, e2);
    case OrderKind::Cone: return cone_dominates(e, e2);
    case OrderKind::Zon: return zon_dominates(e, e2, cap);
    case OrderKind::Blackwell: return blackwell_dominates(e, e2);
  }
  throw Error("unknown order");
}

/// Majorization with zero padding: pad the shorter vector, require equal
/// totals and partial-sum dominance of the descending rearrangements.
inline bool classical_majorizes(RatVector x, RatVector z) {
  const std::size_t l = std::max(x.size(), z.size());
  x.resize(l, Rational(0));
  z.resize(l, Rational(0));
  Rational tx = 0, tz = 0;
  for (const auto& v : x) tx += v;
  for (const auto& v : z) tz += v;
  if (tx != tz) return false;
  std::sort(x.begin(), x.end(), [](const Rational& a, const Rational& b) { return a > b; });
  std::sort(z.begin(), z.end(), [](const Rational& a, const Rational& b) { return a > b; });
  Rational px = 0, pz = 0;
  for (std::size_t k = 0; k < l; ++k) {
    px += x[k];
    pz += z[k];
    if (px < pz) return false;
  }
  return true;
}

/// ⟨E|mu0⟩ ≥lcx ⟨E'|mu0⟩ at an interior prior, decided as zonotope inclusion
/// of the prior-weighted matrices (Zon(D E) = D Zon(E) for positive diagonal
/// D, and lcx at one interior prior is equivalent to the zonotope order).
inline bool lcx_dominates_at_prior(const Experiment& e, const Experiment& e2,
                                   const Prior& mu0, std::size_t cap = kRealizationCap) {
  detail::require_same_states(e, e2);
  for (std::size_t i = 0; i < mu0.mu.size(); ++i)
    if (mu0.mu[i] == 0) throw NonInteriorPrior(i + 1);
  return detail::zon_includes(weighted_experiment(e, mu0), weighted_experiment(e2, mu0), cap)
      .included;
}

/// 4 orders x 2 directions, plus strict flags (dominates and not dominated
/// back).
struct RelationsSummary {
  struct Row {
    OrderKind order;
    bool forward;   // e  >= e2
    bool backward;  // e2 >= e
    bool strict_forward() const { return forward && !backward; }
    bool strict_backward() const { return backward && !forward; }
  };
  std::vector<Row> rows;
};

inline RelationsSummary relations_summary(const Experiment& e, const Experiment& e2,
                                          std::size_t cap = kRealizationCap) {
  detail::require_same_states(e, e2);
  RelationsSummary s;
  for (OrderKind k : {OrderKind::Col, OrderKind::Cone, OrderKind::Zon, OrderKind::Blackwell})
    s.rows.push_back({k, dominates(k, e, e2, cap).dominates, dominates(k, e2, e, cap).dominates});
  return s;
}

}  // namespace expord
