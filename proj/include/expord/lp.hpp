#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "expord/matrix.hpp"

namespace expord {

enum class Sense { Min, Max };

/// Per-variable bounds; nullopt means the side is unbounded.
struct Bound {
  std::optional<Rational> lower;
  std::optional<Rational> upper;

  static Bound nonneg() { return {Rational(0), std::nullopt}; }
  static Bound free() { return {std::nullopt, std::nullopt}; }
  static Bound box(Rational lo, Rational up) { return {std::move(lo), std::move(up)}; }
  static Bound at_most(Rational up) { return {std::nullopt, std::move(up)}; }
};

/// min/max c.x  subject to  A x = b  and per-variable bounds.
struct LpProblem {
  Sense sense = Sense::Min;
  RatVector c;
  RatMatrix a;
  RatVector b;
  std::vector<Bound> bounds;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Result with an exactly verifiable certificate for each status:
///  - Optimal: x with A x = b, bounds satisfied, value = c.x; dual holds the
///    equality-row multipliers read off the final basis.
///  - Infeasible: farkas y with sup_{bounds} (y^T A) x < y^T b.
///  - Unbounded: ray is a recession direction improving the objective.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  RatVector x;
  Rational value = 0;
  RatVector dual;
  RatVector farkas;
  RatVector ray;
};

namespace detail {

// Bridge from bounded variables to the standard form min c.y, A y = b, y >= 0.
struct VarMap {
  enum Kind { Shift, Flip, Split } kind;
  std::size_t j1 = 0, j2 = 0;  // standard-form indices
  Rational offset = 0;         // Shift: x = off + y1; Flip: x = off - y1
};

struct StandardForm {
  RatMatrix a;   // (m_orig + bound rows) x n_std
  RatVector b;
  RatVector c;
  Rational c_offset = 0;
  std::size_t m_orig = 0;
  std::vector<VarMap> vars;
};

inline StandardForm standardize(const LpProblem& p) {
  const std::size_t m = p.a.rows(), n = p.a.cols();
  if (p.c.size() != n || p.b.size() != m || p.bounds.size() != n)
    throw DimensionMismatch("inconsistent LP dimensions");
  for (std::size_t j = 0; j < n; ++j)
    if (p.bounds[j].lower && p.bounds[j].upper && *p.bounds[j].lower > *p.bounds[j].upper)
      throw InvalidProblem("lower bound exceeds upper bound");

  StandardForm sf;
  sf.m_orig = m;
  sf.vars.resize(n);
  const bool maximize = p.sense == Sense::Max;

  std::size_t n_std = 0, extra_rows = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& bd = p.bounds[j];
    if (bd.lower) {
      sf.vars[j] = {VarMap::Shift, n_std++, 0, *bd.lower};
      if (bd.upper) ++extra_rows;  // y + slack = up - lo
    } else if (bd.upper) {
      sf.vars[j] = {VarMap::Flip, n_std++, 0, *bd.upper};
    } else {
      sf.vars[j] = {VarMap::Split, n_std, n_std + 1, Rational(0)};
      n_std += 2;
    }
  }
  const std::size_t n_slack = extra_rows;
  sf.a = RatMatrix(m + extra_rows, n_std + n_slack);
  sf.b.assign(m + extra_rows, Rational(0));
  sf.c.assign(n_std + n_slack, Rational(0));
  for (std::size_t i = 0; i < m; ++i) sf.b[i] = p.b[i];

  std::size_t bound_row = m, slack = n_std;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& vm = sf.vars[j];
    const Rational cj = maximize ? Rational(-p.c[j]) : p.c[j];
    switch (vm.kind) {
      case VarMap::Shift:
        for (std::size_t i = 0; i < m; ++i) {
          sf.a(i, vm.j1) = p.a(i, j);
          if (vm.offset != 0) sf.b[i] -= p.a(i, j) * vm.offset;
        }
        sf.c[vm.j1] = cj;
        sf.c_offset += cj * vm.offset;
        if (p.bounds[j].upper) {
          sf.a(bound_row, vm.j1) = 1;
          sf.a(bound_row, slack) = 1;
          sf.b[bound_row] = *p.bounds[j].upper - vm.offset;
          ++bound_row;
          ++slack;
        }
        break;
      case VarMap::Flip:
        for (std::size_t i = 0; i < m; ++i) {
          sf.a(i, vm.j1) = -p.a(i, j);
          if (vm.offset != 0) sf.b[i] -= p.a(i, j) * vm.offset;
        }
        sf.c[vm.j1] = -cj;
        sf.c_offset += cj * vm.offset;
        break;
      case VarMap::Split:
        for (std::size_t i = 0; i < m; ++i) {
          sf.a(i, vm.j1) = p.a(i, j);
          sf.a(i, vm.j2) = -p.a(i, j);
        }
        sf.c[vm.j1] = cj;
        sf.c[vm.j2] = -cj;
        break;
    }
  }
  return sf;
}

/// Two-phase tableau simplex on min c.y, A y = b, y >= 0 with Bland's
/// smallest-index rule throughout (termination and determinism).
class Simplex {
 public:
  Simplex(const RatMatrix& a, const RatVector& b, const RatVector& c)
      : m_(a.rows()), n_(a.cols()), c_(c), sign_(m_, 1), row_alive_(m_, true) {
    // Tableau layout: n_ structural columns, m_ artificial columns, rhs.
    // Artificial column i stores B^{-1} column i, which keeps phase-1 duals
    // and final duals readable at any point.
    t_.assign(m_, RatVector(n_ + m_ + 1, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < 0;
      sign_[i] = flip ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = flip ? Rational(-a(i, j)) : a(i, j);
      t_[i][n_ + i] = 1;
      t_[i][rhs()] = flip ? Rational(-b[i]) : b[i];
      basis_[i] = n_ + i;
    }
  }

  LpStatus run() {
    // Phase 1: minimize the sum of artificials.
    RatVector phase1_cost(n_ + m_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) phase1_cost[n_ + i] = 1;
    rebuild_reduced_costs(phase1_cost);
    pivot_loop(/*allow_artificial=*/true);

    Rational infeas = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeas += t_[i][rhs()];
    if (infeas > 0) {
      extract_farkas();
      return LpStatus::Infeasible;
    }
    purge_artificials();

    // Phase 2 over the original costs.
    RatVector cost(n_ + m_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c_[j];
    rebuild_reduced_costs(cost);
    if (!pivot_loop(/*allow_artificial=*/false)) {
      extract_ray();
      return LpStatus::Unbounded;
    }
    extract_solution(cost);
    return LpStatus::Optimal;
  }

  RatVector x;        // structural values, size n_
  RatVector duals;    // per original row, zero on redundant rows
  RatVector farkas;   // per original row
  RatVector ray;      // structural recession direction

 private:
  std::size_t rhs() const { return n_ + m_; }

  void rebuild_reduced_costs(const RatVector& cost) {
    rc_.assign(n_ + m_, Rational(0));
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      Rational z = cost[j];
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_alive_[i]) continue;
        const Rational& cb = cost[basis_[i]];
        if (cb != 0 && t_[i][j] != 0) z -= cb * t_[i][j];
      }
      rc_[j] = z;
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    const Rational piv = t_[r][s];
    for (std::size_t j = 0; j <= rhs(); ++j)
      if (t_[r][j] != 0) t_[r][j] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || !row_alive_[i]) continue;
      const Rational f = t_[i][s];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= rhs(); ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
    }
    const Rational frc = rc_[s];
    if (frc != 0)
      for (std::size_t j = 0; j < n_ + m_; ++j)
        if (t_[r][j] != 0) rc_[j] -= frc * t_[r][j];
    basis_[r] = s;
  }

  /// Returns false when an improving column has no blocking row (unbounded).
  bool pivot_loop(bool allow_artificial) {
    for (;;) {
      // Bland: lowest-index entering column with negative reduced cost.
      // Artificials never re-enter once they have left the basis.
      std::size_t enter = n_ + m_;
      const std::size_t limit = allow_artificial ? n_ + m_ : n_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (j >= n_ && !is_basic(j)) continue;
        if (rc_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == n_ + m_) return true;

      std::size_t leave = m_;
      Rational best_ratio = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_alive_[i] || t_[i][enter] <= 0) continue;
        const Rational ratio = t_[i][rhs()] / t_[i][enter];
        if (leave == m_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t i = 0; i < m_; ++i)
      if (row_alive_[i] && basis_[i] == j) return true;
    return false;
  }

  /// After a feasible phase 1, drive artificials out of the basis; rows that
  /// cannot pivot on any structural column are redundant and get retired.
  void purge_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!row_alive_[i] || basis_[i] < n_) continue;
      std::size_t s = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (t_[i][j] != 0) {
          s = j;
          break;
        }
      if (s == n_) {
        row_alive_[i] = false;
      } else {
        pivot(i, s);  // basic value is zero, so feasibility is preserved
      }
    }
  }

  void extract_farkas() {
    // y = (phase-1 basic costs)^T B^{-1}, unflipped back to input row signs.
    farkas.assign(m_, Rational(0));
    for (std::size_t k = 0; k < m_; ++k) {
      Rational y = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= n_ && t_[i][n_ + k] != 0) y += t_[i][n_ + k];
      farkas[k] = sign_[k] * y;
    }
  }

  void extract_ray() {
    // rc_[enter] < 0 with no blocking row was discovered by pivot_loop; find
    // it again the same way so this function stays self-contained.
    std::size_t enter = n_;
    for (std::size_t j = 0; j < n_; ++j)
      if (rc_[j] < 0) {
        enter = j;
        break;
      }
    ray.assign(n_, Rational(0));
    ray[enter] = 1;
    for (std::size_t i = 0; i < m_; ++i)
      if (row_alive_[i] && basis_[i] < n_) ray[basis_[i]] = -t_[i][enter];
  }

  void extract_solution(const RatVector& cost) {
    x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (row_alive_[i] && basis_[i] < n_) x[basis_[i]] = t_[i][rhs()];
    duals.assign(m_, Rational(0));
    for (std::size_t k = 0; k < m_; ++k) {
      Rational y = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_alive_[i]) continue;
        const Rational& cb = cost[basis_[i]];
        if (cb != 0 && t_[i][n_ + k] != 0) y += cb * t_[i][n_ + k];
      }
      duals[k] = sign_[k] * y;
    }
  }

  std::size_t m_, n_;
  RatVector c_;
  std::vector<int> sign_;
  std::vector<bool> row_alive_;
  std::vector<RatVector> t_;
  std::vector<std::size_t> basis_;
  RatVector rc_;
};

}  // namespace detail

/// Exact two-phase simplex. Deterministic: identical problems yield
/// identical outcomes.
inline LpOutcome solve_lp(const LpProblem& p) {
  const auto sf = detail::standardize(p);
  detail::Simplex core(sf.a, sf.b, sf.c);
  const LpStatus status = core.run();

  LpOutcome out;
  out.status = status;
  const std::size_t n = p.a.cols();
  const bool maximize = p.sense == Sense::Max;

  auto map_point = [&](const RatVector& y, bool with_offset) {
    RatVector v(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      const auto& vm = sf.vars[j];
      switch (vm.kind) {
        case detail::VarMap::Shift:
          v[j] = (with_offset ? vm.offset : Rational(0)) + y[vm.j1];
          break;
        case detail::VarMap::Flip:
          v[j] = (with_offset ? vm.offset : Rational(0)) - y[vm.j1];
          break;
        case detail::VarMap::Split:
          v[j] = y[vm.j1] - y[vm.j2];
          break;
      }
    }
    return v;
  };

  switch (status) {
    case LpStatus::Optimal: {
      out.x = map_point(core.x, true);
      Rational value = sf.c_offset;
      for (std::size_t j = 0; j < core.x.size(); ++j)
        if (sf.c[j] != 0 && core.x[j] != 0) value += sf.c[j] * core.x[j];
      out.value = maximize ? Rational(-value) : value;
      out.dual.assign(sf.m_orig, Rational(0));
      for (std::size_t k = 0; k < sf.m_orig; ++k)
        out.dual[k] = maximize ? Rational(-core.duals[k]) : core.duals[k];
      break;
    }
    case LpStatus::Infeasible:
      out.farkas.assign(core.farkas.begin(), core.farkas.begin() + sf.m_orig);
      break;
    case LpStatus::Unbounded:
      out.ray = map_point(core.ray, false);
      break;
  }
  return out;
}

/// True iff the outcome's claims verify by exact substitution.
inline bool check_certificate(const LpProblem& p, const LpOutcome& o) {
  const std::size_t m = p.a.rows(), n = p.a.cols();
  switch (o.status) {
    case LpStatus::Optimal: {
      if (o.x.size() != n) return false;
      for (std::size_t j = 0; j < n; ++j) {
        if (p.bounds[j].lower && o.x[j] < *p.bounds[j].lower) return false;
        if (p.bounds[j].upper && o.x[j] > *p.bounds[j].upper) return false;
      }
      const RatVector ax = p.a * o.x;
      for (std::size_t i = 0; i < m; ++i)
        if (ax[i] != p.b[i]) return false;
      return dot(p.c, o.x) == o.value;
    }
    case LpStatus::Infeasible: {
      if (o.farkas.size() != m) return false;
      const RatVector d = vec_times(o.farkas, p.a);
      Rational sup = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[j] > 0) {
          if (!p.bounds[j].upper) return false;
          sup += d[j] * *p.bounds[j].upper;
        } else if (d[j] < 0) {
          if (!p.bounds[j].lower) return false;
          sup += d[j] * *p.bounds[j].lower;
        }
      }
      return sup < dot(o.farkas, p.b);
    }
    case LpStatus::Unbounded: {
      if (o.ray.size() != n) return false;
      bool nonzero = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (o.ray[j] != 0) nonzero = true;
        const bool lo = p.bounds[j].lower.has_value(), up = p.bounds[j].upper.has_value();
        if (lo && up && o.ray[j] != 0) return false;
        if (lo && !up && o.ray[j] < 0) return false;
        if (!lo && up && o.ray[j] > 0) return false;
      }
      if (!nonzero) return false;
      const RatVector ar = p.a * o.ray;
      for (std::size_t i = 0; i < m; ++i)
        if (ar[i] != 0) return false;
      const Rational drift = dot(p.c, o.ray);
      return p.sense == Sense::Min ? drift < 0 : drift > 0;
    }
  }
  return false;
}

}  // namespace expord
