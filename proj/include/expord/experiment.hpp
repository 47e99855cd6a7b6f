#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "expord/lp.hpp"
#include "expord/matrix.hpp"

namespace expord {

/// Default cap on subset-sum enumeration (2^M points).
inline constexpr std::size_t kRealizationCap = 20;

/// A finite experiment: an N x M row-stochastic matrix. Row n is a state,
/// column m a realization, entry (n, m) the conditional probability of
/// realization m in state n.
struct Experiment {
  RatMatrix matrix;
  std::vector<std::string> labels;  // optional realization names

  std::size_t states() const { return matrix.rows(); }
  std::size_t realizations() const { return matrix.cols(); }
};

/// Checks non-negativity and unit row sums. Error indices are 1-based.
inline Experiment validate_experiment(RatMatrix matrix,
                                      std::vector<std::string> labels = {}) {
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    Rational sum = 0;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (matrix(i, j) < 0) throw NegativeEntry(i + 1, j + 1);
      sum += matrix(i, j);
    }
    if (sum != 1) throw RowSumNotOne(i + 1, render(sum));
  }
  if (!labels.empty() && labels.size() != matrix.cols())
    throw DimensionMismatch("label count differs from realization count");
  return Experiment{std::move(matrix), std::move(labels)};
}

struct Prior {
  RatVector mu;
};

inline Prior validate_prior(RatVector mu) {
  Rational sum = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] < 0) throw NegativeEntry(i + 1, 1);
    sum += mu[i];
  }
  if (sum != 1) throw RowSumNotOne(1, render(sum));
  return Prior{std::move(mu)};
}

inline bool is_interior(const Prior& p) {
  for (const auto& v : p.mu)
    if (v == 0) return false;
  return true;
}

struct PosteriorAtom {
  RatVector posterior;
  Rational weight;
};

/// Induced distribution of posteriors. One atom per realization with a
/// positive marginal; atoms are deliberately not merged when two
/// realizations induce the same posterior, so column indexing survives.
struct PosteriorDistribution {
  std::vector<PosteriorAtom> atoms;
  std::vector<std::size_t> dropped_realizations;  // 1-based, zero marginal
};

/// Bayes' rule: posterior_m(n) = mu0(n) E(n,m) / sum_n' mu0(n') E(n',m).
inline PosteriorDistribution posteriors(const Experiment& e, const Prior& mu0) {
  if (mu0.mu.size() != e.states()) throw DimensionMismatch("prior length");
  PosteriorDistribution out;
  for (std::size_t m = 0; m < e.realizations(); ++m) {
    Rational marginal = 0;
    for (std::size_t n = 0; n < e.states(); ++n) marginal += mu0.mu[n] * e.matrix(n, m);
    if (marginal == 0) {
      out.dropped_realizations.push_back(m + 1);
      continue;
    }
    RatVector post(e.states());
    for (std::size_t n = 0; n < e.states(); ++n)
      post[n] = mu0.mu[n] * e.matrix(n, m) / marginal;
    out.atoms.push_back({std::move(post), marginal});
  }
  return out;
}

/// Exact value of max { beta . A v : 0 <= v <= 1 }, the zonotope support
/// function. The maximization separates across columns.
inline Rational support_function(const RatMatrix& a, const RatVector& beta) {
  if (beta.size() != a.rows()) throw DimensionMismatch("support direction length");
  const RatVector ba = vec_times(beta, a);
  Rational s = 0;
  for (const auto& v : ba)
    if (v > 0) s += v;
  return s;
}

inline Rational support_function(const Experiment& e, const RatVector& beta) {
  return support_function(e.matrix, beta);
}

/// All subset sums {A v : v in {0,1}^M} with duplicates removed -- a superset
/// of the vertex set of Zon A that contains every vertex. No hull pruning:
/// membership checks are point-wise, so a superset is enough.
/// Returned points are paired with a representative subset bitmask (lowest
/// mask first, so the empty set represents the origin).
struct SubsetSum {
  std::uint32_t mask;
  RatVector point;
};

inline std::vector<SubsetSum> subset_sums(const RatMatrix& a,
                                          std::size_t cap = kRealizationCap) {
  const std::size_t m = a.cols();
  if (m > cap || m > 30) throw TooManyRealizations(m, std::min<std::size_t>(cap, 30));
  std::map<RatVector, std::uint32_t> seen;
  RatVector zero(a.rows(), Rational(0));
  seen.emplace(zero, 0u);
  // Gray-code walk keeps each step a single column add/subtract.
  RatVector current = zero;
  std::uint32_t prev_gray = 0;
  for (std::uint32_t i = 1; i < (1u << m); ++i) {
    const std::uint32_t gray = i ^ (i >> 1);
    const std::uint32_t diff = gray ^ prev_gray;
    std::size_t bit = 0;
    while (!((diff >> bit) & 1u)) ++bit;
    const bool added = (gray >> bit) & 1u;
    for (std::size_t n = 0; n < a.rows(); ++n)
      current[n] += added ? a(n, bit) : Rational(-a(n, bit));
    prev_gray = gray;
    auto it = seen.find(current);
    if (it == seen.end())
      seen.emplace(current, gray);
    else if (gray < it->second)
      it->second = gray;
  }
  std::vector<SubsetSum> out;
  out.reserve(seen.size());
  for (const auto& [point, mask] : seen) out.push_back({mask, point});
  return out;
}

inline std::vector<RatVector> zonotope_vertices(const Experiment& e,
                                                std::size_t cap = kRealizationCap) {
  std::vector<RatVector> out;
  for (auto& s : subset_sums(e.matrix, cap)) out.push_back(std::move(s.point));
  return out;
}

/// Prior-weighted matrix (mu0 ⊙ E)(n, m) = mu0(n) E(n, m).
inline RatMatrix weighted_experiment(const Experiment& e, const Prior& mu0) {
  if (mu0.mu.size() != e.states()) throw DimensionMismatch("prior length");
  RatMatrix w(e.states(), e.realizations());
  for (std::size_t n = 0; n < e.states(); ++n)
    for (std::size_t m = 0; m < e.realizations(); ++m)
      w(n, m) = mu0.mu[n] * e.matrix(n, m);
  return w;
}

}  // namespace expord
