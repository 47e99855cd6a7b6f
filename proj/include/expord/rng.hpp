#pragma once

#include <cstdint>
#include <vector>

#include "expord/matrix.hpp"

namespace expord {

/// splitmix64 stream. Randomized checks derive one stream per (seed, index)
/// so results are byte-for-byte reproducible regardless of scheduling, and
/// independent of any standard-library distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  long int_in(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return next() & 1; }

  /// Small rational with numerator in [-max_num, max_num], denominator in [1, max_den].
  Rational small_rational(long max_num, long max_den) {
    return rat(int_in(-max_num, max_num), int_in(1, max_den));
  }

  Rational nonneg_rational(long max_num, long max_den) {
    return rat(int_in(0, max_num), int_in(1, max_den));
  }

 private:
  std::uint64_t state_;
};

namespace gen {

/// Random row-stochastic matrix: small integer weights per row, normalized.
inline RatMatrix random_stochastic(Rng& rng, std::size_t rows, std::size_t cols) {
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<long> w(cols);
    long total = 0;
    while (total == 0) {
      total = 0;
      for (std::size_t j = 0; j < cols; ++j) {
        w[j] = rng.int_in(0, 4);
        total += w[j];
      }
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rat(w[j], total);
  }
  return m;
}

/// Strictly interior distribution over n states.
inline RatVector random_interior_prior(Rng& rng, std::size_t n) {
  std::vector<long> w(n);
  long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = rng.int_in(1, 5);
    total += w[i];
  }
  RatVector mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = rat(w[i], total);
  return mu;
}

/// Distribution that may sit on the boundary of the simplex.
inline RatVector random_prior(Rng& rng, std::size_t n) {
  std::vector<long> w(n);
  long total = 0;
  while (total == 0) {
    total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = rng.int_in(0, 4);
      total += w[i];
    }
  }
  RatVector mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = rat(w[i], total);
  return mu;
}

inline RatVector random_vector(Rng& rng, std::size_t n, long max_num, long max_den) {
  RatVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.small_rational(max_num, max_den);
  return v;
}

/// Nonzero integer direction with entries in [-3, 3].
inline RatVector random_direction(Rng& rng, std::size_t n) {
  RatVector beta(n);
  bool nonzero = false;
  while (!nonzero) {
    for (std::size_t i = 0; i < n; ++i) {
      beta[i] = rat(rng.int_in(-3, 3));
      if (beta[i] != 0) nonzero = true;
    }
  }
  return beta;
}

}  // namespace gen
}  // namespace expord
