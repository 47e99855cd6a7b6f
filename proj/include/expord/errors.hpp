#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace expord {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Text does not parse as "p/q" or a finite decimal.
class MalformedNumber : public Error {
 public:
  explicit MalformedNumber(const std::string& text)
      : Error("malformed number: \"" + text + "\""), text(text) {}
  std::string text;
};

/// "p/0" was supplied.
class ZeroDenominator : public Error {
 public:
  explicit ZeroDenominator(const std::string& text)
      : Error("zero denominator in \"" + text + "\""), text(text) {}
  std::string text;
};

/// Operand shapes do not line up.
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// An LpProblem violates its own invariants (inconsistent sizes, lower > upper).
class InvalidProblem : public Error {
 public:
  explicit InvalidProblem(const std::string& what) : Error(what) {}
};

/// Matrix entry (row, col) is negative where a stochastic matrix was required.
/// Indices are 1-based.
class NegativeEntry : public Error {
 public:
  NegativeEntry(std::size_t row, std::size_t col)
      : Error("negative entry at (" + std::to_string(row) + ", " +
              std::to_string(col) + ")"),
        row(row),
        col(col) {}
  std::size_t row, col;
};

/// A row of the matrix does not sum to one. 1-based row index.
class RowSumNotOne : public Error {
 public:
  RowSumNotOne(std::size_t row, const std::string& sum)
      : Error("row " + std::to_string(row) + " sums to " + sum + ", not 1"),
        row(row),
        sum(sum) {}
  std::size_t row;
  std::string sum;
};

/// Two experiments being compared have different numbers of states.
class StateCountMismatch : public Error {
 public:
  StateCountMismatch(std::size_t a, std::size_t b)
      : Error("state counts differ: " + std::to_string(a) + " vs " +
              std::to_string(b)) {}
};

/// Subset-sum enumeration was asked for more realizations than the cap allows.
class TooManyRealizations : public Error {
 public:
  TooManyRealizations(std::size_t m, std::size_t cap)
      : Error("experiment has " + std::to_string(m) +
              " realizations, cap is " + std::to_string(cap)) {}
};

/// A prior required to be strictly interior has a zero entry.
class NonInteriorPrior : public Error {
 public:
  explicit NonInteriorPrior(std::size_t state)
      : Error("prior puts zero mass on state " + std::to_string(state)),
        state(state) {}
  std::size_t state;
};

/// Oracle input exceeds the brute-force dimension caps.
class DimensionCap : public Error {
 public:
  explicit DimensionCap(const std::string& what) : Error(what) {}
};

/// construct_counterexample was called on a pair where the order holds.
class OrderActuallyHolds : public Error {
 public:
  OrderActuallyHolds() : Error("dominance holds; no counterexample exists") {}
};

/// A piecewise-linear utility specification violates its invariants.
class InvalidUtility : public Error {
 public:
  explicit InvalidUtility(const std::string& what) : Error(what) {}
};

}  // namespace expord
