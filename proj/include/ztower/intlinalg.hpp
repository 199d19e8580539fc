#pragma once

// Exact integer linear algebra over arbitrary-precision integers: Hermite and
// Smith normal forms, fraction-free determinants, integer solving and
// cokernels of integer matrices.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ztower {

using BigInt = mpz_class;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<BigInt> multiply(std::span<const BigInt> x) const;
  IntMatrix transpose() const;
  /// Copy with row `r` and column `c` removed.
  IntMatrix minor_matrix(std::size_t r, std::size_t c) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  bool operator==(const IntMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Finitely generated abelian group  Z^free_rank  (+)  Z/d_1 (+) ... (+) Z/d_k
/// with d_1 | d_2 | ... | d_k and every d_i >= 2.
struct AbelianGroup {
  std::vector<BigInt> invariant_factors;
  std::size_t free_rank = 0;

  /// Product of the invariant factors (1 for the trivial torsion part).
  BigInt torsion_order() const;
  bool is_valid() const;
  std::string to_string() const;
  bool operator==(const AbelianGroup& other) const = default;
};

/// Row-style Hermite normal form: nonzero rows first, pivots strictly
/// increasing in column, pivots positive, entries above a pivot reduced into
/// [0, pivot). Zero rows are dropped.
IntMatrix hermite_normal_form(IntMatrix m);

/// Diagonal of the Smith normal form (length min(rows, cols)), d_1 | d_2 | ...,
/// including units and zeros.
std::vector<BigInt> smith_normal_form(IntMatrix m);

/// Fraction-free (Bareiss) elimination. Throws std::invalid_argument if not square.
BigInt determinant(const IntMatrix& m);

/// Multi-modular determinant: elimination modulo word-sized primes up to the
/// Hadamard bound, then CRT with a symmetric lift.
BigInt determinant_modular(const IntMatrix& m);

/// Some integer x with m * x = b, or nullopt when no integer solution exists.
/// Throws std::invalid_argument on dimension mismatch.
std::optional<std::vector<BigInt>> solve_integer(const IntMatrix& m, std::span<const BigInt> b);

/// Structure of Z^rows / (column span of m).
AbelianGroup cokernel(const IntMatrix& m);

}  // namespace ztower
