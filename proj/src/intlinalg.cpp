#include "ztower/intlinalg.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace ztower {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
    for (long v : row) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<BigInt> IntMatrix::multiply(std::span<const BigInt> x) const {
  if (x.size() != cols_) throw std::invalid_argument("IntMatrix::multiply: dimension mismatch");
  std::vector<BigInt> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    BigInt acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      const BigInt& a = (*this)(r, c);
      if (a != 0 && x[c] != 0) mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), x[c].get_mpz_t());
    }
    out[r] = std::move(acc);
  }
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::minor_matrix(std::size_t skip_r, std::size_t skip_c) const {
  IntMatrix m(rows_ - 1, cols_ - 1);
  for (std::size_t r = 0, rr = 0; r < rows_; ++r) {
    if (r == skip_r) continue;
    for (std::size_t c = 0, cc = 0; c < cols_; ++c) {
      if (c == skip_c) continue;
      m(rr, cc++) = (*this)(r, c);
    }
    ++rr;
  }
  return m;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

BigInt AbelianGroup::torsion_order() const {
  BigInt order = 1;
  for (const auto& f : invariant_factors) order *= f;
  return order;
}

bool AbelianGroup::is_valid() const {
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
    if (invariant_factors[i] < 2) return false;
    if (i > 0 && invariant_factors[i] % invariant_factors[i - 1] != 0) return false;
  }
  return true;
}

std::string AbelianGroup::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& f : invariant_factors) {
    if (!first) os << " + ";
    os << "Z/" << f.get_str();
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// row[dst] -= q * row[src], restricted to columns >= from.
void row_submul(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q, std::size_t from = 0) {
  for (std::size_t c = from; c < m.cols(); ++c) {
    const BigInt& s = m(src, c);
    if (s != 0) mpz_submul(m(dst, c).get_mpz_t(), q.get_mpz_t(), s.get_mpz_t());
  }
}

void col_submul(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q, std::size_t from = 0) {
  for (std::size_t r = from; r < m.rows(); ++r) {
    const BigInt& s = m(r, src);
    if (s != 0) mpz_submul(m(r, dst).get_mpz_t(), q.get_mpz_t(), s.get_mpz_t());
  }
}

bool smaller_magnitude(const BigInt& a, const BigInt& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }

}  // namespace

IntMatrix hermite_normal_form(IntMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t r = pivot_row; r < rows; ++r) {
        if (m(r, c) == 0) continue;
        if (!best || smaller_magnitude(m(r, c), m(*best, c))) best = r;
      }
      if (!best) break;
      m.swap_rows(pivot_row, *best);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < rows; ++r) {
        if (m(r, c) == 0) continue;
        BigInt q = m(r, c) / m(pivot_row, c);
        row_submul(m, r, pivot_row, q, c);
        if (m(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (pivot_row >= rows || m(pivot_row, c) == 0) continue;
    if (m(pivot_row, c) < 0)
      for (std::size_t k = c; k < cols; ++k) m(pivot_row, k) = -m(pivot_row, k);
    for (std::size_t r = 0; r < pivot_row; ++r) {
      if (m(r, c) == 0) continue;
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), m(r, c).get_mpz_t(), m(pivot_row, c).get_mpz_t());
      if (q != 0) row_submul(m, r, pivot_row, q, c);
    }
    ++pivot_row;
  }
  IntMatrix out(pivot_row, cols);
  for (std::size_t r = 0; r < pivot_row; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(r, c);
  return out;
}

std::vector<BigInt> smith_normal_form(IntMatrix a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  const std::size_t k = std::min(rows, cols);
  std::vector<BigInt> diag(k);

  for (std::size_t t = 0; t < k; ++t) {
    // Smallest nonzero magnitude in the trailing block; ties go to the lowest
    // row, then the lowest column (scan order).
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t r = t; r < rows; ++r)
      for (std::size_t c = t; c < cols; ++c) {
        if (a(r, c) == 0) continue;
        if (!best || smaller_magnitude(a(r, c), a(best->first, best->second))) best = {r, c};
      }
    if (!best) break;
    a.swap_rows(t, best->first);
    a.swap_cols(t, best->second);

    while (true) {
      bool dirty = false;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (a(r, t) == 0) continue;
        BigInt q = a(r, t) / a(t, t);
        row_submul(a, r, t, q, t);
        if (a(r, t) != 0) dirty = true;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (a(t, c) == 0) continue;
        BigInt q = a(t, c) / a(t, t);
        col_submul(a, c, t, q, t);
        if (a(t, c) != 0) dirty = true;
      }
      if (dirty) {
        std::pair<std::size_t, std::size_t> pick{t, t};
        for (std::size_t c = t + 1; c < cols; ++c)
          if (a(t, c) != 0 && smaller_magnitude(a(t, c), a(pick.first, pick.second))) pick = {t, c};
        for (std::size_t r = t + 1; r < rows; ++r)
          if (a(r, t) != 0 && smaller_magnitude(a(r, t), a(pick.first, pick.second))) pick = {r, t};
        a.swap_rows(t, pick.first);
        a.swap_cols(t, pick.second);
        continue;
      }
      // Divisibility: fold an offending row into the pivot row and repeat.
      std::optional<std::size_t> offending;
      for (std::size_t r = t + 1; r < rows && !offending; ++r)
        for (std::size_t c = t + 1; c < cols; ++c)
          if (a(r, c) != 0 && !mpz_divisible_p(a(r, c).get_mpz_t(), a(t, t).get_mpz_t())) {
            offending = r;
            break;
          }
      if (!offending) break;
      for (std::size_t c = t; c < cols; ++c) a(t, c) += a(*offending, c);
    }
    diag[t] = abs(a(t, t));
  }
  return diag;
}

BigInt determinant(const IntMatrix& input) {
  if (!input.is_square()) throw std::invalid_argument("determinant: matrix is not square");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix m = input;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap_with = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (m(i, k) != 0) {
          swap_with = i;
          break;
        }
      if (swap_with == k) return 0;
      m.swap_rows(k, swap_with);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = m(i, j) * m(k, k);
        mpz_submul(v.get_mpz_t(), m(i, k).get_mpz_t(), m(k, j).get_mpz_t());
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 det_mod_prime(const IntMatrix& m, u64 p) {
  const std::size_t n = m.rows();
  std::vector<u64> a(n * n);
  BigInt pp = static_cast<unsigned long>(p);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      BigInt v;
      mpz_fdiv_r(v.get_mpz_t(), m(r, c).get_mpz_t(), pp.get_mpz_t());
      a[r * n + c] = v.get_ui();
    }
  u64 det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv * n + k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      det = (p - det) % p;
    }
    det = mulmod(det, a[k * n + k], p);
    const u64 inv = powmod(a[k * n + k], p - 2, p);
    for (std::size_t i = k + 1; i < n; ++i) {
      const u64 f = mulmod(a[i * n + k], inv, p);
      if (f == 0) continue;
      for (std::size_t j = k; j < n; ++j) {
        const u64 sub = mulmod(f, a[k * n + j], p);
        a[i * n + j] = (a[i * n + j] + p - sub) % p;
      }
    }
  }
  return det;
}

}  // namespace

BigInt determinant_modular(const IntMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("determinant_modular: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;

  // Hadamard: |det| <= prod_r ||row_r||_2.
  BigInt bound_sq = 1;
  for (std::size_t r = 0; r < n; ++r) {
    BigInt row = 0;
    for (std::size_t c = 0; c < n; ++c) row += m(r, c) * m(r, c);
    bound_sq *= row;
  }
  if (bound_sq == 0) return 0;
  BigInt bound;
  mpz_sqrt(bound.get_mpz_t(), bound_sq.get_mpz_t());
  bound += 1;
  const BigInt needed = 2 * bound + 1;

  BigInt modulus = 1;
  BigInt residue = 0;
  BigInt prime = BigInt(1) << 61;
  while (modulus < needed) {
    mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    const u64 p = prime.get_ui();
    const u64 r = det_mod_prime(m, p);
    // residue + modulus * t == r (mod p)
    BigInt diff = BigInt(static_cast<unsigned long>(r)) - residue;
    BigInt inv;
    BigInt pz = static_cast<unsigned long>(p);
    mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
    BigInt t = diff * inv;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), pz.get_mpz_t());
    residue += modulus * t;
    modulus *= pz;
  }
  if (residue > modulus / 2) residue -= modulus;
  return residue;
}

std::optional<std::vector<BigInt>> solve_integer(const IntMatrix& m, std::span<const BigInt> b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve_integer: dimension mismatch");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(cols);

  auto col_op = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    col_submul(h, dst, src, q);
    col_submul(u, dst, src, q);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    h.swap_cols(x, y);
    u.swap_cols(x, y);
  };

  // Column echelon form H = M U.
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  std::size_t next = 0;
  for (std::size_t r = 0; r < rows && next < cols; ++r) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t c = next; c < cols; ++c) {
        if (h(r, c) == 0) continue;
        if (!best || smaller_magnitude(h(r, c), h(r, *best))) best = c;
      }
      if (!best) break;
      col_swap(next, *best);
      bool done = true;
      for (std::size_t c = next + 1; c < cols; ++c) {
        if (h(r, c) == 0) continue;
        BigInt q = h(r, c) / h(r, next);
        col_op(c, next, q);
        if (h(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, next) != 0) {
      pivots.emplace_back(r, next);
      ++next;
    }
  }

  std::vector<BigInt> y(cols);
  std::size_t pivot_idx = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    BigInt s = b[r];
    for (std::size_t c = 0; c < next; ++c)
      if (h(r, c) != 0 && y[c] != 0) mpz_submul(s.get_mpz_t(), h(r, c).get_mpz_t(), y[c].get_mpz_t());
    if (pivot_idx < pivots.size() && pivots[pivot_idx].first == r) {
      const std::size_t c = pivots[pivot_idx].second;
      // y[c] is still zero here, so s already excludes the pivot term.
      if (!mpz_divisible_p(s.get_mpz_t(), h(r, c).get_mpz_t())) return std::nullopt;
      mpz_divexact(y[c].get_mpz_t(), s.get_mpz_t(), h(r, c).get_mpz_t());
      ++pivot_idx;
    } else if (s != 0) {
      return std::nullopt;
    }
  }

  std::vector<BigInt> x = u.multiply(y);
  const std::vector<BigInt> check = m.multiply(x);
  if (!std::equal(check.begin(), check.end(), b.begin()))
    throw std::logic_error("solve_integer: substitution check failed");
  return x;
}

AbelianGroup cokernel(const IntMatrix& m) {
  AbelianGroup g;
  const std::vector<BigInt> diag = smith_normal_form(m);
  std::size_t nonzero = 0;
  for (const auto& d : diag) {
    if (d == 0) continue;
    ++nonzero;
    if (d > 1) g.invariant_factors.push_back(d);
  }
  g.free_rank = m.rows() - nonzero;
  return g;
}

}  // namespace ztower
