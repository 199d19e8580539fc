#pragma once

// Sparse multivariate polynomials over Z. LaurentElement lives in the group ring
// Z[Z^d] (exponents of any sign, variables g_1..g_d); IwasawaPoly lives in
// Z[T_1..T_d] and is the image of a group-ring element under g_i -> 1 + T_i.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ztower/intlinalg.hpp"

namespace ztower {

using Exponents = std::vector<std::int64_t>;

class LaurentElement {
 public:
  using TermMap = std::map<Exponents, BigInt>;

  explicit LaurentElement(std::size_t d = 1) : d_(d) {}
  static LaurentElement constant(std::size_t d, const BigInt& c);
  static LaurentElement monomial(const Exponents& e, const BigInt& c = 1);

  std::size_t dim() const { return d_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  BigInt coefficient(const Exponents& e) const;

  void add_term(const Exponents& e, const BigInt& c);

  LaurentElement& operator+=(const LaurentElement& o);
  LaurentElement& operator-=(const LaurentElement& o);
  LaurentElement operator-() const;
  friend LaurentElement operator+(LaurentElement a, const LaurentElement& b) { return a += b; }
  friend LaurentElement operator-(LaurentElement a, const LaurentElement& b) { return a -= b; }
  friend LaurentElement operator*(const LaurentElement& a, const LaurentElement& b);
  bool operator==(const LaurentElement& o) const { return d_ == o.d_ && terms_ == o.terms_; }

  /// Multiplication by the monomial g^shift.
  LaurentElement shifted(const Exponents& shift) const;
  /// Quotient a / b when b divides a in Z[Z^d], nullopt otherwise.
  std::optional<LaurentElement> divide_exact(const LaurentElement& b) const;
  /// Componentwise minimum exponent over the support (zeros for the zero element).
  Exponents min_exponents() const;

  std::string to_string() const;

 private:
  void check_dim(const LaurentElement& o) const;
  std::size_t d_;
  TermMap terms_;
};

class IwasawaPoly {
 public:
  explicit IwasawaPoly(std::size_t d = 1) : body_(d) {}
  /// Throws std::invalid_argument on negative exponents.
  explicit IwasawaPoly(LaurentElement body);
  static IwasawaPoly constant(std::size_t d, const BigInt& c);
  /// T_i (0-based index).
  static IwasawaPoly variable(std::size_t d, std::size_t i);
  /// Parses "2*T^2 + 3", "T1*T2 - 4", "2". Variables are T (d = 1) or T1..Td.
  static IwasawaPoly parse(const std::string& text, std::size_t d);

  std::size_t dim() const { return body_.dim(); }
  const LaurentElement::TermMap& terms() const { return body_.terms(); }
  bool is_zero() const { return body_.is_zero(); }
  BigInt coefficient(const Exponents& e) const { return body_.coefficient(e); }
  BigInt constant_term() const;
  /// Highest total degree (0 for constants and for zero).
  std::int64_t total_degree() const;

  friend IwasawaPoly operator+(const IwasawaPoly& a, const IwasawaPoly& b) { return IwasawaPoly(a.body_ + b.body_); }
  friend IwasawaPoly operator-(const IwasawaPoly& a, const IwasawaPoly& b) { return IwasawaPoly(a.body_ - b.body_); }
  friend IwasawaPoly operator*(const IwasawaPoly& a, const IwasawaPoly& b) { return IwasawaPoly(a.body_ * b.body_); }
  bool operator==(const IwasawaPoly& o) const { return body_ == o.body_; }

  std::optional<IwasawaPoly> divide_exact(const IwasawaPoly& b) const;
  /// gcd of the coefficients (0 for the zero polynomial), always >= 0.
  BigInt content() const;
  IwasawaPoly scaled_down(const BigInt& c) const;
  /// Inverse of from_group_ring: substitutes T_i = g_i - 1.
  LaurentElement to_group_ring() const;
  /// Substitutes g_i = 1 + T_i; x must have nonnegative exponents.
  static IwasawaPoly from_group_ring(const LaurentElement& x);

  /// Terms in ascending graded-lexicographic order.
  std::vector<std::pair<Exponents, BigInt>> grlex_terms() const;
  std::string to_string() const;

 private:
  LaurentElement body_;
};

/// Total-degree-then-lexicographic comparison of exponent vectors.
bool grlex_less(const Exponents& a, const Exponents& b);

}  // namespace ztower
