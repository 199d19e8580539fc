#pragma once

// The matrices D and B over the group ring, the characteristic element
// det(D - B) and its mu/lambda invariants.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ztower/laurent.hpp"
#include "ztower/tower.hpp"

namespace ztower {

using LaurentMatrix = std::vector<std::vector<LaurentElement>>;

/// Unramified vertices first, then ramified ones, each in input order.
struct VertexOrder {
  std::vector<VertexId> order;
  std::size_t unramified = 0;
};
VertexOrder char_vertex_order(const TowerSpec& spec);

/// Topological generator of a rank-one inertia group: the primitive direction
/// scaled by the p-part of the generators' common multiple, first nonzero entry
/// positive.
Exponents canonical_sigma(const std::vector<Exponents>& gens, const GroupSpec& group);

LaurentMatrix matrix_D(const TowerSpec& spec);
LaurentMatrix matrix_B(const TowerSpec& spec);
LaurentMatrix subtract(const LaurentMatrix& a, const LaurentMatrix& b);

LaurentElement det_cofactor(const LaurentMatrix& m);
LaurentElement det_bareiss(const LaurentMatrix& m);
/// Cofactor expansion up to 6x6, fraction-free elimination above.
LaurentElement det_laurent(const LaurentMatrix& m);

struct ClearedPoly {
  IwasawaPoly poly;
  Exponents clearing;  // x * g^clearing has nonnegative exponents, minimal per variable
};
ClearedPoly to_poly(const LaurentElement& x);

struct MuLambda {
  std::size_t mu = 0;
  std::size_t lambda = 0;
  bool operator==(const MuLambda&) const = default;
};
/// Throws std::domain_error for the zero polynomial.
MuLambda mu_lambda(const IwasawaPoly& f, std::uint64_t p);

struct CharElement {
  IwasawaPoly poly;
  Exponents clearing;
  std::size_t mu = 0;
  std::size_t lambda = 0;
  std::vector<std::string> warnings;
};

/// Throws NonTorsionError when det(D - B) vanishes.
CharElement char_element(const TowerSpec& spec);
/// d = 1: divides by T (std::domain_error if impossible); d >= 2: unchanged.
CharElement char_of_jacobian(const CharElement& c, std::size_t d, std::uint64_t p);
CharElement make_char(const IwasawaPoly& poly, std::uint64_t p);

/// a = u b for a unit u of Z_p[[T_1..T_d]]. Decided by equal (mu, lambda), then
/// after removing (1+T_i) factors, integer content and common monomials, by
/// power-series division truncated at total degree 2 max(deg a, deg b): the
/// quotient must be p-integral with a unit constant term. If neither side has
/// a constant term the quotient must be an exact polynomial with a unit
/// constant term. A true answer at the truncation is not a proof for
/// non-polynomial units of high degree.
bool chars_equal_up_to_unit(const CharElement& a, const CharElement& b, std::uint64_t p);
bool chars_equal_up_to_unit(const IwasawaPoly& a, const IwasawaPoly& b, std::uint64_t p);

}  // namespace ztower
