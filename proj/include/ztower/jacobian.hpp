#pragma once

// Laplacians, Picard/Jacobian groups and spanning-tree counts.

#include <cstdint>

#include "ztower/graph.hpp"
#include "ztower/intlinalg.hpp"

namespace ztower {

/// D - A, with loops contributing nothing. Rows and columns sum to zero.
IntMatrix laplacian(const Graph& g);

/// Spanning-tree count as the determinant of a principal minor of the
/// Laplacian; two different deleted vertices are compared. Throws
/// DisconnectedError for disconnected input.
BigInt kappa(const Graph& g);

/// Torsion part of coker(L). Throws DisconnectedError unless the free rank is 1.
AbelianGroup jacobian_invariants(const Graph& g);

/// coker(L): Z^(components) + Jac.
AbelianGroup picard_invariants(const Graph& g);

/// Largest k with p^k | x. Throws std::domain_error for x = 0.
std::size_t ord_p(const BigInt& x, std::uint64_t p);

}  // namespace ztower
