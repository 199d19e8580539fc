#pragma once

// Voltage and inertia data over G = Z_p^d and the finite layers X_n of the
// derived graph: vertices (v, g + I_v) with g in (Z/p^n)^d, darts (e, g).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ztower/graph.hpp"
#include "ztower/intlinalg.hpp"
#include "ztower/laurent.hpp"

namespace ztower {

bool is_prime(std::uint64_t p);

struct GroupSpec {
  std::uint64_t p = 2;
  std::size_t d = 1;

  /// Throws std::invalid_argument unless p is prime and d >= 1.
  static GroupSpec make(std::uint64_t p, std::size_t d);
  /// p^n as a machine integer; throws GuardrailError when it does not fit.
  std::int64_t modulus(int n) const;
  /// |G_n| = p^(n d).
  BigInt layer_order(int n) const;
  bool operator==(const GroupSpec&) const = default;
};

struct TowerSpec {
  Graph base;
  GroupSpec group;
  /// Indexed by base dart id; voltage[partner(e)] = -voltage[e].
  std::vector<Exponents> voltage;
  /// Indexed by base vertex id; empty list means unramified.
  std::vector<std::vector<Exponents>> inertia;

  bool ramified(VertexId v) const;
  /// Same spec with every inertia group made trivial.
  TowerSpec unramified() const;
};

/// nullopt when the spec is well formed (graph axioms, connectivity, lengths,
/// voltage antisymmetry), otherwise the first problem found.
std::optional<std::string> check_tower_spec(const TowerSpec& spec);

/// Componentwise residues in [0, p^n).
Exponents reduce(const Exponents& g, const GroupSpec& group, int n);

/// Order of reduce(s, n) in (Z/p^n)^d.
BigInt element_order_in_layer(const Exponents& s, const GroupSpec& group, int n);

/// Image of <gens> in (Z/p^n)^d, stored as the row Hermite basis of the lattice
/// L = span(gens) + p^n Z^d.
struct SubgroupImage {
  GroupSpec group;
  int level = 0;
  std::int64_t modulus = 1;
  IntMatrix basis;  // d x d upper triangular, pivots divide modulus
  BigInt order;
  BigInt coset_count;

  /// Lexicographically smallest lift in [0, p^n)^d of the coset g + L.
  Exponents canonical(const Exponents& g) const;
  /// Position of a canonical representative in coset_representatives().
  std::size_t coset_index(const Exponents& canonical_rep) const;
  /// All canonical representatives, lexicographic order.
  std::vector<Exponents> coset_representatives() const;
  /// Elements of the subgroup lifted to [0, p^n)^d, lexicographic order.
  std::vector<Exponents> elements() const;
};

/// Throws std::invalid_argument when a generator has the wrong length.
SubgroupImage inertia_image(const std::vector<Exponents>& gens, const GroupSpec& group, int n);

/// Rank of the generator matrix over Q.
std::size_t inertia_rank(const std::vector<Exponents>& gens, std::size_t d);
/// p-rank of the image of <gens> in (Z/p^n)^d.
std::size_t image_p_rank(const std::vector<Exponents>& gens, const GroupSpec& group, int n);
/// Smallest n at which image_p_rank reaches inertia_rank.
int stabilization_level(const std::vector<Exponents>& gens, const GroupSpec& group);
/// Maximum stabilization level over all vertices of the spec.
int stabilization_level(const TowerSpec& spec);

/// Sum of the elements of the image of <gens> in G_n, as a group-ring element.
/// Throws std::invalid_argument below the stabilization level.
LaurentElement omega_norm(const std::vector<Exponents>& gens, const GroupSpec& group, int n);

struct LayerGraph {
  Graph graph;
  int level = 0;
  GroupSpec group;
  std::int64_t modulus = 1;
  std::size_t sheets = 1;                // p^(nd)
  std::vector<Exponents> base_voltage;   // per base dart
  std::vector<SubgroupImage> images;     // per base vertex
  std::vector<VertexId> vertex_offset;   // first layer vertex over each base vertex
  std::vector<VertexId> vertex_base;
  std::vector<Exponents> vertex_rep;
  std::vector<DartId> dart_base;
  std::vector<Exponents> dart_group;

  /// Layer vertex (v, g + I_v) for any g in Z^d.
  VertexId vertex_at(VertexId v, const Exponents& g) const;
  /// Layer dart (e, g) for any g in Z^d.
  DartId dart_at(DartId e, const Exponents& g) const;
  std::size_t group_index(const Exponents& reduced) const;
};

/// Throws GuardrailError when p^(nd) * |darts| exceeds max_darts.
LayerGraph build_layer(const TowerSpec& spec, int n, std::size_t max_darts = 20'000'000);

/// Covering projection X_hi -> X_lo (requires hi.level >= lo.level, same spec).
GraphMorphism projection(const TowerSpec& spec, const LayerGraph& hi, const LayerGraph& lo);
GraphMorphism projection(const TowerSpec& spec, int n_hi, int n_lo);

/// Action of g: (v, h + I) -> (v, g + h + I), (e, h) -> (e, g + h).
GraphMorphism galois_act(const LayerGraph& layer, const Exponents& g);

/// Sum over base vertices of the coset counts [G_n : I_{v,n}], without building.
/// Throws std::invalid_argument below the stabilization level.
BigInt vertex_count(const TowerSpec& spec, int n);
/// v_r + |G_n|/|G_{n0}| v_u with n0 the stabilization level. Only valid when
/// every ramified inertia group has full rank; nullopt otherwise.
std::optional<BigInt> closed_form_vertex_count(const TowerSpec& spec, int n);

bool is_connected_layer(const TowerSpec& spec, int n);

struct Immersion {
  LayerGraph unramified;
  LayerGraph ramified;
  Quotient quotient;
  /// Quotient vertex -> ramified layer vertex.
  std::vector<VertexId> label_match;
  GraphMorphism morphism;  // unramified layer -> ramified layer
};

/// Contraction of the unramified layer onto the ramified one.
Immersion immersion_push(const TowerSpec& spec, int n);

/// Canonical coordinate formatting: "[1]" or "[1,0]".
std::string format_exponents(const Exponents& e);

}  // namespace ztower
