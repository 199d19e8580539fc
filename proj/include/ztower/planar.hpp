#pragma once

// Rotation systems, face tracing, duals, the sheet-by-sheet embedding of
// derived graphs, branched-cover checks and the Jac(X) ~ Jac(X^dual) map.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ztower/graph.hpp"
#include "ztower/intlinalg.hpp"
#include "ztower/tower.hpp"

namespace ztower {

/// Cyclic order of the outgoing darts at each vertex.
using RotationSystem = std::vector<std::vector<DartId>>;

struct Embedding {
  Graph graph;
  RotationSystem rotation;
};

/// nullopt when every vertex's rotation is a permutation of its outgoing darts.
std::optional<std::string> check_embedding(const Embedding& e);

struct Faces {
  std::vector<std::vector<DartId>> faces;  // each starts at its smallest dart
  std::vector<std::size_t> face_of_dart;
};

/// Successor of e is the rotation successor of partner(e) at its origin.
Faces trace_faces(const Embedding& e);

/// V - E + F. Throws DisconnectedError for disconnected graphs.
std::int64_t euler_characteristic(const Embedding& e);
bool is_planar_embedding(const Embedding& e);

struct DualResult {
  Embedding embedding;  // vertices are faces of the primal, darts keep their ids
  Faces primal_faces;
};

/// Dual dart e* runs from face(e) to face(partner(e)); the rotation at a face is
/// its boundary walk. Throws NonPlanarError unless chi = 2.
DualResult dual(const Embedding& e);

/// Primal vertex -> vertex of dual(dual(e)); nullopt unless it is an isomorphism
/// that is the identity on darts.
std::optional<GraphMorphism> double_dual_isomorphism(const Embedding& e);

enum class EmbeddingStyle {
  bundle,  // lifts at a ramified vertex grouped per base dart, pinch as fallback
  pinch,   // unramified lift, then fibres spliced along a common face
};

struct DerivedEmbedding {
  LayerGraph layer;
  Embedding embedding;
  EmbeddingStyle style_used = EmbeddingStyle::bundle;
};

/// Base dart pair carrying the only nonzero voltage, or nullopt if there is none.
/// Throws std::invalid_argument when more than one undirected edge carries voltage.
std::optional<DartId> voltage_edge(const TowerSpec& spec);

/// Embedding of X_n with chi = 2. Requires a single voltage-carrying edge lying
/// on the designated outer face of the (planar) base embedding. Throws
/// std::invalid_argument on violated preconditions and NonPlanarError when no
/// planar rotation is found.
DerivedEmbedding derived_embedding(const TowerSpec& spec, const Embedding& base, std::size_t outer_face, int n,
                                   EmbeddingStyle style = EmbeddingStyle::bundle);

struct BranchedCover {
  bool ok = false;
  std::string failure;
  std::vector<std::size_t> ramification;  // m_v per vertex of Y
  std::size_t sheets = 0;
};

BranchedCover check_branched_cover(const Graph& y, const Graph& x, const GraphMorphism& f);

struct DualLevel {
  int n = 0;
  std::size_t dual_vertices = 0;
  std::size_t dual_edges = 0;
  bool cover = false;
  bool galois = false;
  std::size_t ramified_primal = 0;
  std::size_t ramified_dual = 0;
  std::size_t sheets = 0;
};

struct DualTowerReport {
  bool pass = true;
  int failed_level = -1;
  char failed_check = 0;  // 'a', 'b' or 'c'
  std::string witness;
  std::vector<DualLevel> levels;
};

DualTowerReport dual_tower_check(const TowerSpec& spec, const Embedding& base, std::size_t outer_face, int n_max,
                                 EmbeddingStyle style = EmbeddingStyle::bundle);

/// Face map of a layer embedding onto the base embedding's faces: the dual
/// morphism, or a witness when some face spans two base faces.
struct DualProjection {
  std::optional<GraphMorphism> morphism;
  std::string witness;
};
DualProjection dual_projection(const DerivedEmbedding& upper, const Faces& upper_faces,
                               const DerivedEmbedding& lower, const Faces& lower_faces);

using Divisor = std::vector<BigInt>;
using DartAssignment = std::vector<BigInt>;

/// Throws std::invalid_argument unless phi(partner e) = -phi(e).
Divisor boundary(const Graph& g, const DartAssignment& phi);
Divisor coboundary(const Faces& faces, const DartAssignment& phi);

/// Solves boundary(phi) = u and returns coboundary(phi). Throws std::logic_error
/// when the system has no solution.
Divisor theta(const Embedding& e, const Faces& faces, const Divisor& u);

/// Order of the class of a degree-0 divisor in Jac(g).
BigInt class_order(const Graph& g, const Divisor& u);
/// True iff u lies in the column span of the Laplacian of g.
bool is_principal(const Graph& g, const Divisor& u);

struct JacDuality {
  bool pass = false;
  AbelianGroup primal;
  AbelianGroup dual;
  BigInt kappa_primal;
  BigInt kappa_dual;
};
JacDuality jac_duality_check(const Embedding& e);

struct Equivariance {
  bool pass = false;
  std::size_t checked = 0;
  std::string witness;
};
/// For each generator g of G_n and each u = v_i - v_0: theta(g u) - g theta(u)
/// is principal on the dual.
Equivariance theta_equivariance_check(const DerivedEmbedding& de);

}  // namespace ztower
