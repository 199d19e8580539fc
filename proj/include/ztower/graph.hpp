#pragma once

// Finite multigraphs with paired darts. Every undirected edge is stored as two
// darts 2k and 2k+1 that are each other's partner; loops are dart pairs whose
// endpoints coincide.

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ztower {

using VertexId = std::size_t;
using DartId = std::size_t;

struct Dart {
  VertexId origin = 0;
  VertexId terminus = 0;
  DartId partner = 0;
  bool operator==(const Dart&) const = default;
};

class Graph {
 public:
  VertexId add_vertex(std::string name);
  /// Adds the pair (e, ē) and returns e. The reverse dart is named `name + "~"`.
  DartId add_edge(VertexId from, VertexId to, std::string name);

  /// Builds a graph from raw parts without validation (used to exercise validate()).
  static Graph from_raw(std::vector<std::string> vertex_names, std::vector<Dart> darts,
                        std::vector<std::string> dart_names = {});

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t dart_count() const { return darts_.size(); }
  std::size_t edge_count() const { return darts_.size() / 2; }

  const Dart& dart(DartId e) const { return darts_.at(e); }
  const std::vector<Dart>& darts() const { return darts_; }
  DartId partner(DartId e) const { return darts_.at(e).partner; }
  VertexId origin(DartId e) const { return darts_.at(e).origin; }
  VertexId terminus(DartId e) const { return darts_.at(e).terminus; }
  const std::vector<DartId>& outgoing(VertexId v) const { return outgoing_.at(v); }

  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
  const std::string& dart_name(DartId e) const { return dart_names_.at(e); }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  std::optional<VertexId> find_vertex(const std::string& name) const;
  std::optional<DartId> find_dart(const std::string& name) const;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<std::string> dart_names_;
  std::vector<Dart> darts_;
  std::vector<std::vector<DartId>> outgoing_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, DartId> dart_index_;
};

/// nullopt when all axioms hold, otherwise a description of the first violation.
std::optional<std::string> validate(const Graph& g);

bool is_connected(const Graph& g);

/// Outgoing dart count; a loop contributes 2. Throws std::out_of_range for unknown v.
std::size_t degree(const Graph& g, VertexId v);
std::size_t loop_count(const Graph& g, VertexId v);

struct GraphMorphism {
  std::vector<VertexId> vertex_map;
  std::vector<DartId> dart_map;
  bool operator==(const GraphMorphism&) const = default;
};

/// nullopt if f is a morphism from `src` to `dst`.
std::optional<std::string> check_morphism(const Graph& src, const Graph& dst, const GraphMorphism& f);
GraphMorphism identity_morphism(const Graph& g);
/// g after f.
GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f);

struct Quotient {
  Graph graph;
  GraphMorphism morphism;
};

/// Merges vertices with equal class ids. Quotient vertices are ordered by first
/// appearance and named after their members joined with '|'. Darts keep their ids.
Quotient quotient_vertices(const Graph& g, const std::vector<std::size_t>& class_of);

}  // namespace ztower
