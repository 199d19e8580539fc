#include "ztower/graph.hpp"

#include <map>
#include <stdexcept>

namespace ztower {

VertexId Graph::add_vertex(std::string name) {
  const VertexId id = vertex_names_.size();
  vertex_index_.emplace(name, id);
  vertex_names_.push_back(std::move(name));
  outgoing_.emplace_back();
  return id;
}

DartId Graph::add_edge(VertexId from, VertexId to, std::string name) {
  if (from >= vertex_count() || to >= vertex_count()) throw std::out_of_range("add_edge: unknown vertex");
  const DartId e = darts_.size();
  darts_.push_back({from, to, e + 1});
  darts_.push_back({to, from, e});
  dart_index_.emplace(name, e);
  dart_index_.emplace(name + "~", e + 1);
  dart_names_.push_back(name);
  dart_names_.push_back(name + "~");
  outgoing_[from].push_back(e);
  outgoing_[to].push_back(e + 1);
  return e;
}

Graph Graph::from_raw(std::vector<std::string> vertex_names, std::vector<Dart> darts,
                      std::vector<std::string> dart_names) {
  Graph g;
  for (auto& n : vertex_names) g.add_vertex(std::move(n));
  if (dart_names.empty())
    for (std::size_t i = 0; i < darts.size(); ++i) dart_names.push_back("d" + std::to_string(i));
  g.darts_ = std::move(darts);
  g.dart_names_ = std::move(dart_names);
  for (DartId e = 0; e < g.darts_.size(); ++e) {
    g.dart_index_.emplace(g.dart_names_[e], e);
    if (g.darts_[e].origin < g.vertex_count()) g.outgoing_[g.darts_[e].origin].push_back(e);
  }
  return g;
}

std::optional<VertexId> Graph::find_vertex(const std::string& name) const {
  auto it = vertex_index_.find(name);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<DartId> Graph::find_dart(const std::string& name) const {
  auto it = dart_index_.find(name);
  if (it == dart_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> validate(const Graph& g) {
  const auto& darts = g.darts();
  if (darts.size() % 2 != 0) return "odd dart count";
  for (DartId e = 0; e < darts.size(); ++e) {
    const Dart& d = darts[e];
    const std::string where = " at dart " + std::to_string(e);
    if (d.origin >= g.vertex_count() || d.terminus >= g.vertex_count()) return "undeclared vertex" + where;
    if (d.partner >= darts.size()) return "partner out of range" + where;
    if (d.partner == e) return "involution fixed point" + where;
    const Dart& q = darts[d.partner];
    if (q.partner != e) return "partner is not an involution" + where;
    if (q.origin != d.terminus || q.terminus != d.origin) return "partner endpoints mismatch" + where;
  }
  return std::nullopt;
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (DartId e : g.outgoing(v)) {
      const VertexId w = g.terminus(e);
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

std::size_t degree(const Graph& g, VertexId v) {
  if (v >= g.vertex_count()) throw std::out_of_range("degree: unknown vertex " + std::to_string(v));
  return g.outgoing(v).size();
}

std::size_t loop_count(const Graph& g, VertexId v) {
  std::size_t loops = 0;
  for (DartId e : g.outgoing(v))
    if (g.terminus(e) == v) ++loops;
  return loops / 2;
}

std::optional<std::string> check_morphism(const Graph& src, const Graph& dst, const GraphMorphism& f) {
  if (f.vertex_map.size() != src.vertex_count()) return "vertex map has wrong size";
  if (f.dart_map.size() != src.dart_count()) return "dart map has wrong size";
  for (VertexId v = 0; v < src.vertex_count(); ++v)
    if (f.vertex_map[v] >= dst.vertex_count()) return "vertex " + src.vertex_name(v) + " maps out of range";
  for (DartId e = 0; e < src.dart_count(); ++e) {
    const DartId fe = f.dart_map[e];
    if (fe >= dst.dart_count()) return "dart " + src.dart_name(e) + " maps out of range";
    if (f.vertex_map[src.origin(e)] != dst.origin(fe)) return "origin not preserved at " + src.dart_name(e);
    if (f.vertex_map[src.terminus(e)] != dst.terminus(fe)) return "terminus not preserved at " + src.dart_name(e);
    if (f.dart_map[src.partner(e)] != dst.partner(fe)) return "inversion not preserved at " + src.dart_name(e);
  }
  return std::nullopt;
}

GraphMorphism identity_morphism(const Graph& g) {
  GraphMorphism f;
  for (VertexId v = 0; v < g.vertex_count(); ++v) f.vertex_map.push_back(v);
  for (DartId e = 0; e < g.dart_count(); ++e) f.dart_map.push_back(e);
  return f;
}

GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f) {
  GraphMorphism h;
  h.vertex_map.reserve(f.vertex_map.size());
  for (VertexId v : f.vertex_map) h.vertex_map.push_back(g.vertex_map.at(v));
  h.dart_map.reserve(f.dart_map.size());
  for (DartId e : f.dart_map) h.dart_map.push_back(g.dart_map.at(e));
  return h;
}

Quotient quotient_vertices(const Graph& g, const std::vector<std::size_t>& class_of) {
  if (class_of.size() != g.vertex_count()) throw std::invalid_argument("quotient_vertices: partition is not total");
  std::map<std::size_t, VertexId> index;
  std::vector<std::string> names;
  Quotient q;
  q.morphism.vertex_map.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto [it, fresh] = index.emplace(class_of[v], names.size());
    if (fresh)
      names.push_back(g.vertex_name(v));
    else
      names[it->second] += "|" + g.vertex_name(v);
    q.morphism.vertex_map[v] = it->second;
  }
  std::vector<Dart> darts = g.darts();
  for (auto& d : darts) {
    d.origin = q.morphism.vertex_map[d.origin];
    d.terminus = q.morphism.vertex_map[d.terminus];
  }
  std::vector<std::string> dart_names;
  for (DartId e = 0; e < g.dart_count(); ++e) dart_names.push_back(g.dart_name(e));
  q.graph = Graph::from_raw(std::move(names), std::move(darts), std::move(dart_names));
  q.morphism.dart_map = identity_morphism(g).dart_map;
  return q;
}

}  // namespace ztower
