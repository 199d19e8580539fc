#include "ztower/spec_io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ztower/errors.hpp"

namespace ztower {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw SpecError(path.empty() ? key : path + "." + key, "missing field");
  return obj.at(key);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SpecError(path, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw SpecError(path, "integer out of range");
  return j.get<std::int64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SpecError(path, "expected a string");
  std::string s = j.get<std::string>();
  if (s.empty()) throw SpecError(path, "empty name");
  return s;
}

Exponents as_vector(const json& j, std::size_t d, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected an integer vector");
  if (j.size() != d) throw SpecError(path, "expected length " + std::to_string(d) + ", got " + std::to_string(j.size()));
  Exponents v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_int(j[i], index(path, i)));
  return v;
}

}  // namespace

Embedding SpecFile::embedding() const {
  if (!rotation) throw SpecError("embedding", "spec has no embedding");
  return Embedding{spec.base, *rotation};
}

SpecFile parse_spec(const json& j) {
  if (!j.is_object()) throw SpecError("", "spec must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "p" && key != "d" && key != "vertices" && key != "edges" && key != "inertia" && key != "embedding")
      throw SpecError(key, "unknown field");

  const std::int64_t p = as_int(field(j, "p", ""), "p");
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw SpecError("p", "must be a prime");
  const std::int64_t d = j.contains("d") ? as_int(j.at("d"), "d") : 1;
  if (d < 1 || d > 8) throw SpecError("d", "must be between 1 and 8");

  SpecFile out;
  TowerSpec& spec = out.spec;
  spec.group = GroupSpec::make(static_cast<std::uint64_t>(p), static_cast<std::size_t>(d));

  const json& vertices = field(j, "vertices", "");
  if (!vertices.is_array() || vertices.empty()) throw SpecError("vertices", "expected a nonempty list of names");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string name = as_string(vertices[i], index("vertices", i));
    if (spec.base.find_vertex(name)) throw SpecError(index("vertices", i), "duplicate vertex " + name);
    spec.base.add_vertex(name);
  }

  const json& edges = j.contains("edges") ? j.at("edges") : json::array();
  if (!edges.is_array()) throw SpecError("edges", "expected a list");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = index("edges", i);
    const json& e = edges[i];
    if (!e.is_object()) throw SpecError(path, "expected an object");
    for (const auto& [key, value] : e.items())
      if (key != "id" && key != "from" && key != "to" && key != "voltage") throw SpecError(join(path, key), "unknown field");
    const std::string id = as_string(field(e, "id", path), join(path, "id"));
    if (id.back() == '~') throw SpecError(join(path, "id"), "edge ids may not end in ~");
    if (spec.base.find_dart(id)) throw SpecError(join(path, "id"), "duplicate edge id " + id);
    const std::string from = as_string(field(e, "from", path), join(path, "from"));
    const std::string to = as_string(field(e, "to", path), join(path, "to"));
    const auto u = spec.base.find_vertex(from);
    const auto v = spec.base.find_vertex(to);
    if (!u) throw SpecError(join(path, "from"), "unknown vertex " + from);
    if (!v) throw SpecError(join(path, "to"), "unknown vertex " + to);
    const Exponents a = e.contains("voltage") ? as_vector(e.at("voltage"), spec.group.d, join(path, "voltage"))
                                              : Exponents(spec.group.d, 0);
    spec.base.add_edge(*u, *v, id);
    Exponents neg = a;
    for (auto& x : neg) x = -x;
    spec.voltage.push_back(a);
    spec.voltage.push_back(neg);
  }

  spec.inertia.assign(spec.base.vertex_count(), {});
  if (j.contains("inertia")) {
    const json& inertia = j.at("inertia");
    if (!inertia.is_object()) throw SpecError("inertia", "expected an object keyed by vertex");
    for (const auto& [name, gens] : inertia.items()) {
      const std::string path = join("inertia", name);
      const auto v = spec.base.find_vertex(name);
      if (!v) throw SpecError(path, "unknown vertex " + name);
      if (!gens.is_array()) throw SpecError(path, "expected a list of generator vectors");
      for (std::size_t k = 0; k < gens.size(); ++k) {
        Exponents g = as_vector(gens[k], spec.group.d, index(path, k));
        if (std::all_of(g.begin(), g.end(), [](std::int64_t x) { return x == 0; }))
          throw SpecError(index(path, k), "generator must be nonzero");
        spec.inertia[*v].push_back(std::move(g));
      }
    }
  }

  if (j.contains("embedding")) {
    const json& emb = j.at("embedding");
    if (!emb.is_object()) throw SpecError("embedding", "expected an object");
    const json& rot = field(emb, "rotation", "embedding");
    if (!rot.is_object()) throw SpecError("embedding.rotation", "expected an object keyed by vertex");
    RotationSystem r(spec.base.vertex_count());
    std::vector<char> listed(spec.base.vertex_count(), 0);
    for (const auto& [name, cyc] : rot.items()) {
      const std::string path = join("embedding.rotation", name);
      const auto v = spec.base.find_vertex(name);
      if (!v) throw SpecError(path, "unknown vertex " + name);
      if (!cyc.is_array()) throw SpecError(path, "expected a list of dart ids");
      listed[*v] = 1;
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        const std::string dart = as_string(cyc[k], index(path, k));
        const auto e = spec.base.find_dart(dart);
        if (!e) throw SpecError(index(path, k), "unknown dart " + dart);
        if (spec.base.origin(*e) != *v) throw SpecError(index(path, k), "dart " + dart + " does not start at " + name);
        r[*v].push_back(*e);
      }
    }
    for (VertexId v = 0; v < spec.base.vertex_count(); ++v)
      if (!listed[v] && !spec.base.outgoing(v).empty())
        throw SpecError(join("embedding.rotation", spec.base.vertex_name(v)), "missing rotation");
    if (auto problem = check_embedding(Embedding{spec.base, r})) throw SpecError("embedding.rotation", *problem);
    out.rotation = std::move(r);
    if (emb.contains("outer_face")) {
      const std::int64_t f = as_int(emb.at("outer_face"), "embedding.outer_face");
      if (f < 0) throw SpecError("embedding.outer_face", "must be nonnegative");
      out.outer_face = static_cast<std::size_t>(f);
    }
  }

  if (auto problem = check_tower_spec(spec)) {
    if (problem->find("disconnected") != std::string::npos) throw DisconnectedError(0, *problem);
    throw SpecError("", *problem);
  }
  return out;
}

SpecFile parse_spec_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_spec(j);
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

json spec_to_json(const SpecFile& s) {
  const Graph& g = s.spec.base;
  json j;
  j["p"] = s.spec.group.p;
  j["d"] = s.spec.group.d;
  j["vertices"] = g.vertex_names();
  json edges = json::array();
  for (DartId e = 0; e < g.dart_count(); e += 2)
    edges.push_back({{"id", g.dart_name(e)},
                     {"from", g.vertex_name(g.origin(e))},
                     {"to", g.vertex_name(g.terminus(e))},
                     {"voltage", s.spec.voltage[e]}});
  j["edges"] = edges;
  json inertia = json::object();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!s.spec.inertia[v].empty()) inertia[g.vertex_name(v)] = s.spec.inertia[v];
  j["inertia"] = inertia;
  if (s.rotation) {
    json rot = json::object();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      json cyc = json::array();
      for (DartId e : (*s.rotation)[v]) cyc.push_back(g.dart_name(e));
      rot[g.vertex_name(v)] = cyc;
    }
    j["embedding"] = {{"rotation", rot}};
    if (s.outer_face) j["embedding"]["outer_face"] = *s.outer_face;
  }
  return j;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (DartId e = 0; e < g.dart_count(); ++e) {
    if (g.partner(e) < e) continue;
    edges.push_back({{"id", g.dart_name(e)}, {"from", g.vertex_name(g.origin(e))}, {"to", g.vertex_name(g.terminus(e))}});
  }
  return edges;
}

}  // namespace ztower
