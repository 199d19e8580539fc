#include "ztower/planar.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ztower/errors.hpp"
#include "ztower/jacobian.hpp"

namespace ztower {

std::optional<std::string> check_embedding(const Embedding& e) {
  const Graph& g = e.graph;
  if (e.rotation.size() != g.vertex_count()) return "rotation system must list every vertex";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::vector<DartId> a = e.rotation[v];
    std::vector<DartId> b = g.outgoing(v);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return "rotation at " + g.vertex_name(v) + " is not a permutation of its outgoing darts";
  }
  return std::nullopt;
}

namespace {

std::vector<DartId> rotation_successor(const Embedding& e) {
  std::vector<DartId> succ(e.graph.dart_count());
  for (const auto& cyc : e.rotation)
    for (std::size_t i = 0; i < cyc.size(); ++i) succ[cyc[i]] = cyc[(i + 1) % cyc.size()];
  return succ;
}

Faces faces_of_permutation(const Graph& g, const std::vector<DartId>& succ) {
  Faces f;
  const std::size_t n = g.dart_count();
  f.face_of_dart.assign(n, SIZE_MAX);
  for (DartId start = 0; start < n; ++start) {
    if (f.face_of_dart[start] != SIZE_MAX) continue;
    const std::size_t id = f.faces.size();
    f.faces.emplace_back();
    DartId e = start;
    do {
      f.face_of_dart[e] = id;
      f.faces.back().push_back(e);
      e = succ[g.partner(e)];
    } while (e != start);
  }
  return f;
}

}  // namespace

Faces trace_faces(const Embedding& e) {
  if (auto problem = check_embedding(e)) throw std::invalid_argument(*problem);
  return faces_of_permutation(e.graph, rotation_successor(e));
}

std::int64_t euler_characteristic(const Embedding& e) {
  if (!is_connected(e.graph)) throw DisconnectedError(-1, "euler_characteristic: graph is disconnected");
  const Faces f = trace_faces(e);
  return static_cast<std::int64_t>(e.graph.vertex_count()) - static_cast<std::int64_t>(e.graph.edge_count()) +
         static_cast<std::int64_t>(f.faces.size());
}

bool is_planar_embedding(const Embedding& e) { return is_connected(e.graph) && euler_characteristic(e) == 2; }

DualResult dual(const Embedding& e) {
  if (!is_planar_embedding(e)) throw NonPlanarError("dual: embedding is not planar");
  DualResult r;
  r.primal_faces = trace_faces(e);
  const Graph& g = e.graph;
  std::vector<std::string> names;
  for (std::size_t f = 0; f < r.primal_faces.faces.size(); ++f) names.push_back("F" + std::to_string(f));
  std::vector<Dart> darts(g.dart_count());
  std::vector<std::string> dart_names;
  for (DartId x = 0; x < g.dart_count(); ++x) {
    darts[x] = {r.primal_faces.face_of_dart[x], r.primal_faces.face_of_dart[g.partner(x)], g.partner(x)};
    dart_names.push_back(g.dart_name(x));
  }
  r.embedding.graph = Graph::from_raw(std::move(names), std::move(darts), std::move(dart_names));
  r.embedding.rotation = r.primal_faces.faces;
  return r;
}

std::optional<GraphMorphism> double_dual_isomorphism(const Embedding& e) {
  const DualResult d1 = dual(e);
  const DualResult d2 = dual(d1.embedding);
  const Graph& dd = d2.embedding.graph;
  if (dd.vertex_count() != e.graph.vertex_count() || dd.dart_count() != e.graph.dart_count()) return std::nullopt;
  GraphMorphism f = identity_morphism(e.graph);
  std::vector<char> hit(dd.vertex_count(), 0);
  for (VertexId v = 0; v < e.graph.vertex_count(); ++v) {
    const auto& out = e.graph.outgoing(v);
    if (out.empty()) {
      if (e.graph.vertex_count() != 1) return std::nullopt;
      f.vertex_map[v] = 0;
      hit[0] = 1;
      continue;
    }
    const VertexId w = dd.origin(out.front());
    for (DartId x : out)
      if (dd.origin(x) != w) return std::nullopt;
    if (hit[w]) return std::nullopt;
    hit[w] = 1;
    f.vertex_map[v] = w;
  }
  if (check_morphism(e.graph, dd, f)) return std::nullopt;
  return f;
}

std::optional<DartId> voltage_edge(const TowerSpec& spec) {
  std::optional<DartId> found;
  for (DartId e = 0; e < spec.base.dart_count(); e += 2) {
    const auto& a = spec.voltage[e];
    if (std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; })) continue;
    if (found) throw std::invalid_argument("derived_embedding: more than one edge carries a nonzero voltage");
    found = e;
  }
  return found;
}

namespace {

Exponents add_exp(const Exponents& a, const Exponents& b) {
  Exponents r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

// Lifts at a layer vertex: one group per base dart in base rotation order,
// each group ordered by target sheet in the direction given by `flip`.
struct BundlePlan {
  std::vector<std::vector<std::vector<DartId>>> groups;  // per layer vertex, per base dart
  std::vector<std::pair<VertexId, std::size_t>> flippable;
};

BundlePlan bundle_plan(const TowerSpec& spec, const Embedding& base, const LayerGraph& layer) {
  BundlePlan plan;
  plan.groups.resize(layer.graph.vertex_count());
  std::vector<std::vector<Exponents>> elements(spec.base.vertex_count());
  for (VertexId v = 0; v < spec.base.vertex_count(); ++v) elements[v] = layer.images[v].elements();
  for (VertexId u = 0; u < layer.graph.vertex_count(); ++u) {
    const VertexId v = layer.vertex_base[u];
    for (DartId e : base.rotation[v]) {
      std::vector<std::pair<std::size_t, DartId>> keyed;
      for (const auto& s : elements[v]) {
        const Exponents h = add_exp(layer.vertex_rep[u], s);
        const std::size_t key = layer.group_index(reduce(add_exp(h, spec.voltage[e]), spec.group, layer.level));
        keyed.emplace_back(key, layer.dart_at(e, h));
      }
      std::sort(keyed.begin(), keyed.end());
      std::vector<DartId> group;
      for (const auto& [k, x] : keyed) group.push_back(x);
      if (group.size() > 1) plan.flippable.emplace_back(u, plan.groups[u].size());
      plan.groups[u].push_back(std::move(group));
    }
  }
  return plan;
}

RotationSystem bundle_rotation(const BundlePlan& plan, std::uint64_t mask) {
  std::set<std::pair<VertexId, std::size_t>> flipped;
  for (std::size_t i = 0; i < plan.flippable.size() && i < 64; ++i)
    if (mask >> i & 1) flipped.insert(plan.flippable[i]);
  RotationSystem rot(plan.groups.size());
  for (VertexId u = 0; u < plan.groups.size(); ++u)
    for (std::size_t k = 0; k < plan.groups[u].size(); ++k) {
      const auto& g = plan.groups[u][k];
      if (flipped.count({u, k}))
        rot[u].insert(rot[u].end(), g.rbegin(), g.rend());
      else
        rot[u].insert(rot[u].end(), g.begin(), g.end());
    }
  return rot;
}

bool planar(const Embedding& e) { return is_connected(e.graph) && euler_characteristic(e) == 2; }

std::optional<RotationSystem> pinch_rotation(const TowerSpec& spec, const Embedding& base, const LayerGraph& layer) {
  const LayerGraph flat = build_layer(spec.unramified(), layer.level);
  const Graph& g = flat.graph;
  // Natural lift: the rotation at (v, h) is the base rotation lifted at h.
  std::vector<DartId> sigma(g.dart_count());
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    const auto& cyc = base.rotation[flat.vertex_base[u]];
    for (std::size_t i = 0; i < cyc.size(); ++i)
      sigma[flat.dart_at(cyc[i], flat.vertex_rep[u])] = flat.dart_at(cyc[(i + 1) % cyc.size()], flat.vertex_rep[u]);
  }
  for (VertexId r = 0; r < layer.graph.vertex_count(); ++r) {
    const VertexId v = layer.vertex_base[r];
    const auto elements = layer.images[v].elements();
    if (elements.size() < 2) continue;
    std::set<VertexId> fibre;
    for (const auto& s : elements) fibre.insert(flat.vertex_at(v, add_exp(layer.vertex_rep[r], s)));
    const Faces faces = faces_of_permutation(g, sigma);
    bool merged = false;
    for (const auto& face : faces.faces) {
      // first corner at each fibre vertex along the walk: (partner of incoming, outgoing)
      std::vector<std::pair<DartId, DartId>> corners;
      std::set<VertexId> seen;
      for (std::size_t j = 0; j < face.size(); ++j) {
        const DartId out = face[j];
        const VertexId x = g.origin(out);
        if (!fibre.count(x) || seen.count(x)) continue;
        const DartId in = face[(j + face.size() - 1) % face.size()];
        corners.emplace_back(g.partner(in), out);
        seen.insert(x);
      }
      if (seen.size() != fibre.size()) continue;
      const std::size_t m = corners.size();
      for (std::size_t i = 0; i < m; ++i) sigma[corners[i].first] = corners[(i + m - 1) % m].second;
      merged = true;
      break;
    }
    if (!merged) return std::nullopt;
  }
  RotationSystem rot(layer.graph.vertex_count());
  for (VertexId r = 0; r < layer.graph.vertex_count(); ++r) {
    const auto& out = layer.graph.outgoing(r);
    if (out.empty()) continue;
    DartId e = out.front();
    do {
      rot[r].push_back(e);
      e = sigma[e];
    } while (e != out.front() && rot[r].size() <= out.size());
  }
  return rot;
}

}  // namespace

DerivedEmbedding derived_embedding(const TowerSpec& spec, const Embedding& base, std::size_t outer_face, int n,
                                   EmbeddingStyle style) {
  if (auto problem = check_embedding(base)) throw std::invalid_argument("base embedding: " + *problem);
  if (base.graph.dart_count() != spec.base.dart_count()) throw std::invalid_argument("base embedding does not match the spec");
  if (!planar(base)) throw std::invalid_argument("base embedding is not planar");
  const auto e0 = voltage_edge(spec);
  if (!e0) throw std::invalid_argument("derived_embedding: no edge carries a nonzero voltage");
  const Faces base_faces = trace_faces(base);
  if (outer_face >= base_faces.faces.size()) throw std::invalid_argument("outer face index out of range");
  if (base_faces.face_of_dart[*e0] != outer_face && base_faces.face_of_dart[*e0 + 1] != outer_face)
    throw std::invalid_argument("the voltage edge " + spec.base.dart_name(*e0) + " is not on the outer face");

  DerivedEmbedding out;
  out.layer = build_layer(spec, n);
  out.embedding.graph = out.layer.graph;
  if (!is_connected(out.layer.graph)) throw DisconnectedError(n, "layer " + std::to_string(n) + " is disconnected");

  if (style == EmbeddingStyle::bundle) {
    const BundlePlan plan = bundle_plan(spec, base, out.layer);
    const std::size_t k = plan.flippable.size();
    std::vector<std::uint64_t> masks;
    if (k <= 12) {
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) masks.push_back(m);
    } else {
      masks = {0, ~std::uint64_t{0}};
    }
    for (std::uint64_t m : masks) {
      out.embedding.rotation = bundle_rotation(plan, m);
      if (euler_characteristic(out.embedding) == 2) {
        out.style_used = EmbeddingStyle::bundle;
        return out;
      }
    }
  }
  if (auto rot = pinch_rotation(spec, base, out.layer)) {
    out.embedding.rotation = std::move(*rot);
    if (!check_embedding(out.embedding) && euler_characteristic(out.embedding) == 2) {
      out.style_used = EmbeddingStyle::pinch;
      return out;
    }
  }
  throw NonPlanarError("no planar rotation found for layer " + std::to_string(n));
}

BranchedCover check_branched_cover(const Graph& y, const Graph& x, const GraphMorphism& f) {
  BranchedCover r;
  if (auto problem = check_morphism(y, x, f)) {
    r.failure = "not a morphism: " + *problem;
    return r;
  }
  std::vector<char> hit_v(x.vertex_count(), 0), hit_d(x.dart_count(), 0);
  for (VertexId v : f.vertex_map) hit_v[v] = 1;
  for (DartId e : f.dart_map) hit_d[e] = 1;
  for (VertexId w = 0; w < x.vertex_count(); ++w)
    if (!hit_v[w]) {
      r.failure = "vertex " + x.vertex_name(w) + " has no preimage";
      return r;
    }
  for (DartId e = 0; e < x.dart_count(); ++e)
    if (!hit_d[e]) {
      r.failure = "dart " + x.dart_name(e) + " has no preimage";
      return r;
    }
  r.ramification.assign(y.vertex_count(), 1);
  for (VertexId v = 0; v < y.vertex_count(); ++v) {
    const VertexId w = f.vertex_map[v];
    std::map<DartId, std::size_t> count;
    for (DartId e : x.outgoing(w)) count[e] = 0;
    for (DartId e : y.outgoing(v)) ++count[f.dart_map[e]];
    if (count.empty()) continue;
    const std::size_t m = count.begin()->second;
    for (const auto& [e, c] : count)
      if (c != m) {
        r.failure = "vertex " + y.vertex_name(v) + ": dart " + x.dart_name(count.begin()->first) + " has " +
                    std::to_string(m) + " preimages but dart " + x.dart_name(e) + " has " + std::to_string(c);
        return r;
      }
    r.ramification[v] = m;
  }
  std::vector<std::size_t> degree_over(x.vertex_count(), 0);
  for (VertexId v = 0; v < y.vertex_count(); ++v) degree_over[f.vertex_map[v]] += r.ramification[v];
  r.sheets = degree_over.empty() ? 0 : degree_over[0];
  for (VertexId w = 0; w < x.vertex_count(); ++w)
    if (degree_over[w] != r.sheets) {
      r.failure = "sheet count over " + x.vertex_name(w) + " is " + std::to_string(degree_over[w]) + ", expected " +
                  std::to_string(r.sheets);
      return r;
    }
  r.ok = true;
  return r;
}

DualProjection dual_projection(const DerivedEmbedding& upper, const Faces& upper_faces, const DerivedEmbedding& lower,
                               const Faces& lower_faces) {
  DualProjection r;
  GraphMorphism f;
  const LayerGraph& hi = upper.layer;
  for (DartId e = 0; e < hi.graph.dart_count(); ++e) f.dart_map.push_back(lower.layer.dart_at(hi.dart_base[e], hi.dart_group[e]));
  for (std::size_t F = 0; F < upper_faces.faces.size(); ++F) {
    const auto& face = upper_faces.faces[F];
    const std::size_t target = lower_faces.face_of_dart[f.dart_map[face.front()]];
    for (DartId e : face) {
      const std::size_t t = lower_faces.face_of_dart[f.dart_map[e]];
      if (t != target) {
        r.witness = "face F" + std::to_string(F) + " of layer " + std::to_string(hi.level) + " (darts " +
                    hi.graph.dart_name(face.front()) + ", " + hi.graph.dart_name(e) + ") meets faces F" +
                    std::to_string(target) + " and F" + std::to_string(t) + " of layer " + std::to_string(lower.layer.level);
        return r;
      }
    }
    f.vertex_map.push_back(target);
  }
  r.morphism = std::move(f);
  return r;
}

namespace {

std::size_t count_ramified(const BranchedCover& c) {
  return static_cast<std::size_t>(std::count_if(c.ramification.begin(), c.ramification.end(), [](std::size_t m) { return m > 1; }));
}

// Elements of G_n other than 0.
std::vector<Exponents> nonzero_elements(const GroupSpec& group, int n) {
  const std::int64_t q = group.modulus(n);
  std::vector<Exponents> out;
  Exponents x(group.d, 0);
  while (true) {
    std::size_t i = group.d;
    while (i > 0) {
      --i;
      if (++x[i] < q) break;
      x[i] = 0;
      if (i == 0) return out;
    }
    out.push_back(x);
  }
}

}  // namespace

DualTowerReport dual_tower_check(const TowerSpec& spec, const Embedding& base, std::size_t outer_face, int n_max,
                                 EmbeddingStyle style) {
  DualTowerReport report;
  std::vector<DerivedEmbedding> emb;
  std::vector<Faces> faces;
  std::vector<DualResult> duals;
  auto fail = [&](int n, char check, std::string witness) {
    report.pass = false;
    report.failed_level = n;
    report.failed_check = check;
    report.witness = std::move(witness);
    return report;
  };
  for (int n = 0; n <= n_max; ++n) {
    emb.push_back(derived_embedding(spec, base, outer_face, n, style));
    faces.push_back(trace_faces(emb.back().embedding));
    duals.push_back(dual(emb.back().embedding));
    const LayerGraph& layer = emb.back().layer;
    DualLevel lvl;
    lvl.n = n;
    lvl.dual_vertices = duals.back().embedding.graph.vertex_count();
    lvl.dual_edges = duals.back().embedding.graph.edge_count();

    // (a) the dual layer covers the dual base through the face map
    const DualProjection proj = dual_projection(emb.back(), faces.back(), emb.front(), faces.front());
    if (!proj.morphism) {
      report.levels.push_back(lvl);
      return fail(n, 'a', proj.witness);
    }
    const BranchedCover dual_cover = check_branched_cover(duals.back().embedding.graph, duals.front().embedding.graph, *proj.morphism);
    if (!dual_cover.ok) {
      report.levels.push_back(lvl);
      return fail(n, 'a', dual_cover.failure);
    }
    lvl.cover = true;
    lvl.sheets = dual_cover.sheets;

    // (b) g e* = (g e)* is a free action without inversion, compatible with projection
    std::optional<GraphMorphism> down;
    if (n > 0) {
      const DualProjection step = dual_projection(emb.back(), faces.back(), emb[n - 1], faces[n - 1]);
      if (!step.morphism) {
        report.levels.push_back(lvl);
        return fail(n, 'b', "projection to layer " + std::to_string(n - 1) + ": " + step.witness);
      }
      down = step.morphism;
    }
    const LayerGraph* lower = n > 0 ? &emb[n - 1].layer : nullptr;
    for (const Exponents& g : nonzero_elements(spec.group, n)) {
      const GraphMorphism act = galois_act(layer, g);
      const Faces& fc = faces.back();
      for (std::size_t F = 0; F < fc.faces.size(); ++F) {
        const std::size_t image = fc.face_of_dart[act.dart_map[fc.faces[F].front()]];
        for (DartId e : fc.faces[F])
          if (fc.face_of_dart[act.dart_map[e]] != image) {
            report.levels.push_back(lvl);
            return fail(n, 'b', "element " + format_exponents(g) + " does not map face F" + std::to_string(F) + " to a face");
          }
      }
      for (DartId e = 0; e < layer.graph.dart_count(); ++e)
        if (act.dart_map[e] == e || act.dart_map[e] == layer.graph.partner(e)) {
          report.levels.push_back(lvl);
          return fail(n, 'b', "element " + format_exponents(g) + " fixes or inverts dart " + layer.graph.dart_name(e));
        }
      if (down) {
        const GraphMorphism act_lo = galois_act(*lower, g);
        for (DartId e = 0; e < layer.graph.dart_count(); ++e)
          if (down->dart_map[act.dart_map[e]] != act_lo.dart_map[down->dart_map[e]]) {
            report.levels.push_back(lvl);
            return fail(n, 'b', "projection does not commute with " + format_exponents(g) + " at " + layer.graph.dart_name(e));
          }
        for (std::size_t F = 0; F < faces.back().faces.size(); ++F) {
          const std::size_t image = faces.back().face_of_dart[act.dart_map[faces.back().faces[F].front()]];
          const std::size_t lo_face = down->vertex_map[F];
          const std::size_t lo_image = faces[n - 1].face_of_dart[act_lo.dart_map[faces[n - 1].faces[lo_face].front()]];
          if (down->vertex_map[image] != lo_image) {
            report.levels.push_back(lvl);
            return fail(n, 'b', "face projection does not commute with " + format_exponents(g));
          }
        }
      }
    }
    lvl.galois = true;

    // (c) ramified counts
    const BranchedCover primal_cover = check_branched_cover(layer.graph, emb.front().layer.graph, projection(spec, layer, emb.front().layer));
    if (!primal_cover.ok) {
      report.levels.push_back(lvl);
      return fail(n, 'c', "primal projection: " + primal_cover.failure);
    }
    lvl.ramified_primal = count_ramified(primal_cover);
    lvl.ramified_dual = count_ramified(dual_cover);
    report.levels.push_back(lvl);
    if (n >= 1 && lvl.ramified_primal + lvl.ramified_dual != 2)
      return fail(n, 'c', std::to_string(lvl.ramified_dual) + " ramified dual vertices but " +
                              std::to_string(lvl.ramified_primal) + " ramified primal vertices");
  }
  return report;
}

Divisor boundary(const Graph& g, const DartAssignment& phi) {
  if (phi.size() != g.dart_count()) throw std::invalid_argument("dart assignment has wrong length");
  for (DartId e = 0; e < g.dart_count(); ++e)
    if (phi[e] != -phi[g.partner(e)]) throw std::invalid_argument("dart assignment is not antisymmetric");
  Divisor d(g.vertex_count());
  for (DartId e = 0; e < g.dart_count(); ++e) d[g.origin(e)] += phi[e];
  return d;
}

Divisor coboundary(const Faces& faces, const DartAssignment& phi) {
  Divisor d(faces.faces.size());
  for (DartId e = 0; e < phi.size(); ++e) d[faces.face_of_dart.at(e)] += phi[e];
  return d;
}

Divisor theta(const Embedding& e, const Faces& faces, const Divisor& u) {
  const Graph& g = e.graph;
  std::vector<DartId> reps;
  for (DartId x = 0; x < g.dart_count(); ++x)
    if (x < g.partner(x)) reps.push_back(x);
  IntMatrix inc(g.vertex_count(), reps.size());
  for (std::size_t k = 0; k < reps.size(); ++k) {
    inc(g.origin(reps[k]), k) += 1;
    inc(g.terminus(reps[k]), k) -= 1;
  }
  const auto x = solve_integer(inc, u);
  if (!x) throw std::logic_error("theta: no dart assignment with the requested boundary");
  DartAssignment phi(g.dart_count());
  for (std::size_t k = 0; k < reps.size(); ++k) {
    phi[reps[k]] = (*x)[k];
    phi[g.partner(reps[k])] = -(*x)[k];
  }
  return coboundary(faces, phi);
}

BigInt class_order(const Graph& g, const Divisor& u) {
  const std::size_t n = g.vertex_count();
  BigInt deg = 0;
  for (const auto& c : u) deg += c;
  if (deg != 0) throw std::invalid_argument("class_order: divisor has nonzero degree");
  if (n <= 1) return 1;
  const IntMatrix l = laplacian(g).minor_matrix(n - 1, n - 1);
  const std::size_t m = n - 1;
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(m + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i][j] = l(i, j);
    a[i][m] = u[i];
  }
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    while (piv < m && a[piv][k] == 0) ++piv;
    if (piv == m) throw DisconnectedError(-1, "class_order: reduced Laplacian is singular");
    std::swap(a[k], a[piv]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k || a[i][k] == 0) continue;
      const mpq_class f = a[i][k] / a[k][k];
      for (std::size_t j = k; j <= m; ++j) a[i][j] -= f * a[k][j];
    }
  }
  BigInt order = 1;
  for (std::size_t i = 0; i < m; ++i) {
    mpq_class x = a[i][m] / a[i][i];
    x.canonicalize();
    mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), x.get_den_mpz_t());
  }
  return order;
}

bool is_principal(const Graph& g, const Divisor& u) { return solve_integer(laplacian(g), u).has_value(); }

JacDuality jac_duality_check(const Embedding& e) {
  JacDuality r;
  const DualResult d = dual(e);
  r.primal = jacobian_invariants(e.graph);
  r.dual = jacobian_invariants(d.embedding.graph);
  r.kappa_primal = kappa(e.graph);
  r.kappa_dual = kappa(d.embedding.graph);
  r.pass = r.primal == r.dual && r.kappa_primal == r.kappa_dual;
  return r;
}

Equivariance theta_equivariance_check(const DerivedEmbedding& de) {
  Equivariance r;
  const Embedding& emb = de.embedding;
  const LayerGraph& layer = de.layer;
  const Faces faces = trace_faces(emb);
  const Graph dual_graph = dual(emb).embedding.graph;
  const std::size_t nv = emb.graph.vertex_count();
  for (std::size_t i = 0; i < layer.group.d; ++i) {
    Exponents g(layer.group.d, 0);
    g[i] = 1;
    const GraphMorphism act = galois_act(layer, g);
    std::vector<std::size_t> face_map(faces.faces.size());
    for (std::size_t F = 0; F < faces.faces.size(); ++F) {
      face_map[F] = faces.face_of_dart[act.dart_map[faces.faces[F].front()]];
      for (DartId e : faces.faces[F])
        if (faces.face_of_dart[act.dart_map[e]] != face_map[F]) {
          r.witness = "element " + format_exponents(g) + " does not act on faces";
          return r;
        }
    }
    for (VertexId v = 1; v < nv; ++v) {
      Divisor u(nv), gu(nv);
      u[v] += 1;
      u[0] -= 1;
      gu[act.vertex_map[v]] += 1;
      gu[act.vertex_map[0]] -= 1;
      const Divisor t_u = theta(emb, faces, u);
      const Divisor t_gu = theta(emb, faces, gu);
      Divisor diff = t_gu;
      for (std::size_t F = 0; F < faces.faces.size(); ++F) diff[face_map[F]] -= t_u[F];
      ++r.checked;
      if (!is_principal(dual_graph, diff)) {
        r.witness = "theta(g u) - g theta(u) is not principal for g = " + format_exponents(g) + ", u = " +
                    emb.graph.vertex_name(v) + " - " + emb.graph.vertex_name(0);
        return r;
      }
    }
  }
  r.pass = true;
  return r;
}

}  // namespace ztower
