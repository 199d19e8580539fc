#include "ztower/tower.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ztower/errors.hpp"

namespace ztower {

namespace {

std::size_t ord_p_small(const BigInt& x, std::uint64_t p) {
  BigInt v = abs(x);
  std::size_t k = 0;
  while (v != 0 && mpz_divisible_ui_p(v.get_mpz_t(), p)) {
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
    ++k;
  }
  return k;
}

IntMatrix generator_matrix(const std::vector<Exponents>& gens, std::size_t d) {
  IntMatrix m(gens.size(), d);
  for (std::size_t r = 0; r < gens.size(); ++r) {
    if (gens[r].size() != d) throw std::invalid_argument("inertia generator has length " + std::to_string(gens[r].size()) + ", expected " + std::to_string(d));
    for (std::size_t c = 0; c < d; ++c) m(r, c) = static_cast<long>(gens[r][c]);
  }
  return m;
}

std::int64_t checked_pow(std::int64_t base, std::size_t exp) {
  std::int64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / 4 / base) throw GuardrailError("group order overflows 64 bits");
    r *= base;
  }
  return r;
}

// Lexicographic enumeration of the box prod [0, bound_i).
template <typename F>
void for_each_in_box(const std::vector<std::int64_t>& bound, F&& f) {
  const std::size_t d = bound.size();
  for (auto b : bound)
    if (b <= 0) return;
  Exponents x(d, 0);
  while (true) {
    f(x);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (++x[i] < bound[i]) break;
      x[i] = 0;
      if (i == 0) return;
    }
    if (d == 0) return;
  }
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

GroupSpec GroupSpec::make(std::uint64_t p, std::size_t d) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  return GroupSpec{p, d};
}

std::int64_t GroupSpec::modulus(int n) const {
  if (n < 0) throw std::invalid_argument("negative level");
  return checked_pow(static_cast<std::int64_t>(p), static_cast<std::size_t>(n));
}

BigInt GroupSpec::layer_order(int n) const {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(n) * d);
  return r;
}

bool TowerSpec::ramified(VertexId v) const { return !inertia.at(v).empty(); }

TowerSpec TowerSpec::unramified() const {
  TowerSpec s = *this;
  for (auto& gens : s.inertia) gens.clear();
  return s;
}

std::optional<std::string> check_tower_spec(const TowerSpec& spec) {
  if (auto v = validate(spec.base)) return "base graph: " + *v;
  const Graph& g = spec.base;
  if (g.vertex_count() == 0) return "base graph has no vertices";
  for (DartId e = 0; e < g.dart_count(); ++e)
    if (g.partner(e) != (e ^ 1)) return "base darts must be stored as consecutive partner pairs";
  if (!is_connected(g)) return "base graph is disconnected";
  if (!is_prime(spec.group.p)) return "p is not prime";
  if (spec.group.d < 1) return "d must be at least 1";
  if (spec.voltage.size() != g.dart_count()) return "voltage must be defined on every dart";
  for (DartId e = 0; e < g.dart_count(); ++e) {
    if (spec.voltage[e].size() != spec.group.d) return "voltage of " + g.dart_name(e) + " has wrong length";
    for (std::size_t i = 0; i < spec.group.d; ++i)
      if (spec.voltage[e][i] != -spec.voltage[g.partner(e)][i]) return "voltage is not antisymmetric at " + g.dart_name(e);
  }
  if (spec.inertia.size() != g.vertex_count()) return "inertia must list every vertex";
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (const auto& gen : spec.inertia[v]) {
      if (gen.size() != spec.group.d) return "inertia generator at " + g.vertex_name(v) + " has wrong length";
      if (std::all_of(gen.begin(), gen.end(), [](std::int64_t x) { return x == 0; }))
        return "inertia generator at " + g.vertex_name(v) + " is zero";
    }
  return std::nullopt;
}

Exponents reduce(const Exponents& g, const GroupSpec& group, int n) {
  const std::int64_t q = group.modulus(n);
  Exponents r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) r[i] = ((g[i] % q) + q) % q;
  return r;
}

BigInt element_order_in_layer(const Exponents& s, const GroupSpec& group, int n) {
  std::size_t b = static_cast<std::size_t>(n);
  for (auto a : s)
    if (a != 0) b = std::min(b, ord_p_small(BigInt(static_cast<long>(a)), group.p));
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), group.p, static_cast<unsigned long>(n) - b);
  return r;
}

Exponents SubgroupImage::canonical(const Exponents& g) const {
  const std::size_t d = group.d;
  std::vector<BigInt> x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<long>(g[i]);
  for (std::size_t i = 0; i < d; ++i) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x[i].get_mpz_t(), basis(i, i).get_mpz_t());
    if (q == 0) continue;
    for (std::size_t j = i; j < d; ++j) x[j] -= q * basis(i, j);
  }
  Exponents out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = x[i].get_si();
  return out;
}

std::size_t SubgroupImage::coset_index(const Exponents& rep) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < group.d; ++i) idx = idx * basis(i, i).get_ui() + static_cast<std::size_t>(rep[i]);
  return idx;
}

std::vector<Exponents> SubgroupImage::coset_representatives() const {
  std::vector<std::int64_t> bound(group.d);
  for (std::size_t i = 0; i < group.d; ++i) bound[i] = basis(i, i).get_si();
  std::vector<Exponents> out;
  for_each_in_box(bound, [&](const Exponents& x) { out.push_back(x); });
  return out;
}

std::vector<Exponents> SubgroupImage::elements() const {
  const std::size_t d = group.d;
  std::vector<std::int64_t> bound(d);
  for (std::size_t i = 0; i < d; ++i) bound[i] = modulus / basis(i, i).get_si();
  std::vector<Exponents> out;
  for_each_in_box(bound, [&](const Exponents& c) {
    Exponents x(d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) x[j] += c[i] * basis(i, j).get_si();
    for (auto& v : x) v = ((v % modulus) + modulus) % modulus;
    out.push_back(x);
  });
  std::sort(out.begin(), out.end());
  return out;
}

SubgroupImage inertia_image(const std::vector<Exponents>& gens, const GroupSpec& group, int n) {
  const std::size_t d = group.d;
  const IntMatrix g = generator_matrix(gens, d);
  SubgroupImage img;
  img.group = group;
  img.level = n;
  img.modulus = group.modulus(n);
  IntMatrix lattice(gens.size() + d, d);
  for (std::size_t r = 0; r < gens.size(); ++r)
    for (std::size_t c = 0; c < d; ++c) lattice(r, c) = g(r, c);
  for (std::size_t i = 0; i < d; ++i) lattice(gens.size() + i, i) = static_cast<long>(img.modulus);
  img.basis = hermite_normal_form(std::move(lattice));
  if (img.basis.rows() != d) throw std::logic_error("inertia_image: lattice is not of full rank");
  img.coset_count = 1;
  for (std::size_t i = 0; i < d; ++i) img.coset_count *= img.basis(i, i);
  img.order = group.layer_order(n) / img.coset_count;
  return img;
}

std::size_t inertia_rank(const std::vector<Exponents>& gens, std::size_t d) {
  if (gens.empty()) return 0;
  std::size_t r = 0;
  for (const auto& s : smith_normal_form(generator_matrix(gens, d)))
    if (s != 0) ++r;
  return r;
}

std::size_t image_p_rank(const std::vector<Exponents>& gens, const GroupSpec& group, int n) {
  if (gens.empty()) return 0;
  std::size_t r = 0;
  for (const auto& s : smith_normal_form(generator_matrix(gens, group.d)))
    if (s != 0 && ord_p_small(s, group.p) < static_cast<std::size_t>(n)) ++r;
  return r;
}

int stabilization_level(const std::vector<Exponents>& gens, const GroupSpec& group) {
  const std::size_t rank = inertia_rank(gens, group.d);
  int n = 0;
  while (image_p_rank(gens, group, n) != rank) ++n;
  return n;
}

int stabilization_level(const TowerSpec& spec) {
  int n0 = 0;
  for (const auto& gens : spec.inertia) n0 = std::max(n0, stabilization_level(gens, spec.group));
  return n0;
}

LaurentElement omega_norm(const std::vector<Exponents>& gens, const GroupSpec& group, int n) {
  const int n_i = stabilization_level(gens, group);
  if (n < n_i)
    throw std::invalid_argument("omega_norm: level " + std::to_string(n) + " is below the stabilization level " + std::to_string(n_i));
  LaurentElement out(group.d);
  for (const auto& x : inertia_image(gens, group, n).elements()) out.add_term(x, 1);
  return out;
}

std::size_t LayerGraph::group_index(const Exponents& r) const {
  std::size_t idx = 0;
  for (auto x : r) idx = idx * static_cast<std::size_t>(modulus) + static_cast<std::size_t>(x);
  return idx;
}

VertexId LayerGraph::vertex_at(VertexId v, const Exponents& g) const {
  const SubgroupImage& img = images.at(v);
  return vertex_offset[v] + img.coset_index(img.canonical(reduce(g, group, level)));
}

DartId LayerGraph::dart_at(DartId e, const Exponents& g) const {
  const std::size_t k = e / 2;
  if (e % 2 == 0) return 2 * (k * sheets + group_index(reduce(g, group, level)));
  Exponents h = g;
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += base_voltage[e][i];
  return 2 * (k * sheets + group_index(reduce(h, group, level))) + 1;
}

std::string format_exponents(const Exponents& e) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << "]";
  return os.str();
}

LayerGraph build_layer(const TowerSpec& spec, int n, std::size_t max_darts) {
  if (auto problem = check_tower_spec(spec)) throw SpecError("", *problem);
  if (n < 0) throw std::invalid_argument("build_layer: negative level");
  const Graph& base = spec.base;
  const std::size_t d = spec.group.d;
  LayerGraph layer;
  layer.level = n;
  layer.group = spec.group;
  layer.modulus = spec.group.modulus(n);
  layer.base_voltage = spec.voltage;
  const std::int64_t sheets = checked_pow(layer.modulus, d);
  layer.sheets = static_cast<std::size_t>(sheets);
  if (static_cast<double>(sheets) * static_cast<double>(base.dart_count()) > static_cast<double>(max_darts))
    throw GuardrailError("layer " + std::to_string(n) + " would have more than " + std::to_string(max_darts) + " darts");

  std::vector<std::string> vertex_names;
  for (VertexId v = 0; v < base.vertex_count(); ++v) {
    layer.images.push_back(inertia_image(spec.inertia[v], spec.group, n));
    layer.vertex_offset.push_back(layer.vertex_base.size());
    for (auto& rep : layer.images.back().coset_representatives()) {
      vertex_names.push_back(base.vertex_name(v) + format_exponents(rep));
      layer.vertex_base.push_back(v);
      layer.vertex_rep.push_back(std::move(rep));
    }
  }

  const std::size_t total = base.dart_count() * static_cast<std::size_t>(sheets);
  std::vector<Dart> darts(total);
  std::vector<std::string> dart_names(total);
  layer.dart_base.resize(total);
  layer.dart_group.resize(total);
  std::vector<std::int64_t> box(d, layer.modulus);
  for (std::size_t k = 0; k < base.edge_count(); ++k) {
    const DartId e = 2 * k;
    const DartId eb = e + 1;
    std::size_t i = 0;
    for_each_in_box(box, [&](const Exponents& g) {
      Exponents h = g;
      for (std::size_t j = 0; j < d; ++j) h[j] += spec.voltage[e][j];
      h = reduce(h, spec.group, n);
      const DartId id = 2 * (k * static_cast<std::size_t>(sheets) + i);
      const VertexId from = layer.vertex_at(base.origin(e), g);
      const VertexId to = layer.vertex_at(base.terminus(e), h);
      darts[id] = {from, to, id + 1};
      darts[id + 1] = {to, from, id};
      dart_names[id] = base.dart_name(e) + "@" + format_exponents(g);
      dart_names[id + 1] = base.dart_name(eb) + "@" + format_exponents(h);
      layer.dart_base[id] = e;
      layer.dart_base[id + 1] = eb;
      layer.dart_group[id] = g;
      layer.dart_group[id + 1] = std::move(h);
      ++i;
    });
  }
  layer.graph = Graph::from_raw(std::move(vertex_names), std::move(darts), std::move(dart_names));
  return layer;
}

GraphMorphism projection(const TowerSpec&, const LayerGraph& hi, const LayerGraph& lo) {
  if (hi.level < lo.level) throw std::invalid_argument("projection: levels out of order");
  GraphMorphism f;
  f.vertex_map.reserve(hi.graph.vertex_count());
  for (VertexId u = 0; u < hi.graph.vertex_count(); ++u) f.vertex_map.push_back(lo.vertex_at(hi.vertex_base[u], hi.vertex_rep[u]));
  f.dart_map.reserve(hi.graph.dart_count());
  for (DartId e = 0; e < hi.graph.dart_count(); ++e) f.dart_map.push_back(lo.dart_at(hi.dart_base[e], hi.dart_group[e]));
  return f;
}

GraphMorphism projection(const TowerSpec& spec, int n_hi, int n_lo) {
  return projection(spec, build_layer(spec, n_hi), build_layer(spec, n_lo));
}

GraphMorphism galois_act(const LayerGraph& layer, const Exponents& g) {
  if (g.size() != layer.group.d) throw std::invalid_argument("galois_act: element has wrong length");
  auto plus = [&](const Exponents& h) {
    Exponents r = h;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += g[i];
    return r;
  };
  GraphMorphism f;
  for (VertexId u = 0; u < layer.graph.vertex_count(); ++u)
    f.vertex_map.push_back(layer.vertex_at(layer.vertex_base[u], plus(layer.vertex_rep[u])));
  for (DartId e = 0; e < layer.graph.dart_count(); ++e)
    f.dart_map.push_back(layer.dart_at(layer.dart_base[e], plus(layer.dart_group[e])));
  return f;
}

BigInt vertex_count(const TowerSpec& spec, int n) {
  const int n0 = stabilization_level(spec);
  if (n < n0)
    throw std::invalid_argument("vertex_count: level " + std::to_string(n) + " is below the stabilization level " + std::to_string(n0));
  BigInt total = 0;
  for (const auto& gens : spec.inertia) total += inertia_image(gens, spec.group, n).coset_count;
  return total;
}

std::optional<BigInt> closed_form_vertex_count(const TowerSpec& spec, int n) {
  const int n0 = stabilization_level(spec);
  if (n < n0) return std::nullopt;
  BigInt v_r = 0;
  BigInt v_u = 0;
  for (const auto& gens : spec.inertia) {
    if (gens.empty()) {
      v_u += spec.group.layer_order(n0);
      continue;
    }
    if (inertia_rank(gens, spec.group.d) != spec.group.d) return std::nullopt;
    v_r += inertia_image(gens, spec.group, n0).coset_count;
  }
  return v_r + spec.group.layer_order(n) / spec.group.layer_order(n0) * v_u;
}

bool is_connected_layer(const TowerSpec& spec, int n) { return is_connected(build_layer(spec, n).graph); }

Immersion immersion_push(const TowerSpec& spec, int n) {
  Immersion im;
  im.unramified = build_layer(spec.unramified(), n);
  im.ramified = build_layer(spec, n);
  std::vector<std::size_t> classes;
  const LayerGraph& u = im.unramified;
  for (VertexId x = 0; x < u.graph.vertex_count(); ++x) classes.push_back(im.ramified.vertex_at(u.vertex_base[x], u.vertex_rep[x]));
  im.quotient = quotient_vertices(u.graph, classes);
  im.label_match.assign(im.quotient.graph.vertex_count(), 0);
  for (VertexId x = 0; x < u.graph.vertex_count(); ++x) im.label_match[im.quotient.morphism.vertex_map[x]] = classes[x];
  im.morphism.vertex_map = classes;
  im.morphism.dart_map = im.quotient.morphism.dart_map;
  return im;
}

}  // namespace ztower
