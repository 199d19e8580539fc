#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ztower/graph.hpp"

using namespace ztower;

namespace {

Graph triangle() {
  Graph g;
  const auto a = g.add_vertex("A"), b = g.add_vertex("B"), c = g.add_vertex("C");
  g.add_edge(a, b, "e1");
  g.add_edge(b, c, "e2");
  g.add_edge(c, a, "e3");
  return g;
}

Graph cycle(std::size_t n) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, "e" + std::to_string(i));
  return g;
}

// Simple graph on n vertices from an edge bitmask over pairs i < j.
Graph from_mask(std::size_t n, std::uint32_t mask) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex(std::to_string(i));
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1) g.add_edge(i, j, "e" + std::to_string(bit));
  return g;
}

}  // namespace

TEST_CASE("validate accepts legal graphs") {
  Graph loop;
  loop.add_edge(loop.add_vertex("O"), 0, "l");
  CHECK_FALSE(validate(loop));
  CHECK_FALSE(validate(triangle()));
}

TEST_CASE("validate names the violated axiom") {
  const Graph fixed = Graph::from_raw({"A"}, {{0, 0, 0}, {0, 0, 0}});
  REQUIRE(validate(fixed));
  CHECK(validate(fixed)->find("involution fixed point") != std::string::npos);
  const Graph odd = Graph::from_raw({"A"}, {{0, 0, 0}});
  CHECK(validate(odd));
  const Graph bad_end = Graph::from_raw({"A", "B"}, {{0, 1, 1}, {0, 0, 0}});
  REQUIRE(validate(bad_end));
  CHECK(validate(bad_end)->find("partner endpoints mismatch") != std::string::npos);
  const Graph undeclared = Graph::from_raw({"A"}, {{0, 3, 1}, {3, 0, 0}});
  CHECK(validate(undeclared));
}

TEST_CASE("is_connected examples") {
  CHECK(is_connected(triangle()));
  Graph two;
  two.add_vertex("a");
  two.add_vertex("b");
  CHECK_FALSE(is_connected(two));
  CHECK(is_connected(cycle(6)));
  CHECK_FALSE(is_connected(Graph{}));
}

TEST_CASE("degree examples") {
  const Graph t = triangle();
  for (VertexId v = 0; v < 3; ++v) CHECK(degree(t, v) == 2);
  Graph loop;
  loop.add_edge(loop.add_vertex("O"), 0, "l");
  CHECK(degree(loop, 0) == 2);
  CHECK(loop_count(loop, 0) == 1);
  Graph flower;
  const auto r = flower.add_vertex("R"), u = flower.add_vertex("U");
  flower.add_edge(r, u, "e1");
  flower.add_edge(r, u, "e2");
  CHECK(degree(flower, u) == 2);
  CHECK_THROWS_AS(degree(flower, 7), std::out_of_range);
}

TEST_CASE("quotient_vertices examples") {
  const Graph t = triangle();
  const Quotient same = quotient_vertices(t, {0, 1, 2});
  CHECK(same.graph.vertex_count() == 3);
  CHECK(same.graph.darts() == t.darts());

  // hexagon with B1B2 and C1C2 merged
  Graph hex;
  for (const char* n : {"A0", "B0", "C0", "A1", "B1", "C1"}) hex.add_vertex(n);
  for (std::size_t i = 0; i < 6; ++i) hex.add_edge(i, (i + 1) % 6, "h" + std::to_string(i));
  const Quotient q = quotient_vertices(hex, {0, 1, 2, 3, 1, 2});
  CHECK(q.graph.vertex_count() == 4);
  CHECK(q.graph.edge_count() == 6);
  CHECK(q.graph.vertex_name(1) == "B0|B1");
  CHECK_FALSE(check_morphism(hex, q.graph, q.morphism));

  Graph path;
  for (const char* n : {"A", "B", "C"}) path.add_vertex(n);
  path.add_edge(0, 1, "x");
  path.add_edge(1, 2, "y");
  const Quotient c2 = quotient_vertices(path, {0, 1, 0});
  CHECK(c2.graph.vertex_count() == 2);
  CHECK(c2.graph.edge_count() == 2);
  CHECK(degree(c2.graph, 0) == 2);
  CHECK(degree(c2.graph, 1) == 2);
}

TEST_CASE("handshake and quotient conservation on random graphs") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t v = 1 + trial % 7;
    const Graph g = oracle::random_graph(rng, v, trial % 9);
    REQUIRE_FALSE(validate(g));
    std::size_t total = 0;
    for (VertexId x = 0; x < v; ++x) total += degree(g, x);
    CHECK(total == g.dart_count());

    std::vector<std::size_t> cls(v);
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    for (auto& c : cls) c = pick(rng);
    const Quotient q = quotient_vertices(g, cls);
    REQUIRE_FALSE(validate(q.graph));
    CHECK(q.graph.dart_count() == g.dart_count());
    for (DartId e = 0; e < g.dart_count(); ++e) CHECK(q.graph.partner(e) == g.partner(e));
    CHECK_FALSE(check_morphism(g, q.graph, q.morphism));
  }
}

TEST_CASE("is_connected agrees with union-find on every simple graph up to 7 vertices") {
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 7; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
      const Graph g = from_mask(n, mask);
      CHECK(is_connected(g) == oracle::connected(g));
      ++checked;
    }
  }
  CHECK(checked == 1 + 2 + 8 + 64 + 1024 + 32768 + 2097152);
}

TEST_CASE("is_connected agrees with union-find on sampled graphs with 8 vertices") {
  std::mt19937 rng(99);
  for (std::size_t n : {8u}) {
    const std::size_t pairs = n * (n - 1) / 2;
    std::uniform_int_distribution<std::uint32_t> mask(0, (1u << pairs) - 1);
    for (int trial = 0; trial < 100000; ++trial) {
      std::uint32_t m = mask(rng);
      // thin out so that both outcomes occur
      for (int k = 0; k < trial % 4; ++k) m &= mask(rng);
      const Graph g = from_mask(n, m);
      REQUIRE(is_connected(g) == oracle::connected(g));
    }
  }
}

TEST_CASE("morphism helpers") {
  const Graph t = triangle();
  const GraphMorphism id = identity_morphism(t);
  CHECK_FALSE(check_morphism(t, t, id));
  CHECK(compose(id, id) == id);
  GraphMorphism broken = id;
  broken.dart_map[0] = 2;
  CHECK(check_morphism(t, t, broken));
}
