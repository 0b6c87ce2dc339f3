#include <doctest.h>

#include <set>

#include "convalg/errors.hpp"
#include "convalg/stonelocale.hpp"
#include "support.hpp"

using namespace convalg;
using namespace testing_support;

namespace {

// Point-set model: a clopen is the set of live paths of a fixed length under it.
std::set<Path> cells_of(const Clopen& u, std::size_t depth) {
  auto c = u.cells(depth);
  return {c.begin(), c.end()};
}

Clopen random_clopen(Rng& r, const Graph& g, std::size_t anchor, std::size_t max_depth) {
  std::vector<Path> paths;
  std::size_t n = r.below(4);
  for (std::size_t i = 0; i < n; ++i) {
    auto all = live_paths(g, anchor, r.below(max_depth + 1));
    if (!all.empty()) paths.push_back(all[r.below(all.size())]);
  }
  return Clopen(g, anchor, paths);
}

LCSection random_section(Rng& r, const Graph& g, const RingDescriptor& ring, std::size_t anchor, std::size_t depth) {
  std::map<Path, Scalar> pieces;
  for (auto& p : live_paths(g, anchor, depth))
    if (r.coin()) pieces.emplace(p, random_scalar(r, ring));
  return LCSection(g, ring, anchor, pieces);
}

} // namespace

TEST_CASE("graph parsing") {
  const Graph& g = load_graph("two_loop.graph");
  CHECK(g.num_vertices() == 1);
  CHECK(g.num_edges() == 2);
  CHECK(g.designated(0) == g.find_edge("a"));
  CHECK_THROWS_AS(Graph::parse("vertex x\nedge a x y\n"), ParseError);
  try {
    Graph::parse("vertex x\n\nedge a x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  const Graph& s = load_graph("dead_chain.graph");
  CHECK_FALSE(s.is_live(*s.find_vertex("s")));
  CHECK_FALSE(s.is_live(*s.find_vertex("m")));
  CHECK(s.is_live(*s.find_vertex("x")));
  CHECK(s.designated(*s.find_vertex("x")) == s.find_edge("l"));
}

TEST_CASE("clopen examples on the two-loop graph") {
  const Graph& g = load_graph("two_loop.graph");
  auto full = Clopen::full(g, 0);
  auto a = Clopen::parse(g, "x:a");
  auto ab = Clopen::parse(g, "x:a.b");
  auto b = Clopen::parse(g, "x:b");
  CHECK(clopen_meet(full, a) == a);
  CHECK(clopen_complement(clopen_complement(ab)) == ab);
  CHECK(clopen_meet(a, ab) == ab);
  CHECK(clopen_meet(b, ab).is_empty());
  CHECK(clopen_join(a, b) == full);
  CHECK(Clopen::parse(g, "x:a.a | x:a.b") == a);
  CHECK(clopen_complement(a) == b);
  CHECK(way_below(a, a));
  CHECK(way_below(Clopen::empty(g, 0), a));
  CHECK_FALSE(way_below(full, a));
  auto rb = rather_below(ab, full);
  CHECK(rb.holds);
  CHECK(rb.witness == clopen_complement(ab));
  CHECK(Clopen::parse(g, "x:{}").is_empty());
}

TEST_CASE("anchor mismatch is an error") {
  const Graph& g = load_graph("two_cycle.graph");
  CHECK_THROWS_AS(clopen_meet(Clopen::full(g, 0), Clopen::full(g, 1)), PreconditionError);
}

TEST_CASE("one live child: cylinders collapse to their shortest representative") {
  const Graph& g = load_graph("one_loop.graph");
  CHECK(Clopen::parse(g, "x:e.e.e") == Clopen::full(g, 0));
  const Graph& s = load_graph("source_vertex.graph");
  // the edge from the source carries an empty cylinder
  CHECK(Clopen::parse(s, "x:a").is_empty());
}

TEST_CASE("Boolean laws, normal-form uniqueness and below-relations agree with the point-set model") {
  Rng r(99);
  for (const auto& name : graph_fixtures()) {
    const Graph& g = load_graph(name);
    for (std::size_t anchor = 0; anchor < g.num_vertices(); ++anchor)
      for (int n = 0; n < 150; ++n) {
        Clopen u = random_clopen(r, g, anchor, 3), v = random_clopen(r, g, anchor, 3);
        const std::size_t d = 4;
        auto cu = cells_of(u, d), cv = cells_of(v, d);
        std::set<Path> meet, join, minus;
        std::set_intersection(cu.begin(), cu.end(), cv.begin(), cv.end(), std::inserter(meet, meet.end()));
        std::set_union(cu.begin(), cu.end(), cv.begin(), cv.end(), std::inserter(join, join.end()));
        std::set_difference(cu.begin(), cu.end(), cv.begin(), cv.end(), std::inserter(minus, minus.end()));
        REQUIRE(cells_of(clopen_meet(u, v), d) == meet);
        REQUIRE(cells_of(clopen_join(u, v), d) == join);
        bool subset = minus.empty();
        REQUIRE(way_below(u, v) == subset);
        auto rb = rather_below(u, v);
        REQUIRE(rb.holds == subset);
        REQUIRE(clopen_meet(rb.witness, u).is_empty());
        if (subset) REQUIRE(clopen_join(rb.witness, v) == Clopen::full(g, anchor));
        // identical point sets have identical normal forms
        REQUIRE((cu == cv) == (u == v));
        for (std::size_t i = 0; i + 1 < u.cylinders().size(); ++i)
          for (std::size_t j = i + 1; j < u.cylinders().size(); ++j) {
            REQUIRE_FALSE(u.cylinders()[i].is_prefix_of(u.cylinders()[j]));
            REQUIRE_FALSE(u.cylinders()[j].is_prefix_of(u.cylinders()[i]));
          }
      }
  }
}

TEST_CASE("extend_with_support") {
  const Graph& g = load_graph("two_loop.graph");
  auto q = RingDescriptor::rationals();
  auto a = Clopen::parse(g, "x:a");
  auto aa = Clopen::parse(g, "x:a.a");
  auto s = LCSection::constant_on(a, Scalar::one(q));
  auto ext = extend_with_support(s, aa, a);
  CHECK(ext.restricted(aa) == s.restricted(aa));
  CHECK(clopen_subset(ext.support(), a));
  CHECK(extend_with_support(s, a, a) == s);
  CHECK(extend_with_support(LCSection::zero(g, q, 0), aa, a).is_zero());
  CHECK_THROWS_AS(extend_with_support(s, a, aa), PreconditionError);

  Rng r(3);
  for (const auto& name : graph_fixtures()) {
    const Graph& h = load_graph(name);
    for (int n = 0; n < 200; ++n) {
      std::size_t anchor = r.below(h.num_vertices());
      Clopen v = random_clopen(r, h, anchor, 3);
      Clopen u = clopen_meet(v, random_clopen(r, h, anchor, 3));
      auto sec = random_section(r, h, q, anchor, 3);
      auto out = extend_with_support(sec, u, v);
      REQUIRE(out.restricted(u) == sec.restricted(u));
      REQUIRE(clopen_subset(out.support(), v));
    }
  }
}

TEST_CASE("partition_of_support examples") {
  const Graph& g = load_graph("two_loop.graph");
  auto q = RingDescriptor::rationals();
  auto full = Clopen::full(g, 0);
  auto one = LCSection::constant_on(full, Scalar::one(q));
  auto parts = partition_of_support(one, {Clopen::parse(g, "x:a"), Clopen::parse(g, "x:b")});
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == LCSection::constant_on(Clopen::parse(g, "x:a"), Scalar::one(q)));
  CHECK(parts[1] == LCSection::constant_on(Clopen::parse(g, "x:b"), Scalar::one(q)));
  CHECK(partition_of_support(one, {full})[0] == one);
  auto zeros = partition_of_support(LCSection::zero(g, q, 0), {full, full});
  CHECK((zeros[0].is_zero() && zeros[1].is_zero()));
  CHECK_THROWS_AS(partition_of_support(one, {Clopen::parse(g, "x:a")}), PreconditionError);
  // first cover wins on overlaps
  auto overlap = partition_of_support(one, {full, Clopen::parse(g, "x:a")});
  CHECK(overlap[0] == one);
  CHECK(overlap[1].is_zero());
}

TEST_CASE("section arithmetic matches cellwise values") {
  const Graph& g = load_graph("toeplitz.graph");
  auto q = RingDescriptor::rationals();
  Rng r(8);
  for (int n = 0; n < 200; ++n) {
    std::size_t anchor = r.below(g.num_vertices());
    auto s = random_section(r, g, q, anchor, 2);
    auto t = random_section(r, g, q, anchor, 3);
    auto sum = s + t;
    for (const auto& [p, c] : sum.cells(3)) REQUIRE(c == s.value_at(p) + t.value_at(p));
    REQUIRE((sum - t) == s);
  }
}
