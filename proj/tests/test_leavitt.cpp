#include <doctest.h>

#include "convalg/errors.hpp"
#include "support.hpp"

using namespace convalg;
using namespace testing_support;

namespace {

const RingDescriptor Q = RingDescriptor::rationals();

LpaElement el(const Graph& g, const std::string& s) { return LpaElement::parse(g, Q, s); }

} // namespace

TEST_CASE("vertex projections") {
  const Graph& g = load_graph("two_cycle.graph");
  CHECK(lpa_mul(el(g, "p[x]"), el(g, "p[x]")).to_string() == "p[x]");
  CHECK(lpa_mul(el(g, "p[x]"), el(g, "p[y]")).is_zero());
}

TEST_CASE("one-loop graph is the Laurent polynomial ring") {
  const Graph& g = load_graph("one_loop.graph");
  CHECK(lpa_mul(el(g, "w[e]"), el(g, "v[e]")).to_string() == "p[x]");
  CHECK(lpa_mul(el(g, "v[e]"), el(g, "w[e]")).to_string() == "p[x]");
  CHECK(el(g, "v[e] * v[e] * v[e] * w[e] * w[e]").to_string() == "v[e]");
  CHECK(lpa_mul(el(g, "v[e]"), el(g, "v[e]")).to_string() == "v[e.e]");
  auto lhs = el(g, "v[e.e.e] * w[e.e]");
  CHECK(expansion_equal(g, lhs.terms(), el(g, "v[e]").terms()));
}

TEST_CASE("two-loop graph: v_a v_a* + v_b v_b* = p") {
  const Graph& g = load_graph("two_loop.graph");
  CHECK(el(g, "v[a] * w[a] + v[b] * w[b]").to_string() == "p[x]");
  CHECK(lpa_mul(el(g, "w[a]"), el(g, "v[b]")).is_zero());
  // the designated edge is a, so v_a v_a* rewrites to p - v_b v_b*
  CHECK(el(g, "v[a] * w[a]").to_string() == "p[x] - v[b] * w[b]");
}

TEST_CASE("printing and parsing round-trip") {
  const Graph& g = load_graph("two_loop.graph");
  auto qi = RingDescriptor::gaussian();
  auto u = LpaElement::parse(g, qi, "(2+i) * v[a.b] * w[b] - 3/2 * p[x] + i * w[a]");
  CHECK(LpaElement::parse(g, qi, u.to_string()).terms() == u.terms());
  CHECK(LpaElement::parse(g, qi, "0").is_zero());
  CHECK_THROWS_AS(el(g, "v[c]"), ParseError);
  CHECK_THROWS_AS(el(g, "2 * "), ParseError);
  CHECK_THROWS_AS(el(g, "v[a] v[b]"), ParseError);
}

TEST_CASE("star") {
  const Graph& g = load_graph("toeplitz.graph");
  CHECK(lpa_star(el(g, "v[a]")).to_string() == "w[a]");
  CHECK(lpa_star(el(g, "p[x]")).to_string() == "p[x]");
  auto qi = RingDescriptor::gaussian();
  CHECK(lpa_star(LpaElement::parse(g, qi, "i * v[b]")).to_string() == "-i * w[b]");
}

TEST_CASE("degenerate vertices carry zero projections") {
  const Graph& g = load_graph("source_vertex.graph");
  CHECK(el(g, "p[s]").is_zero());
  CHECK(el(g, "v[a]").is_zero());
  const Graph& d = load_graph("dead_chain.graph");
  CHECK(el(d, "p[m]").is_zero());
  CHECK(el(d, "v[b]").is_zero());
  CHECK(el(d, "p[x]").to_string() == "p[x]");
}

TEST_CASE("relation suite holds in every fixture graph") {
  for (const auto& name : graph_fixtures()) {
    const Graph& g = load_graph(name);
    for (const auto& r : relation_suite(g, LpaEngine{g, Q})) {
      INFO(name << ": " << r.relation << " at " << r.instance);
      CHECK(r.holds);
    }
  }
}

TEST_CASE("normal form agrees with the expansion oracle; unit; star anti-homomorphism") {
  for (const auto& name : graph_fixtures()) {
    const Graph& g = load_graph(name);
    Rng r(2024);
    auto unit = LpaElement::unit(g, Q);
    for (int n = 0; n < 1000; ++n) {
      auto u = random_element(r, g, Q, 3, 4);
      auto v = random_element(r, g, Q, 3, 4);
      auto uv = lpa_mul(u, v);
      REQUIRE(expansion_equal(g, uv.terms(), raw_product(g, u.terms(), v.terms())));
      REQUIRE(lpa_equal(lpa_mul(unit, u), u));
      REQUIRE(lpa_equal(lpa_mul(u, unit), u));
      REQUIRE(lpa_equal(lpa_star(uv), lpa_mul(lpa_star(v), lpa_star(u))));
      REQUIRE(lpa_equal(lpa_star(lpa_star(u)), u));
      // equal normal forms iff equal oracle vectors
      REQUIRE(lpa_equal(u, v) == expansion_equal(g, u.terms(), v.terms()));
      REQUIRE(expansion_equal(g, lpa_mul(lpa_mul(u, v), u).terms(), lpa_mul(u, lpa_mul(v, u)).terms()));
    }
  }
}

TEST_CASE("normal form is reduced and unique") {
  for (const auto& name : graph_fixtures()) {
    const Graph& g = load_graph(name);
    Rng r(7);
    for (int n = 0; n < 300; ++n) {
      auto u = random_element(r, g, Q);
      for (const auto& [m, c] : u.terms()) {
        REQUIRE(g.is_live(m.alpha.source(g)));
        bool both_designated = !m.alpha.empty() && !m.beta.empty() && m.alpha.edges.back() == m.beta.edges.back() &&
                               g.designated(g.edge(m.alpha.edges.back()).tgt) == m.alpha.edges.back();
        REQUIRE_FALSE(both_designated);
      }
      // adding a oracle-zero combination leaves the normal form unchanged
      TermMap expanded = expand_to_depth(g, u.terms(), min_depth(u.terms()) + 1);
      REQUIRE(LpaElement(g, Q, expanded).terms() == u.terms());
    }
  }
}

namespace {

GSheaf rank_one(const Graph& g, std::vector<long> edge_scalars) {
  GSheaf f;
  f.ring = Q;
  f.rank.assign(g.num_vertices(), 1);
  for (auto c : edge_scalars) {
    Matrix m(Q, 1, 1);
    m(0, 0) = Scalar::from_int(Q, c);
    f.maps.push_back(m);
  }
  return f;
}

} // namespace

TEST_CASE("gsheaf_check") {
  CHECK(gsheaf_check(load_graph("one_loop.graph"), rank_one(load_graph("one_loop.graph"), {1})).ok);
  auto two = gsheaf_check(load_graph("two_loop.graph"), rank_one(load_graph("two_loop.graph"), {1, 1}));
  CHECK_FALSE(two.ok);
  CHECK(two.failing_vertex == 0u);
  CHECK(gsheaf_check(load_graph("two_cycle.graph"), rank_one(load_graph("two_cycle.graph"), {1, 1})).ok);
  CHECK_FALSE(gsheaf_check(load_graph("one_loop.graph"), rank_one(load_graph("one_loop.graph"), {0})).ok);
  CHECK(gsheaf_check(load_graph("two_loop.graph"), GSheaf::zero(load_graph("two_loop.graph"), Q)).ok);
}

TEST_CASE("gsheaf_check agrees with an explicit kernel computation") {
  const Graph& g = load_graph("two_cycle_loops.graph");
  Rng r(12);
  for (int n = 0; n < 200; ++n) {
    GSheaf f;
    f.ring = Q;
    f.rank = {r.below(3), r.below(3)};
    for (std::size_t a = 0; a < g.num_edges(); ++a) {
      Matrix m(Q, f.rank[g.edge(a).src], f.rank[g.edge(a).tgt]);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = random_scalar(r, Q);
      f.maps.push_back(m);
    }
    bool expected = true;
    for (std::size_t x = 0; x < g.num_vertices(); ++x) {
      Matrix s = stacked_map(g, f, x);
      bool injective = kernel_basis(s).cols() == 0;
      bool surjective = kernel_basis(s.transpose()).cols() == 0;
      expected = expected && injective && surjective;
    }
    REQUIRE(gsheaf_check(g, f).ok == expected);
  }
}

TEST_CASE("module_from_gsheaf examples") {
  const Graph& loop = load_graph("one_loop.graph");
  auto m = module_from_gsheaf(loop, rank_one(loop, {3}));
  CHECK(m.dim() == 1);
  CHECK(m.act(el(loop, "v[e]"))(0, 0) == Scalar::from_int(Q, 3));
  CHECK(m.act(el(loop, "w[e]"))(0, 0) == Scalar::parse(Q, "1/3"));
  CHECK(m.act(el(loop, "v[e.e] * w[e]"))(0, 0) == Scalar::from_int(Q, 3));
  auto back = gsheaf_from_module(m);
  CHECK(back.sheaf.maps[0](0, 0) == Scalar::from_int(Q, 3));

  const Graph& two = load_graph("two_loop.graph");
  CHECK(module_from_gsheaf(two, GSheaf::zero(two, Q)).dim() == 0);
  const Graph& cyc = load_graph("two_cycle.graph");
  auto mc = module_from_gsheaf(cyc, rank_one(cyc, {2, 5}));
  CHECK(mc.dim() == 2);
  CHECK_THROWS_AS(module_from_gsheaf(two, rank_one(two, {1, 1})), InvariantError);
}

TEST_CASE("module action is a right action") {
  const Graph& g = load_graph("two_cycle.graph");
  auto m = module_from_gsheaf(g, rank_one(g, {2, 5}));
  Rng r(4);
  for (int n = 0; n < 200; ++n) {
    auto u = random_element(r, g, Q), v = random_element(r, g, Q);
    REQUIRE(m.act(lpa_mul(u, v)) == m.act(v) * m.act(u));
  }
}

TEST_CASE("degenerate module is rejected with a witness") {
  const Graph& g = load_graph("one_loop.graph");
  // K acted on by v_e = 2, plus a vector killed by everything
  Matrix p(Q, 2, 2), v(Q, 2, 2), w(Q, 2, 2);
  p(0, 0) = Scalar::one(Q);
  v(0, 0) = Scalar::from_int(Q, 2);
  w(0, 0) = Scalar::parse(Q, "1/2");
  LpaModule m(g, Q, 2, {p}, {v}, {w});
  auto witness = m.degeneracy_witness();
  REQUIRE(witness);
  CHECK((*witness)(1, 0).is_one());
  CHECK_THROWS_AS(gsheaf_from_module(m), InvariantError);
  CHECK_THROWS_AS(LpaModule(g, Q, 2, {p}, {v}, {v}), InvariantError);
}
