#include <doctest.h>

#include <algorithm>

#include "convalg/equivcore.hpp"
#include "convalg/errors.hpp"
#include "support.hpp"

using namespace convalg;
using namespace testing_support;

namespace {

const RingDescriptor Q = RingDescriptor::rationals();

Matrix scalar_matrix(long c) {
  Matrix m(Q, 1, 1);
  m(0, 0) = Scalar::from_int(Q, c);
  return m;
}

// Forgets to apply the arrow action on every third call to build_S.
class FlakyFamily : public GroupoidEquivFamily {
public:
  explicit FlakyFamily(const FiniteGroupoid& g) : GroupoidEquivFamily(g), g_(g) {}
  ModuleRep build_S(const SheafRep& n) const override {
    ModuleRep m = GroupoidEquivFamily::build_S(n);
    if (++calls_ % 3 == 0 && m.dim > 0)
      for (std::size_t a = 0; a < g_.num_arrows(); ++a)
        if (a != g_.identity(g_.src(a))) m.generators[a] = Matrix(Q, m.dim, m.dim);
    return m;
  }

private:
  const FiniteGroupoid& g_;
  mutable std::size_t calls_ = 0;
};

} // namespace

TEST_CASE("zero objects map to zero") {
  const Graph& g = load_graph("two_cycle.graph");
  GraphEquivFamily fam(g);
  SheafRep zero{Q, {0, 0}, {Matrix(Q, 0, 0), Matrix(Q, 0, 0)}};
  CHECK(fam.sheaf_problem(zero).empty());
  ModuleRep s = fam.build_S(zero);
  CHECK(s.dim == 0);
  CHECK(build_T(fam, s).sheaf.rank == std::vector<std::size_t>{0, 0});
}

TEST_CASE("one-loop graph: a rank-one sheaf is a one-dimensional module") {
  const Graph& g = load_graph("one_loop.graph");
  GraphEquivFamily fam(g);
  SheafRep n{Q, {1}, {scalar_matrix(5)}};
  REQUIRE(fam.sheaf_problem(n).empty());
  ModuleRep m = fam.build_S(n);
  REQUIRE(m.dim == 1);
  CHECK(m.generators[0] == scalar_matrix(1));
  CHECK(fam.label_action(m, 0) == scalar_matrix(5));
  auto t = build_T(fam, m);
  CHECK(t.sheaf.maps[0] == scalar_matrix(5));
  CHECK(fam.sheaf_problem(SheafRep{Q, {1}, {scalar_matrix(0)}}) != "");
}

TEST_CASE("groupoid family S agrees with functor_S") {
  Rng r(12);
  FiniteGroupoid g = FiniteGroupoid::product(FiniteGroupoid::pair(2), FiniteGroupoid::cyclic(2));
  GroupoidEquivFamily fam(g);
  for (int t = 0; t < 10; ++t) {
    SheafRep n = fam.random_sheaf(r.engine, 4);
    GpdModule direct = functor_S(g, EquivariantSheaf{n.ring, n.rank, n.maps});
    ModuleRep m = fam.build_S(n);
    CHECK(m.dim == direct.dim());
    CHECK(m.generators == direct.actions());
    CHECK(fam.module_problem(m).empty());
  }
}

TEST_CASE("two-loop graph: finite-rank sheaves vanish") {
  const Graph& g = load_graph("two_loop.graph");
  GraphEquivFamily fam(g);
  Rng r(1);
  for (int t = 0; t < 5; ++t) CHECK(fam.random_sheaf(r.engine, 4).rank == std::vector<std::size_t>{0});
  auto res = verify_equivalence(fam, 5, 3, 4);
  CHECK(res.ok);
  CHECK(res.degenerate_rejected);
}

TEST_CASE("equivalence witnesses on groupoids") {
  std::vector<FiniteGroupoid> gpds{FiniteGroupoid::load(fixture("trivial.gpd")), FiniteGroupoid::load(fixture("z2.gpd")),
                                   FiniteGroupoid::load(fixture("pair2.gpd")), FiniteGroupoid::klein_four(),
                                   FiniteGroupoid::symmetric_three(),
                                   FiniteGroupoid::product(FiniteGroupoid::pair(2), FiniteGroupoid::cyclic(2)),
                                   FiniteGroupoid::disjoint_union(FiniteGroupoid::cyclic(3), FiniteGroupoid::pair(2))};
  for (const auto& g : gpds) {
    GroupoidEquivFamily fam(g);
    auto res = verify_equivalence(fam, 20, 7, 4);
    CAPTURE(g.to_text());
    CAPTURE(res.failure);
    CHECK(res.ok);
    CHECK(res.instances == 20);
    CHECK(res.naturality_checks == 40);
    CHECK(res.limit_checks == 60);
    CHECK(res.degenerate_rejected);
    CHECK(res.witness.units.size() == 20);
    CHECK(std::any_of(res.witness.units.begin(), res.witness.units.end(), [](const Matrix& u) { return u.rows() > 2; }));
  }
}

TEST_CASE("equivalence witnesses on graphs") {
  for (std::string name : {"one_loop.graph", "two_cycle.graph", "triangle_loop.graph", "dead_chain.graph",
                           "source_vertex.graph", "toeplitz.graph", "two_cycle_loops.graph"}) {
    GraphEquivFamily fam(load_graph(name));
    auto res = verify_equivalence(fam, 15, 5, 3);
    CAPTURE(name);
    CAPTURE(res.failure);
    CHECK(res.ok);
    CHECK(res.degenerate_rejected);
    const bool forced_zero = name == "triangle_loop.graph" || name == "two_cycle_loops.graph";
    CHECK(std::any_of(res.witness.units.begin(), res.witness.units.end(), [](const Matrix& u) { return u.rows() > 0; }) ==
          !forced_zero);
  }
}

TEST_CASE("a dead vector is the rejection witness") {
  FiniteGroupoid g = FiniteGroupoid::pair(2);
  GroupoidEquivFamily fam(g);
  Rng r(4);
  SheafRep n = fam.random_sheaf(r.engine, 2);
  ModuleRep dead = with_dead_vector(fam.build_S(n));
  auto w = degeneracy_witness(dead);
  REQUIRE(w);
  Matrix e(Q, dead.dim, 1);
  e(dead.dim - 1, 0) = Scalar::one(Q);
  CHECK(*w == e);
  CHECK_THROWS_AS(build_T(fam, dead), InvariantError);
  try {
    build_T(fam, dead);
  } catch (const InvariantError& err) {
    CHECK(std::string(err.what()).find(w->transpose().to_string()) != std::string::npos);
  }
}

TEST_CASE("a broken functor is caught at the first failing instance") {
  FiniteGroupoid g = FiniteGroupoid::load(fixture("z2.gpd"));
  FlakyFamily fam(g);
  auto res = verify_equivalence(fam, 10, 1, 3);
  CHECK_FALSE(res.ok);
  REQUIRE(res.failing_instance);
  CHECK(*res.failing_instance < 10);
  CHECK(res.instances == *res.failing_instance);
  CHECK(!res.failure.empty());
}

TEST_CASE("morphism helpers") {
  Rng r(17);
  FiniteGroupoid g = FiniteGroupoid::symmetric_three();
  GroupoidEquivFamily fam(g);
  for (int t = 0; t < 10; ++t) {
    SheafRep n = fam.random_sheaf(r.engine, 3), n2 = fam.random_sheaf(r.engine, 3);
    auto psi = random_sheaf_morphism(fam, n, n2, r.engine);
    CHECK(is_sheaf_morphism(fam, n, n2, psi));
    CHECK(is_module_morphism(fam.build_S(n), fam.build_S(n2), S_on_morphism(n, n2, psi)));
    ModuleRep m = fam.build_S(n);
    Matrix p = random_invertible(r.engine, Q, m.dim);
    ModuleRep mp = conjugate(m, p);
    CHECK(fam.module_problem(mp).empty());
    CHECK(is_module_morphism(mp, m, p));
  }
}
