#include <doctest.h>

#include "convalg/errors.hpp"
#include "convalg/linalg.hpp"
#include "support.hpp"

using namespace convalg;
using testing_support::Rng;
using testing_support::random_scalar;

namespace {

const std::vector<RingDescriptor>& all_rings() {
  static const std::vector<RingDescriptor> rings{RingDescriptor::integers(), RingDescriptor::rationals(),
                                                 RingDescriptor::localized(2), RingDescriptor::localized(3),
                                                 RingDescriptor::gaussian()};
  return rings;
}

} // namespace

TEST_CASE("star examples") {
  auto q = RingDescriptor::rationals();
  auto qi = RingDescriptor::gaussian();
  CHECK(Scalar::parse(q, "3/2").star() == Scalar::parse(q, "3/2"));
  CHECK(Scalar::parse(qi, "2+i").star() == Scalar::parse(qi, "2-i"));
  CHECK(Scalar::parse(qi, "1+3i").star().star() == Scalar::parse(qi, "1+3i"));
}

TEST_CASE("inv_nat") {
  auto z2 = RingDescriptor::localized(2);
  CHECK(inv_nat(z2, 2).value() == Scalar::parse(z2, "1/2"));
  CHECK_FALSE(inv_nat(RingDescriptor::integers(), 2).has_value());
  CHECK(inv_nat(RingDescriptor::rationals(), 6).value() == Scalar::parse(RingDescriptor::rationals(), "1/6"));
  CHECK_FALSE(inv_nat(z2, 6).has_value());
  CHECK(inv_nat(RingDescriptor::localized(3), 9).value().to_string() == "1/3^2");
  CHECK_THROWS_AS(inv_nat(z2, 0), PreconditionError);
}

TEST_CASE("ring descriptors") {
  CHECK(RingDescriptor::parse("Z[1/5]") == RingDescriptor::localized(5));
  CHECK_THROWS_AS(RingDescriptor::parse("Z[1/4]"), ParseError);
  CHECK_THROWS_AS(RingDescriptor::localized(9), PreconditionError);
  CHECK_THROWS_AS(RingDescriptor::parse("R"), ParseError);
  CHECK(RingDescriptor::parse("Q(i)").involution() == Involution::Conjugation);
}

TEST_CASE("scalar grammar") {
  auto qi = RingDescriptor::gaussian();
  auto z2 = RingDescriptor::localized(2);
  CHECK(Scalar::parse(qi, "-i").to_string() == "-i");
  CHECK(Scalar::parse(qi, "3/2i").to_string() == "3/2i");
  CHECK(Scalar::parse(qi, "(2 + i)").to_string() == "2+i");
  CHECK(Scalar::parse(qi, "1/2-3/4i").to_string() == "1/2-3/4i");
  CHECK(Scalar::parse(z2, "3/2^3").to_string() == "3/2^3");
  CHECK(Scalar::parse(z2, "6/8").to_string() == "3/2^2");
  CHECK_THROWS_AS(Scalar::parse(z2, "1/3"), ParseError);
  CHECK_THROWS_AS(Scalar::parse(RingDescriptor::integers(), "1/2"), ParseError);
  CHECK_THROWS_AS(Scalar::parse(qi, "2+"), ParseError);
  CHECK_THROWS_AS(Scalar::parse(qi, "1/0"), ParseError);
}

TEST_CASE("ring axioms, involution and canonical printing on random triples") {
  for (const auto& ring : all_rings()) {
    Rng r(17);
    for (int n = 0; n < 1000; ++n) {
      Scalar a = random_scalar(r, ring), b = random_scalar(r, ring), c = random_scalar(r, ring);
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE((a + b) + c == a + (b + c));
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE(a * b == b * a);
      REQUIRE(a + b == b + a);
      REQUIRE((a + b).star() == a.star() + b.star());
      REQUIRE((a * b).star() == b.star() * a.star());
      REQUIRE(a.star().star() == a);
      REQUIRE(Scalar::parse(ring, a.to_string()) == a);
      if (auto inv = a.inverse()) REQUIRE((a * *inv).is_one());
    }
  }
}

TEST_CASE("mixing rings is rejected") {
  CHECK_THROWS_AS(Scalar::one(RingDescriptor::integers()) + Scalar::one(RingDescriptor::rationals()), PreconditionError);
}

TEST_CASE("linear algebra over the fraction field") {
  auto q = RingDescriptor::rationals();
  Matrix m(q, 3, 3);
  int vals[3][3] = {{2, 1, 0}, {1, 1, 1}, {3, 2, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Scalar::from_int(q, vals[i][j]);
  CHECK(rank(m) == 2);
  CHECK_FALSE(inverse(m).has_value());
  Matrix k = kernel_basis(m);
  CHECK(k.cols() == 1);
  CHECK((m * k).is_zero());
  CHECK(column_basis(m).cols() == 2);
  Matrix id = Matrix::identity(q, 3);
  m(2, 2) = Scalar::from_int(q, 5);
  auto inv = inverse(m);
  REQUIRE(inv);
  CHECK((m * *inv).is_identity());
  auto x = solve(m, id);
  REQUIRE(x);
  CHECK(*x == *inv);
}

TEST_CASE("inverse respects the coefficient ring") {
  auto z = RingDescriptor::integers();
  Matrix m(z, 2, 2);
  m(0, 0) = Scalar::from_int(z, 2);
  m(1, 1) = Scalar::one(z);
  CHECK_FALSE(inverse(m).has_value());
  CHECK(inverse(m.in_ring(RingDescriptor::localized(2))).has_value());
}

TEST_CASE("Smith normal form over Z and Z[1/p]") {
  Rng r(5);
  for (const auto& ring : {RingDescriptor::integers(), RingDescriptor::localized(2), RingDescriptor::localized(3)}) {
    for (int n = 0; n < 200; ++n) {
      std::size_t rows = 1 + r.below(4), cols = 1 + r.below(4);
      Matrix a(ring, rows, cols);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = random_scalar(r, ring);
      auto s = smith_normal_form(a);
      REQUIRE(s.u * a * s.v == s.d);
      REQUIRE((s.u * s.u_inverse).is_identity());
      REQUIRE(inverse(s.v).has_value());
      REQUIRE(s.invariants.size() == rank(a));
      for (std::size_t i = 0; i + 1 < s.invariants.size(); ++i)
        REQUIRE(s.invariants[i + 1] % s.invariants[i] == 0);
      if (ring.kind() == RingKind::LocalizedIntegers)
        for (const auto& d : s.invariants) REQUIRE(d % ring.prime() != 0);
    }
  }
  auto z = RingDescriptor::integers();
  Matrix a(z, 2, 2);
  a(0, 0) = Scalar::from_int(z, 2);
  a(1, 1) = Scalar::from_int(z, 3);
  auto s = smith_normal_form(a);
  CHECK(s.invariants == std::vector<mpz_class>{1, 6});
}
