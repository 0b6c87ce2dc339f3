#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "convalg/graph.hpp"
#include "convalg/gsheaf.hpp"
#include "convalg/linalg.hpp"
#include "convalg/scalar.hpp"

namespace convalg {

/// v_alpha v_beta^*, with alpha and beta sharing their source vertex.
/// v_a lives in p_{tgt a} L p_{src a}, so alpha's anchor is the row vertex.
struct Monomial {
  Path alpha;
  Path beta;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

using TermMap = std::map<Monomial, Scalar>;

/// Rewrites to the reduced spanning set: drops dead-source monomials and zero
/// coefficients, and replaces (alpha d, beta d), d designated at its target w, by
/// (alpha, beta) - sum over the other live edges f into w of (alpha f, beta f).
TermMap reduce_designated(const Graph& g, TermMap terms);

/// Element of the Leavitt path algebra L_K(G), always in normal form.
class LpaElement {
public:
  LpaElement(const Graph& g, const RingDescriptor& ring) : graph_(&g), ring_(ring) {}
  LpaElement(const Graph& g, const RingDescriptor& ring, TermMap terms);

  static LpaElement vertex(const Graph& g, const RingDescriptor& ring, std::size_t v);
  static LpaElement edge(const Graph& g, const RingDescriptor& ring, std::size_t a);
  static LpaElement edge_star(const Graph& g, const RingDescriptor& ring, std::size_t a);
  static LpaElement monomial(const Graph& g, const Scalar& c, const Path& alpha, const Path& beta);
  /// Sum of all vertex projections, the unit of the algebra.
  static LpaElement unit(const Graph& g, const RingDescriptor& ring);
  /// Terms `c * v[a.b] * w[c.d]`, `c * p[x]` joined by + or -; a term may be any product of factors.
  static LpaElement parse(const Graph& g, const RingDescriptor& ring, std::string_view text);

  const Graph& graph() const noexcept { return *graph_; }
  const RingDescriptor& ring() const noexcept { return ring_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  LpaElement operator+(const LpaElement& other) const;
  LpaElement operator-(const LpaElement& other) const;
  LpaElement scaled(const Scalar& c) const;
  std::string to_string() const;

private:
  const Graph* graph_;
  RingDescriptor ring_;
  TermMap terms_;
};

LpaElement lpa_mul(const LpaElement& u, const LpaElement& v);
LpaElement lpa_star(const LpaElement& u);
bool lpa_equal(const LpaElement& u, const LpaElement& v);

std::string monomial_to_string(const Graph& g, const Monomial& m);
std::string format_terms(const std::vector<std::pair<std::string, Scalar>>& terms);

struct RelationResult {
  std::string relation;
  std::string instance;
  bool holds;
};

/// The four defining relation families, evaluated in any realization providing
/// p(x), v(a), vstar(a), mul, add, zero() and equal.
template <class Engine>
std::vector<RelationResult> relation_suite(const Graph& g, const Engine& eng) {
  std::vector<RelationResult> out;
  const std::size_t nv = g.num_vertices(), ne = g.num_edges();
  for (std::size_t x = 0; x < nv; ++x)
    for (std::size_t y = 0; y < nv; ++y) {
      auto lhs = eng.mul(eng.p(x), eng.p(y));
      auto rhs = x == y ? eng.p(x) : eng.zero();
      out.push_back({"p_e p_e' = delta p_e", g.vertex_name(x) + "," + g.vertex_name(y), eng.equal(lhs, rhs)});
    }
  for (std::size_t a = 0; a < ne; ++a) {
    const auto& ed = g.edge(a);
    bool ok = eng.equal(eng.mul(eng.v(a), eng.p(ed.src)), eng.v(a)) && eng.equal(eng.mul(eng.p(ed.tgt), eng.v(a)), eng.v(a));
    out.push_back({"v_a p_s(a) = p_t(a) v_a = v_a", ed.name, ok});
  }
  for (std::size_t a = 0; a < ne; ++a)
    for (std::size_t b = 0; b < ne; ++b) {
      auto lhs = eng.mul(eng.vstar(a), eng.v(b));
      auto rhs = a == b ? eng.p(g.edge(a).src) : eng.zero();
      out.push_back({"v_a* v_b = delta p_s(a)", g.edge(a).name + "," + g.edge(b).name, eng.equal(lhs, rhs)});
    }
  for (std::size_t x = 0; x < nv; ++x) {
    auto sum = eng.zero();
    for (auto a : g.incoming(x)) sum = eng.add(sum, eng.mul(eng.v(a), eng.vstar(a)));
    out.push_back({"p_e = sum v_x v_x*", g.vertex_name(x), eng.equal(eng.p(x), sum)});
  }
  return out;
}

/// Relation engine backed by lpa_mul.
struct LpaEngine {
  const Graph& g;
  RingDescriptor ring;
  LpaElement p(std::size_t x) const { return LpaElement::vertex(g, ring, x); }
  LpaElement v(std::size_t a) const { return LpaElement::edge(g, ring, a); }
  LpaElement vstar(std::size_t a) const { return LpaElement::edge_star(g, ring, a); }
  LpaElement zero() const { return LpaElement(g, ring); }
  LpaElement mul(const LpaElement& a, const LpaElement& b) const { return lpa_mul(a, b); }
  LpaElement add(const LpaElement& a, const LpaElement& b) const { return a + b; }
  bool equal(const LpaElement& a, const LpaElement& b) const { return lpa_equal(a, b); }
};

/// Finite-dimensional right module, acting on column vectors: rho(u v) = rho(v) rho(u).
class LpaModule {
public:
  /// Validates every defining relation; throws InvariantError naming the first failure.
  LpaModule(const Graph& g, const RingDescriptor& ring, std::size_t dim, std::vector<Matrix> p,
            std::vector<Matrix> v, std::vector<Matrix> vstar);

  const Graph& graph() const noexcept { return *graph_; }
  const RingDescriptor& ring() const noexcept { return ring_; }
  std::size_t dim() const noexcept { return dim_; }
  const Matrix& p(std::size_t x) const { return p_.at(x); }
  const Matrix& v(std::size_t a) const { return v_.at(a); }
  const Matrix& vstar(std::size_t a) const { return vstar_.at(a); }
  /// Matrix of right multiplication by u.
  Matrix act(const LpaElement& u) const;
  /// A vector not fixed by the sum of the local units, if any.
  std::optional<Matrix> degeneracy_witness() const;

private:
  const Graph* graph_;
  RingDescriptor ring_;
  std::size_t dim_;
  std::vector<Matrix> p_, v_, vstar_;
};

/// M = sum of F(x) with p_x projecting onto F(x), v_a acting by F(a) and v_a^* through
/// the inverse of the stacked map. Requires the sheaf condition.
LpaModule module_from_gsheaf(const Graph& g, const GSheaf& f);

struct SheafFromModule {
  GSheaf sheaf;
  /// Columns: the chosen basis of M p_x inside M, per vertex.
  std::vector<Matrix> bases;
};

/// F(x) = M p_x with the restriction maps read off v_a; throws InvariantError with a
/// witness when M is degenerate or the stacked map is not invertible.
SheafFromModule gsheaf_from_module(const LpaModule& m);

} // namespace convalg
