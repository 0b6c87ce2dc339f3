#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "convalg/graphtopos.hpp"
#include "convalg/leavitt.hpp"

namespace testing_support {

using namespace convalg;

inline std::string fixture(const std::string& name) { return std::string(CONVALG_FIXTURES) + "/" + name; }

inline const std::vector<std::string>& graph_fixtures() {
  static const std::vector<std::string> names{"one_loop.graph",      "two_loop.graph",   "two_cycle.graph",
                                              "source_vertex.graph", "dead_chain.graph", "triangle_loop.graph",
                                              "toeplitz.graph",      "two_cycle_loops.graph"};
  return names;
}

inline const Graph& load_graph(const std::string& name) {
  static std::map<std::string, Graph> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, Graph::load(fixture(name))).first;
  return it->second;
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
  long between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool coin() { return below(2) == 1; }
};

inline Scalar random_scalar(Rng& r, const RingDescriptor& ring, bool allow_zero = true) {
  while (true) {
    mpq_class re(r.between(-3, 3));
    mpq_class im(0);
    if (ring.kind() == RingKind::Rationals && r.below(3) == 0) re /= r.between(1, 3);
    if (ring.kind() == RingKind::LocalizedIntegers && r.below(3) == 0) re /= ring.prime();
    if (ring.kind() == RingKind::GaussianRationals) {
      im = r.between(-2, 2);
      if (r.below(3) == 0) re /= 2;
    }
    re.canonicalize();
    Scalar s(ring, re, im);
    if (allow_zero || !s.is_zero()) return s;
  }
}

/// Product of up to `max_gens` generators v_a, v_a^*, p_x.
inline LpaElement random_word(Rng& r, const Graph& g, const RingDescriptor& ring, std::size_t max_gens) {
  std::size_t n = 1 + r.below(max_gens);
  LpaElement w = LpaElement::unit(g, ring);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t kind = r.below(3);
    LpaElement gen = kind == 0 && g.num_edges() ? LpaElement::edge(g, ring, r.below(g.num_edges()))
                     : kind == 1 && g.num_edges() ? LpaElement::edge_star(g, ring, r.below(g.num_edges()))
                                                  : LpaElement::vertex(g, ring, r.below(g.num_vertices()));
    w = lpa_mul(w, gen);
  }
  return w;
}

inline LpaElement random_element(Rng& r, const Graph& g, const RingDescriptor& ring, std::size_t max_terms = 3,
                                 std::size_t max_gens = 5) {
  LpaElement out(g, ring);
  std::size_t n = 1 + r.below(max_terms);
  for (std::size_t i = 0; i < n; ++i) out = out + random_word(r, g, ring, max_gens).scaled(random_scalar(r, ring, false));
  return out;
}

/// Independent check of Leavitt normal forms: expand every monomial with the
/// relation p_w = sum v_f v_f^* (live f into w) until min(|alpha|, |beta|) reaches a
/// common depth; distinct expanded monomials are disjoint pair cylinders, hence
/// linearly independent, so the expanded coefficient maps must agree exactly.
inline TermMap expand_to_depth(const Graph& g, const TermMap& terms, std::size_t depth) {
  TermMap out;
  std::vector<std::pair<Monomial, Scalar>> work(terms.begin(), terms.end());
  while (!work.empty()) {
    auto [m, c] = work.back();
    work.pop_back();
    std::size_t src = m.alpha.source(g);
    if (!g.is_live(src)) continue;
    if (std::min(m.alpha.length(), m.beta.length()) < depth) {
      for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (g.edge(e).tgt == src && g.is_live(g.edge(e).src))
          work.emplace_back(Monomial{m.alpha.extended(e), m.beta.extended(e)}, c);
      continue;
    }
    auto [it, fresh] = out.emplace(m, c);
    if (!fresh) it->second += c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

inline std::size_t min_depth(const TermMap& t) {
  std::size_t d = 0;
  for (const auto& [m, _] : t) d = std::max(d, std::min(m.alpha.length(), m.beta.length()));
  return d;
}

inline bool expansion_equal(const Graph& g, const TermMap& a, const TermMap& b) {
  std::size_t d = std::max(min_depth(a), min_depth(b));
  return expand_to_depth(g, a, d) == expand_to_depth(g, b, d);
}

/// Raw (unreduced) product of monomial sums, used with the expansion oracle.
inline TermMap raw_product(const Graph& g, const TermMap& a, const TermMap& b) {
  TermMap out;
  for (const auto& [m1, c1] : a)
    for (const auto& [m2, c2] : b) {
      // expand both middles to a common length, then match
      std::size_t L = std::max(m1.beta.length(), m2.alpha.length());
      for (auto& bt : live_extensions(g, m1.beta, L - m1.beta.length()))
        for (auto& gs : live_extensions(g, m2.alpha, L - m2.alpha.length()))
          if (bt == gs) {
            Monomial m{m1.alpha.concat(m1.beta.remainder_in(bt, g)), m2.beta.concat(m2.alpha.remainder_in(gs, g))};
            Scalar c = c1 * c2;
            auto [it, fresh] = out.emplace(std::move(m), c);
            if (!fresh) it->second += c;
          }
    }
  return out;
}

} // namespace testing_support
