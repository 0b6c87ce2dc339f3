#include "convalg/leavitt.hpp"

#include <cctype>
#include <optional>

#include "convalg/errors.hpp"

namespace convalg {

TermMap reduce_designated(const Graph& g, TermMap terms) {
  std::vector<std::pair<Monomial, Scalar>> work(terms.begin(), terms.end());
  TermMap acc;
  while (!work.empty()) {
    auto [m, c] = std::move(work.back());
    work.pop_back();
    if (c.is_zero()) continue;
    const std::size_t src = m.alpha.source(g);
    if (m.beta.source(g) != src) throw InvariantError("monomial with mismatched sources");
    if (!g.is_live(src)) continue;
    if (!m.alpha.empty() && !m.beta.empty() && m.alpha.edges.back() == m.beta.edges.back()) {
      const std::size_t last = m.alpha.edges.back();
      const std::size_t w = g.edge(last).tgt;
      if (g.designated(w) == last) {
        Monomial shorter{m.alpha, m.beta};
        shorter.alpha.edges.pop_back();
        shorter.beta.edges.pop_back();
        if (shorter.alpha.length() + shorter.beta.length() >= m.alpha.length() + m.beta.length())
          throw InvariantError("rewriting measure did not decrease");
        for (auto f : g.live_incoming(w))
          if (f != last) work.emplace_back(Monomial{shorter.alpha.extended(f), shorter.beta.extended(f)}, -c);
        work.emplace_back(std::move(shorter), std::move(c));
        continue;
      }
    }
    auto [it, fresh] = acc.emplace(std::move(m), c);
    if (!fresh) it->second += c;
  }
  std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
  return acc;
}

LpaElement::LpaElement(const Graph& g, const RingDescriptor& ring, TermMap terms) : graph_(&g), ring_(ring) {
  for (const auto& [m, c] : terms) {
    if (!(c.ring() == ring)) throw PreconditionError("coefficient ring mismatch");
    if (!m.alpha.valid(g) || !m.beta.valid(g)) throw PreconditionError("monomial path is not a path of the graph");
    if (m.alpha.source(g) != m.beta.source(g))
      throw PreconditionError("monomial " + monomial_to_string(g, m) + " has paths with different sources");
  }
  terms_ = reduce_designated(g, std::move(terms));
}

LpaElement LpaElement::monomial(const Graph& g, const Scalar& c, const Path& alpha, const Path& beta) {
  return LpaElement(g, c.ring(), TermMap{{Monomial{alpha, beta}, c}});
}

LpaElement LpaElement::vertex(const Graph& g, const RingDescriptor& ring, std::size_t v) {
  return monomial(g, Scalar::one(ring), Path::trivial(v), Path::trivial(v));
}

LpaElement LpaElement::edge(const Graph& g, const RingDescriptor& ring, std::size_t a) {
  const auto& e = g.edge(a);
  return monomial(g, Scalar::one(ring), Path{e.tgt, {a}}, Path::trivial(e.src));
}

LpaElement LpaElement::edge_star(const Graph& g, const RingDescriptor& ring, std::size_t a) {
  const auto& e = g.edge(a);
  return monomial(g, Scalar::one(ring), Path::trivial(e.src), Path{e.tgt, {a}});
}

LpaElement LpaElement::unit(const Graph& g, const RingDescriptor& ring) {
  TermMap t;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    t.emplace(Monomial{Path::trivial(v), Path::trivial(v)}, Scalar::one(ring));
  return LpaElement(g, ring, std::move(t));
}

namespace {

void same_algebra(const LpaElement& a, const LpaElement& b) {
  if (&a.graph() != &b.graph()) throw PreconditionError("elements of different Leavitt path algebras");
  if (!(a.ring() == b.ring())) throw PreconditionError("coefficient ring mismatch");
}

std::optional<Monomial> mono_mul(const Graph& g, const Monomial& m1, const Monomial& m2) {
  const Path& beta = m1.beta;
  const Path& gamma = m2.alpha;
  if (beta.is_prefix_of(gamma)) return Monomial{m1.alpha.concat(beta.remainder_in(gamma, g)), m2.beta};
  if (gamma.is_prefix_of(beta)) return Monomial{m1.alpha, m2.beta.concat(gamma.remainder_in(beta, g))};
  return std::nullopt;
}

} // namespace

LpaElement LpaElement::operator+(const LpaElement& other) const {
  same_algebra(*this, other);
  TermMap t = terms_;
  for (const auto& [m, c] : other.terms_) {
    auto [it, fresh] = t.emplace(m, c);
    if (!fresh) it->second += c;
  }
  std::erase_if(t, [](const auto& kv) { return kv.second.is_zero(); });
  LpaElement out(*graph_, ring_);
  out.terms_ = std::move(t);
  return out;
}

LpaElement LpaElement::operator-(const LpaElement& other) const { return *this + other.scaled(-Scalar::one(ring_)); }

LpaElement LpaElement::scaled(const Scalar& c) const {
  LpaElement out(*graph_, ring_);
  if (c.is_zero()) return out;
  for (const auto& [m, x] : terms_) out.terms_.emplace(m, x * c);
  return out;
}

LpaElement lpa_mul(const LpaElement& u, const LpaElement& v) {
  same_algebra(u, v);
  const Graph& g = u.graph();
  TermMap t;
  for (const auto& [m1, c1] : u.terms())
    for (const auto& [m2, c2] : v.terms())
      if (auto m = mono_mul(g, m1, m2)) {
        Scalar c = c1 * c2;
        auto [it, fresh] = t.emplace(std::move(*m), c);
        if (!fresh) it->second += c;
      }
  return LpaElement(g, u.ring(), std::move(t));
}

LpaElement lpa_star(const LpaElement& u) {
  TermMap t;
  for (const auto& [m, c] : u.terms()) t.emplace(Monomial{m.beta, m.alpha}, c.star());
  return LpaElement(u.graph(), u.ring(), std::move(t));
}

bool lpa_equal(const LpaElement& u, const LpaElement& v) {
  same_algebra(u, v);
  return u.terms() == v.terms();
}

std::string monomial_to_string(const Graph& g, const Monomial& m) {
  if (m.alpha.empty() && m.beta.empty()) return "p[" + g.vertex_name(m.alpha.anchor) + "]";
  std::string out;
  if (!m.alpha.empty()) out = "v[" + m.alpha.edge_string(g) + "]";
  if (!m.beta.empty()) out += (out.empty() ? "" : " * ") + std::string("w[") + m.beta.edge_string(g) + "]";
  return out;
}

std::string format_terms(const std::vector<std::pair<std::string, Scalar>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [label, c] : terms) {
    bool negative = c.is_real() ? sgn(c.re()) < 0 : (sgn(c.re()) == 0 && sgn(c.im()) < 0);
    Scalar mag = negative ? -c : c;
    std::string coef;
    if (!mag.is_one()) {
      coef = mag.to_string();
      if (!mag.is_real() && sgn(mag.re()) != 0) coef = "(" + coef + ")";
      coef += " * ";
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    out += coef + label;
    first = false;
  }
  return out;
}

std::string LpaElement::to_string() const {
  std::vector<std::pair<std::string, Scalar>> t;
  for (const auto& [m, c] : terms_) t.emplace_back(monomial_to_string(*graph_, m), c);
  return format_terms(t);
}

namespace {

class ElementParser {
public:
  ElementParser(const Graph& g, const RingDescriptor& ring, std::string_view text) : g_(g), ring_(ring), text_(text) {}

  LpaElement parse() {
    skip();
    LpaElement total(g_, ring_);
    if (text_.substr(pos_) == "0") return total;
    bool first = true;
    while (true) {
      skip();
      Scalar sign = Scalar::one(ring_);
      if (peek() == '-' || peek() == '+') {
        if (peek() == '-') sign = -sign;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      total = total + parse_term().scaled(sign);
      first = false;
      skip();
      if (pos_ == text_.size()) break;
    }
    return total;
  }

private:
  LpaElement parse_term() {
    skip();
    Scalar coef = Scalar::one(ring_);
    bool have_factor = false;
    LpaElement product = LpaElement::unit(g_, ring_);
    if (!starts_factor()) {
      coef = parse_scalar();
      skip();
      if (peek() != '*') return LpaElement::unit(g_, ring_).scaled(coef);
      ++pos_;
    }
    while (true) {
      skip();
      product = have_factor ? lpa_mul(product, parse_factor()) : parse_factor();
      have_factor = true;
      skip();
      if (peek() != '*') break;
      ++pos_;
    }
    return product.scaled(coef);
  }

  bool starts_factor() const {
    return pos_ + 1 < text_.size() && (text_[pos_] == 'v' || text_[pos_] == 'w' || text_[pos_] == 'p') &&
           text_[pos_ + 1] == '[';
  }

  Scalar parse_scalar() {
    std::size_t start = pos_;
    if (peek() == '(') {
      auto close = text_.find(')', pos_);
      if (close == std::string_view::npos) fail("unclosed '('");
      pos_ = close + 1;
    } else {
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' ||
                                      text_[pos_] == '^' || text_[pos_] == 'i'))
        ++pos_;
    }
    if (start == pos_) fail("expected a coefficient or a factor");
    try {
      return Scalar::parse(ring_, text_.substr(start, pos_ - start));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), 1, start + 1);
    }
  }

  LpaElement parse_factor() {
    if (!starts_factor()) fail("expected v[..], w[..] or p[..]");
    char kind = text_[pos_];
    std::size_t open = pos_ + 1;
    auto close = text_.find(']', open);
    if (close == std::string_view::npos) fail("unclosed '['");
    std::string_view inner = text_.substr(open + 1, close - open - 1);
    std::size_t at = pos_;
    pos_ = close + 1;
    try {
      if (kind == 'p') {
        std::string name(inner);
        auto v = g_.find_vertex(name);
        if (!v) throw ParseError("unknown vertex '" + name + "'");
        return LpaElement::vertex(g_, ring_, *v);
      }
      Path path = Path::parse_edges(g_, inner);
      Path trivial = Path::trivial(path.source(g_));
      return kind == 'v' ? LpaElement::monomial(g_, Scalar::one(ring_), path, trivial)
                         : LpaElement::monomial(g_, Scalar::one(ring_), trivial, path);
    } catch (const ParseError& e) {
      throw ParseError(e.message(), 1, at + 1);
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " in '" + std::string(text_) + "'", 1, pos_ + 1);
  }

  const Graph& g_;
  RingDescriptor ring_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace

LpaElement LpaElement::parse(const Graph& g, const RingDescriptor& ring, std::string_view text) {
  return ElementParser(g, ring, text).parse();
}

LpaModule::LpaModule(const Graph& g, const RingDescriptor& ring, std::size_t dim, std::vector<Matrix> p,
                     std::vector<Matrix> v, std::vector<Matrix> vstar)
    : graph_(&g), ring_(ring), dim_(dim), p_(std::move(p)), v_(std::move(v)), vstar_(std::move(vstar)) {
  if (p_.size() != g.num_vertices() || v_.size() != g.num_edges() || vstar_.size() != g.num_edges())
    throw PreconditionError("module action data does not match the graph");
  auto check_shape = [&](const Matrix& m) {
    if (m.rows() != dim || m.cols() != dim || !(m.ring() == ring))
      throw PreconditionError("module action matrix has the wrong shape or ring");
  };
  for (const auto& m : p_) check_shape(m);
  for (const auto& m : v_) check_shape(m);
  for (const auto& m : vstar_) check_shape(m);
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvariantError("module violates " + what);
  };
  const Matrix zero(ring, dim, dim);
  for (std::size_t x = 0; x < g.num_vertices(); ++x)
    for (std::size_t y = 0; y < g.num_vertices(); ++y)
      require(p_[y] * p_[x] == (x == y ? p_[x] : zero), "p_e p_e' = delta p_e at " + g.vertex_name(x) + "," + g.vertex_name(y));
  for (std::size_t a = 0; a < g.num_edges(); ++a) {
    const auto& e = g.edge(a);
    require(p_[e.src] * v_[a] == v_[a] && v_[a] * p_[e.tgt] == v_[a], "v_a p_s(a) = p_t(a) v_a = v_a at " + e.name);
    require(vstar_[a] * p_[e.src] == vstar_[a] && p_[e.tgt] * vstar_[a] == vstar_[a],
            "v_a* p_t(a) = p_s(a) v_a* = v_a* at " + e.name);
    for (std::size_t b = 0; b < g.num_edges(); ++b)
      require(v_[b] * vstar_[a] == (a == b ? p_[e.src] : zero), "v_a* v_b = delta p_s(a) at " + e.name + "," + g.edge(b).name);
  }
  for (std::size_t x = 0; x < g.num_vertices(); ++x) {
    Matrix sum = zero;
    for (auto a : g.incoming(x)) sum = sum + vstar_[a] * v_[a];
    require(sum == p_[x], "p_e = sum v_x v_x* at " + g.vertex_name(x));
  }
}

Matrix LpaModule::act(const LpaElement& u) const {
  if (&u.graph() != graph_) throw PreconditionError("element of another algebra");
  Matrix total(ring_, dim_, dim_);
  for (const auto& [m, c] : u.terms()) {
    // m . v_alpha = ((m . v_a1) . v_a2) ...
    Matrix va = p_[m.alpha.anchor];
    for (auto a : m.alpha.edges) va = v_[a] * va;
    Matrix vb = p_[m.beta.source(*graph_)];
    for (auto it = m.beta.edges.rbegin(); it != m.beta.edges.rend(); ++it) vb = vstar_[*it] * vb;
    Scalar coef = c.in_ring(ring_).value();
    total = total + (vb * va).scaled(coef);
  }
  return total;
}

std::optional<Matrix> LpaModule::degeneracy_witness() const {
  Matrix sum(ring_, dim_, dim_);
  for (const auto& m : p_) sum = sum + m;
  for (std::size_t j = 0; j < dim_; ++j) {
    Matrix col = sum.column(j);
    Matrix e(ring_, dim_, 1);
    e(j, 0) = Scalar::one(ring_);
    if (!(col == e)) return e;
  }
  return std::nullopt;
}

LpaModule module_from_gsheaf(const Graph& g, const GSheaf& f) {
  auto check = gsheaf_check(g, f);
  if (!check.ok) throw InvariantError("not a G-sheaf: " + check.reason);
  const RingDescriptor& ring = f.ring;
  std::vector<std::size_t> offset(g.num_vertices() + 1, 0);
  for (std::size_t x = 0; x < g.num_vertices(); ++x) offset[x + 1] = offset[x] + f.rank[x];
  const std::size_t dim = offset.back();
  std::vector<Matrix> p, v, vstar;
  for (std::size_t x = 0; x < g.num_vertices(); ++x) {
    Matrix m(ring, dim, dim);
    m.set_block(offset[x], offset[x], Matrix::identity(ring, f.rank[x]));
    p.push_back(std::move(m));
  }
  for (std::size_t a = 0; a < g.num_edges(); ++a) {
    v.emplace_back(ring, dim, dim);
    vstar.emplace_back(ring, dim, dim);
  }
  for (std::size_t x = 0; x < g.num_vertices(); ++x) {
    Matrix inv = *inverse(stacked_map(g, f, x));
    std::size_t col = 0;
    for (auto a : g.incoming(x)) {
      std::size_t s = g.edge(a).src;
      v[a].set_block(offset[s], offset[x], f.maps[a]);
      vstar[a].set_block(offset[x], offset[s], inv.block(0, col, f.rank[x], f.rank[s]));
      col += f.rank[s];
    }
  }
  return LpaModule(g, ring, dim, std::move(p), std::move(v), std::move(vstar));
}

SheafFromModule gsheaf_from_module(const LpaModule& m) {
  const Graph& g = m.graph();
  if (auto w = m.degeneracy_witness())
    throw InvariantError("degenerate module: vector " + w->transpose().to_string() + " is not fixed by the local units");
  SheafFromModule out;
  out.sheaf.ring = m.ring();
  for (std::size_t x = 0; x < g.num_vertices(); ++x) {
    out.bases.push_back(column_basis(m.p(x)));
    out.sheaf.rank.push_back(out.bases.back().cols());
  }
  for (std::size_t a = 0; a < g.num_edges(); ++a) {
    const auto& e = g.edge(a);
    auto coords = solve(out.bases[e.src], m.v(a) * out.bases[e.tgt]);
    if (!coords) throw InvariantError("v_" + e.name + " does not map M p_t(a) into M p_s(a)");
    out.sheaf.maps.push_back(coords->in_ring(m.ring()));
  }
  auto check = gsheaf_check(g, out.sheaf);
  if (!check.ok) throw InvariantError("module does not give a G-sheaf: " + check.reason);
  return out;
}

} // namespace convalg
