#include "convalg/graphtopos.hpp"

#include <cctype>
#include <set>

#include "convalg/errors.hpp"

namespace convalg {

ConvElement::ConvElement(const Graph& g, const RingDescriptor& ring, std::size_t x, std::size_t y, TermMap terms)
    : graph_(&g), ring_(ring), x_(x), y_(y) {
  for (const auto& [z, c] : terms) {
    if (z.alpha.anchor != x || z.beta.anchor != y)
      throw PreconditionError("pair cylinder " + pair_cylinder_to_string(g, z) + " is not in P_" + g.vertex_name(x) +
                              " x P_" + g.vertex_name(y));
    if (!z.alpha.valid(g) || !z.beta.valid(g) || z.alpha.source(g) != z.beta.source(g))
      throw PreconditionError("malformed pair cylinder");
    if (!(c.ring() == ring)) throw PreconditionError("coefficient ring mismatch");
  }
  terms_ = reduce_designated(g, std::move(terms));
}

ConvElement ConvElement::indicator(const Clopen& u, const RingDescriptor& ring) {
  TermMap t;
  for (const auto& c : u.cylinders()) t.emplace(PairCylinder{c, c}, Scalar::one(ring));
  return ConvElement(u.graph(), ring, u.anchor(), u.anchor(), std::move(t));
}

std::string pair_cylinder_to_string(const Graph& g, const PairCylinder& z) {
  auto side = [&](const Path& p) {
    return g.vertex_name(p.anchor) + ":" + (p.empty() ? "" : " " + p.edge_string(g));
  };
  return "Z(" + side(z.alpha) + " | " + side(z.beta) + ")";
}

std::string ConvElement::to_string() const {
  if (terms_.empty()) return "0 @ " + graph_->vertex_name(x_) + "," + graph_->vertex_name(y_);
  std::vector<std::pair<std::string, Scalar>> t;
  for (const auto& [z, c] : terms_) t.emplace_back(pair_cylinder_to_string(*graph_, z), c);
  return format_terms(t);
}

ConvElement ConvElement::parse(const Graph& g, const RingDescriptor& ring, std::string_view text) {
  std::string s(text);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> void { throw ParseError(what + " in '" + s + "'", 1, pos + 1); };
  skip();
  if (s.compare(pos, 1, "0") == 0 && s.find('@') != std::string::npos) {
    auto at = s.find('@');
    auto comma = s.find(',', at);
    if (comma == std::string::npos) fail("expected '0 @ x,y'");
    auto name = [](std::string n) {
      n.erase(0, n.find_first_not_of(" \t"));
      n.erase(n.find_last_not_of(" \t") + 1);
      return n;
    };
    auto x = g.find_vertex(name(s.substr(at + 1, comma - at - 1)));
    auto y = g.find_vertex(name(s.substr(comma + 1)));
    if (!x || !y) fail("unknown vertex");
    return ConvElement(g, ring, *x, *y);
  }
  TermMap terms;
  std::optional<std::pair<std::size_t, std::size_t>> ends;
  bool first = true;
  while (true) {
    skip();
    if (pos == s.size()) break;
    Scalar sign = Scalar::one(ring);
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -sign;
      ++pos;
      skip();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    Scalar coef = Scalar::one(ring);
    if (s.compare(pos, 2, "Z(") != 0) {
      std::size_t start = pos;
      if (s[pos] == '(') {
        pos = s.find(')', pos);
        if (pos == std::string::npos) fail("unclosed '('");
        ++pos;
      } else {
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/' || s[pos] == '^' || s[pos] == 'i'))
          ++pos;
      }
      if (start == pos) fail("expected a coefficient or Z(..)");
      coef = Scalar::parse(ring, s.substr(start, pos - start));
      skip();
      if (pos >= s.size() || s[pos] != '*') fail("expected '*'");
      ++pos;
      skip();
      if (s.compare(pos, 2, "Z(") != 0) fail("expected Z(..)");
    }
    auto close = s.find(')', pos);
    if (close == std::string::npos) fail("unclosed 'Z('");
    std::string inner = s.substr(pos + 2, close - pos - 2);
    auto bar = inner.find('|');
    if (bar == std::string::npos) fail("expected '|' inside Z(..)");
    Path alpha, beta;
    try {
      alpha = Path::parse(g, inner.substr(0, bar));
      beta = Path::parse(g, inner.substr(bar + 1));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), 1, pos + 1);
    }
    if (alpha.source(g) != beta.source(g)) fail("paths of Z(..) have different sources");
    if (ends && (*ends != std::make_pair(alpha.anchor, beta.anchor))) fail("summands with different vertex pairs");
    ends = std::make_pair(alpha.anchor, beta.anchor);
    pos = close + 1;
    Scalar c = sign * coef;
    auto [it, fresh] = terms.emplace(PairCylinder{alpha, beta}, c);
    if (!fresh) it->second += c;
    first = false;
  }
  if (!ends) fail("empty element (write '0 @ x,y')");
  return ConvElement(g, ring, ends->first, ends->second, std::move(terms));
}

ConvElement ConvElement::operator+(const ConvElement& other) const {
  if (other.x_ != x_ || other.y_ != y_ || !(other.ring_ == ring_)) throw PreconditionError("sum of elements with different ends");
  TermMap t = terms_;
  for (const auto& [z, c] : other.terms_) {
    auto [it, fresh] = t.emplace(z, c);
    if (!fresh) it->second += c;
  }
  return ConvElement(*graph_, ring_, x_, y_, std::move(t));
}

ConvElement ConvElement::scaled(const Scalar& c) const {
  TermMap t;
  for (const auto& [z, x] : terms_) t.emplace(z, x * c);
  return ConvElement(*graph_, ring_, x_, y_, std::move(t));
}

ConvElement conv_mul(const ConvElement& f, const ConvElement& g) {
  if (&f.graph() != &g.graph()) throw PreconditionError("elements over different graphs");
  if (f.target() != g.source()) throw PreconditionError("object mismatch in conv_mul");
  if (!(f.ring() == g.ring())) throw PreconditionError("coefficient ring mismatch");
  const Graph& gr = f.graph();
  TermMap out;
  for (const auto& [z1, c1] : f.terms())
    for (const auto& [z2, c2] : g.terms()) {
      const Path& beta = z1.beta;
      const Path& gamma = z2.alpha;
      const std::size_t middle = std::max(beta.length(), gamma.length());
      if (middle > z1.alpha.length() + beta.length() + gamma.length())
        throw InvariantError("refinement depth exceeds |alpha|+|beta|+|gamma|");
      // Z(alpha,beta) = sum of Z(alpha tau, beta tau) over live tails tau; same for the right factor.
      std::map<Path, Path> left;
      for (auto& bt : live_extensions(gr, beta, middle - beta.length())) {
        Path tau = beta.remainder_in(bt, gr);
        left.emplace(std::move(bt), z1.alpha.concat(tau));
      }
      for (auto& gs : live_extensions(gr, gamma, middle - gamma.length())) {
        auto it = left.find(gs);
        if (it == left.end()) continue;
        Path sigma = gamma.remainder_in(gs, gr);
        Scalar c = c1 * c2;
        auto [slot, fresh] = out.emplace(PairCylinder{it->second, z2.beta.concat(sigma)}, c);
        if (!fresh) slot->second += c;
      }
    }
  return ConvElement(gr, f.ring(), f.source(), g.target(), std::move(out));
}

ConvElement conv_star(const ConvElement& f) {
  TermMap t;
  for (const auto& [z, c] : f.terms()) t.emplace(PairCylinder{z.beta, z.alpha}, c.star());
  return ConvElement(f.graph(), f.ring(), f.target(), f.source(), std::move(t));
}

void ConvMatrix::add(const ConvElement& f) {
  if (&f.graph() != graph_ || !(f.ring() == ring_)) throw PreconditionError("entry from another algebroid");
  auto key = std::make_pair(f.source(), f.target());
  auto it = entries_.find(key);
  ConvElement sum = it == entries_.end() ? f : it->second + f;
  if (it != entries_.end()) entries_.erase(it);
  if (!sum.is_zero()) entries_.emplace(key, std::move(sum));
}

ConvMatrix ConvMatrix::operator+(const ConvMatrix& other) const {
  ConvMatrix out = *this;
  for (const auto& [_, f] : other.entries_) out.add(f);
  return out;
}

std::string ConvMatrix::to_string() const {
  if (entries_.empty()) return "0";
  std::string out;
  for (const auto& [_, f] : entries_) out += (out.empty() ? "" : " + ") + f.to_string();
  return out;
}

ConvMatrix conv_mul(const ConvMatrix& f, const ConvMatrix& g) {
  ConvMatrix out(f.graph(), f.ring());
  for (const auto& [k1, a] : f.entries())
    for (const auto& [k2, b] : g.entries())
      if (k1.second == k2.first) out.add(conv_mul(a, b));
  return out;
}

ConvMatrix conv_star(const ConvMatrix& f) {
  ConvMatrix out(f.graph(), f.ring());
  for (const auto& [_, a] : f.entries()) out.add(conv_star(a));
  return out;
}

LpaElement to_leavitt(const ConvElement& f) { return LpaElement(f.graph(), f.ring(), f.terms()); }

LpaElement to_leavitt(const ConvMatrix& f) {
  TermMap t;
  for (const auto& [_, a] : f.entries())
    for (const auto& [z, c] : a.terms()) t.emplace(z, c);
  return LpaElement(f.graph(), f.ring(), std::move(t));
}

ConvMatrix from_leavitt(const LpaElement& u) {
  std::map<std::pair<std::size_t, std::size_t>, TermMap> split;
  for (const auto& [m, c] : u.terms()) split[{m.alpha.anchor, m.beta.anchor}].emplace(m, c);
  ConvMatrix out(u.graph(), u.ring());
  for (auto& [k, t] : split) out.add(ConvElement(u.graph(), u.ring(), k.first, k.second, std::move(t)));
  return out;
}

ConvMatrix ConvEngine::single(std::size_t x, std::size_t y, const Path& alpha, const Path& beta) const {
  ConvMatrix m(g, ring);
  m.add(ConvElement(g, ring, x, y, TermMap{{PairCylinder{alpha, beta}, Scalar::one(ring)}}));
  return m;
}

ConvMatrix ConvEngine::p(std::size_t x) const { return single(x, x, Path::trivial(x), Path::trivial(x)); }

ConvMatrix ConvEngine::v(std::size_t a) const {
  const auto& e = g.edge(a);
  return single(e.tgt, e.src, Path{e.tgt, {a}}, Path::trivial(e.src));
}

ConvMatrix ConvEngine::vstar(std::size_t a) const {
  const auto& e = g.edge(a);
  return single(e.src, e.tgt, Path::trivial(e.src), Path{e.tgt, {a}});
}

namespace {

// Eventually periodic infinite path: prefix then the cycle repeated, anchor-first.
struct BasePoint {
  std::size_t anchor;
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;

  std::size_t edge_at(std::size_t k) const { // 1-based
    if (k <= prefix.size()) return prefix[k - 1];
    return cycle[(k - 1 - prefix.size()) % cycle.size()];
  }
  std::size_t vertex_at(const Graph& g, std::size_t k) const { return k == 0 ? anchor : g.edge(edge_at(k)).src; }
};

std::vector<BasePoint> base_points(const Graph& g, std::size_t depth) {
  std::vector<BasePoint> out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (!g.is_live(v)) continue;
    std::vector<std::size_t> edges;
    std::map<std::size_t, std::size_t> seen{{v, 0}};
    std::size_t at = v;
    while (true) {
      std::size_t e = *g.designated(at);
      edges.push_back(e);
      at = g.edge(e).src;
      auto it = seen.find(at);
      if (it != seen.end()) {
        BasePoint b{v, {edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(it->second)},
                    {edges.begin() + static_cast<std::ptrdiff_t>(it->second), edges.end()}};
        out.push_back(std::move(b));
        break;
      }
      seen.emplace(at, edges.size());
    }
  }
  // simple cycles through their least vertex
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (!g.is_live(v)) continue;
    std::vector<std::pair<std::vector<std::size_t>, std::set<std::size_t>>> frontier{{{}, {v}}};
    for (std::size_t len = 1; len <= depth && !frontier.empty(); ++len) {
      decltype(frontier) next;
      for (const auto& [edges, used] : frontier) {
        std::size_t at = edges.empty() ? v : g.edge(edges.back()).src;
        for (auto e : g.live_incoming(at)) {
          std::size_t s = g.edge(e).src;
          auto grown = edges;
          grown.push_back(e);
          if (s == v) {
            out.push_back(BasePoint{v, {}, grown});
          } else if (s > v && !used.count(s)) {
            auto u2 = used;
            u2.insert(s);
            next.emplace_back(std::move(grown), std::move(u2));
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return out;
}

struct FibreElement {
  Path nu;
  std::size_t shift;
  friend auto operator<=>(const FibreElement&, const FibreElement&) = default;
};

// (nu.e, i) and (nu, i - 1) are the same point with the same lag when e = u_i
FibreElement canonical(const BasePoint& u, FibreElement x) {
  while (!x.nu.empty() && x.shift > 0 && x.nu.edges.back() == u.edge_at(x.shift)) {
    x.nu.edges.pop_back();
    --x.shift;
  }
  return x;
}

// Paths of length <= depth with a fixed source vertex, grown at the anchor end.
std::vector<Path> paths_with_source(const Graph& g, std::size_t source, std::size_t depth) {
  std::vector<Path> all{Path::trivial(source)};
  std::vector<Path> frontier = all;
  for (std::size_t len = 1; len <= depth; ++len) {
    std::vector<Path> next;
    for (const auto& p : frontier)
      for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (g.edge(e).src == p.anchor) {
          Path q{g.edge(e).tgt, {e}};
          q.edges.insert(q.edges.end(), p.edges.begin(), p.edges.end());
          next.push_back(std::move(q));
        }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return all;
}

} // namespace

std::vector<Eigen::MatrixXcd> regular_compressions(const ConvMatrix& f, std::size_t depth) {
  const Graph& g = f.graph();
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& u : base_points(g, depth)) {
    std::map<FibreElement, Eigen::Index> index;
    for (std::size_t i = 0; i <= depth; ++i)
      for (auto& nu : paths_with_source(g, u.vertex_at(g, i), depth)) {
        FibreElement x{std::move(nu), i};
        if (!x.nu.empty() && i > 0 && x.nu.edges.back() == u.edge_at(i)) continue;
        index.emplace(std::move(x), 0);
      }
    Eigen::Index n = 0;
    for (auto& [_, k] : index) k = n++;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [x, col] : index)
      for (const auto& [_, elem] : f.entries())
        for (const auto& [z, c] : elem.terms()) {
          const Path& alpha = z.alpha;
          const Path& beta = z.beta;
          if (beta.anchor != x.nu.anchor) continue;
          FibreElement y;
          if (beta.is_prefix_of(x.nu)) {
            y = FibreElement{alpha.concat(beta.remainder_in(x.nu, g)), x.shift};
          } else if (x.nu.is_prefix_of(beta)) {
            bool along = true;
            for (std::size_t k = x.nu.length(); k < beta.length() && along; ++k)
              along = beta.edges[k] == u.edge_at(x.shift + (k - x.nu.length()) + 1);
            if (!along) continue;
            y = FibreElement{alpha, x.shift + (beta.length() - x.nu.length())};
          } else {
            continue;
          }
          auto it = index.find(canonical(u, std::move(y)));
          if (it != index.end()) m(it->second, col) += c.to_complex();
        }
    out.push_back(std::move(m));
  }
  return out;
}

} // namespace convalg
