#include "convalg/finitegroupoid.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "convalg/errors.hpp"
#include "convalg/leavitt.hpp"
#include "convalg/terms.hpp"

namespace convalg {

namespace {

struct AxiomFailure {
  std::string message;
  std::size_t g, h;
};

using Table = std::vector<std::vector<std::optional<std::size_t>>>;

std::optional<AxiomFailure> check_table(const std::vector<std::string>& objects,
                                        const std::vector<FiniteGroupoid::Arrow>& arrows, const Table& c,
                                        std::vector<std::size_t>& identity, std::vector<std::size_t>& inverse) {
  const std::size_t n = arrows.size();
  if (c.size() != n) return AxiomFailure{"composition table has the wrong size", 0, 0};
  for (std::size_t g = 0; g < n; ++g) {
    if (arrows[g].src >= objects.size() || arrows[g].tgt >= objects.size())
      return AxiomFailure{"arrow " + arrows[g].name + " has an unknown endpoint", g, g};
    if (c[g].size() != n) return AxiomFailure{"composition table has the wrong size", g, 0};
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      bool composable = arrows[g].src == arrows[h].tgt;
      if (composable != c[g][h].has_value())
        return AxiomFailure{composable ? "missing product " + arrows[g].name + " " + arrows[h].name
                                       : "product " + arrows[g].name + " " + arrows[h].name + " of non-composable arrows",
                            g, h};
      if (!composable) continue;
      std::size_t r = *c[g][h];
      if (r >= n) return AxiomFailure{"product outside the arrow set", g, h};
      if (arrows[r].src != arrows[h].src || arrows[r].tgt != arrows[g].tgt)
        return AxiomFailure{"product " + arrows[g].name + " " + arrows[h].name + " = " + arrows[r].name +
                                " has the wrong source or target",
                            g, h};
    }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      if (!c[g][h]) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (!c[h][k]) continue;
        if (*c[*c[g][h]][k] != *c[g][*c[h][k]])
          return AxiomFailure{"associativity fails for " + arrows[g].name + ", " + arrows[h].name + ", " + arrows[k].name,
                              g, h};
      }
    }
  identity.assign(objects.size(), n);
  for (std::size_t x = 0; x < objects.size(); ++x) {
    for (std::size_t e = 0; e < n && identity[x] == n; ++e) {
      if (arrows[e].src != x || arrows[e].tgt != x) continue;
      bool ok = true;
      for (std::size_t g = 0; g < n && ok; ++g) {
        if (arrows[g].tgt == x && *c[e][g] != g) ok = false;
        if (arrows[g].src == x && *c[g][e] != g) ok = false;
      }
      if (ok) identity[x] = e;
    }
    if (identity[x] == n) return AxiomFailure{"object " + objects[x] + " has no identity arrow", 0, 0};
  }
  inverse.assign(n, n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n && inverse[g] == n; ++h)
      if (c[g][h] && *c[g][h] == identity[arrows[g].tgt] && c[h][g] && *c[h][g] == identity[arrows[g].src])
        inverse[g] = h;
    if (inverse[g] == n) return AxiomFailure{"arrow " + arrows[g].name + " has no inverse", g, g};
  }
  return std::nullopt;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

} // namespace

FiniteGroupoid::FiniteGroupoid(std::vector<std::string> objects, std::vector<Arrow> arrows, Table compose)
    : objects_(std::move(objects)), arrows_(std::move(arrows)), compose_(std::move(compose)) {
  if (auto f = check_table(objects_, arrows_, compose_, identity_, inverse_)) throw InvariantError(f->message);
}

FiniteGroupoid FiniteGroupoid::parse(std::string_view text) {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::map<std::string, std::size_t> object_index, arrow_index;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> rows; // (g,h) -> (gh, line)
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> w;
    for (std::string s; ls >> s;) w.push_back(s);
    if (w.empty()) continue;
    std::size_t col = line.find_first_not_of(" \t") + 1;
    auto fail = [&](const std::string& what) { throw ParseError(what, lineno, col); };
    for (std::size_t i = 1; i < w.size(); ++i)
      if (!valid_name(w[i])) fail("invalid name '" + w[i] + "'");
    auto arrow_of = [&](const std::string& s) {
      auto it = arrow_index.find(s);
      if (it == arrow_index.end()) fail("undeclared arrow '" + s + "'");
      return it->second;
    };
    if (w[0] == "object") {
      if (w.size() != 2) fail("expected 'object <name>'");
      if (!object_index.emplace(w[1], objects.size()).second) fail("duplicate object '" + w[1] + "'");
      objects.push_back(w[1]);
    } else if (w[0] == "arrow") {
      if (w.size() != 4) fail("expected 'arrow <name> <src> <tgt>'");
      if (!rows.empty()) fail("arrow declared after compose rows");
      auto s = object_index.find(w[2]), t = object_index.find(w[3]);
      if (s == object_index.end()) fail("undeclared object '" + w[2] + "'");
      if (t == object_index.end()) fail("undeclared object '" + w[3] + "'");
      if (!arrow_index.emplace(w[1], arrows.size()).second) fail("duplicate arrow '" + w[1] + "'");
      arrows.push_back({w[1], s->second, t->second});
    } else if (w[0] == "compose") {
      if (w.size() != 4) fail("expected 'compose <g> <h> <gh>'");
      std::size_t g = arrow_of(w[1]), h = arrow_of(w[2]), gh = arrow_of(w[3]);
      if (arrows[g].src != arrows[h].tgt) fail("arrows " + w[1] + " and " + w[2] + " are not composable");
      if (arrows[gh].src != arrows[h].src || arrows[gh].tgt != arrows[g].tgt)
        fail("product " + w[3] + " has the wrong source or target");
      if (!rows.emplace(std::pair{g, h}, std::pair{gh, lineno}).second) fail("duplicate compose row for " + w[1] + " " + w[2]);
    } else {
      fail("unknown directive '" + w[0] + "'");
    }
  }
  const std::size_t n = arrows.size();
  Table table(n, std::vector<std::optional<std::size_t>>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      if (arrows[g].src != arrows[h].tgt) continue;
      auto it = rows.find({g, h});
      if (it == rows.end())
        throw ParseError("missing compose row for " + arrows[g].name + " " + arrows[h].name, lineno + 1, 1);
      table[g][h] = it->second.first;
    }
  std::vector<std::size_t> identity, inverse;
  if (auto f = check_table(objects, arrows, table, identity, inverse)) {
    auto it = rows.find({f->g, f->h});
    throw ParseError(f->message, it == rows.end() ? lineno + 1 : it->second.second, 1);
  }
  return FiniteGroupoid(std::move(objects), std::move(arrows), std::move(table));
}

FiniteGroupoid FiniteGroupoid::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot open groupoid file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string FiniteGroupoid::to_text() const {
  std::string out;
  for (const auto& o : objects_) out += "object " + o + "\n";
  for (const auto& a : arrows_) out += "arrow " + a.name + " " + objects_[a.src] + " " + objects_[a.tgt] + "\n";
  for (std::size_t g = 0; g < arrows_.size(); ++g)
    for (std::size_t h = 0; h < arrows_.size(); ++h)
      if (compose_[g][h]) out += "compose " + arrows_[g].name + " " + arrows_[h].name + " " + arrows_[*compose_[g][h]].name + "\n";
  return out;
}

FiniteGroupoid FiniteGroupoid::group(const std::vector<std::string>& names,
                                     const std::vector<std::vector<std::size_t>>& table) {
  std::vector<Arrow> arrows;
  for (const auto& n : names) arrows.push_back({n, 0, 0});
  Table c(names.size(), std::vector<std::optional<std::size_t>>(names.size()));
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j) c[i][j] = table.at(i).at(j);
  return FiniteGroupoid({"o"}, std::move(arrows), std::move(c));
}

FiniteGroupoid FiniteGroupoid::cyclic(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n; ++k) names.push_back(k == 0 ? "e" : k == 1 ? "g" : "g" + std::to_string(k));
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return group(names, t);
}

FiniteGroupoid FiniteGroupoid::klein_four() {
  std::vector<std::vector<std::size_t>> t(4, std::vector<std::size_t>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t[i][j] = i ^ j;
  return group({"e", "a", "b", "c"}, t);
}

FiniteGroupoid FiniteGroupoid::symmetric_three() {
  using Perm = std::array<int, 3>;
  auto after = [](const Perm& p, const Perm& q) { return Perm{p[q[0]], p[q[1]], p[q[2]]}; };
  const Perm e{0, 1, 2}, r{1, 2, 0}, s{0, 2, 1};
  std::vector<Perm> elems{e, r, after(r, r), s, after(s, r), after(s, after(r, r))};
  std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(6));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      t[i][j] = std::find(elems.begin(), elems.end(), after(elems[i], elems[j])) - elems.begin();
  return group({"e", "r", "r2", "s", "sr", "sr2"}, t);
}

FiniteGroupoid FiniteGroupoid::pair(std::size_t n) {
  std::vector<std::string> objects;
  for (std::size_t i = 1; i <= n; ++i) objects.push_back(std::to_string(i));
  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) arrows.push_back({"e" + objects[i] + objects[j], j, i});
  Table c(n * n, std::vector<std::optional<std::size_t>>(n * n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[i * n + j][j * n + k] = i * n + k;
  return FiniteGroupoid(std::move(objects), std::move(arrows), std::move(c));
}

FiniteGroupoid FiniteGroupoid::disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  std::vector<std::string> objects = a.objects_;
  std::set<std::string> onames(objects.begin(), objects.end());
  for (const auto& o : b.objects_) objects.push_back(onames.count(o) ? o + "_b" : o);
  std::vector<Arrow> arrows = a.arrows_;
  std::set<std::string> anames;
  for (const auto& x : arrows) anames.insert(x.name);
  const std::size_t na = a.num_arrows(), no = a.num_objects();
  for (const auto& x : b.arrows_) arrows.push_back({anames.count(x.name) ? x.name + "_b" : x.name, x.src + no, x.tgt + no});
  const std::size_t n = arrows.size();
  Table c(n, std::vector<std::optional<std::size_t>>(n));
  for (std::size_t g = 0; g < na; ++g)
    for (std::size_t h = 0; h < na; ++h) c[g][h] = a.compose_[g][h];
  for (std::size_t g = 0; g < b.num_arrows(); ++g)
    for (std::size_t h = 0; h < b.num_arrows(); ++h)
      if (auto r = b.compose_[g][h]) c[na + g][na + h] = na + *r;
  return FiniteGroupoid(std::move(objects), std::move(arrows), std::move(c));
}

FiniteGroupoid FiniteGroupoid::product(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  std::vector<std::string> objects;
  for (const auto& x : a.objects_)
    for (const auto& y : b.objects_) objects.push_back(x + "_" + y);
  const std::size_t nb = b.num_objects(), mb = b.num_arrows();
  std::vector<Arrow> arrows;
  for (const auto& g : a.arrows_)
    for (const auto& h : b.arrows_) arrows.push_back({g.name + "_" + h.name, g.src * nb + h.src, g.tgt * nb + h.tgt});
  const std::size_t n = arrows.size();
  Table c(n, std::vector<std::optional<std::size_t>>(n));
  for (std::size_t g1 = 0; g1 < a.num_arrows(); ++g1)
    for (std::size_t h1 = 0; h1 < mb; ++h1)
      for (std::size_t g2 = 0; g2 < a.num_arrows(); ++g2)
        for (std::size_t h2 = 0; h2 < mb; ++h2) {
          auto x = a.compose_[g1][g2];
          auto y = b.compose_[h1][h2];
          if (x && y) c[g1 * mb + h1][g2 * mb + h2] = *x * mb + *y;
        }
  return FiniteGroupoid(std::move(objects), std::move(arrows), std::move(c));
}

FiniteGroupoid FiniteGroupoid::empty() { return FiniteGroupoid({}, {}, {}); }

std::optional<std::size_t> FiniteGroupoid::find_object(std::string_view name) const {
  for (std::size_t x = 0; x < objects_.size(); ++x)
    if (objects_[x] == name) return x;
  return std::nullopt;
}

std::optional<std::size_t> FiniteGroupoid::find_arrow(std::string_view name) const {
  for (std::size_t g = 0; g < arrows_.size(); ++g)
    if (arrows_[g].name == name) return g;
  return std::nullopt;
}

GpdElement::GpdElement(const FiniteGroupoid& g, const RingDescriptor& ring)
    : gpd_(&g), ring_(ring), values_(g.num_arrows(), Scalar::zero(ring)) {}

GpdElement GpdElement::delta(const FiniteGroupoid& g, const RingDescriptor& ring, std::size_t arrow,
                             std::optional<Scalar> c) {
  GpdElement f(g, ring);
  f.values_.at(arrow) = c ? *c : Scalar::one(ring);
  return f;
}

GpdElement GpdElement::parse(const FiniteGroupoid& g, const RingDescriptor& ring, std::string_view text) {
  GpdElement f(g, ring);
  for (const auto& [label, c] : split_terms(ring, text)) {
    if (label.size() < 3 || label.front() != '[' || label.back() != ']')
      throw ParseError("expected '[arrow]', got '" + label + "'");
    auto a = g.find_arrow(label.substr(1, label.size() - 2));
    if (!a) throw ParseError("unknown arrow '" + label.substr(1, label.size() - 2) + "'");
    f.values_[*a] += c;
  }
  return f;
}

bool GpdElement::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Scalar& s) { return s.is_zero(); });
}

namespace {

void same_algebra(const GpdElement& a, const GpdElement& b) {
  if (&a.groupoid() != &b.groupoid() || !(a.ring() == b.ring()))
    throw PreconditionError("elements of different groupoid algebras");
}

} // namespace

GpdElement GpdElement::operator+(const GpdElement& other) const {
  same_algebra(*this, other);
  GpdElement out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] += other.values_[i];
  return out;
}

GpdElement GpdElement::operator-(const GpdElement& other) const {
  same_algebra(*this, other);
  GpdElement out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] -= other.values_[i];
  return out;
}

GpdElement GpdElement::scaled(const Scalar& c) const {
  GpdElement out = *this;
  for (auto& v : out.values_) v *= c;
  return out;
}

std::string GpdElement::to_string() const {
  std::vector<std::pair<std::string, Scalar>> t;
  for (std::size_t g = 0; g < values_.size(); ++g)
    if (!values_[g].is_zero()) t.emplace_back("[" + gpd_->arrow(g).name + "]", values_[g]);
  return format_terms(t);
}

GpdElement gpd_convolve(const GpdElement& f, const GpdElement& g) {
  same_algebra(f, g);
  const FiniteGroupoid& G = f.groupoid();
  GpdElement out(G, f.ring());
  for (std::size_t a = 0; a < G.num_arrows(); ++a) {
    if (f[a].is_zero()) continue;
    for (std::size_t b = 0; b < G.num_arrows(); ++b)
      if (auto ab = G.compose(a, b); ab && !g[b].is_zero()) out[*ab] += f[a] * g[b];
  }
  return out;
}

GpdElement gpd_star(const GpdElement& f) {
  const FiniteGroupoid& G = f.groupoid();
  GpdElement out(G, f.ring());
  for (std::size_t a = 0; a < G.num_arrows(); ++a) out[a] = f[G.inverse(a)].star();
  return out;
}

std::vector<Orbit> decompose(const FiniteGroupoid& g) {
  std::vector<Orbit> out;
  std::vector<bool> seen(g.num_objects(), false);
  for (std::size_t base = 0; base < g.num_objects(); ++base) {
    if (seen[base]) continue;
    Orbit o;
    for (std::size_t y = 0; y < g.num_objects(); ++y)
      for (std::size_t a = 0; a < g.num_arrows(); ++a)
        if (g.src(a) == base && g.tgt(a) == y) {
          o.objects.push_back(y);
          o.transversal.push_back(y == base ? g.identity(base) : a);
          seen[y] = true;
          break;
        }
    o.isotropy.push_back(g.identity(base));
    for (std::size_t a = 0; a < g.num_arrows(); ++a)
      if (g.src(a) == base && g.tgt(a) == base && a != g.identity(base)) o.isotropy.push_back(a);
    const std::size_t n = o.isotropy.size();
    o.isotropy_table.assign(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t k = *g.compose(o.isotropy[i], o.isotropy[j]);
        o.isotropy_table[i][j] = std::find(o.isotropy.begin(), o.isotropy.end(), k) - o.isotropy.begin();
      }
    out.push_back(std::move(o));
  }
  return out;
}

MatrixUnitImage decomposition_image(const FiniteGroupoid& g, const std::vector<Orbit>& orbits, std::size_t arrow) {
  const std::size_t x = g.src(arrow), y = g.tgt(arrow);
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const Orbit& o = orbits[i];
    auto cx = std::find(o.objects.begin(), o.objects.end(), x);
    if (cx == o.objects.end()) continue;
    auto ry = std::find(o.objects.begin(), o.objects.end(), y);
    std::size_t col = cx - o.objects.begin(), row = ry - o.objects.begin();
    std::size_t h = *g.compose(g.inverse(o.transversal[row]), *g.compose(arrow, o.transversal[col]));
    std::size_t k = std::find(o.isotropy.begin(), o.isotropy.end(), h) - o.isotropy.begin();
    return {i, row, col, k};
  }
  throw PreconditionError("arrow outside every orbit");
}

std::string equivariant_sheaf_problem(const FiniteGroupoid& g, const EquivariantSheaf& f) {
  if (f.rank.size() != g.num_objects()) return "one rank per object expected";
  if (f.action.size() != g.num_arrows()) return "one matrix per arrow expected";
  for (std::size_t a = 0; a < g.num_arrows(); ++a) {
    const Matrix& m = f.action[a];
    if (m.rows() != f.rank[g.tgt(a)] || m.cols() != f.rank[g.src(a)])
      return "matrix of " + g.arrow(a).name + " has the wrong shape";
    if (!(m.ring() == f.ring)) return "matrix of " + g.arrow(a).name + " is over the wrong ring";
  }
  for (std::size_t x = 0; x < g.num_objects(); ++x)
    if (!f.action[g.identity(x)].is_identity()) return "identity of " + g.object_name(x) + " does not act trivially";
  for (std::size_t a = 0; a < g.num_arrows(); ++a)
    for (std::size_t b = 0; b < g.num_arrows(); ++b)
      if (auto ab = g.compose(a, b); ab && !(f.action[*ab] == f.action[a] * f.action[b]))
        return "action of " + g.arrow(a).name + " " + g.arrow(b).name + " is not the product";
  return {};
}

GpdModule::GpdModule(const FiniteGroupoid& g, const RingDescriptor& ring, std::size_t dim, std::vector<Matrix> action)
    : gpd_(&g), ring_(ring), dim_(dim), action_(std::move(action)) {
  if (action_.size() != g.num_arrows()) throw InvariantError("one matrix per arrow expected");
  for (const auto& m : action_)
    if (m.rows() != dim || m.cols() != dim || !(m.ring() == ring)) throw InvariantError("action matrix has the wrong shape");
  const Matrix zero(ring, dim, dim);
  for (std::size_t a = 0; a < g.num_arrows(); ++a)
    for (std::size_t b = 0; b < g.num_arrows(); ++b) {
      auto ab = g.compose(a, b);
      if (!(action_[b] * action_[a] == (ab ? action_[*ab] : zero)))
        throw InvariantError("module relation fails for " + g.arrow(a).name + " " + g.arrow(b).name);
    }
}

Matrix GpdModule::act(const GpdElement& f) const {
  Matrix out(ring_, dim_, dim_);
  for (std::size_t a = 0; a < gpd_->num_arrows(); ++a)
    if (!f[a].is_zero()) out = out + action_[a].scaled(f[a]);
  return out;
}

std::optional<Matrix> GpdModule::degeneracy_witness() const {
  Matrix rest = Matrix::identity(ring_, dim_);
  for (std::size_t x = 0; x < gpd_->num_objects(); ++x) rest = rest - action_[gpd_->identity(x)];
  for (std::size_t j = 0; j < dim_; ++j)
    if (!rest.column(j).is_zero()) return rest.column(j);
  return std::nullopt;
}

GpdModule functor_S(const FiniteGroupoid& g, const EquivariantSheaf& f) {
  if (auto p = equivariant_sheaf_problem(g, f); !p.empty()) throw InvariantError("not an equivariant sheaf: " + p);
  std::vector<std::size_t> offset(g.num_objects() + 1, 0);
  for (std::size_t x = 0; x < g.num_objects(); ++x) offset[x + 1] = offset[x] + f.rank[x];
  const std::size_t dim = offset.back();
  std::vector<Matrix> action;
  for (std::size_t a = 0; a < g.num_arrows(); ++a) {
    Matrix m(f.ring, dim, dim);
    m.set_block(offset[g.src(a)], offset[g.tgt(a)], f.action[g.inverse(a)]);
    action.push_back(std::move(m));
  }
  return GpdModule(g, f.ring, dim, std::move(action));
}

SheafFromGpdModule functor_T(const GpdModule& m) {
  const FiniteGroupoid& g = m.groupoid();
  if (auto w = m.degeneracy_witness())
    throw InvariantError("degenerate module: vector " + w->transpose().to_string() + " is not fixed by the local units");
  SheafFromGpdModule out;
  out.sheaf.ring = m.ring();
  for (std::size_t x = 0; x < g.num_objects(); ++x) {
    out.bases.push_back(column_basis(m.act_arrow(g.identity(x))));
    out.sheaf.rank.push_back(out.bases.back().cols());
  }
  for (std::size_t a = 0; a < g.num_arrows(); ++a) {
    auto coords = solve(out.bases[g.tgt(a)], m.act_arrow(g.inverse(a)) * out.bases[g.src(a)]);
    if (!coords) throw InvariantError("arrow " + g.arrow(a).name + " does not preserve the object decomposition");
    out.sheaf.action.push_back(coords->in_ring(m.ring()));
  }
  if (auto p = equivariant_sheaf_problem(g, out.sheaf); !p.empty())
    throw InvariantError("module does not give an equivariant sheaf: " + p);
  return out;
}

Eigen::MatrixXcd gpd_regular_matrix(const GpdElement& f) {
  const FiniteGroupoid& g = f.groupoid();
  const auto n = static_cast<Eigen::Index>(g.num_arrows());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t a = 0; a < g.num_arrows(); ++a) {
    if (f[a].is_zero()) continue;
    auto c = f[a].to_complex();
    for (std::size_t h = 0; h < g.num_arrows(); ++h)
      if (auto ah = g.compose(a, h)) m(static_cast<Eigen::Index>(*ah), static_cast<Eigen::Index>(h)) += c;
  }
  return m;
}

} // namespace convalg
