#include "convalg/convcat.hpp"

#include <algorithm>
#include <set>

#include "convalg/errors.hpp"
#include "convalg/terms.hpp"

namespace convalg {

std::string AlgebroidElement::to_string() const {
  std::vector<std::pair<std::string, Scalar>> t(terms.begin(), terms.end());
  return source + " -> " + target + ": " + format_terms(t);
}

AlgebroidElement operator+(const AlgebroidElement& a, const AlgebroidElement& b) {
  if (a.source != b.source || a.target != b.target || !(a.ring == b.ring))
    throw PreconditionError("sum of morphisms with different endpoints");
  AlgebroidElement out = a;
  for (const auto& [l, c] : b.terms) {
    auto [it, fresh] = out.terms.emplace(l, c);
    if (!fresh) it->second += c;
  }
  std::erase_if(out.terms, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

AlgebroidElement scaled(const AlgebroidElement& a, const Scalar& c) {
  AlgebroidElement out = a;
  for (auto& [l, v] : out.terms) v *= c;
  std::erase_if(out.terms, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

Label InstanceFamily::join_label(const std::string&, const std::string&) const {
  throw PreconditionError(name() + " family has no product decomposition");
}

AlgebroidElement InstanceFamily::basis_element(const std::string& i, const std::string& j, const Label& l) const {
  return normalize({i, j, ring(), {{l, Scalar::one(ring())}}});
}

AlgebroidElement InstanceFamily::parse(const std::string& i, const std::string& j, std::string_view text) const {
  AlgebroidElement f{i, j, ring(), {}};
  for (const auto& [l, c] : split_terms(ring(), text)) f = f + AlgebroidElement{i, j, ring(), {{l, c}}};
  return normalize(f);
}

namespace {

void require_composable(const AlgebroidElement& f, const AlgebroidElement& g) {
  if (f.target != g.source) throw PreconditionError("object mismatch: " + f.target + " vs " + g.source);
  if (!(f.ring == g.ring)) throw PreconditionError("ring mismatch");
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<long> path_key(const Path& p) {
  std::vector<long> k{static_cast<long>(p.anchor)};
  for (auto e : p.edges) k.push_back(static_cast<long>(e));
  return k;
}

} // namespace

// ---- graph family

std::vector<std::string> GraphFamily::objects() const {
  std::vector<std::string> out;
  for (std::size_t v = 0; v < g_.num_vertices(); ++v) out.push_back(g_.vertex_name(v));
  return out;
}

ConvElement GraphFamily::to_conv(const AlgebroidElement& f) const {
  const std::size_t x = g_.vertex_index(f.source), y = g_.vertex_index(f.target);
  TermMap terms;
  for (const auto& [l, c] : f.terms) {
    auto parts = split_label(l);
    if (!parts) throw PreconditionError("not a pair cylinder label: '" + l + "'");
    PairCylinder z{Path::parse(g_, parts->first), Path::parse(g_, parts->second)};
    if (z.alpha.anchor != x || z.beta.anchor != y) throw PreconditionError("label '" + l + "' has the wrong anchors");
    auto [it, fresh] = terms.emplace(z, c);
    if (!fresh) it->second += c;
  }
  return ConvElement(g_, f.ring, x, y, std::move(terms));
}

AlgebroidElement GraphFamily::from_conv(const ConvElement& f) const {
  AlgebroidElement out{g_.vertex_name(f.source()), g_.vertex_name(f.target()), f.ring(), {}};
  for (const auto& [z, c] : f.terms()) out.terms.emplace(pair_cylinder_to_string(g_, z), c);
  return out;
}

std::vector<Label> GraphFamily::basis(const std::string& i, const std::string& j, std::size_t depth) const {
  const std::size_t x = g_.vertex_index(i), y = g_.vertex_index(j);
  std::vector<Label> out;
  for (std::size_t la = 0; la <= depth; ++la)
    for (const auto& a : live_paths(g_, x, la))
      for (std::size_t lb = 0; lb <= depth; ++lb)
        for (const auto& b : live_paths(g_, y, lb)) {
          if (a.source(g_) != b.source(g_)) continue;
          if (!a.empty() && !b.empty() && a.edges.back() == b.edges.back() &&
              g_.designated(g_.edge(a.edges.back()).tgt) == a.edges.back())
            continue;
          out.push_back(pair_cylinder_to_string(g_, PairCylinder{a, b}));
        }
  std::sort(out.begin(), out.end());
  return out;
}

AlgebroidElement GraphFamily::compose(const AlgebroidElement& f, const AlgebroidElement& g) const {
  require_composable(f, g);
  return from_conv(conv_mul(to_conv(f), to_conv(g)));
}

AlgebroidElement GraphFamily::star(const AlgebroidElement& f) const { return from_conv(conv_star(to_conv(f))); }

AlgebroidElement GraphFamily::local_unit(const AlgebroidElement& f) const {
  ConvElement c = to_conv(f);
  std::vector<Path> betas;
  for (const auto& [z, _] : c.terms()) betas.push_back(z.beta);
  return from_conv(ConvElement::indicator(Clopen(g_, c.target(), betas), f.ring));
}

std::vector<NormCell> GraphFamily::norm_cells(const AlgebroidElement& f) const {
  ConvElement c = to_conv(f);
  std::size_t d = 0;
  for (const auto& [z, _] : c.terms()) d = std::max(d, std::min(z.alpha.length(), z.beta.length()));
  TermMap pieces;
  std::vector<std::pair<PairCylinder, Scalar>> work(c.terms().begin(), c.terms().end());
  while (!work.empty()) {
    auto [z, v] = std::move(work.back());
    work.pop_back();
    if (std::min(z.alpha.length(), z.beta.length()) >= d) {
      auto [it, fresh] = pieces.emplace(z, v);
      if (!fresh) it->second += v;
      continue;
    }
    for (auto e : g_.live_incoming(z.alpha.source(g_)))
      work.emplace_back(PairCylinder{z.alpha.extended(e), z.beta.extended(e)}, v);
  }
  std::vector<NormCell> out;
  for (const auto& [z, v] : pieces)
    if (!v.is_zero()) out.push_back({path_key(z.beta), path_key(z.alpha), v});
  return out;
}

std::size_t GraphFamily::support_depth(const AlgebroidElement& f) const {
  std::size_t d = 0;
  const ConvElement c = to_conv(f);
  for (const auto& [z, _] : c.terms()) d = std::max({d, z.alpha.length(), z.beta.length()});
  return d;
}

std::vector<Eigen::MatrixXcd> GraphFamily::regular_matrices(const AlgebroidElement& f, std::size_t depth) const {
  if (depth < support_depth(f))
    throw PreconditionError("depth " + std::to_string(depth) + " is smaller than the support depth " +
                            std::to_string(support_depth(f)));
  ConvMatrix m(g_, f.ring);
  m.add(to_conv(f));
  return regular_compressions(m, depth);
}

std::optional<std::pair<std::string, std::string>> GraphFamily::split_label(const Label& l) const {
  if (l.size() < 4 || l.compare(0, 2, "Z(") != 0 || l.back() != ')') return std::nullopt;
  std::string body = l.substr(2, l.size() - 3);
  auto bar = body.find('|');
  if (bar == std::string::npos) return std::nullopt;
  auto side = [&](const std::string& s) { return Path::parse(g_, trim(s)).to_string(g_); };
  return std::pair{side(body.substr(0, bar)), side(body.substr(bar + 1))};
}

Label GraphFamily::join_label(const std::string& left, const std::string& right) const {
  PairCylinder z{Path::parse(g_, left), Path::parse(g_, right)};
  if (z.alpha.source(g_) != z.beta.source(g_)) throw PreconditionError("paths " + left + " and " + right + " have different sources");
  return pair_cylinder_to_string(g_, z);
}

// ---- groupoid family

namespace {

void require_star_object(const AlgebroidElement& f) {
  if (f.source != "*" || f.target != "*") throw PreconditionError("the groupoid algebra has the single object '*'");
}

} // namespace

GpdElement GroupoidFamily::to_gpd(const AlgebroidElement& f) const {
  require_star_object(f);
  GpdElement out(g_, f.ring);
  for (const auto& [l, c] : f.terms) {
    auto a = g_.find_arrow(l);
    if (!a) throw PreconditionError("unknown arrow '" + l + "'");
    out[*a] += c;
  }
  return out;
}

AlgebroidElement GroupoidFamily::from_gpd(const GpdElement& f) const {
  AlgebroidElement out{"*", "*", f.ring(), {}};
  for (std::size_t a = 0; a < g_.num_arrows(); ++a)
    if (!f[a].is_zero()) out.terms.emplace(g_.arrow(a).name, f[a]);
  return out;
}

std::vector<Label> GroupoidFamily::basis(const std::string& i, const std::string& j, std::size_t) const {
  require_star_object({i, j, ring_, {}});
  std::vector<Label> out;
  for (std::size_t a = 0; a < g_.num_arrows(); ++a) out.push_back(g_.arrow(a).name);
  std::sort(out.begin(), out.end());
  return out;
}

AlgebroidElement GroupoidFamily::compose(const AlgebroidElement& f, const AlgebroidElement& g) const {
  require_composable(f, g);
  return from_gpd(gpd_convolve(to_gpd(f), to_gpd(g)));
}

AlgebroidElement GroupoidFamily::star(const AlgebroidElement& f) const { return from_gpd(gpd_star(to_gpd(f))); }

AlgebroidElement GroupoidFamily::local_unit(const AlgebroidElement& f) const {
  GpdElement e = to_gpd(f);
  GpdElement u(g_, f.ring);
  for (std::size_t a = 0; a < g_.num_arrows(); ++a)
    if (!e[a].is_zero()) u[g_.identity(g_.src(a))] = Scalar::one(f.ring);
  return from_gpd(u);
}

std::vector<NormCell> GroupoidFamily::norm_cells(const AlgebroidElement& f) const {
  GpdElement e = to_gpd(f);
  std::vector<NormCell> out;
  for (std::size_t a = 0; a < g_.num_arrows(); ++a)
    if (!e[a].is_zero()) out.push_back({{static_cast<long>(g_.src(a))}, {static_cast<long>(g_.tgt(a))}, e[a]});
  return out;
}

std::vector<Eigen::MatrixXcd> GroupoidFamily::regular_matrices(const AlgebroidElement& f, std::size_t) const {
  return {gpd_regular_matrix(to_gpd(f))};
}

std::optional<std::pair<std::string, std::string>> GroupoidFamily::split_label(const Label& l) const {
  auto a = g_.find_arrow(l);
  if (!a) return std::nullopt;
  return std::pair{g_.object_name(g_.tgt(*a)), l};
}

Label GroupoidFamily::join_label(const std::string& left, const std::string& right) const {
  auto a = g_.find_arrow(right);
  if (!a || g_.object_name(g_.tgt(*a)) != left) throw PreconditionError("no arrow " + right + " into " + left);
  return right;
}

// ---- hecke family

HeckeFamily::HeckeFamily(unsigned long p, unsigned max_level, const RingDescriptor& ring)
    : p_(p), max_level_(max_level), ring_(ring) {
  TowerElement probe(ring, p, max_level, max_level);
  width_ = std::to_string(probe.values().size() - 1).size();
}

std::vector<std::string> HeckeFamily::objects() const {
  std::vector<std::string> out;
  for (unsigned k = 0; k <= max_level_; ++k) out.push_back(std::to_string(k));
  return out;
}

unsigned HeckeFamily::level(const std::string& object) const {
  std::size_t used = 0;
  unsigned long k = 0;
  try {
    k = std::stoul(object, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != object.size() || object.empty() || k > max_level_)
    throw PreconditionError("unknown level '" + object + "'");
  return static_cast<unsigned>(k);
}

Label HeckeFamily::residue_label(std::size_t r) const {
  std::string digits = std::to_string(r);
  return "c" + std::string(width_ > digits.size() ? width_ - digits.size() : 0, '0') + digits;
}

TowerElement HeckeFamily::to_tower(const AlgebroidElement& f) const {
  TowerElement out(f.ring, p_, level(f.source), level(f.target));
  std::vector<Scalar> values = out.values();
  for (const auto& [l, c] : f.terms) {
    std::size_t used = 0;
    unsigned long r = 0;
    if (l.size() > 1 && l[0] == 'c') {
      try {
        r = std::stoul(l.substr(1), &used);
      } catch (const std::exception&) {
        used = 0;
      }
    }
    if (used + 1 != l.size() || r >= values.size()) throw PreconditionError("bad residue label '" + l + "'");
    values[r] += c;
  }
  return TowerElement(f.ring, p_, out.k_src(), out.k_tgt(), std::move(values));
}

AlgebroidElement HeckeFamily::from_tower(const TowerElement& f) const {
  AlgebroidElement out{std::to_string(f.k_src()), std::to_string(f.k_tgt()), f.ring(), {}};
  for (std::size_t r = 0; r < f.values().size(); ++r)
    if (!f[r].is_zero()) out.terms.emplace(residue_label(r), f[r]);
  return out;
}

std::vector<Label> HeckeFamily::basis(const std::string& i, const std::string& j, std::size_t) const {
  TowerElement probe(ring_, p_, level(i), level(j));
  std::vector<Label> out;
  for (std::size_t r = 0; r < probe.values().size(); ++r) out.push_back(residue_label(r));
  return out;
}

AlgebroidElement HeckeFamily::compose(const AlgebroidElement& f, const AlgebroidElement& g) const {
  require_composable(f, g);
  return from_tower(hecke_compose(to_tower(f), to_tower(g)));
}

AlgebroidElement HeckeFamily::star(const AlgebroidElement& f) const { return from_tower(hecke_star(to_tower(f))); }

AlgebroidElement HeckeFamily::local_unit(const AlgebroidElement& f) const {
  const unsigned k = level(f.target);
  return from_tower(TowerElement::delta(f.ring, p_, k, k, 0));
}

std::vector<NormCell> HeckeFamily::norm_cells(const AlgebroidElement& f) const {
  TowerElement t = to_tower(f);
  const unsigned long rows = ipow(p_, t.k_src()), cols = ipow(p_, t.k_tgt()), n = t.values().size();
  std::vector<NormCell> out;
  for (unsigned long a = 0; a < rows; ++a)
    for (unsigned long b = 0; b < cols; ++b) {
      const Scalar& v = t[(a + n * cols - b) % n];
      if (!v.is_zero()) out.push_back({{static_cast<long>(b)}, {static_cast<long>(a)}, v});
    }
  return out;
}

std::vector<Eigen::MatrixXcd> HeckeFamily::regular_matrices(const AlgebroidElement& f, std::size_t) const {
  return {hecke_kernel_matrix(to_tower(f))};
}

// ---- pushforward and exchange

FiberMap FiberMap::identity(const std::vector<Label>& labels) {
  return {labels, [](const Label& y) { return std::optional<std::vector<Label>>{{y}}; }};
}

FiberMap FiberMap::to_point(const std::vector<Label>& labels, const Label& point) {
  return {{point}, [labels, point](const Label& y) {
            return y == point ? std::optional<std::vector<Label>>{labels} : std::optional<std::vector<Label>>{std::vector<Label>{}};
          }};
}

FiberMap FiberMap::cylinder_refinement(const Graph& g, std::size_t anchor, std::size_t fine, std::size_t coarse) {
  if (coarse > fine) throw PreconditionError("refinement needs coarse <= fine");
  FiberMap out;
  for (const auto& p : live_paths(g, anchor, coarse)) out.codomain.push_back(p.to_string(g));
  const Graph* gp = &g;
  out.fiber = [gp, fine, coarse](const Label& y) {
    std::vector<Label> xs;
    for (const auto& q : live_extensions(*gp, Path::parse(*gp, y), fine - coarse)) xs.push_back(q.to_string(*gp));
    return std::optional<std::vector<Label>>{std::move(xs)};
  };
  return out;
}

LabelMap pushforward(const FiberMap& f, const LabelMap& v, const RingDescriptor& ring) {
  LabelMap w;
  std::set<Label> covered;
  for (const auto& y : f.codomain) {
    auto fib = f.fiber(y);
    if (!fib) throw PreconditionError("infinite fibre over '" + y + "'");
    Scalar sum = Scalar::zero(ring);
    for (const auto& x : *fib) {
      covered.insert(x);
      if (auto it = v.find(x); it != v.end()) sum += it->second;
    }
    if (!sum.is_zero()) w.emplace(y, sum);
  }
  for (const auto& [x, c] : v)
    if (!c.is_zero() && !covered.count(x)) throw PreconditionError("'" + x + "' lies in no fibre");
  return w;
}

Exchanged exchange_forward(const InstanceFamily& fam, const AlgebroidElement& f) {
  Exchanged out;
  for (const auto& [l, c] : f.terms) {
    auto parts = fam.split_label(l);
    if (!parts) throw PreconditionError(fam.name() + " family cannot split '" + l + "'");
    out[parts->first].emplace(parts->second, c);
  }
  return out;
}

AlgebroidElement exchange_backward(const InstanceFamily& fam, const std::string& source, const std::string& target,
                                   const Exchanged& data) {
  AlgebroidElement out{source, target, fam.ring(), {}};
  for (const auto& [left, inner] : data)
    for (const auto& [right, c] : inner)
      if (!c.is_zero()) out.terms.emplace(fam.join_label(left, right), c);
  return out;
}

// ---- coequalizers

Quotient coequalize(const CoeqPresentation& p) {
  std::size_t n = 0, m = 0;
  for (auto r : p.generator_ranks) n += r;
  for (auto r : p.relation_ranks) m += r;
  if (p.first.rows() != n || p.second.rows() != n || p.first.cols() != m || p.second.cols() != m)
    throw PreconditionError("coequalizer maps do not match the summand ranks");
  const RingDescriptor& ring = p.ring;
  Matrix r = (p.first - p.second).in_ring(ring);
  Quotient q;
  if (m == 0 || r.is_zero()) {
    q.rank = n;
    q.projection = Matrix::identity(ring, n);
    q.section = Matrix::identity(ring, n);
    return q;
  }
  if (ring.is_field()) {
    Matrix left_null = kernel_basis(r.transpose()).transpose().in_ring(ring);
    q.rank = left_null.rows();
    q.projection = left_null;
    q.section = solve(left_null, Matrix::identity(ring, q.rank))->in_ring(ring);
    return q;
  }
  if (ring.kind() == RingKind::GaussianRationals) throw PreconditionError("unsupported coequalizer ring");
  SmithForm s = smith_normal_form(r);
  const std::size_t rk = s.invariants.size();
  for (const auto& d : s.invariants)
    if (d != 1) q.torsion.push_back(d);
  q.rank = n - rk;
  q.projection = s.u.block(rk, 0, n - rk, n);
  q.section = s.u_inverse.block(0, rk, n, n - rk);
  return q;
}

GammaCPresentation gamma_c_presentation(const Clopen& u, const std::vector<Clopen>& cover, std::size_t depth,
                                        const RingDescriptor& ring) {
  std::size_t need = u.depth();
  Clopen joined = Clopen::empty(u.graph(), u.anchor());
  for (const auto& c : cover) {
    if (!clopen_subset(c, u)) throw PreconditionError("chart " + c.to_string() + " is not inside " + u.to_string());
    joined = clopen_join(joined, c);
    need = std::max(need, c.depth());
  }
  if (!(joined == u)) throw PreconditionError("charts do not cover " + u.to_string());
  if (depth < need) throw PreconditionError("depth " + std::to_string(depth) + " is below the cover depth");
  GammaCPresentation out{{}, u, cover, depth, {}, u.cells(depth)};
  std::sort(out.union_cells.begin(), out.union_cells.end());
  std::map<std::pair<std::size_t, Path>, std::size_t> index;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    auto cells = cover[i].cells(depth);
    out.presentation.generator_ranks.push_back(cells.size());
    for (auto& c : cells) {
      index.emplace(std::pair{i, c}, out.generators.size());
      out.generators.emplace_back(i, std::move(c));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> rel_first, rel_second;
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (std::size_t j = i + 1; j < cover.size(); ++j) {
      auto cells = clopen_meet(cover[i], cover[j]).cells(depth);
      out.presentation.relation_ranks.push_back(cells.size());
      for (const auto& c : cells) {
        rel_first.emplace_back(index.at({i, c}), rel_first.size());
        rel_second.emplace_back(index.at({j, c}), rel_second.size());
      }
    }
  const std::size_t n = out.generators.size(), m = rel_first.size();
  out.presentation.ring = ring;
  out.presentation.first = Matrix(ring, n, m);
  out.presentation.second = Matrix(ring, n, m);
  for (auto [g, r] : rel_first) out.presentation.first(g, r) = Scalar::one(ring);
  for (auto [g, r] : rel_second) out.presentation.second(g, r) = Scalar::one(ring);
  return out;
}

Matrix gluing_map(const GammaCPresentation& p) {
  const RingDescriptor& ring = p.presentation.ring;
  Matrix m(ring, p.union_cells.size(), p.generators.size());
  for (std::size_t k = 0; k < p.generators.size(); ++k) {
    auto it = std::lower_bound(p.union_cells.begin(), p.union_cells.end(), p.generators[k].second);
    m(static_cast<std::size_t>(it - p.union_cells.begin()), k) = Scalar::one(ring);
  }
  return m;
}

Matrix partition_lift(const GammaCPresentation& p) {
  const RingDescriptor& ring = p.presentation.ring;
  Matrix m(ring, p.generators.size(), p.union_cells.size());
  for (std::size_t c = 0; c < p.union_cells.size(); ++c)
    for (std::size_t k = 0; k < p.generators.size(); ++k)
      if (p.generators[k].second == p.union_cells[c]) {
        m(k, c) = Scalar::one(ring);
        break;
      }
  return m;
}

Matrix cover_comparison(const GammaCPresentation& a, const Quotient& qa, const GammaCPresentation& b, const Quotient& qb) {
  if (!(a.union_set == b.union_set) || a.depth != b.depth)
    throw PreconditionError("presentations of different objects or depths");
  return qb.projection * partition_lift(b) * gluing_map(a) * qa.section;
}

} // namespace convalg
