#include "convalg/stonelocale.hpp"

#include <algorithm>
#include <set>

#include "convalg/errors.hpp"

namespace convalg {

namespace {

void check_path(const Graph& g, std::size_t anchor, const Path& p) {
  if (p.anchor != anchor) throw PreconditionError("cylinder " + p.to_string(g) + " is not anchored at " + g.vertex_name(anchor));
  if (!p.valid(g)) throw PreconditionError("invalid path in cylinder");
}

// Replace every complete live fan of children by its parent, deepest level first.
template <class Value, class Same>
std::map<Path, Value> merge_fans(const Graph& g, std::map<Path, Value> cells, std::size_t depth, Same same) {
  for (std::size_t level = depth; level > 0; --level) {
    std::set<Path> parents;
    for (const auto& [p, _] : cells)
      if (p.length() == level) parents.insert(Path{p.anchor, {p.edges.begin(), p.edges.end() - 1}});
    for (const auto& parent : parents) {
      auto kids = g.live_incoming(parent.source(g));
      bool full = true;
      const Value* first = nullptr;
      for (auto e : kids) {
        auto it = cells.find(parent.extended(e));
        if (it == cells.end() || (first && !same(*first, it->second))) {
          full = false;
          break;
        }
        if (!first) first = &it->second;
      }
      if (!full || !first) continue;
      Value v = *first;
      for (auto e : kids) cells.erase(parent.extended(e));
      cells.emplace(parent, std::move(v));
    }
  }
  return cells;
}

struct Unit {};

} // namespace

Clopen::Clopen(const Graph& g, std::size_t anchor, std::vector<Path> cylinders) : graph_(&g), anchor_(anchor) {
  if (anchor >= g.num_vertices()) throw PreconditionError("anchor out of range");
  std::size_t depth = 0;
  for (const auto& p : cylinders) {
    check_path(g, anchor, p);
    depth = std::max(depth, p.length());
  }
  std::map<Path, Unit> cells;
  for (const auto& p : cylinders)
    for (auto& q : live_extensions(g, p, depth - p.length())) cells.emplace(std::move(q), Unit{});
  auto merged = merge_fans(g, std::move(cells), depth, [](const Unit&, const Unit&) { return true; });
  for (auto& [p, _] : merged) cylinders_.push_back(p);
}

Clopen Clopen::parse(const Graph& g, std::string_view text) {
  std::string t(text);
  std::vector<Path> paths;
  std::optional<std::size_t> anchor;
  std::size_t start = 0;
  while (start <= t.size()) {
    auto bar = t.find('|', start);
    std::string piece = t.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
    auto brace = piece.find("{}");
    if (brace != std::string::npos) {
      auto colon = piece.find(':');
      std::string name = piece.substr(0, colon);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      auto v = g.find_vertex(name);
      if (!v) throw ParseError("unknown vertex '" + name + "'");
      anchor = *v;
    } else {
      Path p = Path::parse(g, piece);
      if (anchor && *anchor != p.anchor) throw ParseError("clopen mixes anchors");
      anchor = p.anchor;
      paths.push_back(p);
    }
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  if (!anchor) throw ParseError("empty clopen text");
  return Clopen(g, *anchor, std::move(paths));
}

std::size_t Clopen::depth() const {
  std::size_t d = 0;
  for (const auto& p : cylinders_) d = std::max(d, p.length());
  return d;
}

std::vector<Path> Clopen::cells(std::size_t length) const {
  if (length < depth()) throw PreconditionError("cell length below clopen depth");
  std::vector<Path> out;
  for (const auto& p : cylinders_)
    for (auto& q : live_extensions(*graph_, p, length - p.length())) out.push_back(std::move(q));
  std::sort(out.begin(), out.end());
  return out;
}

bool Clopen::contains_path(const Path& p) const {
  if (p.anchor != anchor_) return false;
  if (!graph_->is_live(p.source(*graph_))) return true; // empty cylinder
  for (const auto& c : cylinders_)
    if (c.is_prefix_of(p)) return true;
  // p may be a union of several deeper cylinders
  std::size_t d = std::max(depth(), p.length());
  auto need = live_extensions(*graph_, p, d - p.length());
  auto have = cells(d);
  for (const auto& q : need)
    if (!std::binary_search(have.begin(), have.end(), q)) return false;
  return true;
}

std::string Clopen::to_string() const {
  if (cylinders_.empty()) return graph_->vertex_name(anchor_) + ":{}";
  std::string out;
  for (std::size_t i = 0; i < cylinders_.size(); ++i) out += (i ? " | " : "") + cylinders_[i].to_string(*graph_);
  return out;
}

namespace {

void same_anchor(const Clopen& u, const Clopen& v) {
  if (&u.graph() != &v.graph()) throw PreconditionError("clopens live on different graphs");
  if (u.anchor() != v.anchor())
    throw PreconditionError("anchor mismatch: " + u.graph().vertex_name(u.anchor()) + " vs " +
                            u.graph().vertex_name(v.anchor()));
}

template <class Op>
Clopen combine(const Clopen& u, const Clopen& v, Op op) {
  same_anchor(u, v);
  std::size_t d = std::max(u.depth(), v.depth());
  auto a = u.cells(d);
  auto b = v.cells(d);
  auto all = live_paths(u.graph(), u.anchor(), d);
  std::vector<Path> out;
  for (auto& p : all) {
    bool in_a = std::binary_search(a.begin(), a.end(), p);
    bool in_b = std::binary_search(b.begin(), b.end(), p);
    if (op(in_a, in_b)) out.push_back(std::move(p));
  }
  return Clopen(u.graph(), u.anchor(), std::move(out));
}

} // namespace

Clopen clopen_meet(const Clopen& u, const Clopen& v) { return combine(u, v, [](bool a, bool b) { return a && b; }); }
Clopen clopen_join(const Clopen& u, const Clopen& v) { return combine(u, v, [](bool a, bool b) { return a || b; }); }
Clopen clopen_minus(const Clopen& u, const Clopen& v) { return combine(u, v, [](bool a, bool b) { return a && !b; }); }
Clopen clopen_complement(const Clopen& u) { return clopen_minus(Clopen::full(u.graph(), u.anchor()), u); }

bool clopen_subset(const Clopen& u, const Clopen& v) { return clopen_minus(u, v).is_empty(); }

bool way_below(const Clopen& u, const Clopen& v) { return clopen_subset(u, v); }

RatherBelow rather_below(const Clopen& u, const Clopen& v) {
  return RatherBelow{clopen_subset(u, v), clopen_complement(u)};
}

LCSection::LCSection(const Graph& g, const RingDescriptor& ring, std::size_t anchor, std::map<Path, Scalar> pieces)
    : graph_(&g), ring_(ring), anchor_(anchor) {
  if (anchor >= g.num_vertices()) throw PreconditionError("anchor out of range");
  std::size_t depth = 0;
  for (const auto& [p, c] : pieces) {
    check_path(g, anchor, p);
    if (!(c.ring() == ring)) throw PreconditionError("section value in the wrong ring");
    depth = std::max(depth, p.length());
  }
  std::map<Path, Scalar> cells;
  for (const auto& [p, c] : pieces) {
    if (c.is_zero()) continue;
    for (auto& q : live_extensions(g, p, depth - p.length()))
      if (!cells.emplace(std::move(q), c).second)
        throw PreconditionError("section pieces overlap at " + p.to_string(g));
  }
  pieces_ = merge_fans(g, std::move(cells), depth, [](const Scalar& a, const Scalar& b) { return a == b; });
}

LCSection LCSection::constant_on(const Clopen& u, const Scalar& c) {
  std::map<Path, Scalar> pieces;
  for (const auto& p : u.cylinders()) pieces.emplace(p, c);
  return LCSection(u.graph(), c.ring(), u.anchor(), std::move(pieces));
}

std::size_t LCSection::depth() const {
  std::size_t d = 0;
  for (const auto& [p, _] : pieces_) d = std::max(d, p.length());
  return d;
}

Clopen LCSection::support() const {
  std::vector<Path> paths;
  for (const auto& [p, _] : pieces_) paths.push_back(p);
  return Clopen(*graph_, anchor_, std::move(paths));
}

Scalar LCSection::value_at(const Path& p) const {
  if (p.anchor != anchor_) throw PreconditionError("value_at: anchor mismatch");
  for (const auto& [q, c] : pieces_)
    if (q.is_prefix_of(p)) return c;
  std::size_t d = std::max(depth(), p.length());
  auto mine = cells(d);
  auto inside = live_extensions(*graph_, p, d - p.length());
  if (inside.empty()) return Scalar::zero(ring_);
  std::optional<Scalar> value;
  for (const auto& q : inside) {
    auto it = mine.find(q);
    Scalar c = it == mine.end() ? Scalar::zero(ring_) : it->second;
    if (value && !(*value == c)) throw PreconditionError("section is not constant on " + p.to_string(*graph_));
    value = c;
  }
  return *value;
}

std::map<Path, Scalar> LCSection::cells(std::size_t length) const {
  if (length < depth()) throw PreconditionError("cell length below section depth");
  std::map<Path, Scalar> out;
  for (const auto& [p, c] : pieces_)
    for (auto& q : live_extensions(*graph_, p, length - p.length())) out.emplace(std::move(q), c);
  return out;
}

LCSection LCSection::restricted(const Clopen& u) const {
  if (u.anchor() != anchor_) throw PreconditionError("restriction: anchor mismatch");
  std::size_t d = std::max(depth(), u.depth());
  auto inside = u.cells(d);
  std::map<Path, Scalar> out;
  for (auto& [p, c] : cells(d))
    if (std::binary_search(inside.begin(), inside.end(), p)) out.emplace(p, c);
  return LCSection(*graph_, ring_, anchor_, std::move(out));
}

LCSection LCSection::operator+(const LCSection& other) const {
  if (other.anchor_ != anchor_ || !(other.ring_ == ring_)) throw PreconditionError("section sum: anchor or ring mismatch");
  std::size_t d = std::max(depth(), other.depth());
  auto out = cells(d);
  for (auto& [p, c] : other.cells(d)) {
    auto [it, fresh] = out.emplace(p, c);
    if (!fresh) it->second += c;
  }
  return LCSection(*graph_, ring_, anchor_, std::move(out));
}

LCSection LCSection::operator-(const LCSection& other) const {
  std::map<Path, Scalar> neg;
  for (const auto& [p, c] : other.pieces_) neg.emplace(p, -c);
  return *this + LCSection(*graph_, ring_, anchor_, std::move(neg));
}

std::string LCSection::to_string() const {
  if (pieces_.empty()) return "0 @ " + graph_->vertex_name(anchor_);
  std::string out;
  bool first = true;
  for (const auto& [p, c] : pieces_) {
    out += (first ? "" : ", ") + p.to_string(*graph_) + " -> " + c.to_string();
    first = false;
  }
  return out;
}

LCSection extend_with_support(const LCSection& s, const Clopen& u, const Clopen& v) {
  same_anchor(u, v);
  if (s.anchor() != u.anchor()) throw PreconditionError("section anchor differs from U");
  if (!way_below(u, v))
    throw PreconditionError("extend_with_support needs U inside V; " + clopen_minus(u, v).to_string() + " lies outside");
  return s.restricted(u);
}

std::vector<LCSection> partition_of_support(const LCSection& s, const std::vector<Clopen>& cover) {
  std::size_t d = s.depth();
  for (const auto& c : cover) {
    if (c.anchor() != s.anchor()) throw PreconditionError("cover member with a different anchor");
    d = std::max(d, c.depth());
  }
  std::vector<std::vector<Path>> member_cells;
  for (const auto& c : cover) member_cells.push_back(c.cells(d));
  std::vector<std::map<Path, Scalar>> parts(cover.size());
  for (auto& [p, c] : s.cells(d)) {
    bool placed = false;
    for (std::size_t i = 0; i < cover.size() && !placed; ++i)
      if (std::binary_search(member_cells[i].begin(), member_cells[i].end(), p)) {
        parts[i].emplace(p, c);
        placed = true;
      }
    if (!placed) throw PreconditionError("cover misses " + p.to_string(s.graph()) + " in the support");
  }
  std::vector<LCSection> out;
  for (auto& part : parts) out.emplace_back(s.graph(), s.ring(), s.anchor(), std::move(part));
  return out;
}

} // namespace convalg
