#include "convalg/graph.hpp"

#include <fstream>
#include <sstream>

#include "convalg/errors.hpp"

namespace convalg {

std::size_t Graph::add_vertex(const std::string& name) {
  if (find_vertex(name)) throw PreconditionError("duplicate vertex '" + name + "'");
  vertices_.push_back(name);
  refresh();
  return vertices_.size() - 1;
}

std::size_t Graph::add_edge(const std::string& name, std::size_t src, std::size_t tgt) {
  if (find_edge(name)) throw PreconditionError("duplicate edge '" + name + "'");
  if (src >= vertices_.size() || tgt >= vertices_.size()) throw PreconditionError("edge '" + name + "' has unknown endpoint");
  edges_.push_back({name, src, tgt});
  refresh();
  return edges_.size() - 1;
}

void Graph::refresh() {
  incoming_.assign(vertices_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) incoming_[edges_[e].tgt].push_back(e);
  // Prune vertices without live predecessors until stable.
  live_.assign(vertices_.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (!live_[v]) continue;
      bool any = false;
      for (auto e : incoming_[v]) any = any || live_[edges_[e].src];
      if (!any) {
        live_[v] = false;
        changed = true;
      }
    }
  }
}

std::vector<std::size_t> Graph::live_incoming(std::size_t v) const {
  std::vector<std::size_t> out;
  for (auto e : incoming_.at(v))
    if (live_[edges_[e].src]) out.push_back(e);
  return out;
}

std::optional<std::size_t> Graph::designated(std::size_t v) const {
  for (auto e : incoming_.at(v))
    if (live_[edges_[e].src]) return e;
  return std::nullopt;
}

std::optional<std::size_t> Graph::find_vertex(std::string_view name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Graph::find_edge(std::string_view name) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Graph::vertex_index(std::string_view name) const {
  auto v = find_vertex(name);
  if (!v) throw PreconditionError("unknown vertex '" + std::string(name) + "'");
  return *v;
}

std::size_t Graph::edge_index(std::string_view name) const {
  auto e = find_edge(name);
  if (!e) throw PreconditionError("unknown edge '" + std::string(name) + "'");
  return *e;
}

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

} // namespace

Graph Graph::parse(std::string_view text) {
  Graph g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> words;
    for (std::string w; ls >> w;) words.push_back(w);
    if (words.empty()) continue;
    std::size_t col = line.find_first_not_of(" \t") + 1;
    auto fail = [&](const std::string& what) { throw ParseError(what, lineno, col); };
    for (std::size_t i = 1; i < words.size(); ++i)
      if (!valid_name(words[i])) fail("invalid name '" + words[i] + "'");
    if (words[0] == "vertex") {
      if (words.size() != 2) fail("expected 'vertex <name>'");
      if (g.find_vertex(words[1])) fail("duplicate vertex '" + words[1] + "'");
      g.vertices_.push_back(words[1]);
    } else if (words[0] == "edge") {
      if (words.size() != 4) fail("expected 'edge <name> <src> <tgt>'");
      if (g.find_edge(words[1])) fail("duplicate edge '" + words[1] + "'");
      auto s = g.find_vertex(words[2]);
      auto t = g.find_vertex(words[3]);
      if (!s) fail("undeclared vertex '" + words[2] + "'");
      if (!t) fail("undeclared vertex '" + words[3] + "'");
      g.edges_.push_back({words[1], *s, *t});
    } else {
      fail("unknown directive '" + words[0] + "'");
    }
  }
  g.refresh();
  return g;
}

Graph Graph::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string Graph::to_text() const {
  std::string out;
  for (const auto& v : vertices_) out += "vertex " + v + "\n";
  for (const auto& e : edges_) out += "edge " + e.name + " " + vertices_[e.src] + " " + vertices_[e.tgt] + "\n";
  return out;
}

Path Path::extended(std::size_t e) const {
  Path p = *this;
  p.edges.push_back(e);
  return p;
}

Path Path::concat(const Path& tail) const {
  Path p = *this;
  p.edges.insert(p.edges.end(), tail.edges.begin(), tail.edges.end());
  return p;
}

bool Path::is_prefix_of(const Path& other) const {
  return anchor == other.anchor && edges.size() <= other.edges.size() &&
         std::equal(edges.begin(), edges.end(), other.edges.begin());
}

Path Path::remainder_in(const Path& other, const Graph& g) const {
  return Path{source(g), std::vector<std::size_t>(other.edges.begin() + static_cast<std::ptrdiff_t>(edges.size()), other.edges.end())};
}

bool Path::valid(const Graph& g) const {
  if (anchor >= g.num_vertices()) return false;
  std::size_t at = anchor;
  for (auto e : edges) {
    if (e >= g.num_edges() || g.edge(e).tgt != at) return false;
    at = g.edge(e).src;
  }
  return true;
}

std::string Path::edge_string(const Graph& g) const {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) out += (i ? "." : "") + g.edge(edges[i]).name;
  return out;
}

std::string Path::to_string(const Graph& g) const { return g.vertex_name(anchor) + ":" + edge_string(g); }

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::size_t> parse_edge_list(const Graph& g, const std::string& dotted) {
  std::vector<std::size_t> out;
  if (dotted.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    std::string name = trim(dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    auto e = g.find_edge(name);
    if (!e) throw ParseError("unknown edge '" + name + "'");
    out.push_back(*e);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return out;
}

} // namespace

Path Path::parse(const Graph& g, std::string_view text) {
  std::string t = trim(text);
  auto colon = t.find(':');
  if (colon == std::string::npos) throw ParseError("expected 'vertex:edges' in '" + t + "'");
  std::string vname = trim(t.substr(0, colon));
  auto v = g.find_vertex(vname);
  if (!v) throw ParseError("unknown vertex '" + vname + "'");
  Path p{*v, parse_edge_list(g, trim(t.substr(colon + 1)))};
  if (!p.valid(g)) throw ParseError("edges of '" + t + "' do not form a path ending at " + vname);
  return p;
}

Path Path::parse_edges(const Graph& g, std::string_view dotted) {
  auto edges = parse_edge_list(g, trim(dotted));
  if (edges.empty()) throw ParseError("empty path");
  Path p{g.edge(edges.front()).tgt, std::move(edges)};
  if (!p.valid(g)) throw ParseError("edges '" + std::string(dotted) + "' do not compose");
  return p;
}

std::vector<Path> live_extensions(const Graph& g, const Path& p, std::size_t extra) {
  std::vector<Path> frontier;
  if (!g.is_live(p.source(g))) return frontier;
  frontier.push_back(p);
  for (std::size_t k = 0; k < extra; ++k) {
    std::vector<Path> next;
    for (const auto& q : frontier)
      for (auto e : g.live_incoming(q.source(g))) next.push_back(q.extended(e));
    frontier = std::move(next);
  }
  return frontier;
}

std::vector<Path> live_paths(const Graph& g, std::size_t anchor, std::size_t length) {
  return live_extensions(g, Path::trivial(anchor), length);
}

} // namespace convalg
