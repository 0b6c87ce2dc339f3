#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace convalg {

/// Finite directed graph. Vertices and edges are indexed in declaration order.
class Graph {
public:
  struct Edge {
    std::string name;
    std::size_t src;
    std::size_t tgt;
  };

  std::size_t add_vertex(const std::string& name);
  std::size_t add_edge(const std::string& name, std::size_t src, std::size_t tgt);

  /// `vertex <name>` / `edge <name> <src> <tgt>` lines, `#` comments. Throws ParseError.
  static Graph parse(std::string_view text);
  static Graph load(const std::string& path);
  std::string to_text() const;

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::string& vertex_name(std::size_t v) const { return vertices_.at(v); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  std::optional<std::size_t> find_vertex(std::string_view name) const;
  std::optional<std::size_t> find_edge(std::string_view name) const;
  std::size_t vertex_index(std::string_view name) const; // throws PreconditionError
  std::size_t edge_index(std::string_view name) const;

  /// Edges with tgt == v, in edge order.
  const std::vector<std::size_t>& incoming(std::size_t v) const { return incoming_.at(v); }
  /// A vertex is live when an infinite backward path ends at it; dead vertices carry empty path spaces.
  bool is_live(std::size_t v) const { return live_.at(v); }
  /// Incoming edges whose source is live.
  std::vector<std::size_t> live_incoming(std::size_t v) const;
  /// The least live incoming edge, if any.
  std::optional<std::size_t> designated(std::size_t v) const;

private:
  void refresh();

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incoming_;
  std::vector<bool> live_;
};

/// A finite path written anchor-first: edges[0] has tgt == anchor and
/// src(edges[i]) == tgt(edges[i+1]). As a cylinder it is the set of infinite
/// paths ending at the anchor that begin with these edges.
struct Path {
  std::size_t anchor = 0;
  std::vector<std::size_t> edges;

  std::size_t length() const noexcept { return edges.size(); }
  bool empty() const noexcept { return edges.empty(); }
  std::size_t source(const Graph& g) const { return edges.empty() ? anchor : g.edge(edges.back()).src; }
  Path extended(std::size_t e) const;
  Path concat(const Path& tail) const;
  bool is_prefix_of(const Path& other) const;
  /// other = *this + rest; precondition is_prefix_of(other).
  Path remainder_in(const Path& other, const Graph& g) const;

  bool valid(const Graph& g) const;
  /// `x:a.b.c`; the empty path prints `x:`.
  std::string to_string(const Graph& g) const;
  /// Dot-separated edge names only (no anchor).
  std::string edge_string(const Graph& g) const;
  static Path parse(const Graph& g, std::string_view text);
  /// Anchor deduced from the first edge; needs at least one edge.
  static Path parse_edges(const Graph& g, std::string_view dotted);
  static Path trivial(std::size_t v) { return Path{v, {}}; }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// All paths with the given anchor and length whose source is live.
std::vector<Path> live_paths(const Graph& g, std::size_t anchor, std::size_t length);
/// All live extensions of p by exactly `extra` edges.
std::vector<Path> live_extensions(const Graph& g, const Path& p, std::size_t extra);

} // namespace convalg
