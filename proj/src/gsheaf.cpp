#include "convalg/gsheaf.hpp"

#include "convalg/errors.hpp"

namespace convalg {

GSheaf GSheaf::zero(const Graph& g, const RingDescriptor& ring) {
  GSheaf f;
  f.ring = ring;
  f.rank.assign(g.num_vertices(), 0);
  for (std::size_t a = 0; a < g.num_edges(); ++a) f.maps.emplace_back(ring, 0, 0);
  return f;
}

Matrix stacked_map(const Graph& g, const GSheaf& f, std::size_t x) {
  if (f.rank.size() != g.num_vertices() || f.maps.size() != g.num_edges())
    throw PreconditionError("sheaf data does not match the graph");
  std::vector<Matrix> blocks;
  for (auto a : g.incoming(x)) {
    const auto& m = f.maps[a];
    if (m.rows() != f.rank[g.edge(a).src] || m.cols() != f.rank[x])
      throw PreconditionError("restriction map of edge " + g.edge(a).name + " has the wrong shape");
    blocks.push_back(m);
  }
  return vstack(blocks, f.ring, f.rank[x]);
}

SheafCheck gsheaf_check(const Graph& g, const GSheaf& f) {
  for (std::size_t x = 0; x < g.num_vertices(); ++x) {
    Matrix s = stacked_map(g, f, x);
    if (s.rows() != s.cols())
      return {false, x, "stacked map at " + g.vertex_name(x) + " is " + std::to_string(s.rows()) + "x" +
                            std::to_string(s.cols()) + ", not square"};
    if (!inverse(s))
      return {false, x, "stacked map at " + g.vertex_name(x) + " is not invertible over " + f.ring.name()};
  }
  return {};
}

} // namespace convalg
