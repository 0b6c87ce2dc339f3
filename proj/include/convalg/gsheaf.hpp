#pragma once

#include <optional>
#include <string>
#include <vector>

#include "convalg/graph.hpp"
#include "convalg/linalg.hpp"

namespace convalg {

/// Presheaf on a graph: a free module of rank r(x) per vertex and, per edge a,
/// a restriction matrix F(a): F(tgt a) -> F(src a) (r(src a) x r(tgt a)).
struct GSheaf {
  RingDescriptor ring = RingDescriptor::rationals();
  std::vector<std::size_t> rank;
  std::vector<Matrix> maps;

  static GSheaf zero(const Graph& g, const RingDescriptor& ring);
};

struct SheafCheck {
  bool ok = true;
  std::optional<std::size_t> failing_vertex;
  std::string reason;
};

/// Stacked map F(x) -> sum over edges a into x of F(src a), as a matrix with one row block per edge.
Matrix stacked_map(const Graph& g, const GSheaf& f, std::size_t x);

/// The sheaf condition: every stacked map is square and invertible.
SheafCheck gsheaf_check(const Graph& g, const GSheaf& f);

} // namespace convalg
