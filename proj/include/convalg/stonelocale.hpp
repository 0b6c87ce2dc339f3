#pragma once

#include <map>
#include <string>
#include <vector>

#include "convalg/graph.hpp"
#include "convalg/scalar.hpp"

namespace convalg {

/// Clopen subset of the path space at an anchor vertex, kept as the antichain of its
/// maximal cylinders (shortest representative when a cylinder has a single live child).
/// Two clopens are equal iff their normal forms are identical.
class Clopen {
public:
  Clopen(const Graph& g, std::size_t anchor, std::vector<Path> cylinders);

  static Clopen empty(const Graph& g, std::size_t anchor) { return Clopen(g, anchor, {}); }
  static Clopen full(const Graph& g, std::size_t anchor) { return Clopen(g, anchor, {Path::trivial(anchor)}); }
  static Clopen cylinder(const Graph& g, const Path& p) { return Clopen(g, p.anchor, {p}); }
  /// `x:a.b | x:c` or `x:{}` for the empty set.
  static Clopen parse(const Graph& g, std::string_view text);

  const Graph& graph() const noexcept { return *graph_; }
  std::size_t anchor() const noexcept { return anchor_; }
  const std::vector<Path>& cylinders() const noexcept { return cylinders_; }
  bool is_empty() const noexcept { return cylinders_.empty(); }
  /// Longest cylinder length.
  std::size_t depth() const;
  /// The live paths of the given length (>= depth()) whose cylinders lie inside.
  std::vector<Path> cells(std::size_t length) const;
  bool contains_path(const Path& p) const;

  std::string to_string() const;
  friend bool operator==(const Clopen& a, const Clopen& b) {
    return a.anchor_ == b.anchor_ && a.cylinders_ == b.cylinders_;
  }

private:
  const Graph* graph_;
  std::size_t anchor_;
  std::vector<Path> cylinders_;
};

Clopen clopen_meet(const Clopen& u, const Clopen& v);
Clopen clopen_join(const Clopen& u, const Clopen& v);
Clopen clopen_complement(const Clopen& u);
Clopen clopen_minus(const Clopen& u, const Clopen& v);
bool clopen_subset(const Clopen& u, const Clopen& v);

/// U << V. Clopens of a Stone space are compact, so this is inclusion.
bool way_below(const Clopen& u, const Clopen& v);

struct RatherBelow {
  bool holds = false;
  /// W = complement(U): W join V is everything and W meet U is empty.
  Clopen witness;
};
/// U rather below V, with its separating witness.
RatherBelow rather_below(const Clopen& u, const Clopen& v);

/// Locally constant compactly supported section on the path space at an anchor:
/// scalar values on pairwise disjoint cylinders, zero elsewhere.
class LCSection {
public:
  LCSection(const Graph& g, const RingDescriptor& ring, std::size_t anchor, std::map<Path, Scalar> pieces);

  static LCSection zero(const Graph& g, const RingDescriptor& ring, std::size_t anchor) {
    return LCSection(g, ring, anchor, {});
  }
  static LCSection constant_on(const Clopen& u, const Scalar& c);

  const Graph& graph() const noexcept { return *graph_; }
  const RingDescriptor& ring() const noexcept { return ring_; }
  std::size_t anchor() const noexcept { return anchor_; }
  const std::map<Path, Scalar>& pieces() const noexcept { return pieces_; }
  bool is_zero() const noexcept { return pieces_.empty(); }
  std::size_t depth() const;
  Clopen support() const;
  /// Value on a cylinder contained in a single level set.
  Scalar value_at(const Path& p) const;
  /// Values on every live path of the given length (>= depth()).
  std::map<Path, Scalar> cells(std::size_t length) const;
  LCSection restricted(const Clopen& u) const;

  LCSection operator+(const LCSection& other) const;
  LCSection operator-(const LCSection& other) const;
  friend bool operator==(const LCSection& a, const LCSection& b) {
    return a.anchor_ == b.anchor_ && a.ring_ == b.ring_ && a.pieces_ == b.pieces_;
  }
  std::string to_string() const;

private:
  const Graph* graph_;
  RingDescriptor ring_;
  std::size_t anchor_;
  std::map<Path, Scalar> pieces_;
};

/// A section with support in V agreeing with s on U. Requires U inside V.
LCSection extend_with_support(const LCSection& s, const Clopen& u, const Clopen& v);

/// s_1..s_n with sum s and supp(s_i) inside cover[i]; each cell of the support goes to
/// the first cover member containing it. Requires supp(s) inside the union of the cover.
std::vector<LCSection> partition_of_support(const LCSection& s, const std::vector<Clopen>& cover);

} // namespace convalg
