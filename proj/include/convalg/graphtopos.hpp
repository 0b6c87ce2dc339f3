#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "convalg/leavitt.hpp"
#include "convalg/stonelocale.hpp"

namespace convalg {

/// Z(alpha, beta): pairs (tau alpha, tau beta) over infinite tails tau ending at the
/// common source of alpha and beta. alpha is anchored at the row vertex x, beta at y.
using PairCylinder = Monomial;

/// Compactly supported section on P_x x P_y, as a combination of pair cylinders in the
/// designated-edge normal form. A morphism x -> y composing in algebra order.
class ConvElement {
public:
  ConvElement(const Graph& g, const RingDescriptor& ring, std::size_t x, std::size_t y)
      : graph_(&g), ring_(ring), x_(x), y_(y) {}
  ConvElement(const Graph& g, const RingDescriptor& ring, std::size_t x, std::size_t y, TermMap terms);

  /// The diagonal indicator of a clopen: sum of Z(c, c) over its cylinders.
  static ConvElement indicator(const Clopen& u, const RingDescriptor& ring);
  /// Summands `c * Z(x: a.b | y: c)` joined by + or -; `0 @ x,y` for zero.
  static ConvElement parse(const Graph& g, const RingDescriptor& ring, std::string_view text);

  const Graph& graph() const noexcept { return *graph_; }
  const RingDescriptor& ring() const noexcept { return ring_; }
  std::size_t source() const noexcept { return x_; }
  std::size_t target() const noexcept { return y_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  ConvElement operator+(const ConvElement& other) const;
  ConvElement scaled(const Scalar& c) const;
  friend bool operator==(const ConvElement& a, const ConvElement& b) {
    return a.x_ == b.x_ && a.y_ == b.y_ && a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }
  std::string to_string() const;

private:
  const Graph* graph_;
  RingDescriptor ring_;
  std::size_t x_, y_;
  TermMap terms_;
};

std::string pair_cylinder_to_string(const Graph& g, const PairCylinder& z);

/// Convolution by tail refinement: both factors are refined until their middle paths
/// have a common length, then matching middles are composed.
ConvElement conv_mul(const ConvElement& f, const ConvElement& g);
ConvElement conv_star(const ConvElement& f);

/// Sum over all vertex pairs: the whole algebroid at once.
class ConvMatrix {
public:
  ConvMatrix(const Graph& g, const RingDescriptor& ring) : graph_(&g), ring_(ring) {}
  const Graph& graph() const noexcept { return *graph_; }
  const RingDescriptor& ring() const noexcept { return ring_; }
  const std::map<std::pair<std::size_t, std::size_t>, ConvElement>& entries() const noexcept { return entries_; }
  void add(const ConvElement& f);
  ConvMatrix operator+(const ConvMatrix& other) const;
  friend bool operator==(const ConvMatrix& a, const ConvMatrix& b) { return a.entries_ == b.entries_; }
  std::string to_string() const;

private:
  const Graph* graph_;
  RingDescriptor ring_;
  std::map<std::pair<std::size_t, std::size_t>, ConvElement> entries_;
};

ConvMatrix conv_mul(const ConvMatrix& f, const ConvMatrix& g);
ConvMatrix conv_star(const ConvMatrix& f);

/// Z(alpha, beta) -> v_alpha v_beta^*.
LpaElement to_leavitt(const ConvElement& f);
LpaElement to_leavitt(const ConvMatrix& f);
ConvMatrix from_leavitt(const LpaElement& u);

/// Relation engine backed by conv_mul, with generators built directly as pair cylinders.
struct ConvEngine {
  const Graph& g;
  RingDescriptor ring;
  ConvMatrix single(std::size_t x, std::size_t y, const Path& alpha, const Path& beta) const;
  ConvMatrix p(std::size_t x) const;
  ConvMatrix v(std::size_t a) const;
  ConvMatrix vstar(std::size_t a) const;
  ConvMatrix zero() const { return ConvMatrix(g, ring); }
  ConvMatrix mul(const ConvMatrix& a, const ConvMatrix& b) const { return conv_mul(a, b); }
  ConvMatrix add(const ConvMatrix& a, const ConvMatrix& b) const { return a + b; }
  bool equal(const ConvMatrix& a, const ConvMatrix& b) const { return a == b; }
};

/// Depth-truncated left regular representation. For each base point u (designated
/// tails and simple cycles up to the depth) the fibre l^2(G_u) is compressed to the
/// groupoid elements reachable with prefixes and shifts of length <= depth; the norm
/// of each compression is a lower bound for the reduced norm, increasing in depth.
std::vector<Eigen::MatrixXcd> regular_compressions(const ConvMatrix& f, std::size_t depth);

} // namespace convalg
