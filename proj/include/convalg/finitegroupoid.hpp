#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "convalg/linalg.hpp"

namespace convalg {

/// A finite discrete groupoid. Arrow g goes s(g) -> t(g); the product gh is
/// defined when s(g) == t(h) and goes s(h) -> t(g).
class FiniteGroupoid {
public:
  struct Arrow {
    std::string name;
    std::size_t src;
    std::size_t tgt;
  };

  /// compose[g][h] is gh, present exactly when s(g) == t(h). Identities and inverses
  /// are derived; throws InvariantError when an axiom fails.
  FiniteGroupoid(std::vector<std::string> objects, std::vector<Arrow> arrows,
                 std::vector<std::vector<std::optional<std::size_t>>> compose);

  /// `object <name>`, `arrow <name> <src> <tgt>`, `compose <g> <h> <gh>`, `#` comments.
  /// Every composable pair needs exactly one row. Throws ParseError with line numbers.
  static FiniteGroupoid parse(std::string_view text);
  static FiniteGroupoid load(const std::string& path);
  std::string to_text() const;

  /// One object; arrows named by the given names, `table[i][j]` = index of g_i g_j.
  static FiniteGroupoid group(const std::vector<std::string>& names, const std::vector<std::vector<std::size_t>>& table);
  static FiniteGroupoid cyclic(std::size_t n);
  static FiniteGroupoid klein_four();
  static FiniteGroupoid symmetric_three();
  /// Objects 1..n, one arrow e_ij: j -> i for every pair.
  static FiniteGroupoid pair(std::size_t n);
  static FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);
  static FiniteGroupoid product(const FiniteGroupoid& a, const FiniteGroupoid& b);
  static FiniteGroupoid empty();

  std::size_t num_objects() const noexcept { return objects_.size(); }
  std::size_t num_arrows() const noexcept { return arrows_.size(); }
  const std::string& object_name(std::size_t x) const { return objects_.at(x); }
  const Arrow& arrow(std::size_t g) const { return arrows_.at(g); }
  std::size_t src(std::size_t g) const { return arrows_.at(g).src; }
  std::size_t tgt(std::size_t g) const { return arrows_.at(g).tgt; }
  std::optional<std::size_t> compose(std::size_t g, std::size_t h) const { return compose_.at(g).at(h); }
  std::size_t identity(std::size_t x) const { return identity_.at(x); }
  std::size_t inverse(std::size_t g) const { return inverse_.at(g); }
  std::optional<std::size_t> find_object(std::string_view name) const;
  std::optional<std::size_t> find_arrow(std::string_view name) const;

private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<std::optional<std::size_t>>> compose_;
  std::vector<std::size_t> identity_;
  std::vector<std::size_t> inverse_;
};

/// A function on the arrows, stored densely.
class GpdElement {
public:
  GpdElement(const FiniteGroupoid& g, const RingDescriptor& ring);
  static GpdElement delta(const FiniteGroupoid& g, const RingDescriptor& ring, std::size_t arrow,
                          std::optional<Scalar> c = std::nullopt);
  /// Summands `c * [g]` joined by + or -, or `0`.
  static GpdElement parse(const FiniteGroupoid& g, const RingDescriptor& ring, std::string_view text);

  const FiniteGroupoid& groupoid() const noexcept { return *gpd_; }
  const RingDescriptor& ring() const noexcept { return ring_; }
  const Scalar& operator[](std::size_t arrow) const { return values_.at(arrow); }
  Scalar& operator[](std::size_t arrow) { return values_.at(arrow); }
  const std::vector<Scalar>& values() const noexcept { return values_; }
  bool is_zero() const;

  GpdElement operator+(const GpdElement& other) const;
  GpdElement operator-(const GpdElement& other) const;
  GpdElement scaled(const Scalar& c) const;
  friend bool operator==(const GpdElement& a, const GpdElement& b) { return a.values_ == b.values_; }
  /// Nonzero values in arrow order; `0` when empty.
  std::string to_string() const;

private:
  const FiniteGroupoid* gpd_;
  RingDescriptor ring_;
  std::vector<Scalar> values_;
};

/// (f * g)(c) = sum over c = ab of f(a) g(b).
GpdElement gpd_convolve(const GpdElement& f, const GpdElement& g);
/// f*(c) = star(f(c^-1)).
GpdElement gpd_star(const GpdElement& f);

struct Orbit {
  std::vector<std::size_t> objects; // ascending; objects[0] is the base
  std::vector<std::size_t> isotropy; // arrows base -> base, identity first
  /// isotropy_table[i][j] = k when isotropy[i] isotropy[j] == isotropy[k].
  std::vector<std::vector<std::size_t>> isotropy_table;
  /// For each object y of the orbit, a chosen arrow base -> y (the identity for the base).
  std::vector<std::size_t> transversal;
};

std::vector<Orbit> decompose(const FiniteGroupoid& g);

/// Where an arrow g: x -> y lands in the sum of M_n(K[H]) over orbits:
/// the matrix unit E_{y,x} tensored with t_y^-1 g t_x.
struct MatrixUnitImage {
  std::size_t orbit;
  std::size_t row;
  std::size_t col;
  std::size_t isotropy_element; // index into Orbit::isotropy
};

MatrixUnitImage decomposition_image(const FiniteGroupoid& g, const std::vector<Orbit>& orbits, std::size_t arrow);

/// A finite-rank module per object and an invertible matrix rho(g): F(s g) -> F(t g)
/// per arrow (rank(t g) x rank(s g)).
struct EquivariantSheaf {
  RingDescriptor ring = RingDescriptor::rationals();
  std::vector<std::size_t> rank;
  std::vector<Matrix> action;
};

/// Identities act trivially and rho(gh) = rho(g) rho(h). Empty string when valid.
std::string equivariant_sheaf_problem(const FiniteGroupoid& g, const EquivariantSheaf& f);

/// Finite-dimensional right module, acting on column vectors:
/// act(delta_g * delta_h) = act(h) act(g).
class GpdModule {
public:
  /// Validates the product relations; throws InvariantError.
  GpdModule(const FiniteGroupoid& g, const RingDescriptor& ring, std::size_t dim, std::vector<Matrix> action);

  const FiniteGroupoid& groupoid() const noexcept { return *gpd_; }
  const RingDescriptor& ring() const noexcept { return ring_; }
  std::size_t dim() const noexcept { return dim_; }
  const Matrix& act_arrow(std::size_t g) const { return action_.at(g); }
  const std::vector<Matrix>& actions() const noexcept { return action_; }
  Matrix act(const GpdElement& f) const;
  /// A vector not fixed by the sum of the identity deltas, if any.
  std::optional<Matrix> degeneracy_witness() const;

private:
  const FiniteGroupoid* gpd_;
  RingDescriptor ring_;
  std::size_t dim_;
  std::vector<Matrix> action_;
};

/// M = sum of F(x); delta_g maps the block F(t g) to F(s g) by rho(g^-1).
GpdModule functor_S(const FiniteGroupoid& g, const EquivariantSheaf& f);

struct SheafFromGpdModule {
  EquivariantSheaf sheaf;
  /// Columns: the chosen basis of M delta_{id_x} inside M.
  std::vector<Matrix> bases;
};

/// F(x) = M delta_{id_x}; rho(g) read off the action of g^-1. Throws InvariantError
/// (with the witness vector in the message) on a degenerate module.
SheafFromGpdModule functor_T(const GpdModule& m);

/// Left regular representation on l^2(G_1): column h holds f * delta_h.
Eigen::MatrixXcd gpd_regular_matrix(const GpdElement& f);

} // namespace convalg
