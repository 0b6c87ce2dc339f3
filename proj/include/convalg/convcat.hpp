#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "convalg/finitegroupoid.hpp"
#include "convalg/graphtopos.hpp"
#include "convalg/hecke.hpp"
#include "convalg/linalg.hpp"
#include "convalg/stonelocale.hpp"

namespace convalg {

using Label = std::string;
using LabelMap = std::map<Label, Scalar>;

/// A morphism source -> target of a convolution algebroid: a finite combination of
/// basis labels of the family, zero coefficients omitted.
struct AlgebroidElement {
  std::string source;
  std::string target;
  RingDescriptor ring = RingDescriptor::rationals();
  LabelMap terms;

  bool is_zero() const noexcept { return terms.empty(); }
  friend bool operator==(const AlgebroidElement&, const AlgebroidElement&) = default;
  /// `source -> target: c * label + ...` in label order.
  std::string to_string() const;
};

AlgebroidElement operator+(const AlgebroidElement& a, const AlgebroidElement& b);
AlgebroidElement scaled(const AlgebroidElement& a, const Scalar& c);

/// A finite "separating" piece of the algebroid: a combination of key-addressed
/// bisections. Two keys overlap when one is a prefix of the other.
struct NormCell {
  std::vector<long> source_key;
  std::vector<long> target_key;
  Scalar value;
};

/// The seam between the generic algebroid operations and a concrete family.
class InstanceFamily {
public:
  virtual ~InstanceFamily() = default;
  virtual std::string name() const = 0;
  virtual const RingDescriptor& ring() const = 0;
  virtual std::vector<std::string> objects() const = 0;
  /// Basis labels of morphisms i -> j that need at most `depth` refinement steps.
  virtual std::vector<Label> basis(const std::string& i, const std::string& j, std::size_t depth) const = 0;
  /// Brings an arbitrary label combination to normal form; throws PreconditionError on bad labels.
  virtual AlgebroidElement normalize(const AlgebroidElement& f) const = 0;
  virtual AlgebroidElement compose(const AlgebroidElement& f, const AlgebroidElement& g) const = 0;
  virtual AlgebroidElement star(const AlgebroidElement& f) const = 0;
  /// A diagonal element u on f.target with compose(f, u) == f, built from the support of f.
  virtual AlgebroidElement local_unit(const AlgebroidElement& f) const = 0;
  /// Disjoint pieces of f for the norm computations.
  virtual std::vector<NormCell> norm_cells(const AlgebroidElement& f) const = 0;
  /// Finite matrices whose largest singular value bounds the reduced norm from below
  /// (exactly attained when the representation is finite). Throws when depth is too small.
  virtual std::vector<Eigen::MatrixXcd> regular_matrices(const AlgebroidElement& f, std::size_t depth) const = 0;
  /// Smallest depth at which regular_matrices accepts f.
  virtual std::size_t support_depth(const AlgebroidElement& f) const = 0;
  /// Basis label as a pair (left part, right part), when the family has a product decomposition.
  virtual std::optional<std::pair<std::string, std::string>> split_label(const Label&) const { return std::nullopt; }
  virtual Label join_label(const std::string& left, const std::string& right) const;

  AlgebroidElement zero(const std::string& i, const std::string& j) const { return {i, j, ring(), {}}; }
  AlgebroidElement basis_element(const std::string& i, const std::string& j, const Label& l) const;
  /// Parses `c * label + ...` and normalizes.
  AlgebroidElement parse(const std::string& i, const std::string& j, std::string_view text) const;
};

/// Graph toposes: objects are vertices, labels are pair cylinders `Z(x: a | y: b)`.
class GraphFamily : public InstanceFamily {
public:
  GraphFamily(const Graph& g, const RingDescriptor& ring) : g_(g), ring_(ring) {}
  const Graph& graph() const noexcept { return g_; }
  ConvElement to_conv(const AlgebroidElement& f) const;
  AlgebroidElement from_conv(const ConvElement& f) const;

  std::string name() const override { return "graph"; }
  const RingDescriptor& ring() const override { return ring_; }
  std::vector<std::string> objects() const override;
  std::vector<Label> basis(const std::string& i, const std::string& j, std::size_t depth) const override;
  AlgebroidElement normalize(const AlgebroidElement& f) const override { return from_conv(to_conv(f)); }
  AlgebroidElement compose(const AlgebroidElement& f, const AlgebroidElement& g) const override;
  AlgebroidElement star(const AlgebroidElement& f) const override;
  AlgebroidElement local_unit(const AlgebroidElement& f) const override;
  std::vector<NormCell> norm_cells(const AlgebroidElement& f) const override;
  std::vector<Eigen::MatrixXcd> regular_matrices(const AlgebroidElement& f, std::size_t depth) const override;
  std::size_t support_depth(const AlgebroidElement& f) const override;
  /// Z(x: a | y: b) <-> (`x:a`, `y:b`).
  std::optional<std::pair<std::string, std::string>> split_label(const Label& l) const override;
  Label join_label(const std::string& left, const std::string& right) const override;

private:
  const Graph& g_;
  RingDescriptor ring_;
};

/// A finite groupoid algebra as a one-object algebroid `*`; labels are arrow names.
class GroupoidFamily : public InstanceFamily {
public:
  GroupoidFamily(const FiniteGroupoid& g, const RingDescriptor& ring) : g_(g), ring_(ring) {}
  const FiniteGroupoid& groupoid() const noexcept { return g_; }
  GpdElement to_gpd(const AlgebroidElement& f) const;
  AlgebroidElement from_gpd(const GpdElement& f) const;

  std::string name() const override { return "groupoid"; }
  const RingDescriptor& ring() const override { return ring_; }
  std::vector<std::string> objects() const override { return {"*"}; }
  std::vector<Label> basis(const std::string& i, const std::string& j, std::size_t depth) const override;
  AlgebroidElement normalize(const AlgebroidElement& f) const override { return from_gpd(to_gpd(f)); }
  AlgebroidElement compose(const AlgebroidElement& f, const AlgebroidElement& g) const override;
  AlgebroidElement star(const AlgebroidElement& f) const override;
  AlgebroidElement local_unit(const AlgebroidElement& f) const override;
  std::vector<NormCell> norm_cells(const AlgebroidElement& f) const override;
  std::vector<Eigen::MatrixXcd> regular_matrices(const AlgebroidElement& f, std::size_t depth) const override;
  std::size_t support_depth(const AlgebroidElement&) const override { return 0; }
  /// g <-> (target object, arrow name).
  std::optional<std::pair<std::string, std::string>> split_label(const Label& l) const override;
  Label join_label(const std::string& left, const std::string& right) const override;

private:
  const FiniteGroupoid& g_;
  RingDescriptor ring_;
};

/// The Z/p^k tower: objects are the levels `0`..`max_level`, labels are residues `c<r>`
/// zero-padded to a common width.
class HeckeFamily : public InstanceFamily {
public:
  HeckeFamily(unsigned long p, unsigned max_level, const RingDescriptor& ring);
  unsigned long p() const noexcept { return p_; }
  TowerElement to_tower(const AlgebroidElement& f) const;
  AlgebroidElement from_tower(const TowerElement& f) const;
  Label residue_label(std::size_t r) const;

  std::string name() const override { return "hecke"; }
  const RingDescriptor& ring() const override { return ring_; }
  std::vector<std::string> objects() const override;
  std::vector<Label> basis(const std::string& i, const std::string& j, std::size_t depth) const override;
  AlgebroidElement normalize(const AlgebroidElement& f) const override { return from_tower(to_tower(f)); }
  AlgebroidElement compose(const AlgebroidElement& f, const AlgebroidElement& g) const override;
  AlgebroidElement star(const AlgebroidElement& f) const override;
  AlgebroidElement local_unit(const AlgebroidElement& f) const override;
  std::vector<NormCell> norm_cells(const AlgebroidElement& f) const override;
  std::vector<Eigen::MatrixXcd> regular_matrices(const AlgebroidElement& f, std::size_t depth) const override;
  std::size_t support_depth(const AlgebroidElement&) const override { return 0; }

private:
  unsigned level(const std::string& object) const;
  unsigned long p_;
  unsigned max_level_;
  RingDescriptor ring_;
  std::size_t width_;
};

/// A map between finite label sets given by its fibres; nullopt marks a fibre that is
/// infinite at the requested depth.
struct FiberMap {
  std::vector<Label> codomain;
  std::function<std::optional<std::vector<Label>>(const Label&)> fiber;

  static FiberMap identity(const std::vector<Label>& labels);
  static FiberMap to_point(const std::vector<Label>& labels, const Label& point);
  /// Cylinders of length `fine` under the cylinders of length `coarse` (coarse <= fine), labels `x:a.b`.
  static FiberMap cylinder_refinement(const Graph& g, std::size_t anchor, std::size_t fine, std::size_t coarse);
};

/// w(y) = sum over x in the fibre of y of v(x). Throws PreconditionError on an infinite
/// fibre or when the support of v is not covered by the fibres.
LabelMap pushforward(const FiberMap& f, const LabelMap& v, const RingDescriptor& ring);

using Exchanged = std::map<std::string, LabelMap>;
/// Re-indexes a morphism by the left part of its labels.
Exchanged exchange_forward(const InstanceFamily& fam, const AlgebroidElement& f);
AlgebroidElement exchange_backward(const InstanceFamily& fam, const std::string& source, const std::string& target,
                                   const Exchanged& data);

/// Two maps from the relation summands to the generator summands, as
/// (sum of generator ranks) x (sum of relation ranks) matrices.
struct CoeqPresentation {
  RingDescriptor ring = RingDescriptor::rationals();
  std::vector<std::size_t> generator_ranks;
  std::vector<std::size_t> relation_ranks;
  Matrix first{RingDescriptor::rationals(), 0, 0};
  Matrix second{RingDescriptor::rationals(), 0, 0};
};

/// The cokernel of (first - second): free rank, torsion invariants (Z and Z[1/p] only),
/// projection onto the free part (rank x n) and a section of it (n x rank).
struct Quotient {
  std::size_t rank = 0;
  std::vector<mpz_class> torsion;
  Matrix projection{RingDescriptor::rationals(), 0, 0};
  Matrix section{RingDescriptor::rationals(), 0, 0};
};

Quotient coequalize(const CoeqPresentation& p);

/// The coequalizer presentation of the compactly supported sections over a clopen U
/// of P_x from a clopen cover of U, with sections constant on cylinders of length depth.
struct GammaCPresentation {
  CoeqPresentation presentation;
  Clopen union_set;
  std::vector<Clopen> cover;
  std::size_t depth;
  /// Generator index -> (chart, cell).
  std::vector<std::pair<std::size_t, Path>> generators;
  /// Cells of U at the depth: the direct computation of the sections over U.
  std::vector<Path> union_cells;
};

/// Throws PreconditionError unless every chart lies in U and the charts cover U.
GammaCPresentation gamma_c_presentation(const Clopen& u, const std::vector<Clopen>& cover, std::size_t depth,
                                        const RingDescriptor& ring);
/// Extension by zero from the generators to the cells of U (cells x generators).
Matrix gluing_map(const GammaCPresentation& p);
/// The partition-lemma lift: each cell of U to its first chart (generators x cells).
Matrix partition_lift(const GammaCPresentation& p);
/// The comparison isomorphism quotient(a) -> quotient(b) through the sections over U.
Matrix cover_comparison(const GammaCPresentation& a, const Quotient& qa, const GammaCPresentation& b, const Quotient& qb);

} // namespace convalg
