#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "convalg/finitegroupoid.hpp"
#include "convalg/graph.hpp"
#include "convalg/linalg.hpp"

namespace convalg {

/// Finite-dimensional right module given by the matrices of a generating set, acting on
/// column vectors. `local_units` indexes the generators that are the per-object idempotents.
struct ModuleRep {
  RingDescriptor ring = RingDescriptor::rationals();
  std::size_t dim = 0;
  std::vector<Matrix> generators;
  std::vector<std::size_t> local_units;
};

/// A finite-rank module per object and one matrix per structure label, mapping the
/// label's domain object to its codomain object.
struct SheafRep {
  RingDescriptor ring = RingDescriptor::rationals();
  std::vector<std::size_t> rank;
  std::vector<Matrix> maps;
};

using SheafMorphism = std::vector<Matrix>;

/// What a family supplies to the shared equivalence harness. S(N) must be the direct
/// sum of the N(x) in object order with local unit x projecting onto block x.
class EquivFamily {
public:
  virtual ~EquivFamily() = default;
  virtual std::string name() const = 0;
  virtual std::size_t num_objects() const = 0;
  virtual std::size_t num_labels() const = 0;
  /// (domain object, codomain object) of a structure label.
  virtual std::pair<std::size_t, std::size_t> label_ends(std::size_t label) const = 0;
  /// Empty when the sheaf condition and functoriality hold.
  virtual std::string sheaf_problem(const SheafRep& n) const = 0;
  /// Empty when the module relations hold.
  virtual std::string module_problem(const ModuleRep& m) const = 0;
  virtual ModuleRep build_S(const SheafRep& n) const = 0;
  /// The module matrix carrying M e_dom to M e_cod that induces the label's map.
  virtual Matrix label_action(const ModuleRep& m, std::size_t label) const = 0;
  /// A random valid sheaf with ranks <= max_rank.
  virtual SheafRep random_sheaf(std::mt19937_64& rng, std::size_t max_rank) const = 0;
};

/// G-sheaves on a graph and modules over its Leavitt path algebra. Labels are edges;
/// edge a maps F(tgt a) to F(src a). Generators: p_x, then v_a, then v_a^*.
class GraphEquivFamily : public EquivFamily {
public:
  explicit GraphEquivFamily(const Graph& g) : g_(g) {}
  std::string name() const override { return "graph"; }
  std::size_t num_objects() const override { return g_.num_vertices(); }
  std::size_t num_labels() const override { return g_.num_edges(); }
  std::pair<std::size_t, std::size_t> label_ends(std::size_t a) const override;
  std::string sheaf_problem(const SheafRep& n) const override;
  std::string module_problem(const ModuleRep& m) const override;
  ModuleRep build_S(const SheafRep& n) const override;
  Matrix label_action(const ModuleRep& m, std::size_t a) const override;
  /// Ranks are drawn among the solutions of r(x) = sum of r(src a) over a into x.
  SheafRep random_sheaf(std::mt19937_64& rng, std::size_t max_rank) const override;

private:
  const Graph& g_;
};

/// Equivariant sheaves on a finite groupoid and modules over its convolution algebra.
/// Labels and generators are the arrows.
class GroupoidEquivFamily : public EquivFamily {
public:
  explicit GroupoidEquivFamily(const FiniteGroupoid& g) : g_(g) {}
  std::string name() const override { return "groupoid"; }
  std::size_t num_objects() const override { return g_.num_objects(); }
  std::size_t num_labels() const override { return g_.num_arrows(); }
  std::pair<std::size_t, std::size_t> label_ends(std::size_t a) const override;
  std::string sheaf_problem(const SheafRep& n) const override;
  std::string module_problem(const ModuleRep& m) const override;
  ModuleRep build_S(const SheafRep& n) const override;
  Matrix label_action(const ModuleRep& m, std::size_t a) const override;
  /// Per orbit, a sum of one-dimensional characters and (when small enough) regular
  /// representations of the isotropy group in a random basis, moved along the orbit.
  SheafRep random_sheaf(std::mt19937_64& rng, std::size_t max_rank) const override;

private:
  const FiniteGroupoid& g_;
};

/// A vector not fixed by the sum of the local units, if any.
std::optional<Matrix> degeneracy_witness(const ModuleRep& m);

struct TResult {
  SheafRep sheaf;
  /// Columns: the chosen basis of M e_x inside M.
  std::vector<Matrix> bases;
};

/// T(M): N(x) = M e_x. Throws InvariantError naming the witness on a degenerate module.
TResult build_T(const EquivFamily& fam, const ModuleRep& m);

/// M -> S(T(M)): coordinates of e_x m in the basis of M e_x, stacked over x.
Matrix unit_component(const EquivFamily& fam, const ModuleRep& m);
/// T(S(N))(x) -> N(x), per object.
std::vector<Matrix> counit_components(const EquivFamily& fam, const SheafRep& n);

Matrix S_on_morphism(const SheafRep& n, const SheafRep& n2, const SheafMorphism& psi);
SheafMorphism T_on_morphism(const EquivFamily& fam, const ModuleRep& m, const ModuleRep& m2, const Matrix& phi);

bool is_module_morphism(const ModuleRep& m, const ModuleRep& m2, const Matrix& phi);
bool is_sheaf_morphism(const EquivFamily& fam, const SheafRep& n, const SheafRep& n2, const SheafMorphism& psi);

/// The same module in the basis given by the columns of an invertible P: P^-1 R P.
ModuleRep conjugate(const ModuleRep& m, const Matrix& p);
/// M plus one extra dimension on which every generator acts by zero.
ModuleRep with_dead_vector(const ModuleRep& m);
/// A random element of the space of sheaf morphisms N -> N2 (computed as a kernel).
SheafMorphism random_sheaf_morphism(const EquivFamily& fam, const SheafRep& n, const SheafRep& n2, std::mt19937_64& rng);
Matrix random_invertible(std::mt19937_64& rng, const RingDescriptor& ring, std::size_t n);

struct AdjunctionWitness {
  std::vector<Matrix> units;
  std::vector<std::vector<Matrix>> counits;
};

struct EquivalenceResult {
  bool ok = true;
  std::size_t instances = 0;
  std::size_t naturality_checks = 0;
  std::size_t limit_checks = 0;
  bool degenerate_rejected = false;
  /// Index of the first failing instance and what failed.
  std::optional<std::size_t> failing_instance;
  std::string failure;
  AdjunctionWitness witness;
};

/// Builds `count` random sheaves N and modules M = P^-1 S(N') P, checks that the unit
/// and counit components are invertible morphisms, natural on random morphisms, that
/// S preserves kernels, cokernels and direct sums, and that a module with a dead vector
/// is rejected with that vector as witness.
EquivalenceResult verify_equivalence(const EquivFamily& fam, std::size_t count, std::uint64_t seed,
                                     std::size_t max_rank = 4);

} // namespace convalg
