#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "convalg/convcat.hpp"

namespace convalg {

/// max over source points of the summed |values| of the cells above it (l1 -> l1
/// operator norm). Gaussian values use |a| + |b|. Throws PreconditionError unless the
/// ring is Q or Q(i).
mpq_class i_norm_left(const std::vector<NormCell>& cells, const RingDescriptor& ring);
/// max(||f||_{I,l}, ||f*||_{I,l}).
mpq_class i_norm(const InstanceFamily& fam, const AlgebroidElement& f);

/// Greedy split of the cells into pieces with pairwise disjoint sources and disjoint
/// targets; each piece is a partial isometry times a multiplication operator.
std::vector<std::vector<NormCell>> bisection_pieces(const std::vector<NormCell>& cells);
/// Sum over the pieces of the largest |value| (Gaussian values use |a| + |b|).
mpq_class max_norm_bound(const InstanceFamily& fam, const AlgebroidElement& f);

struct SpectralNorm {
  double value = 0;
  /// ||A^*A v - s^2 v|| for the power-iteration vector v.
  double residual = 0;
  /// Largest singular value from a dense Hermitian eigensolver.
  double dense_value = 0;
};

/// Largest singular value by power iteration on A^*A from the all-ones vector, with a
/// dense eigensolver cross-check; `value` is the larger of the two estimates.
SpectralNorm spectral_norm(const Eigen::MatrixXcd& a);

struct ReducedNorm {
  double value = 0;
  double residual = 0;
  std::size_t depth = 0;
};

ReducedNorm reduced_norm(const InstanceFamily& fam, const AlgebroidElement& f, std::size_t depth);

struct NormReport {
  mpq_class i_norm;
  ReducedNorm reduced;
  mpq_class max_bound;
  /// Three labeled values and the truncation depth, one per line.
  std::string to_string() const;
};

NormReport norm_report(const InstanceFamily& fam, const AlgebroidElement& f, std::size_t depth);

/// %.12g rendering used in reports.
std::string format_double(double x);

} // namespace convalg
