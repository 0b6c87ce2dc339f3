#include "convalg/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "convalg/errors.hpp"

namespace convalg {

namespace {

bool is_prefix(const std::vector<long>& a, const std::vector<long>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool overlap(const std::vector<long>& a, const std::vector<long>& b) { return is_prefix(a, b) || is_prefix(b, a); }

void require_norm_ring(const RingDescriptor& ring) {
  if (ring.kind() != RingKind::Rationals && ring.kind() != RingKind::GaussianRationals)
    throw PreconditionError("norms need Q or Q(i) coefficients, not " + ring.name());
}

} // namespace

mpq_class i_norm_left(const std::vector<NormCell>& cells, const RingDescriptor& ring) {
  require_norm_ring(ring);
  mpq_class best = 0;
  for (const auto& top : cells) {
    mpq_class sum = 0;
    for (const auto& c : cells)
      if (is_prefix(c.source_key, top.source_key)) sum += c.value.abs_envelope();
    best = std::max(best, sum);
  }
  return best;
}

mpq_class i_norm(const InstanceFamily& fam, const AlgebroidElement& f) {
  return std::max(i_norm_left(fam.norm_cells(f), f.ring), i_norm_left(fam.norm_cells(fam.star(f)), f.ring));
}

std::vector<std::vector<NormCell>> bisection_pieces(const std::vector<NormCell>& cells) {
  std::vector<NormCell> sorted = cells;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const NormCell& a, const NormCell& b) { return a.value.abs_envelope() > b.value.abs_envelope(); });
  std::vector<std::vector<NormCell>> pieces;
  for (auto& c : sorted) {
    auto fits = [&](const std::vector<NormCell>& piece) {
      return std::none_of(piece.begin(), piece.end(), [&](const NormCell& d) {
        return overlap(c.source_key, d.source_key) || overlap(c.target_key, d.target_key);
      });
    };
    auto it = std::find_if(pieces.begin(), pieces.end(), fits);
    if (it == pieces.end())
      pieces.push_back({std::move(c)});
    else
      it->push_back(std::move(c));
  }
  return pieces;
}

mpq_class max_norm_bound(const InstanceFamily& fam, const AlgebroidElement& f) {
  require_norm_ring(f.ring);
  mpq_class total = 0;
  for (const auto& piece : bisection_pieces(fam.norm_cells(f))) {
    mpq_class k = 0;
    for (const auto& c : piece) k = std::max(k, mpq_class(c.value.abs_envelope()));
    total += k;
  }
  return total;
}

SpectralNorm spectral_norm(const Eigen::MatrixXcd& a) {
  SpectralNorm out;
  if (a.size() == 0) return out;
  const Eigen::MatrixXcd b = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(b, Eigen::EigenvaluesOnly);
  out.dense_value = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(b.cols()) / std::sqrt(static_cast<double>(b.cols()));
  double lambda = 0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXcd w = b * v;
    double nw = w.norm();
    if (nw == 0) {
      lambda = 0;
      out.residual = 0;
      break;
    }
    lambda = v.dot(w).real();
    out.residual = (w - lambda * v).norm();
    if (out.residual <= 1e-12 * std::max(1.0, lambda)) break;
    v = w / nw;
  }
  out.value = std::max(std::sqrt(std::max(0.0, lambda)), out.dense_value);
  return out;
}

ReducedNorm reduced_norm(const InstanceFamily& fam, const AlgebroidElement& f, std::size_t depth) {
  if (!f.ring.is_field()) throw PreconditionError("norms need Q or Q(i) coefficients, not " + f.ring.name());
  ReducedNorm out;
  out.depth = depth;
  for (const auto& m : fam.regular_matrices(f, depth)) {
    auto s = spectral_norm(m);
    if (s.value > out.value) {
      out.value = s.value;
      out.residual = s.residual;
    }
  }
  return out;
}

NormReport norm_report(const InstanceFamily& fam, const AlgebroidElement& f, std::size_t depth) {
  return {i_norm(fam, f), reduced_norm(fam, f, depth), max_norm_bound(fam, f)};
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string NormReport::to_string() const {
  return "i_norm = " + i_norm.get_str() + "\nreduced_norm = " + format_double(reduced.value) +
         "\nmax_bound = " + max_bound.get_str() + "\ndepth = " + std::to_string(reduced.depth) + "\n";
}

} // namespace convalg
