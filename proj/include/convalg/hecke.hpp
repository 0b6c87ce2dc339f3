#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "convalg/scalar.hpp"

namespace convalg {

/// A morphism X_k -> X_k' of the double coset algebroid of the tower Z/p^k:
/// a Z_p-invariant kernel K(a, b) = f(a - b) on Z/p^k x Z/p^k', stored as
/// f on Z/p^min(k, k').
class TowerElement {
public:
  /// Zero element. Throws PreconditionError unless p is prime and invertible in the ring.
  TowerElement(const RingDescriptor& ring, unsigned long p, unsigned k_src, unsigned k_tgt);
  TowerElement(const RingDescriptor& ring, unsigned long p, unsigned k_src, unsigned k_tgt, std::vector<Scalar> values);
  static TowerElement delta(const RingDescriptor& ring, unsigned long p, unsigned k_src, unsigned k_tgt, std::size_t c);
  /// `p=2 k=1->0 [c0, c1, ...]`.
  static TowerElement parse(const RingDescriptor& ring, std::string_view text);

  const RingDescriptor& ring() const noexcept { return ring_; }
  unsigned long p() const noexcept { return p_; }
  unsigned k_src() const noexcept { return k_src_; }
  unsigned k_tgt() const noexcept { return k_tgt_; }
  const std::vector<Scalar>& values() const noexcept { return values_; }
  const Scalar& operator[](std::size_t c) const { return values_.at(c); }
  bool is_zero() const;

  TowerElement operator+(const TowerElement& other) const;
  TowerElement scaled(const Scalar& c) const;
  friend bool operator==(const TowerElement& a, const TowerElement& b) {
    return a.p_ == b.p_ && a.k_src_ == b.k_src_ && a.k_tgt_ == b.k_tgt_ && a.values_ == b.values_;
  }
  std::string to_string() const;

private:
  RingDescriptor ring_;
  unsigned long p_;
  unsigned k_src_, k_tgt_;
  std::vector<Scalar> values_;
};

unsigned long ipow(unsigned long p, unsigned k);

/// Kernel product: (f g)(a, e) = sum over b in Z/p^k' of f(a - b) g(b - e).
/// Equivalently, for c in [0, p^min(k, k'')),
/// (f g)(c) = sum over y in Z/p^k' of f((c - y) mod p^min(k, k')) g(y mod p^min(k', k'')).
TowerElement hecke_compose(const TowerElement& f, const TowerElement& g);
/// f*(c) = star(f(-c)), with the levels exchanged.
TowerElement hecke_star(const TowerElement& f);
/// K(a, b) with rows indexed by Z/p^k_src and columns by Z/p^k_tgt.
Eigen::MatrixXcd hecke_kernel_matrix(const TowerElement& f);

} // namespace convalg
