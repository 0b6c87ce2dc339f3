#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace convalg {

enum class RingKind { Integers, Rationals, LocalizedIntegers, GaussianRationals };
enum class Involution { Identity, Conjugation };

/// An exact involutive coefficient ring. Every supported ring is a subring of Q(i),
/// so elements are stored uniformly as Gaussian rationals and membership is a predicate.
class RingDescriptor {
public:
  static RingDescriptor integers();
  static RingDescriptor rationals();
  /// Z[1/p]. Throws PreconditionError unless p is prime.
  static RingDescriptor localized(unsigned long p);
  static RingDescriptor gaussian(Involution involution = Involution::Conjugation);
  /// Accepts `Z`, `Q`, `Z[1/p]` and `Q(i)`.
  static RingDescriptor parse(std::string_view text);

  RingKind kind() const noexcept { return kind_; }
  /// The inverted prime of Z[1/p]; 0 for the other rings.
  unsigned long prime() const noexcept { return prime_; }
  Involution involution() const noexcept { return involution_; }
  bool is_field() const noexcept;
  /// Q for the real rings, Q(i) (same involution) for the Gaussian ring.
  RingDescriptor fraction_field() const;
  bool contains(const mpq_class& re, const mpq_class& im) const;
  std::string name() const;

  friend bool operator==(const RingDescriptor&, const RingDescriptor&) = default;

private:
  RingDescriptor(RingKind kind, unsigned long prime, Involution involution);

  RingKind kind_;
  unsigned long prime_;
  Involution involution_;
};

bool is_prime(unsigned long n);

/// An exact element of a RingDescriptor. Immutable value type; arithmetic between
/// scalars of different rings throws PreconditionError.
class Scalar {
public:
  Scalar(const RingDescriptor& ring, const mpq_class& re, const mpq_class& im = 0);

  static Scalar zero(const RingDescriptor& ring) { return Scalar(ring, 0); }
  static Scalar one(const RingDescriptor& ring) { return Scalar(ring, 1); }
  static Scalar from_int(const RingDescriptor& ring, long value) { return Scalar(ring, value); }
  /// Parses the scalar grammar (`a`, `a/b`, `a/p^k`, `a+bi`, `-i`, `(..)`); throws ParseError.
  static Scalar parse(const RingDescriptor& ring, std::string_view text);

  const RingDescriptor& ring() const noexcept { return ring_; }
  const mpq_class& re() const noexcept { return re_; }
  const mpq_class& im() const noexcept { return im_; }

  bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const noexcept { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const noexcept { return sgn(im_) == 0; }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.ring_ == b.ring_ && a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// The ring involution: identity, or complex conjugation.
  Scalar star() const;
  /// Multiplicative inverse when it exists in the ring.
  std::optional<Scalar> inverse() const;
  /// The same number viewed in another ring, if it belongs to it.
  std::optional<Scalar> in_ring(const RingDescriptor& target) const;

  /// |re| + |im|: exact, equals |x| on real rings and over-estimates it on Q(i).
  mpq_class abs_envelope() const;
  std::complex<double> to_complex() const;
  std::string to_string() const;

private:
  RingDescriptor ring_;
  mpq_class re_;
  mpq_class im_;
};

/// 1/n when n is invertible in the ring, nothing otherwise.
std::optional<Scalar> inv_nat(const RingDescriptor& ring, unsigned long n);

/// Free-function spelling of the involution.
inline Scalar star(const Scalar& x) { return x.star(); }

} // namespace convalg
