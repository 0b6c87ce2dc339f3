#include "convalg/scalar.hpp"

#include <cctype>

#include "convalg/errors.hpp"

namespace convalg {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + message),
      message_(message), line_(line), column_(column) {}

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

RingDescriptor::RingDescriptor(RingKind kind, unsigned long prime, Involution involution)
    : kind_(kind), prime_(prime), involution_(involution) {}

RingDescriptor RingDescriptor::integers() { return {RingKind::Integers, 0, Involution::Identity}; }
RingDescriptor RingDescriptor::rationals() { return {RingKind::Rationals, 0, Involution::Identity}; }

RingDescriptor RingDescriptor::localized(unsigned long p) {
  if (!is_prime(p)) throw PreconditionError("Z[1/p] requires a prime p, got " + std::to_string(p));
  return {RingKind::LocalizedIntegers, p, Involution::Identity};
}

RingDescriptor RingDescriptor::gaussian(Involution involution) {
  return {RingKind::GaussianRationals, 0, involution};
}

RingDescriptor RingDescriptor::parse(std::string_view text) {
  if (text == "Z") return integers();
  if (text == "Q") return rationals();
  if (text == "Q(i)") return gaussian();
  if (text.size() > 5 && text.substr(0, 4) == "Z[1/" && text.back() == ']') {
    auto digits = text.substr(4, text.size() - 5);
    unsigned long p = 0;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad ring '" + std::string(text) + "'");
      p = p * 10 + static_cast<unsigned long>(c - '0');
      if (p > 1000000) throw ParseError("prime too large in '" + std::string(text) + "'");
    }
    if (!is_prime(p)) throw ParseError("Z[1/p] needs a prime, got '" + std::string(digits) + "'");
    return localized(p);
  }
  throw ParseError("unknown ring '" + std::string(text) + "' (expected Z, Q, Z[1/p] or Q(i))");
}

bool RingDescriptor::is_field() const noexcept {
  return kind_ == RingKind::Rationals || kind_ == RingKind::GaussianRationals;
}

RingDescriptor RingDescriptor::fraction_field() const {
  if (kind_ == RingKind::GaussianRationals) return *this;
  return rationals();
}

namespace {

// Denominator of the form p^k.
bool is_prime_power_of(mpz_class d, unsigned long p) {
  while (d > 1) {
    if (mpz_divisible_ui_p(d.get_mpz_t(), p) == 0) return false;
    mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
  }
  return true;
}

} // namespace

bool RingDescriptor::contains(const mpq_class& re, const mpq_class& im) const {
  switch (kind_) {
  case RingKind::Integers:
    return sgn(im) == 0 && re.get_den() == 1;
  case RingKind::Rationals:
    return sgn(im) == 0;
  case RingKind::LocalizedIntegers:
    return sgn(im) == 0 && is_prime_power_of(re.get_den(), prime_);
  case RingKind::GaussianRationals:
    return true;
  }
  return false;
}

std::string RingDescriptor::name() const {
  switch (kind_) {
  case RingKind::Integers: return "Z";
  case RingKind::Rationals: return "Q";
  case RingKind::LocalizedIntegers: return "Z[1/" + std::to_string(prime_) + "]";
  case RingKind::GaussianRationals:
    return involution_ == Involution::Conjugation ? "Q(i)" : "Q(i),id";
  }
  return "?";
}

Scalar::Scalar(const RingDescriptor& ring, const mpq_class& re, const mpq_class& im)
    : ring_(ring), re_(re), im_(im) {
  re_.canonicalize();
  im_.canonicalize();
  if (!ring_.contains(re_, im_))
    throw PreconditionError("value " + re_.get_str() + (sgn(im_) ? "+(" + im_.get_str() + ")i" : "") +
                            " is not in ring " + ring_.name());
}

namespace {

void require_same_ring(const RingDescriptor& a, const RingDescriptor& b) {
  if (!(a == b)) throw PreconditionError("ring mismatch: " + a.name() + " vs " + b.name());
}

} // namespace

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.re_ = -re_;
  r.im_ = -im_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& other) {
  require_same_ring(ring_, other.ring_);
  re_ += other.re_;
  if (sgn(other.im_) != 0) im_ += other.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  require_same_ring(ring_, other.ring_);
  re_ -= other.re_;
  if (sgn(other.im_) != 0) im_ -= other.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  require_same_ring(ring_, other.ring_);
  if (sgn(im_) == 0 && sgn(other.im_) == 0) {
    re_ *= other.re_;
    return *this;
  }
  mpq_class re = re_ * other.re_ - im_ * other.im_;
  mpq_class im = re_ * other.im_ + im_ * other.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar Scalar::star() const {
  if (ring_.involution() == Involution::Identity) return *this;
  Scalar r = *this;
  r.im_ = -im_;
  return r;
}

std::optional<Scalar> Scalar::inverse() const {
  if (is_zero()) return std::nullopt;
  mpq_class norm = re_ * re_ + im_ * im_;
  mpq_class re = re_ / norm;
  mpq_class im = -im_ / norm;
  if (!ring_.contains(re, im)) return std::nullopt;
  return Scalar(ring_, re, im);
}

std::optional<Scalar> Scalar::in_ring(const RingDescriptor& target) const {
  if (!target.contains(re_, im_)) return std::nullopt;
  return Scalar(target, re_, im_);
}

mpq_class Scalar::abs_envelope() const { return abs(re_) + abs(im_); }

std::complex<double> Scalar::to_complex() const { return {re_.get_d(), im_.get_d()}; }

namespace {

std::string format_real(const mpq_class& q, const RingDescriptor& ring) {
  if (ring.kind() != RingKind::LocalizedIntegers || q.get_den() == 1) return q.get_str();
  mpz_class den = q.get_den();
  unsigned long k = 0;
  while (den > 1) {
    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), ring.prime());
    ++k;
  }
  std::string out = q.get_num().get_str() + "/" + std::to_string(ring.prime());
  if (k > 1) out += "^" + std::to_string(k);
  return out;
}

// Imaginary coefficient without its sign: "i", "3i", "3/4i".
std::string format_imag_abs(const mpq_class& q) {
  mpq_class a = abs(q);
  if (a == 1) return "i";
  return a.get_str() + "i";
}

} // namespace

std::string Scalar::to_string() const {
  if (sgn(im_) == 0) return format_real(re_, ring_);
  std::string imag = format_imag_abs(im_);
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag;
  return format_real(re_, ring_) + (sgn(im_) < 0 ? "-" : "+") + imag;
}

namespace {

class ScalarParser {
public:
  explicit ScalarParser(std::string_view text) : text_(text) {}

  std::pair<mpq_class, mpq_class> parse() {
    skip_space();
    std::pair<mpq_class, mpq_class> value;
    if (peek() == '(') {
      ++pos_;
      value = parse_sum();
      skip_space();
      expect(')');
    } else {
      value = parse_sum();
    }
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return value;
  }

private:
  std::pair<mpq_class, mpq_class> parse_sum() {
    skip_space();
    int sign = parse_sign();
    skip_space();
    if (peek() == 'i') {
      ++pos_;
      return {0, mpq_class(sign)};
    }
    mpq_class first = parse_ratnum();
    skip_space();
    if (peek() == 'i') {
      ++pos_;
      return {0, sign * first};
    }
    mpq_class re = sign * first;
    if (peek() != '+' && peek() != '-') return {re, 0};
    int isign = parse_sign();
    skip_space();
    mpq_class im = 1;
    if (peek() != 'i') im = parse_ratnum();
    skip_space();
    expect('i');
    return {re, isign * im};
  }

  int parse_sign() {
    if (peek() == '-') {
      ++pos_;
      return -1;
    }
    if (peek() == '+') ++pos_;
    return 1;
  }

  mpz_class parse_digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  mpq_class parse_ratnum() {
    mpz_class num = parse_digits();
    if (peek() != '/') return mpq_class(num);
    ++pos_;
    mpz_class den = parse_digits();
    if (peek() == '^') {
      ++pos_;
      mpz_class k = parse_digits();
      if (k > 4096) fail("exponent too large");
      mpz_pow_ui(den.get_mpz_t(), den.get_mpz_t(), k.get_ui());
    }
    if (den == 0) fail("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " in scalar '" + std::string(text_) + "'", 1, pos_ + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace

Scalar Scalar::parse(const RingDescriptor& ring, std::string_view text) {
  auto [re, im] = ScalarParser(text).parse();
  if (!ring.contains(re, im))
    throw ParseError("scalar '" + std::string(text) + "' is not an element of " + ring.name());
  return Scalar(ring, re, im);
}

std::optional<Scalar> inv_nat(const RingDescriptor& ring, unsigned long n) {
  if (n == 0) throw PreconditionError("inv_nat requires n >= 1");
  mpq_class q(1, n);
  q.canonicalize();
  if (!ring.contains(q, 0)) return std::nullopt;
  return Scalar(ring, q);
}

} // namespace convalg
