#include "convalg/hecke.hpp"

#include <algorithm>
#include <regex>

#include "convalg/errors.hpp"

namespace convalg {

unsigned long ipow(unsigned long p, unsigned k) {
  unsigned long r = 1;
  for (unsigned i = 0; i < k; ++i) r *= p;
  return r;
}

TowerElement::TowerElement(const RingDescriptor& ring, unsigned long p, unsigned k_src, unsigned k_tgt)
    : ring_(ring), p_(p), k_src_(k_src), k_tgt_(k_tgt) {
  if (!is_prime(p)) throw PreconditionError("p=" + std::to_string(p) + " is not prime");
  if (!inv_nat(ring, p)) throw PreconditionError("p=" + std::to_string(p) + " is not invertible in " + ring.name());
  if (std::max(k_src, k_tgt) > 12) throw PreconditionError("level too large");
  values_.assign(ipow(p, std::min(k_src, k_tgt)), Scalar::zero(ring));
}

TowerElement::TowerElement(const RingDescriptor& ring, unsigned long p, unsigned k_src, unsigned k_tgt,
                           std::vector<Scalar> values)
    : TowerElement(ring, p, k_src, k_tgt) {
  if (values.size() != values_.size())
    throw PreconditionError("expected " + std::to_string(values_.size()) + " values, got " + std::to_string(values.size()));
  for (const auto& v : values)
    if (!(v.ring() == ring)) throw PreconditionError("value ring mismatch");
  values_ = std::move(values);
}

TowerElement TowerElement::delta(const RingDescriptor& ring, unsigned long p, unsigned k_src, unsigned k_tgt,
                                 std::size_t c) {
  TowerElement f(ring, p, k_src, k_tgt);
  f.values_.at(c) = Scalar::one(ring);
  return f;
}

TowerElement TowerElement::parse(const RingDescriptor& ring, std::string_view text) {
  static const std::regex re(R"(^\s*p\s*=\s*(\d+)\s+k\s*=\s*(\d+)\s*->\s*(\d+)\s*\[(.*)\]\s*$)");
  std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ParseError("expected 'p=<p> k=<k>-><k'> [values]'");
  unsigned long p = std::stoul(m[1]);
  unsigned k1 = static_cast<unsigned>(std::stoul(m[2])), k2 = static_cast<unsigned>(std::stoul(m[3]));
  std::vector<Scalar> values;
  std::string body = m[4];
  if (body.find_first_not_of(" \t") != std::string::npos) {
    std::size_t start = 0;
    while (true) {
      auto comma = body.find(',', start);
      values.push_back(Scalar::parse(ring, body.substr(start, comma == std::string::npos ? comma : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return TowerElement(ring, p, k1, k2, std::move(values));
}

bool TowerElement::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Scalar& s) { return s.is_zero(); });
}

TowerElement TowerElement::operator+(const TowerElement& other) const {
  if (!(p_ == other.p_ && k_src_ == other.k_src_ && k_tgt_ == other.k_tgt_ && ring_ == other.ring_))
    throw PreconditionError("sum of tower elements with different levels");
  TowerElement out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] += other.values_[i];
  return out;
}

TowerElement TowerElement::scaled(const Scalar& c) const {
  TowerElement out = *this;
  for (auto& v : out.values_) v *= c;
  return out;
}

std::string TowerElement::to_string() const {
  std::string out = "p=" + std::to_string(p_) + " k=" + std::to_string(k_src_) + "->" + std::to_string(k_tgt_) + " [";
  for (std::size_t i = 0; i < values_.size(); ++i) out += (i ? ", " : "") + values_[i].to_string();
  return out + "]";
}

TowerElement hecke_compose(const TowerElement& f, const TowerElement& g) {
  if (f.p() != g.p() || !(f.ring() == g.ring())) throw PreconditionError("tower elements of different algebroids");
  if (f.k_tgt() != g.k_src())
    throw PreconditionError("level mismatch: " + std::to_string(f.k_tgt()) + " vs " + std::to_string(g.k_src()));
  const unsigned long p = f.p();
  const unsigned long n1 = ipow(p, std::min(f.k_src(), f.k_tgt()));
  const unsigned long n2 = ipow(p, std::min(g.k_src(), g.k_tgt()));
  const unsigned long mid = ipow(p, f.k_tgt());
  TowerElement out(f.ring(), p, f.k_src(), g.k_tgt());
  const unsigned long n3 = out.values().size();
  std::vector<Scalar> values(n3, Scalar::zero(f.ring()));
  for (unsigned long y = 0; y < mid; ++y) {
    const Scalar& gy = g[y % n2];
    if (gy.is_zero()) continue;
    for (unsigned long c = 0; c < n3; ++c) {
      const Scalar& fc = f[(c + mid - y) % n1];
      if (!fc.is_zero()) values[c] += fc * gy;
    }
  }
  return TowerElement(f.ring(), p, f.k_src(), g.k_tgt(), std::move(values));
}

TowerElement hecke_star(const TowerElement& f) {
  const std::size_t n = f.values().size();
  std::vector<Scalar> values;
  for (std::size_t c = 0; c < n; ++c) values.push_back(f[(n - c) % n].star());
  return TowerElement(f.ring(), f.p(), f.k_tgt(), f.k_src(), std::move(values));
}

Eigen::MatrixXcd hecke_kernel_matrix(const TowerElement& f) {
  const unsigned long rows = ipow(f.p(), f.k_src()), cols = ipow(f.p(), f.k_tgt());
  const unsigned long n = f.values().size();
  Eigen::MatrixXcd k(rows, cols);
  for (unsigned long a = 0; a < rows; ++a)
    for (unsigned long b = 0; b < cols; ++b) k(a, b) = f[(a + n * cols - b) % n].to_complex();
  return k;
}

} // namespace convalg
