#pragma once

#include <algorithm>

#include "convalg/hecke.hpp"

namespace testing_support {

using namespace convalg;

inline unsigned long power(unsigned long p, unsigned k) {
  unsigned long r = 1;
  while (k--) r *= p;
  return r;
}

// Lift to Z/p^N, convolve in the group Z/p^N, weight by 1/p^(N - k'), restrict.
inline TowerElement oracle_compose(const TowerElement& f, const TowerElement& g, unsigned top) {
  const unsigned long p = f.p();
  const unsigned long big = power(p, top);
  auto lift = [&](const TowerElement& t) {
    std::vector<Scalar> out;
    for (unsigned long z = 0; z < big; ++z) out.push_back(t[z % t.values().size()]);
    return out;
  };
  auto lf = lift(f), lg = lift(g);
  std::vector<Scalar> conv(big, Scalar::zero(f.ring()));
  for (unsigned long z = 0; z < big; ++z)
    for (unsigned long y = 0; y < big; ++y) conv[z] += lf[(z + big - y) % big] * lg[y];
  Scalar weight = Scalar(f.ring(), mpq_class(1, power(p, top - f.k_tgt())), 0);
  const unsigned long n = power(p, std::min(f.k_src(), g.k_tgt()));
  std::vector<Scalar> values;
  for (unsigned long c = 0; c < n; ++c) values.push_back(conv[c] * weight);
  return TowerElement(f.ring(), p, f.k_src(), g.k_tgt(), values);
}

} // namespace testing_support
