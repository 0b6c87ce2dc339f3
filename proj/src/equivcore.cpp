#include "convalg/equivcore.hpp"

#include <algorithm>

#include "convalg/errors.hpp"
#include "convalg/gsheaf.hpp"
#include "convalg/leavitt.hpp"

namespace convalg {

namespace {

std::size_t below(std::mt19937_64& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

Scalar small_scalar(std::mt19937_64& rng, const RingDescriptor& ring) {
  return Scalar::from_int(ring, static_cast<long>(below(rng, 7)) - 3);
}

std::vector<std::size_t> offsets(const std::vector<std::size_t>& rank) {
  std::vector<std::size_t> off(rank.size() + 1, 0);
  for (std::size_t x = 0; x < rank.size(); ++x) off[x + 1] = off[x] + rank[x];
  return off;
}

Matrix block_diagonal(const RingDescriptor& ring, const std::vector<Matrix>& blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) rows += b.rows(), cols += b.cols();
  Matrix out(ring, rows, cols);
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Matrix required_solve(const Matrix& a, const Matrix& b, const std::string& what) {
  auto x = solve(a, b);
  if (!x) throw InvariantError(what);
  return x->in_ring(a.ring());
}

} // namespace

// ---- graph family

std::pair<std::size_t, std::size_t> GraphEquivFamily::label_ends(std::size_t a) const {
  return {g_.edge(a).tgt, g_.edge(a).src};
}

std::string GraphEquivFamily::sheaf_problem(const SheafRep& n) const {
  if (n.rank.size() != g_.num_vertices() || n.maps.size() != g_.num_edges()) return "wrong number of ranks or maps";
  for (std::size_t a = 0; a < g_.num_edges(); ++a)
    if (n.maps[a].rows() != n.rank[g_.edge(a).src] || n.maps[a].cols() != n.rank[g_.edge(a).tgt])
      return "map of edge " + g_.edge(a).name + " has the wrong shape";
  auto check = gsheaf_check(g_, GSheaf{n.ring, n.rank, n.maps});
  return check.ok ? std::string{} : check.reason;
}

std::string GraphEquivFamily::module_problem(const ModuleRep& m) const {
  const std::size_t nv = g_.num_vertices(), ne = g_.num_edges();
  if (m.generators.size() != nv + 2 * ne) return "wrong number of generators";
  try {
    LpaModule(g_, m.ring, m.dim, {m.generators.begin(), m.generators.begin() + nv},
              {m.generators.begin() + nv, m.generators.begin() + nv + ne},
              {m.generators.begin() + nv + ne, m.generators.end()});
  } catch (const InvariantError& e) {
    return e.what();
  }
  return {};
}

ModuleRep GraphEquivFamily::build_S(const SheafRep& n) const {
  LpaModule lm = module_from_gsheaf(g_, GSheaf{n.ring, n.rank, n.maps});
  ModuleRep m{n.ring, lm.dim(), {}, {}};
  for (std::size_t x = 0; x < g_.num_vertices(); ++x) {
    m.local_units.push_back(m.generators.size());
    m.generators.push_back(lm.p(x));
  }
  for (std::size_t a = 0; a < g_.num_edges(); ++a) m.generators.push_back(lm.v(a));
  for (std::size_t a = 0; a < g_.num_edges(); ++a) m.generators.push_back(lm.vstar(a));
  return m;
}

Matrix GraphEquivFamily::label_action(const ModuleRep& m, std::size_t a) const {
  return m.generators.at(g_.num_vertices() + a);
}

SheafRep GraphEquivFamily::random_sheaf(std::mt19937_64& rng, std::size_t max_rank) const {
  const std::size_t nv = g_.num_vertices();
  std::vector<std::vector<std::size_t>> solutions;
  std::size_t total = 1;
  for (std::size_t x = 0; x < nv && total <= 100000; ++x) total *= max_rank + 1;
  if (total <= 100000) {
    std::vector<std::size_t> r(nv, 0);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t x = 0; x < nv; ++x) r[x] = c % (max_rank + 1), c /= max_rank + 1;
      bool ok = true;
      for (std::size_t x = 0; x < nv && ok; ++x) {
        std::size_t sum = 0;
        for (auto a : g_.incoming(x)) sum += r[g_.edge(a).src];
        ok = sum == r[x];
      }
      if (ok) solutions.push_back(r);
    }
  }
  SheafRep n;
  n.rank = solutions.empty() ? std::vector<std::size_t>(nv, 0) : solutions[below(rng, solutions.size())];
  for (std::size_t a = 0; a < g_.num_edges(); ++a) n.maps.emplace_back(n.ring, n.rank[g_.edge(a).src], n.rank[g_.edge(a).tgt]);
  for (std::size_t x = 0; x < nv; ++x) {
    Matrix s = random_invertible(rng, n.ring, n.rank[x]);
    std::size_t row = 0;
    for (auto a : g_.incoming(x)) {
      n.maps[a] = s.block(row, 0, n.rank[g_.edge(a).src], n.rank[x]);
      row += n.rank[g_.edge(a).src];
    }
  }
  return n;
}

// ---- groupoid family

std::pair<std::size_t, std::size_t> GroupoidEquivFamily::label_ends(std::size_t a) const { return {g_.src(a), g_.tgt(a)}; }

std::string GroupoidEquivFamily::sheaf_problem(const SheafRep& n) const {
  return equivariant_sheaf_problem(g_, EquivariantSheaf{n.ring, n.rank, n.maps});
}

std::string GroupoidEquivFamily::module_problem(const ModuleRep& m) const {
  try {
    GpdModule(g_, m.ring, m.dim, m.generators);
  } catch (const InvariantError& e) {
    return e.what();
  }
  return {};
}

ModuleRep GroupoidEquivFamily::build_S(const SheafRep& n) const {
  GpdModule gm = functor_S(g_, EquivariantSheaf{n.ring, n.rank, n.maps});
  ModuleRep m{n.ring, gm.dim(), gm.actions(), {}};
  for (std::size_t x = 0; x < g_.num_objects(); ++x) m.local_units.push_back(g_.identity(x));
  return m;
}

Matrix GroupoidEquivFamily::label_action(const ModuleRep& m, std::size_t a) const {
  return m.generators.at(g_.inverse(a));
}

SheafRep GroupoidEquivFamily::random_sheaf(std::mt19937_64& rng, std::size_t max_rank) const {
  SheafRep n;
  n.rank.assign(g_.num_objects(), 0);
  std::vector<Matrix> action(g_.num_arrows(), Matrix(n.ring, 0, 0));
  for (const auto& o : decompose(g_)) {
    const std::size_t h = o.isotropy.size();
    // blocks: one-dimensional characters into {1, -1}, and the regular representation
    std::vector<std::vector<Matrix>> blocks;
    for (std::size_t signs = 0; signs < (std::size_t{1} << h); ++signs) {
      auto chi = [&](std::size_t i) { return (signs >> i) & 1 ? -1 : 1; };
      bool hom = true;
      for (std::size_t i = 0; i < h && hom; ++i)
        for (std::size_t j = 0; j < h && hom; ++j) hom = chi(o.isotropy_table[i][j]) == chi(i) * chi(j);
      if (!hom) continue;
      std::vector<Matrix> rep;
      for (std::size_t i = 0; i < h; ++i) {
        Matrix m(n.ring, 1, 1);
        m(0, 0) = Scalar::from_int(n.ring, chi(i));
        rep.push_back(m);
      }
      blocks.push_back(std::move(rep));
    }
    if (h <= max_rank) {
      std::vector<Matrix> rep;
      for (std::size_t i = 0; i < h; ++i) {
        Matrix m(n.ring, h, h);
        for (std::size_t k = 0; k < h; ++k) m(o.isotropy_table[i][k], k) = Scalar::one(n.ring);
        rep.push_back(m);
      }
      blocks.push_back(std::move(rep));
    }
    const std::size_t target = below(rng, max_rank + 1);
    std::vector<Matrix> sigma(h, Matrix(n.ring, 0, 0));
    std::size_t dim = 0;
    while (dim < target) {
      std::vector<std::size_t> fit;
      for (std::size_t b = 0; b < blocks.size(); ++b)
        if (dim + blocks[b][0].rows() <= target) fit.push_back(b);
      const auto& chosen = blocks[fit[below(rng, fit.size())]];
      for (std::size_t i = 0; i < h; ++i) sigma[i] = block_diagonal(n.ring, {sigma[i], chosen[i]});
      dim += chosen[0].rows();
    }
    Matrix p = random_invertible(rng, n.ring, dim);
    Matrix pinv = *inverse(p);
    for (auto& s : sigma) s = pinv * s * p;
    for (auto y : o.objects) n.rank[y] = dim;
    for (std::size_t a = 0; a < g_.num_arrows(); ++a) {
      auto cx = std::find(o.objects.begin(), o.objects.end(), g_.src(a));
      if (cx == o.objects.end()) continue;
      auto ry = std::find(o.objects.begin(), o.objects.end(), g_.tgt(a));
      std::size_t t_x = o.transversal[cx - o.objects.begin()], t_y = o.transversal[ry - o.objects.begin()];
      std::size_t k = *g_.compose(g_.inverse(t_y), *g_.compose(a, t_x));
      action[a] = sigma[std::find(o.isotropy.begin(), o.isotropy.end(), k) - o.isotropy.begin()];
    }
  }
  n.maps = std::move(action);
  return n;
}

// ---- shared harness

std::optional<Matrix> degeneracy_witness(const ModuleRep& m) {
  Matrix rest = Matrix::identity(m.ring, m.dim);
  for (auto u : m.local_units) rest = rest - m.generators.at(u);
  for (std::size_t j = 0; j < m.dim; ++j)
    if (!rest.column(j).is_zero()) return rest.column(j);
  return std::nullopt;
}

TResult build_T(const EquivFamily& fam, const ModuleRep& m) {
  if (auto w = degeneracy_witness(m))
    throw InvariantError("degenerate module: vector " + w->transpose().to_string() + " is not fixed by the local units");
  TResult out;
  out.sheaf.ring = m.ring;
  for (auto u : m.local_units) {
    out.bases.push_back(column_basis(m.generators.at(u)).in_ring(m.ring));
    out.sheaf.rank.push_back(out.bases.back().cols());
  }
  for (std::size_t l = 0; l < fam.num_labels(); ++l) {
    auto [dom, cod] = fam.label_ends(l);
    out.sheaf.maps.push_back(required_solve(out.bases[cod], fam.label_action(m, l) * out.bases[dom],
                                            "label " + std::to_string(l) + " does not respect the decomposition"));
  }
  if (auto p = fam.sheaf_problem(out.sheaf); !p.empty()) throw InvariantError("T(M) is not a sheaf: " + p);
  return out;
}

Matrix unit_component(const EquivFamily& fam, const ModuleRep& m) {
  TResult t = build_T(fam, m);
  std::vector<Matrix> rows;
  for (std::size_t x = 0; x < m.local_units.size(); ++x)
    rows.push_back(required_solve(t.bases[x], m.generators[m.local_units[x]], "local unit image outside its basis"));
  return vstack(rows, m.ring, m.dim);
}

std::vector<Matrix> counit_components(const EquivFamily& fam, const SheafRep& n) {
  TResult t = build_T(fam, fam.build_S(n));
  auto off = offsets(n.rank);
  std::vector<Matrix> out;
  for (std::size_t x = 0; x < n.rank.size(); ++x) {
    const Matrix& b = t.bases[x];
    Matrix outside = b;
    outside.set_block(off[x], 0, Matrix(n.ring, n.rank[x], b.cols()));
    if (!outside.is_zero()) throw InvariantError("basis of T(S(N)) leaves its block");
    out.push_back(b.block(off[x], 0, n.rank[x], b.cols()));
  }
  return out;
}

Matrix S_on_morphism(const SheafRep& n, const SheafRep& n2, const SheafMorphism& psi) {
  if (psi.size() != n.rank.size()) throw PreconditionError("one component per object expected");
  for (std::size_t x = 0; x < psi.size(); ++x)
    if (psi[x].rows() != n2.rank[x] || psi[x].cols() != n.rank[x]) throw PreconditionError("component has the wrong shape");
  return block_diagonal(n.ring, psi);
}

SheafMorphism T_on_morphism(const EquivFamily& fam, const ModuleRep& m, const ModuleRep& m2, const Matrix& phi) {
  TResult t = build_T(fam, m), t2 = build_T(fam, m2);
  SheafMorphism out;
  for (std::size_t x = 0; x < t.bases.size(); ++x)
    out.push_back(required_solve(t2.bases[x], phi * t.bases[x], "morphism does not respect the decomposition"));
  return out;
}

bool is_module_morphism(const ModuleRep& m, const ModuleRep& m2, const Matrix& phi) {
  if (phi.rows() != m2.dim || phi.cols() != m.dim || m.generators.size() != m2.generators.size()) return false;
  for (std::size_t i = 0; i < m.generators.size(); ++i)
    if (!(phi * m.generators[i] == m2.generators[i] * phi)) return false;
  return true;
}

bool is_sheaf_morphism(const EquivFamily& fam, const SheafRep& n, const SheafRep& n2, const SheafMorphism& psi) {
  if (psi.size() != n.rank.size()) return false;
  for (std::size_t x = 0; x < psi.size(); ++x)
    if (psi[x].rows() != n2.rank[x] || psi[x].cols() != n.rank[x]) return false;
  for (std::size_t l = 0; l < fam.num_labels(); ++l) {
    auto [dom, cod] = fam.label_ends(l);
    if (!(psi[cod] * n.maps[l] == n2.maps[l] * psi[dom])) return false;
  }
  return true;
}

ModuleRep conjugate(const ModuleRep& m, const Matrix& p) {
  auto pinv = inverse(p);
  if (!pinv) throw PreconditionError("conjugating matrix is not invertible");
  ModuleRep out = m;
  for (auto& g : out.generators) g = *pinv * g * p;
  return out;
}

ModuleRep with_dead_vector(const ModuleRep& m) {
  ModuleRep out = m;
  out.dim = m.dim + 1;
  for (auto& g : out.generators) g = block_diagonal(m.ring, {g, Matrix(m.ring, 1, 1)});
  return out;
}

SheafMorphism random_sheaf_morphism(const EquivFamily& fam, const SheafRep& n, const SheafRep& n2, std::mt19937_64& rng) {
  const std::size_t no = n.rank.size();
  std::vector<std::size_t> start(no + 1, 0);
  for (std::size_t x = 0; x < no; ++x) start[x + 1] = start[x] + n2.rank[x] * n.rank[x];
  const std::size_t unknowns = start.back();
  auto var = [&](std::size_t x, std::size_t i, std::size_t j) { return start[x] + i * n.rank[x] + j; };
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> rows;
  for (std::size_t l = 0; l < fam.num_labels(); ++l) {
    auto [dom, cod] = fam.label_ends(l);
    const Matrix& a = n.maps[l];
    const Matrix& b = n2.maps[l];
    for (std::size_t i = 0; i < n2.rank[cod]; ++i)
      for (std::size_t j = 0; j < n.rank[dom]; ++j) {
        std::vector<std::pair<std::size_t, Scalar>> row;
        for (std::size_t k = 0; k < n.rank[cod]; ++k)
          if (!a(k, j).is_zero()) row.emplace_back(var(cod, i, k), a(k, j));
        for (std::size_t k = 0; k < n2.rank[dom]; ++k)
          if (!b(i, k).is_zero()) row.emplace_back(var(dom, k, j), -b(i, k));
        rows.push_back(std::move(row));
      }
  }
  Matrix system(n.ring, rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) system(r, c) += v;
  Matrix k = rows.empty() ? Matrix::identity(n.ring, unknowns) : kernel_basis(system).in_ring(n.ring);
  Matrix combo(n.ring, k.cols(), 1);
  for (std::size_t c = 0; c < k.cols(); ++c) combo(c, 0) = small_scalar(rng, n.ring);
  Matrix sol = k * combo;
  SheafMorphism psi;
  for (std::size_t x = 0; x < no; ++x) {
    Matrix m(n.ring, n2.rank[x], n.rank[x]);
    for (std::size_t i = 0; i < n2.rank[x]; ++i)
      for (std::size_t j = 0; j < n.rank[x]; ++j) m(i, j) = sol(var(x, i, j), 0);
    psi.push_back(std::move(m));
  }
  return psi;
}

Matrix random_invertible(std::mt19937_64& rng, const RingDescriptor& ring, std::size_t n) {
  while (true) {
    Matrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = small_scalar(rng, ring);
    if (inverse(m)) return m;
  }
}

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::size_t check_limits(const EquivFamily& fam, const SheafRep& n, const SheafRep& n2, const SheafMorphism& psi) {
  const RingDescriptor& ring = n.ring;
  const std::size_t no = n.rank.size();
  const ModuleRep sn = fam.build_S(n), sn2 = fam.build_S(n2);
  const Matrix spsi = S_on_morphism(n, n2, psi);

  SheafRep ker{ring, {}, {}};
  std::vector<Matrix> incl;
  for (std::size_t x = 0; x < no; ++x) {
    incl.push_back(kernel_basis(psi[x]).in_ring(ring));
    ker.rank.push_back(incl.back().cols());
  }
  for (std::size_t l = 0; l < fam.num_labels(); ++l) {
    auto [dom, cod] = fam.label_ends(l);
    ker.maps.push_back(required_solve(incl[cod], n.maps[l] * incl[dom], "kernel is not a subsheaf"));
  }
  expect(fam.sheaf_problem(ker).empty(), "kernel of a sheaf morphism is not a sheaf");
  const ModuleRep sker = fam.build_S(ker);
  const Matrix iota = S_on_morphism(ker, n, incl);
  expect(is_module_morphism(sker, sn, iota), "S(kernel) does not include into S(N)");
  expect((spsi * iota).is_zero(), "S(kernel) is not killed by S(psi)");
  expect(sker.dim == kernel_basis(spsi).cols(), "S(kernel) and kernel of S(psi) differ in dimension");

  SheafRep coker{ring, {}, {}};
  std::vector<Matrix> proj, sect;
  for (std::size_t x = 0; x < no; ++x) {
    proj.push_back(kernel_basis(psi[x].transpose()).transpose().in_ring(ring));
    sect.push_back(required_solve(proj.back(), Matrix::identity(ring, proj.back().rows()), "cokernel projection has no section"));
    coker.rank.push_back(proj.back().rows());
  }
  for (std::size_t l = 0; l < fam.num_labels(); ++l) {
    auto [dom, cod] = fam.label_ends(l);
    coker.maps.push_back(proj[cod] * n2.maps[l] * sect[dom]);
  }
  expect(fam.sheaf_problem(coker).empty(), "cokernel of a sheaf morphism is not a sheaf");
  const ModuleRep scoker = fam.build_S(coker);
  const Matrix pi = S_on_morphism(n2, coker, proj);
  expect(is_module_morphism(sn2, scoker, pi), "S(N2) does not project onto S(cokernel)");
  expect((pi * spsi).is_zero(), "S(psi) does not die in S(cokernel)");
  expect(scoker.dim == sn2.dim - rank(spsi), "S(cokernel) and cokernel of S(psi) differ in dimension");

  SheafRep sum{ring, {}, {}};
  for (std::size_t x = 0; x < no; ++x) sum.rank.push_back(n.rank[x] + n2.rank[x]);
  for (std::size_t l = 0; l < fam.num_labels(); ++l) sum.maps.push_back(block_diagonal(ring, {n.maps[l], n2.maps[l]}));
  expect(fam.sheaf_problem(sum).empty(), "direct sum of sheaves is not a sheaf");
  const ModuleRep ssum = fam.build_S(sum);
  ModuleRep both{ring, sn.dim + sn2.dim, {}, {}};
  for (std::size_t i = 0; i < sn.generators.size(); ++i)
    both.generators.push_back(block_diagonal(ring, {sn.generators[i], sn2.generators[i]}));
  auto off = offsets(n.rank), off2 = offsets(n2.rank), offs = offsets(sum.rank);
  Matrix perm(ring, both.dim, ssum.dim);
  for (std::size_t x = 0; x < no; ++x) {
    for (std::size_t i = 0; i < n.rank[x]; ++i) perm(off[x] + i, offs[x] + i) = Scalar::one(ring);
    for (std::size_t i = 0; i < n2.rank[x]; ++i) perm(sn.dim + off2[x] + i, offs[x] + n.rank[x] + i) = Scalar::one(ring);
  }
  expect(is_module_morphism(ssum, both, perm) && inverse(perm).has_value(),
         "S(N + N2) is not S(N) + S(N2)");
  return 3;
}

} // namespace

EquivalenceResult verify_equivalence(const EquivFamily& fam, std::size_t count, std::uint64_t seed, std::size_t max_rank) {
  EquivalenceResult res;
  std::mt19937_64 rng(seed);
  const RingDescriptor q = RingDescriptor::rationals();
  std::optional<ModuleRep> first_module;
  for (std::size_t i = 0; i < count; ++i) {
    try {
      SheafRep n = fam.random_sheaf(rng, max_rank), n2 = fam.random_sheaf(rng, max_rank);
      expect(fam.sheaf_problem(n).empty() && fam.sheaf_problem(n2).empty(), "random sheaf is invalid");
      const ModuleRep sn = fam.build_S(n), sn2 = fam.build_S(n2);
      const Matrix p = random_invertible(rng, q, sn.dim), p2 = random_invertible(rng, q, sn2.dim);
      const ModuleRep m = conjugate(sn, p), m2 = conjugate(sn2, p2);
      expect(fam.module_problem(m).empty(), "conjugated module fails the relations");
      if (!first_module) first_module = m;

      const Matrix eta = unit_component(fam, m), eta2 = unit_component(fam, m2);
      const TResult tm = build_T(fam, m), tm2 = build_T(fam, m2);
      const ModuleRep stm = fam.build_S(tm.sheaf), stm2 = fam.build_S(tm2.sheaf);
      expect(eta.rows() == eta.cols() && inverse(eta).has_value(), "unit is not invertible");
      expect(is_module_morphism(m, stm, eta), "unit is not a module morphism");

      const SheafMorphism eps = counit_components(fam, n), eps2 = counit_components(fam, n2);
      const SheafRep tsn = build_T(fam, sn).sheaf, tsn2 = build_T(fam, sn2).sheaf;
      for (const auto& c : eps) expect(c.rows() == c.cols() && inverse(c).has_value(), "counit is not invertible");
      expect(is_sheaf_morphism(fam, tsn, n, eps), "counit is not a sheaf morphism");

      const SheafMorphism psi = random_sheaf_morphism(fam, n, n2, rng);
      expect(is_sheaf_morphism(fam, n, n2, psi), "sampled sheaf morphism is not a morphism");
      const SheafMorphism tspsi = T_on_morphism(fam, sn, sn2, S_on_morphism(n, n2, psi));
      for (std::size_t x = 0; x < psi.size(); ++x)
        expect(eps2[x] * tspsi[x] == psi[x] * eps[x], "counit naturality square fails");
      ++res.naturality_checks;

      const Matrix phi = *inverse(p2) * S_on_morphism(n, n2, psi) * p;
      expect(is_module_morphism(m, m2, phi), "sampled module morphism is not a morphism");
      const Matrix stphi = S_on_morphism(tm.sheaf, tm2.sheaf, T_on_morphism(fam, m, m2, phi));
      expect(eta2 * phi == stphi * eta, "unit naturality square fails");
      ++res.naturality_checks;
      (void)stm2;

      res.limit_checks += check_limits(fam, n, n2, psi);
      res.witness.units.push_back(eta);
      res.witness.counits.push_back(eps);
      ++res.instances;
    } catch (const Failure& f) {
      res.ok = false;
      res.failing_instance = i;
      res.failure = f.what;
      return res;
    } catch (const std::exception& e) {
      res.ok = false;
      res.failing_instance = i;
      res.failure = e.what();
      return res;
    }
  }
  ModuleRep base = first_module ? *first_module : fam.build_S(fam.random_sheaf(rng, 0));
  ModuleRep dead = with_dead_vector(base);
  auto w = degeneracy_witness(dead);
  Matrix expected(q, dead.dim, 1);
  expected(dead.dim - 1, 0) = Scalar::one(q);
  bool thrown = false;
  try {
    build_T(fam, dead);
  } catch (const InvariantError&) {
    thrown = true;
  }
  res.degenerate_rejected = fam.module_problem(dead).empty() && w && *w == expected && thrown;
  if (!res.degenerate_rejected) {
    res.ok = false;
    res.failure = "degenerate module was not rejected with its dead vector";
  }
  return res;
}

} // namespace convalg
