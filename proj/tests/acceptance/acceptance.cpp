// One line per acceptance criterion; exit status 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "convalg/cli.hpp"
#include "convalg/convcat.hpp"
#include "convalg/equivcore.hpp"
#include "convalg/errors.hpp"
#include "convalg/norms.hpp"
#include "convalg/stonelocale.hpp"
#include "hecke_oracle.hpp"
#include "support.hpp"

using namespace convalg;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const RingDescriptor Q = RingDescriptor::rationals();
const RingDescriptor QI = RingDescriptor::gaussian();

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure and keeps counting.
class Tally {
public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_failure_.empty()) first_failure_ = what;
    pass_ = pass_ && ok;
  }
  std::size_t checks() const { return checks_; }
  Outcome done(std::string detail) const {
    if (!pass_) detail += "; first failure: " + first_failure_;
    return {pass_, detail};
  }

private:
  bool pass_ = true;
  std::size_t checks_ = 0;
  std::string first_failure_;
};

std::vector<std::string> groupoid_fixtures() {
  return {"trivial.gpd", "z2.gpd", "z3.gpd", "pair2.gpd", "klein4.gpd", "s3.gpd", "pair2_z2.gpd", "z2_plus_pair2.gpd"};
}

const FiniteGroupoid& load_groupoid(const std::string& name) {
  static std::map<std::string, FiniteGroupoid> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, FiniteGroupoid::load(fixture(name))).first;
  return it->second;
}

// ---- 1

Outcome relation_suite_criterion() {
  Tally t;
  std::size_t graphs = 0;
  for (const auto& name : graph_fixtures()) {
    const Graph& g = load_graph(name);
    if (g.num_vertices() > 3 || g.num_edges() > 4) continue;
    ++graphs;
    for (const auto& r : relation_suite(g, LpaEngine{g, Q})) t.expect(r.holds, name + " leavitt " + r.relation + " " + r.instance);
    for (const auto& r : relation_suite(g, ConvEngine{g, Q}))
      t.expect(r.holds, name + " convolution " + r.relation + " " + r.instance);
  }
  return t.done(std::to_string(graphs) + " graphs, " + std::to_string(t.checks()) + " relation instances, both engines");
}

// ---- 2

Outcome bridge_criterion() {
  Tally t;
  Rng r(2024);
  std::size_t graphs = 0, nonzero = 0;
  for (const auto& name : graph_fixtures()) {
    const Graph& g = load_graph(name);
    ++graphs;
    for (int k = 0; k < 1000; ++k) {
      LpaElement f = random_element(r, g, Q, 2, 5), h = random_element(r, g, Q, 2, 5);
      ConvMatrix cf = from_leavitt(f), ch = from_leavitt(h);
      t.expect(lpa_equal(to_leavitt(cf), f), name + " round trip " + f.to_string());
      LpaElement via = to_leavitt(conv_mul(cf, ch));
      nonzero += !via.is_zero();
      t.expect(lpa_equal(via, lpa_mul(f, h)), name + " product of " + f.to_string() + " and " + h.to_string());
      t.expect(expansion_equal(g, via.terms(), raw_product(g, f.terms(), h.terms())), name + " expansion oracle");
    }
  }
  return t.done(std::to_string(graphs) + " graphs x 1000 products (" + std::to_string(nonzero) + " nonzero), exact");
}

// ---- 3

AlgebroidElement random_morphism(Rng& r, const InstanceFamily& fam, const std::string& i, const std::string& j) {
  auto labels = fam.basis(i, j, 2);
  AlgebroidElement f = fam.zero(i, j);
  if (labels.empty()) return f;
  const std::size_t n = 1 + r.below(3);
  for (std::size_t k = 0; k < n; ++k)
    f = f + scaled(fam.basis_element(i, j, labels[r.below(labels.size())]), random_scalar(r, fam.ring(), false));
  return fam.normalize(f);
}

Outcome involution_criterion() {
  Tally t;
  Rng r(33);
  const Graph& two_loop = load_graph("two_loop.graph");
  const Graph& toeplitz = load_graph("toeplitz.graph");
  std::vector<std::pair<std::string, std::vector<std::unique_ptr<InstanceFamily>>>> families;
  families.emplace_back("graph", std::vector<std::unique_ptr<InstanceFamily>>{});
  families.back().second.push_back(std::make_unique<GraphFamily>(two_loop, QI));
  families.back().second.push_back(std::make_unique<GraphFamily>(toeplitz, QI));
  families.emplace_back("groupoid", std::vector<std::unique_ptr<InstanceFamily>>{});
  families.back().second.push_back(std::make_unique<GroupoidFamily>(load_groupoid("s3.gpd"), QI));
  families.back().second.push_back(std::make_unique<GroupoidFamily>(load_groupoid("pair2_z2.gpd"), QI));
  families.emplace_back("hecke", std::vector<std::unique_ptr<InstanceFamily>>{});
  families.back().second.push_back(std::make_unique<HeckeFamily>(2, 3, QI));
  families.back().second.push_back(std::make_unique<HeckeFamily>(3, 2, QI));
  for (const auto& [kind, members] : families)
    for (int k = 0; k < 1000; ++k) {
      const InstanceFamily& fam = *members[static_cast<std::size_t>(k) % members.size()];
      auto objs = fam.objects();
      auto i = objs[r.below(objs.size())], j = objs[r.below(objs.size())], l = objs[r.below(objs.size())];
      auto f = random_morphism(r, fam, i, j), g = random_morphism(r, fam, j, l);
      t.expect(fam.star(fam.compose(f, g)) == fam.compose(fam.star(g), fam.star(f)), kind + " anti-multiplicative");
      t.expect(fam.star(fam.star(f)) == f, kind + " star of star");
    }
  return t.done("3 families x 1000 cases over Q(i), exact");
}

// ---- 4

Outcome equivalence_criterion() {
  Tally t;
  std::size_t instances = 0;
  for (const auto& name : groupoid_fixtures()) {
    const FiniteGroupoid& g = load_groupoid(name);
    t.expect(g.num_arrows() <= 8, name + " has more than 8 arrows");
    GroupoidEquivFamily fam(g);
    auto res = verify_equivalence(fam, 100, 4, 4);
    instances += res.instances;
    t.expect(res.ok && res.instances == 100, name + ": " + res.failure);
    t.expect(res.degenerate_rejected, name + " degenerate module accepted");
  }
  return t.done(std::to_string(groupoid_fixtures().size()) + " groupoids, " + std::to_string(instances) +
                " instances of rank <= 4, degenerate module rejected");
}

// ---- 5

Clopen random_clopen(Rng& r, const Graph& g, std::size_t anchor, std::size_t max_depth) {
  std::vector<Path> paths;
  const std::size_t n = 1 + r.below(3);
  for (std::size_t i = 0; i < n; ++i) {
    auto all = live_paths(g, anchor, r.below(max_depth + 1));
    if (!all.empty()) paths.push_back(all[r.below(all.size())]);
  }
  return Clopen(g, anchor, paths);
}

// Random charts inside u, completed by the cylinders of whatever they miss.
std::vector<Clopen> random_cover(Rng& r, const Clopen& u, std::size_t max_depth) {
  const Graph& g = u.graph();
  std::vector<Clopen> cover;
  Clopen covered = Clopen::empty(g, u.anchor());
  const std::size_t n = r.below(3);
  for (std::size_t i = 0; i < n; ++i) {
    Clopen c = clopen_meet(random_clopen(r, g, u.anchor(), max_depth), u);
    if (c.is_empty()) continue;
    cover.push_back(c);
    covered = clopen_join(covered, c);
  }
  Clopen rest = clopen_minus(u, covered);
  if (r.coin() || rest.cylinders().size() < 2) {
    if (!rest.is_empty()) cover.push_back(rest);
  } else {
    for (const auto& p : rest.cylinders()) cover.push_back(Clopen::cylinder(g, p));
  }
  if (r.coin() && !cover.empty()) cover.push_back(cover.front());
  return cover;
}

std::size_t cover_depth(const Clopen& u, const std::vector<Clopen>& a, const std::vector<Clopen>& b) {
  std::size_t d = std::max<std::size_t>(u.depth(), 1);
  for (const auto& c : a) d = std::max(d, c.depth());
  for (const auto& c : b) d = std::max(d, c.depth());
  return d;
}

Outcome cover_criterion() {
  Tally t;
  Rng r(55);
  std::size_t pairs = 0;
  const std::vector<std::string> graphs{"two_loop.graph", "toeplitz.graph", "two_cycle_loops.graph", "one_loop.graph"};
  for (int k = 0; k < 40; ++k) {
    const Graph& g = load_graph(graphs[static_cast<std::size_t>(k) % graphs.size()]);
    const RingDescriptor ring = k % 2 ? RingDescriptor::integers() : Q;
    const std::size_t anchor = r.below(g.num_vertices());
    if (!g.is_live(anchor)) continue;
    Clopen u = random_clopen(r, g, anchor, 2);
    if (u.is_empty()) continue;
    auto ca = random_cover(r, u, 3), cb = random_cover(r, u, 3);
    const std::size_t depth = cover_depth(u, ca, cb);
    auto pa = gamma_c_presentation(u, ca, depth, ring), pb = gamma_c_presentation(u, cb, depth, ring);
    auto single = gamma_c_presentation(u, {u}, depth, ring);
    auto qa = coequalize(pa.presentation), qb = coequalize(pb.presentation), qs = coequalize(single.presentation);
    ++pairs;
    const std::string where = g.vertex_name(anchor) + " " + u.to_string();
    t.expect(qa.rank == qb.rank && qa.torsion.empty() && qb.torsion.empty(), where + " ranks differ");
    t.expect(qs.rank == u.cells(depth).size() && qa.rank == qs.rank, where + " single chart disagrees with the cell count");
    Matrix ab = cover_comparison(pa, qa, pb, qb), ba = cover_comparison(pb, qb, pa, qa);
    t.expect(ba * ab == Matrix::identity(ring, qa.rank) && ab * ba == Matrix::identity(ring, qb.rank),
             where + " comparison is not invertible");
    t.expect(gluing_map(pb) * qb.section * ab == gluing_map(pa) * qa.section, where + " comparison does not commute with gluing");
  }
  t.expect(pairs >= 20, "fewer than 20 cover pairs");
  return t.done(std::to_string(pairs) + " cover pairs over Q and Z, isomorphic quotients of the direct rank");
}

// ---- 6

Outcome hecke_criterion() {
  Tally t;
  std::size_t triples = 0;
  for (unsigned long p : {2ul, 3ul})
    for (unsigned a = 0; a <= 3; ++a)
      for (unsigned b = 0; b <= 3; ++b)
        for (unsigned c = 0; c <= 3; ++c) {
          const unsigned long nf = power(p, std::min(a, b)), ng = power(p, std::min(b, c));
          for (unsigned long i = 0; i < nf; ++i)
            for (unsigned long j = 0; j < ng; ++j) {
              auto f = TowerElement::delta(Q, p, a, b, i), g = TowerElement::delta(Q, p, b, c, j);
              auto fg = hecke_compose(f, g);
              t.expect(fg == oracle_compose(f, g, std::max({a, b, c})), "oracle " + f.to_string() + " " + g.to_string());
              for (unsigned d = 0; d <= 3; ++d) {
                const unsigned long nh = power(p, std::min(c, d));
                for (unsigned long k = 0; k < nh; ++k) {
                  auto h = TowerElement::delta(Q, p, c, d, k);
                  ++triples;
                  t.expect(hecke_compose(fg, h) == hecke_compose(f, hecke_compose(g, h)), "associativity " + f.to_string());
                }
              }
            }
        }
  auto rejects = [&](const RingDescriptor& ring, unsigned long p) {
    try {
      TowerElement(ring, p, 1, 1);
    } catch (const PreconditionError&) {
      return true;
    }
    return false;
  };
  t.expect(rejects(RingDescriptor::integers(), 2), "Z accepted for p = 2");
  t.expect(rejects(RingDescriptor::localized(3), 2), "Z[1/3] accepted for p = 2");
  t.expect(rejects(RingDescriptor::localized(2), 3), "Z[1/2] accepted for p = 3");
  t.expect(!rejects(RingDescriptor::localized(2), 2) && !rejects(RingDescriptor::localized(3), 3) && !rejects(Q, 3),
           "a ring containing 1/p was rejected");
  return t.done(std::to_string(triples) + " basis triples for p = 2, 3 at levels <= 3, oracle agreement on every pair, "
                "rejection without 1/p");
}

// ---- 7

// Left regular representation on l^2(arrows), built from the composition table alone.
Eigen::MatrixXcd regular_oracle(const FiniteGroupoid& g, const AlgebroidElement& f) {
  const std::size_t n = g.num_arrows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& [label, c] : f.terms) {
    const std::size_t a = *g.find_arrow(label);
    for (std::size_t h = 0; h < n; ++h)
      if (auto ah = g.compose(a, h)) m(static_cast<Eigen::Index>(*ah), static_cast<Eigen::Index>(h)) += c.to_complex();
  }
  return m;
}

double top_singular_value(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

AlgebroidElement random_gpd_element(Rng& r, const GroupoidFamily& fam) {
  AlgebroidElement f = fam.zero("*", "*");
  const auto& g = fam.groupoid();
  for (std::size_t a = 0; a < g.num_arrows(); ++a)
    if (r.coin()) f.terms.emplace(g.arrow(a).name, random_scalar(r, fam.ring(), false));
  return fam.normalize(f);
}

Outcome norm_criterion() {
  Tally t;
  Rng r(77);
  std::vector<std::unique_ptr<GroupoidFamily>> fams;
  for (const auto& name : groupoid_fixtures()) fams.push_back(std::make_unique<GroupoidFamily>(load_groupoid(name), QI));
  double worst = 0;
  for (int k = 0; k < 500; ++k) {
    const GroupoidFamily& fam = *fams[static_cast<std::size_t>(k) % fams.size()];
    auto f = random_gpd_element(r, fam);
    const double v = reduced_norm(fam, f, 0).value;
    const double vv = reduced_norm(fam, fam.compose(fam.star(f), f), 0).value;
    worst = std::max(worst, std::abs(vv - v * v));
    t.expect(std::abs(vv - v * v) <= 1e-9, "C*-identity " + f.to_string());
    t.expect(std::abs(v - top_singular_value(regular_oracle(fam.groupoid(), f))) <= 1e-9 * std::max(1.0, v),
             "regular representation oracle " + f.to_string());
    t.expect(v <= i_norm(fam, f).get_d() + 1e-9, "reduced above I-norm " + f.to_string());
    t.expect(v <= max_norm_bound(fam, f).get_d() + 1e-9, "reduced above max bound " + f.to_string());
  }
  for (int k = 0; k < 1000; ++k) {
    const GroupoidFamily& fam = *fams[static_cast<std::size_t>(k) % fams.size()];
    auto f = random_gpd_element(r, fam), h = random_gpd_element(r, fam);
    t.expect(i_norm(fam, fam.compose(f, h)) <= i_norm(fam, f) * i_norm(fam, h), "submultiplicativity " + f.to_string());
  }
  std::size_t special = 0;
  for (const auto& fam : fams) {
    const auto& g = fam->groupoid();
    AlgebroidElement unit = fam->zero("*", "*");
    for (std::size_t x = 0; x < g.num_objects(); ++x) unit.terms.emplace(g.arrow(g.identity(x)).name, Scalar::one(QI));
    std::vector<AlgebroidElement> candidates{unit};
    for (std::size_t x = 0; x < g.num_objects(); ++x) candidates.push_back(fam->basis_element("*", "*", g.arrow(g.identity(x)).name));
    // averaging projection over the isotropy at the first object, and i times each arrow plus the unit elsewhere
    AlgebroidElement avg = fam->zero("*", "*");
    std::size_t iso = 0;
    for (std::size_t a = 0; a < g.num_arrows(); ++a) iso += g.src(a) == 0 && g.tgt(a) == 0;
    for (std::size_t a = 0; a < g.num_arrows(); ++a)
      if (g.src(a) == 0 && g.tgt(a) == 0) avg.terms.emplace(g.arrow(a).name, Scalar(QI, mpq_class(1, iso)));
    candidates.push_back(fam->normalize(avg));
    for (std::size_t a = 0; a < g.num_arrows(); ++a)
      if (g.src(a) == g.tgt(a)) {
        AlgebroidElement u = fam->zero("*", "*");
        for (std::size_t x = 0; x < g.num_objects(); ++x)
          if (x != g.src(a)) u.terms.emplace(g.arrow(g.identity(x)).name, Scalar::one(QI));
        u.terms.emplace(g.arrow(a).name, Scalar(QI, 0, 1));
        candidates.push_back(fam->normalize(u));
      }
    for (const auto& f : candidates) {
      const bool projection = fam->compose(f, f) == f && fam->star(f) == f;
      const bool unitary = fam->compose(fam->star(f), f) == unit && fam->compose(f, fam->star(f)) == unit;
      t.expect(projection || unitary, "not a projection or unitary: " + f.to_string());
      const double v = reduced_norm(*fam, f, 0).value;
      t.expect(std::abs(v - 1) <= 1e-10, "norm of " + f.to_string() + " is " + format_double(v));
      ++special;
    }
  }
  return t.done("500 C*-identity cases (worst deviation " + format_double(worst) +
                "), 1000 submultiplicative pairs, " + std::to_string(special) + " projections and unitaries of norm 1");
}

// ---- 8

LCSection random_section(Rng& r, const Graph& g, const RingDescriptor& ring, std::size_t anchor, std::size_t depth) {
  std::map<Path, Scalar> pieces;
  for (auto& p : live_paths(g, anchor, depth))
    if (r.coin()) pieces.emplace(p, random_scalar(r, ring));
  return LCSection(g, ring, anchor, pieces);
}

Outcome partition_criterion() {
  Tally t;
  Rng r(88);
  std::size_t cases = 0;
  while (cases < 1000) {
    const Graph& g = load_graph(graph_fixtures()[r.below(graph_fixtures().size())]);
    const std::size_t anchor = r.below(g.num_vertices());
    if (!g.is_live(anchor)) continue;
    const RingDescriptor ring = r.coin() ? Q : RingDescriptor::integers();
    LCSection s = random_section(r, g, ring, anchor, r.below(3));
    Clopen supp = s.support();
    std::vector<Clopen> cover = supp.is_empty() ? std::vector<Clopen>{} : random_cover(r, supp, 3);
    if (r.coin()) cover.push_back(random_clopen(r, g, anchor, 2));
    ++cases;
    auto parts = partition_of_support(s, cover);
    t.expect(parts.size() == cover.size(), "one piece per chart");
    LCSection sum = LCSection::zero(g, ring, anchor);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      sum = sum + parts[i];
      t.expect(clopen_subset(parts[i].support(), cover[i]), "support escapes its chart");
    }
    t.expect(sum == s, "pieces do not sum to the section: " + s.to_string());
  }
  return t.done(std::to_string(cases) + " (section, cover) pairs over Q and Z, exact sums and support containment");
}

// ---- 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string run_case(const nlohmann::json& c, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  for (const auto& entry : fs::directory_iterator(CONVALG_FIXTURES)) fs::copy_file(entry.path(), work / entry.path().filename());
  const fs::path saved = fs::current_path();
  fs::current_path(work);
  std::ostringstream out, err;
  const int code = run_cli(c.at("args").get<std::vector<std::string>>(), out, err);
  std::string text = "exit " + std::to_string(code) + "\n--- stdout\n" + out.str() + "--- stderr\n" + err.str();
  if (c.contains("out")) text += "--- " + c["out"].get<std::string>() + "\n" + slurp(c["out"].get<std::string>());
  fs::current_path(saved);
  return text;
}

Outcome determinism_criterion() {
  Tally t;
  const auto cases = nlohmann::json::parse(slurp(CONVALG_GOLDEN_CASES));
  const fs::path work = fs::temp_directory_path() / "convalg_acceptance";
  for (const auto& c : cases) {
    const std::string name = c.at("name");
    const std::string first = run_case(c, work), second = run_case(c, work);
    t.expect(first == second, name + " differs between runs");
    t.expect(first == slurp(fs::path(CONVALG_GOLDEN_EXPECTED) / (name + ".golden")), name + " differs from its golden file");
  }
  fs::remove_all(work);
  return t.done(std::to_string(cases.size()) + " golden cases, two runs each, byte-identical to the stored reports");
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Leavitt relation suite", relation_suite_criterion},
      {"convolution and Leavitt products agree", bridge_criterion},
      {"involution", involution_criterion},
      {"equivalence of categories on groupoids", equivalence_criterion},
      {"coequalizer cover independence", cover_criterion},
      {"Hecke associativity and oracle agreement", hecke_criterion},
      {"norms", norm_criterion},
      {"partition lemma", partition_criterion},
      {"determinism of CLI reports", determinism_criterion},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " (" << o.detail
              << ", " << timing << ")" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
