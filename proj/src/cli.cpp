#include "convalg/cli.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "convalg/convcat.hpp"
#include "convalg/equivcore.hpp"
#include "convalg/errors.hpp"
#include "convalg/finitegroupoid.hpp"
#include "convalg/graphtopos.hpp"
#include "convalg/hecke.hpp"
#include "convalg/leavitt.hpp"
#include "convalg/norms.hpp"

namespace convalg {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

struct Options {
  std::string graph;
  std::string groupoid;
  std::optional<std::size_t> depth;
  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::string ring = "Q";
  std::string out;
  unsigned long p = 2;
  unsigned levels = 3;
  std::size_t max_rank = 4;
  std::vector<std::string> elements;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Report {
public:
  Report(std::string command, const std::vector<std::string>& args, const std::string& inputs) {
    doc_["command"] = std::move(command);
    doc_["args"] = args;
    std::string digest_input = inputs;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--out") {
        ++i;
        continue;
      }
      digest_input += '\0' + args[i];
    }
    doc_["inputs_digest"] = hex64(fnv1a64(digest_input));
  }
  Json& operator[](const char* key) { return doc_[key]; }
  void check(const std::string& name, bool pass, Json detail = nullptr) {
    Json c;
    c["name"] = name;
    c["pass"] = pass;
    if (!detail.is_null()) c["detail"] = std::move(detail);
    checks_.push_back(std::move(c));
    ok_ = ok_ && pass;
  }
  bool ok() const { return ok_; }
  std::string finish() {
    doc_["checks"] = checks_;
    doc_["pass"] = ok_;
    return doc_.dump(2) + "\n";
  }

private:
  Json doc_;
  Json checks_ = Json::array();
  bool ok_ = true;
};

Scalar random_coefficient(std::mt19937_64& rng, const RingDescriptor& ring) {
  long v = static_cast<long>(rng() % 6);
  return Scalar::from_int(ring, v < 3 ? v - 3 : v - 2);
}

LpaElement random_word(std::mt19937_64& rng, const Graph& g, const RingDescriptor& ring) {
  const std::size_t n = 1 + rng() % 5;
  LpaElement w = LpaElement::unit(g, ring);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kind = g.num_edges() ? rng() % 3 : 2;
    LpaElement gen = kind == 0   ? LpaElement::edge(g, ring, rng() % g.num_edges())
                     : kind == 1 ? LpaElement::edge_star(g, ring, rng() % g.num_edges())
                                 : LpaElement::vertex(g, ring, rng() % g.num_vertices());
    w = lpa_mul(w, gen);
  }
  return w;
}

LpaElement random_lpa(std::mt19937_64& rng, const Graph& g, const RingDescriptor& ring) {
  LpaElement out(g, ring);
  const std::size_t n = 1 + rng() % 2;
  for (std::size_t i = 0; i < n; ++i) out = out + random_word(rng, g, ring).scaled(random_coefficient(rng, ring));
  return out;
}

void require_elements(const Options& o, std::size_t at_least) {
  if (o.elements.size() < at_least)
    throw PreconditionError("expected at least " + std::to_string(at_least) + " element argument(s)");
}

Json equivalence_json(const EquivalenceResult& r, Report& rep) {
  std::string witness_bytes;
  for (const auto& u : r.witness.units) witness_bytes += u.to_string() + ";";
  for (const auto& cs : r.witness.counits)
    for (const auto& c : cs) witness_bytes += c.to_string() + ";";
  Json j;
  j["instances"] = r.instances;
  j["naturality_checks"] = r.naturality_checks;
  j["limit_checks"] = r.limit_checks;
  j["degenerate_rejected"] = r.degenerate_rejected;
  j["failing_instance"] = r.failing_instance ? Json(*r.failing_instance) : Json(nullptr);
  j["failure"] = r.failure;
  j["witness_digest"] = hex64(fnv1a64(witness_bytes));
  rep.check("unit and counit invertible and natural", r.ok && !r.failing_instance);
  rep.check("degenerate module rejected", r.degenerate_rejected);
  return j;
}

// Pair-cylinder syntax, or Leavitt syntax confined to one block p_x L p_y.
ConvElement graph_element(const Graph& g, const RingDescriptor& ring, const std::string& text) {
  if (text.find("Z(") != std::string::npos || text.find('@') != std::string::npos) return ConvElement::parse(g, ring, text);
  ConvMatrix m = from_leavitt(LpaElement::parse(g, ring, text));
  std::optional<ConvElement> block;
  for (const auto& [xy, e] : m.entries()) {
    if (e.is_zero()) continue;
    if (block) throw PreconditionError("element spans more than one vertex block");
    block = e;
  }
  if (!block) throw PreconditionError("zero element has no vertex block; write 0 @ x,y");
  return *block;
}

// ---- commands

int cmd_lpa(const std::string& sub, const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const std::string text = read_file(o.graph);
  Graph g = Graph::parse(text);
  const RingDescriptor ring = RingDescriptor::parse(o.ring);
  Report rep("lpa " + sub, args, text);
  rep["ring"] = ring.name();
  if (sub == "mul") {
    require_elements(o, 1);
    LpaElement acc = LpaElement::parse(g, ring, o.elements[0]);
    for (std::size_t i = 1; i < o.elements.size(); ++i) acc = lpa_mul(acc, LpaElement::parse(g, ring, o.elements[i]));
    rep["results"] = Json{{"product", acc.to_string()}};
  } else if (sub == "star") {
    require_elements(o, 1);
    Json stars = Json::array();
    for (const auto& e : o.elements) stars.push_back(lpa_star(LpaElement::parse(g, ring, e)).to_string());
    rep["results"] = Json{{"star", stars}};
  } else if (sub == "verify-relations") {
    Json results = Json::array();
    auto run = [&](const std::string& engine, const std::vector<RelationResult>& rs) {
      std::size_t failed = 0;
      for (const auto& r : rs) {
        if (!r.holds) ++failed;
        results.push_back(Json{{"engine", engine}, {"relation", r.relation}, {"instance", r.instance}, {"holds", r.holds}});
      }
      rep.check(engine + " relations", failed == 0, Json{{"checked", rs.size()}, {"failed", failed}});
    };
    run("leavitt", relation_suite(g, LpaEngine{g, ring}));
    run("convolution", relation_suite(g, ConvEngine{g, ring}));
    rep["results"] = results;
  } else if (sub == "equiv-check") {
    GraphEquivFamily fam(g);
    rep["seed"] = o.seed;
    rep["count"] = o.count;
    rep["max_rank"] = o.max_rank;
    auto r = verify_equivalence(fam, o.count, o.seed, o.max_rank);
    rep["results"] = equivalence_json(r, rep);
  }
  out << rep.finish();
  return rep.ok() ? kPass : kCheckFailed;
}

int cmd_conv(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const std::string text = read_file(o.graph);
  Graph g = Graph::parse(text);
  const RingDescriptor ring = RingDescriptor::parse(o.ring);
  Report rep("conv compare", args, text);
  rep["ring"] = ring.name();
  rep["seed"] = o.seed;
  rep["count"] = o.count;
  std::mt19937_64 rng(o.seed);
  Json mismatch = nullptr;
  std::string transcript;
  for (std::size_t i = 0; i < o.count && mismatch.is_null(); ++i) {
    LpaElement f = random_lpa(rng, g, ring), h = random_lpa(rng, g, ring);
    LpaElement via_conv = to_leavitt(conv_mul(from_leavitt(f), from_leavitt(h)));
    LpaElement direct = lpa_mul(f, h);
    transcript += direct.to_string() + ";";
    if (!lpa_equal(via_conv, direct))
      mismatch = Json{{"case", i}, {"f", f.to_string()}, {"g", h.to_string()}, {"convolution", via_conv.to_string()},
                      {"leavitt", direct.to_string()}};
  }
  rep["results"] = Json{{"products_digest", hex64(fnv1a64(transcript))}, {"first_mismatch", mismatch}};
  rep.check("convolution product agrees with the Leavitt product", mismatch.is_null());
  out << rep.finish();
  return rep.ok() ? kPass : kCheckFailed;
}

int cmd_gpd(const std::string& sub, const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const std::string text = read_file(o.groupoid);
  FiniteGroupoid g = FiniteGroupoid::parse(text);
  const RingDescriptor ring = RingDescriptor::parse(o.ring);
  Report rep("gpd " + sub, args, text);
  rep["ring"] = ring.name();
  if (sub == "convolve") {
    require_elements(o, 1);
    GpdElement acc = GpdElement::parse(g, ring, o.elements[0]);
    for (std::size_t i = 1; i < o.elements.size(); ++i) acc = gpd_convolve(acc, GpdElement::parse(g, ring, o.elements[i]));
    rep["results"] = Json{{"product", acc.to_string()}, {"star", gpd_star(acc).to_string()}};
  } else if (sub == "decompose") {
    auto orbits = decompose(g);
    Json js = Json::array();
    std::string algebra;
    std::size_t dim = 0;
    for (const auto& orb : orbits) {
      Json j;
      Json objs = Json::array(), iso = Json::array(), trans = Json::array();
      for (auto x : orb.objects) objs.push_back(g.object_name(x));
      for (auto a : orb.isotropy) iso.push_back(g.arrow(a).name);
      for (auto a : orb.transversal) trans.push_back(g.arrow(a).name);
      j["objects"] = objs;
      j["isotropy"] = iso;
      j["isotropy_order"] = orb.isotropy.size();
      j["transversal"] = trans;
      js.push_back(j);
      if (!algebra.empty()) algebra += " + ";
      algebra += "M_" + std::to_string(orb.objects.size()) + "(K[H_" + std::to_string(orb.isotropy.size()) + "])";
      dim += orb.objects.size() * orb.objects.size() * orb.isotropy.size();
    }
    rep["results"] = Json{{"orbits", js}, {"algebra", algebra.empty() ? "0" : algebra}};
    rep.check("dimension count", dim == g.num_arrows(), Json{{"arrows", g.num_arrows()}, {"blocks", dim}});
  } else if (sub == "equiv-check") {
    GroupoidEquivFamily fam(g);
    rep["seed"] = o.seed;
    rep["count"] = o.count;
    rep["max_rank"] = o.max_rank;
    auto r = verify_equivalence(fam, o.count, o.seed, o.max_rank);
    rep["results"] = equivalence_json(r, rep);
  }
  out << rep.finish();
  return rep.ok() ? kPass : kCheckFailed;
}

int cmd_hecke(const std::string& sub, const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const RingDescriptor ring = RingDescriptor::parse(o.ring);
  Report rep("hecke " + sub, args, "");
  rep["ring"] = ring.name();
  if (sub == "assoc") {
    rep["p"] = o.p;
    rep["levels"] = o.levels;
    if (o.levels > 4) throw PreconditionError("levels above 4 make the sweep too large");
    const unsigned L = o.levels;
    const unsigned long p = o.p;
    TowerElement probe(ring, p, 0, 0);
    (void)probe;
    std::size_t triples = 0, failures = 0;
    for (unsigned a = 0; a <= L; ++a)
      for (unsigned b = 0; b <= L; ++b)
        for (unsigned c = 0; c <= L; ++c)
          for (unsigned d = 0; d <= L; ++d) {
            const unsigned long nf = ipow(p, std::min(a, b)), ng = ipow(p, std::min(b, c)), nh = ipow(p, std::min(c, d));
            for (unsigned long i = 0; i < nf; ++i)
              for (unsigned long j = 0; j < ng; ++j) {
                auto f = TowerElement::delta(ring, p, a, b, i), g = TowerElement::delta(ring, p, b, c, j);
                auto fg = hecke_compose(f, g);
                for (unsigned long k = 0; k < nh; ++k) {
                  auto h = TowerElement::delta(ring, p, c, d, k);
                  ++triples;
                  if (!(hecke_compose(fg, h) == hecke_compose(f, hecke_compose(g, h)))) ++failures;
                }
              }
          }
    std::size_t group_failures = 0;
    for (unsigned k = 0; k <= L; ++k) {
      const unsigned long n = ipow(p, k);
      for (unsigned long i = 0; i < n; ++i)
        for (unsigned long j = 0; j < n; ++j)
          if (!(hecke_compose(TowerElement::delta(ring, p, k, k, i), TowerElement::delta(ring, p, k, k, j)) ==
                TowerElement::delta(ring, p, k, k, (i + j) % n)))
            ++group_failures;
    }
    rep["results"] = Json{{"basis_triples", triples}, {"associativity_failures", failures},
                          {"group_algebra_failures", group_failures}};
    rep.check("associativity on basis triples", failures == 0);
    rep.check("End(X_k) is the group algebra of Z/p^k", group_failures == 0);
  } else if (sub == "compose") {
    require_elements(o, 1);
    TowerElement acc = TowerElement::parse(ring, o.elements[0]);
    for (std::size_t i = 1; i < o.elements.size(); ++i) acc = hecke_compose(acc, TowerElement::parse(ring, o.elements[i]));
    rep["results"] = Json{{"product", acc.to_string()}, {"star", hecke_star(acc).to_string()}};
  }
  out << rep.finish();
  return rep.ok() ? kPass : kCheckFailed;
}

int cmd_norm(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  require_elements(o, 1);
  const RingDescriptor ring = RingDescriptor::parse(o.ring);
  std::optional<Graph> graph;
  std::optional<FiniteGroupoid> gpd;
  std::unique_ptr<InstanceFamily> fam;
  AlgebroidElement f;
  std::string inputs;
  if (!o.graph.empty()) {
    inputs = read_file(o.graph);
    graph.emplace(Graph::parse(inputs));
    auto gf = std::make_unique<GraphFamily>(*graph, ring);
    f = gf->from_conv(graph_element(*graph, ring, o.elements[0]));
    fam = std::move(gf);
  } else if (!o.groupoid.empty()) {
    inputs = read_file(o.groupoid);
    gpd.emplace(FiniteGroupoid::parse(inputs));
    auto gf = std::make_unique<GroupoidFamily>(*gpd, ring);
    f = gf->from_gpd(GpdElement::parse(*gpd, ring, o.elements[0]));
    fam = std::move(gf);
  } else {
    TowerElement t = TowerElement::parse(ring, o.elements[0]);
    auto hf = std::make_unique<HeckeFamily>(t.p(), std::max(t.k_src(), t.k_tgt()), ring);
    f = hf->from_tower(t);
    fam = std::move(hf);
  }
  Report rep("norm", args, inputs);
  rep["ring"] = ring.name();
  rep["family"] = fam->name();
  const std::size_t depth = o.depth.value_or(fam->support_depth(f));
  rep["depth"] = depth;
  NormReport nr = norm_report(*fam, f, depth);
  rep["results"] = Json{{"element", f.to_string()},
                        {"i_norm", nr.i_norm.get_str()},
                        {"reduced_norm", format_double(nr.reduced.value)},
                        {"residual", format_double(nr.reduced.residual)},
                        {"max_bound", nr.max_bound.get_str()}};
  rep.check("reduced_norm <= i_norm", nr.reduced.value <= nr.i_norm.get_d() + 1e-9);
  rep.check("reduced_norm <= max_bound", nr.reduced.value <= nr.max_bound.get_d() + 1e-9);
  out << rep.finish();
  return rep.ok() ? kPass : kCheckFailed;
}

std::string describe(const ParseError& e) {
  std::string where;
  if (e.line()) where = "line " + std::to_string(e.line()) + (e.column() ? ", column " + std::to_string(e.column()) : "") + ": ";
  return "parse error: " + where + e.message();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convolution algebras of graph toposes, finite groupoids and the Z/p^k tower", "convalg"};
  app.require_subcommand(1);
  Options o;
  std::string command;

  auto ring_opt = [&](CLI::App* s) { s->add_option("--ring", o.ring, "Z, Q, Z[1/p] or Q(i)")->capture_default_str(); };
  auto out_opt = [&](CLI::App* s) { s->add_option("--out", o.out, "write the report here instead of stdout"); };
  auto elements = [&](CLI::App* s, const char* what) { s->add_option("elements", o.elements, what); };
  auto seeded = [&](CLI::App* s) {
    s->add_option("--seed", o.seed)->capture_default_str();
    s->add_option("--count", o.count)->capture_default_str();
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->callback([&command, parent, name] { command = parent->get_name() + " " + name; });
    ring_opt(s);
    out_opt(s);
    return s;
  };

  CLI::App* lpa = app.add_subcommand("lpa", "Leavitt path algebra of a graph");
  lpa->require_subcommand(1);
  for (const char* name : {"mul", "star", "verify-relations", "equiv-check"}) {
    CLI::App* s = leaf(lpa, name, name);
    s->add_option("--graph", o.graph)->required();
    if (std::string(name) == "mul" || std::string(name) == "star") elements(s, "elements such as 'v[a] * w[b]'");
    if (std::string(name) == "equiv-check") {
      seeded(s);
      s->add_option("--max-rank", o.max_rank)->capture_default_str();
    }
  }
  CLI::App* conv = app.add_subcommand("conv", "convolution realization");
  conv->require_subcommand(1);
  {
    CLI::App* s = leaf(conv, "compare", "random products through both engines");
    s->add_option("--graph", o.graph)->required();
    seeded(s);
  }
  CLI::App* gpd = app.add_subcommand("gpd", "finite groupoid algebra");
  gpd->require_subcommand(1);
  for (const char* name : {"convolve", "decompose", "equiv-check"}) {
    CLI::App* s = leaf(gpd, name, name);
    s->add_option("--groupoid", o.groupoid)->required();
    if (std::string(name) == "convolve") elements(s, "elements such as '2 * [g] - [e]'");
    if (std::string(name) == "equiv-check") {
      seeded(s);
      s->add_option("--max-rank", o.max_rank)->capture_default_str();
    }
  }
  CLI::App* hecke = app.add_subcommand("hecke", "double coset algebroid of Z/p^k");
  hecke->require_subcommand(1);
  {
    CLI::App* s = leaf(hecke, "assoc", "associativity sweep over basis triples");
    s->add_option("--p", o.p)->capture_default_str();
    s->add_option("--levels", o.levels)->capture_default_str();
    CLI::App* c = leaf(hecke, "compose", "compose tower elements");
    elements(c, "elements such as 'p=2 k=1->0 [1, 2]'");
  }
  CLI::App* norm = app.add_subcommand("norm", "I-norm, reduced norm and max bound of an element");
  ring_opt(norm);
  out_opt(norm);
  norm->add_option("--graph", o.graph);
  norm->add_option("--groupoid", o.groupoid);
  norm->add_option("--depth", o.depth);
  elements(norm, "element (pair cylinders, arrows, or a tower element)");
  norm->callback([&command] { command = "norm"; });

  try {
    // shield "[...]" from CLI11's array syntax and "-1 * ..." from option lookup
    std::vector<std::string> reversed;
    for (auto it = args.rbegin(); it != args.rend(); ++it) {
      const bool shield = !it->empty() && ((*it)[0] == '[' ||
                                           ((*it)[0] == '-' && it->size() > 1 && !std::isalpha(static_cast<unsigned char>((*it)[1])) && (*it)[1] != '-'));
      reversed.push_back(shield ? " " + *it : *it);
    }
    app.parse(reversed);
    for (auto& e : o.elements)
      if (!e.empty() && e[0] == ' ') e.erase(0, 1);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kParseError;
  }

  std::ostringstream report;
  int code = kPass;
  try {
    const auto space = command.find(' ');
    const std::string head = command.substr(0, space), sub = space == std::string::npos ? "" : command.substr(space + 1);
    if (head == "lpa") code = cmd_lpa(sub, o, args, report);
    else if (head == "conv") code = cmd_conv(o, args, report);
    else if (head == "gpd") code = cmd_gpd(sub, o, args, report);
    else if (head == "hecke") code = cmd_hecke(sub, o, args, report);
    else code = cmd_norm(o, args, report);
  } catch (const ParseError& e) {
    err << describe(e) << "\n";
    return kParseError;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const InvariantError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kPreconditionError;
  }
  if (o.out.empty()) {
    out << report.str();
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
      err << "cannot write " << o.out << "\n";
      return kPreconditionError;
    }
    file << report.str();
  }
  return code;
}

} // namespace convalg
