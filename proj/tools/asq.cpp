#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "asq/asq.hpp"

using json = nlohmann::ordered_json;
using namespace asq;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Any parse failure is an input error.
template <class F>
auto parse_input(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

class RunReport {
 public:
  explicit RunReport(std::string command) : t0_(std::chrono::steady_clock::now()) {
    j_["command"] = std::move(command);
    j_["inputs"] = json::object();
    j_["counts"] = json::object();
    j_["verdicts"] = json::array();
    j_["details"] = json::object();
  }

  void input(const std::string& k, json v) { j_["inputs"][k] = std::move(v); }
  void count(const std::string& k, std::uint64_t v) { j_["counts"][k] = v; }
  json& details() { return j_["details"]; }

  void verdict(const std::string& name, bool pass, const std::string& detail = {}, const std::vector<Elem>& witness = {}) {
    json v{{"name", name}, {"pass", pass}};
    if (!detail.empty()) v["detail"] = detail;
    if (!witness.empty()) v["witness"] = witness;
    j_["verdicts"].push_back(std::move(v));
  }

  // A count asserted against its expected value.
  void expect(const std::string& name, std::uint64_t expected, std::uint64_t actual) {
    count(name, actual);
    json v{{"name", name}, {"pass", expected == actual}, {"expected", expected}, {"actual", actual}};
    j_["verdicts"].push_back(std::move(v));
  }

  void report(const Report& r, const std::string& prefix) {
    for (const auto& c : r.checks) verdict(prefix + c.name, c.ok, c.detail, c.witness);
  }

  bool ok() const {
    for (const auto& v : j_["verdicts"])
      if (!v["pass"].get<bool>()) return false;
    return true;
  }

  json finish() {
    j_["ok"] = ok();
    j_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    j_["tool_version"] = kVersion;
    return j_;
  }

 private:
  json j_;
  std::chrono::steady_clock::time_point t0_;
};

void print_text(const json& j, std::ostream& out) {
  out << j["command"].get<std::string>() << "\n";
  for (const auto& [k, v] : j["inputs"].items()) out << "  input " << k << ": " << v.dump() << "\n";
  for (const auto& [k, v] : j["counts"].items()) out << "  " << k << ": " << v.dump() << "\n";
  for (const auto& v : j["verdicts"]) {
    out << "  " << (v["pass"].get<bool>() ? "PASS " : "FAIL ") << v["name"].get<std::string>();
    if (v.contains("expected")) out << " (expected " << v["expected"].dump() << ", got " << v["actual"].dump() << ")";
    if (v.contains("detail")) out << ": " << v["detail"].get<std::string>();
    if (v.contains("witness")) out << " witness " << v["witness"].dump();
    out << "\n";
  }
  out << (j["ok"].get<bool>() ? "ok" : "FAILED") << " in " << j["wall_time_s"].get<double>() << " s\n";
}

json srg_json(const std::optional<SrgParams>& s) {
  if (!s) return nullptr;
  return json{{"v", s->v}, {"k", s->k}, {"lambda", s->lambda}, {"mu", s->mu}};
}

json geometry_json(const GeometrySummary& g) {
  json out{{"points", g.points}, {"lines", g.lines}, {"gq", g.gq.ok}};
  if (g.gq.ok) {
    out["s"] = g.gq.s;
    out["t"] = g.gq.t;
  } else {
    out["failure"] = g.gq.failure;
  }
  out["srg"] = srg_json(g.srg);
  return out;
}

std::vector<std::string> plane_keys(const PlaneCatalogue& cat, const std::vector<Point>& s) {
  std::vector<std::string> out;
  for (Point p : s) {
    std::string key;
    for (Word r : cat.plane(p).rows()) key += (key.empty() ? "" : ",") + to_string(BitVector(r, cat.dim()));
    out.push_back(key);
  }
  return out;
}

// ---- verify ---------------------------------------------------------------------------

void add_verify(RunReport& rep, const ASConfiguration& cfg, bool all_points, const std::string& incidence_prefix) {
  const VerifyReport v = verify_configuration(cfg, all_points);
  const long q = static_cast<long>(cfg.q);
  rep.count("q", cfg.q);
  rep.report(v.axioms, "axioms: ");
  if (!v.axioms.ok()) return;
  rep.report(v.lemma41, "invariants: ");
  rep.verdict("pds", v.pds->ok && v.pds->lambda == q - 2 && v.pds->mu == q + 2,
              "lambda " + std::to_string(v.pds->lambda) + ", mu " + std::to_string(v.pds->mu),
              v.pds->ok ? std::vector<Elem>{} : std::vector<Elem>{v.pds->witness});
  rep.count("delta_size", v.pds->size);
  rep.report(v.kantor, "kantor: ");
  json& d = rep.details();
  d["pds"] = {{"lambda", v.pds->lambda}, {"mu", v.pds->mu}};
  d["as_quadrangle"] = geometry_json(*v.as_geometry);
  rep.verdict("as quadrangle order (q-1, q+1)", v.as_geometry->gq.ok && v.as_geometry->gq.s == q - 1 && v.as_geometry->gq.t == q + 1,
              v.as_geometry->gq.failure);
  rep.count("as_points", v.as_geometry->points);
  rep.count("as_lines", v.as_geometry->lines);
  if (v.kantor_geometry) {
    d["kantor_quadrangle"] = geometry_json(*v.kantor_geometry);
    rep.verdict("kantor quadrangle order (q, q)",
                v.kantor_geometry->gq.ok && v.kantor_geometry->gq.s == q && v.kantor_geometry->gq.t == q,
                v.kantor_geometry->gq.failure);
    rep.count("kantor_points", v.kantor_geometry->points);
    rep.count("kantor_lines", v.kantor_geometry->lines);
    if (v.base_point_regular) {
      d["kantor_quadrangle"]["base_point_regular"] = *v.base_point_regular;
      rep.verdict("base point regular", *v.base_point_regular);
    }
    if (all_points) {
      d["kantor_quadrangle"]["regular_points"] = v.regular_points;
      rep.count("regular_points", v.regular_points);
    }
  }
  if (!incidence_prefix.empty()) {
    std::ofstream(incidence_prefix + ".as.txt") << format_incidence(as_quadrangle(cfg));
    if (v.kantor.ok()) std::ofstream(incidence_prefix + ".kantor.txt") << format_incidence(kantor_quadrangle(*cfg.group, kantor_from_as(cfg), cfg.q, cfg.q));
  }
  const auto bad = non_covering_triples(cfg);
  d["non_covering_triples"] = bad.size();
}

Group load_group(const std::string& arg) {
  if (!std::filesystem::exists(arg)) {
    try {
      return table4_group(parse_table4_id(arg));
    } catch (const std::invalid_argument&) {
      throw InputError("'" + arg + "' is neither a group file nor one of 208a, 210b, 211p, 212m");
    }
  }
  const std::string text = read_file(arg);
  return parse_input([&] { return parse_group(text, std::filesystem::path(arg).stem().string()); });
}

json cmd_verify(const std::string& group_file, const std::string& config_file, bool all_points, const std::string& incidence) {
  RunReport rep("verify");
  rep.input("group", group_file);
  rep.input("configuration", config_file);
  const Group g = load_group(group_file);
  const std::string text = read_file(config_file);
  const ASConfiguration cfg = parse_input([&] {
    ASConfiguration c = parse_configuration(text, g);
    check_sizes(c);
    return c;
  });
  add_verify(rep, cfg, all_points, incidence);
  return rep.finish();
}

// ---- ruleout --------------------------------------------------------------------------

json cmd_ruleout(const std::string& id, unsigned threads, std::size_t seed_size, int trials) {
  RunReport rep("ruleout");
  rep.input("group", id);
  rep.input("threads", threads);
  const Order512Id tid = parse_input([&] { return parse_table4_id(id); });
  const Group g = table4_group(tid);
  json& d = rep.details();
  if (tid == Order512Id::g208a || tid == Order512Id::g211p) {
    rep.input("seed_size", seed_size);
    const bool lift = tid == Order512Id::g208a;
    const ArcPipeline p = arc_pipeline(g.cocycle()->form(), seed_size, 9, threads, lift ? &g : nullptr);
    rep.count("planes", p.planes);
    rep.expect("isometry_order", lift ? 990904320u : 348364800u, p.isometry_order);
    if (lift) {
      rep.count("seeds", p.seeds.size());
      rep.expect("arcs", 8, p.arcs.size());
      bool all72 = !p.candidates.empty();
      for (auto c : p.candidates) all72 = all72 && c == 72;
      rep.verdict("72 candidates per arc", all72);
      d["candidates_per_arc"] = p.candidates;
      rep.expect("families", 0, p.families);
      rep.count("backtrack_nodes", p.backtrack_nodes);
      PlaneCatalogue cat(g.cocycle()->form(), 3);
      json arcs = json::array();
      for (const auto& a : p.arcs) arcs.push_back(plane_keys(cat, a));
      d["arcs"] = arcs;
    } else {
      if (seed_size == 6)
        rep.expect("seeds", 1402, p.seeds.size());
      else
        rep.count("seeds", p.seeds.size());
      rep.expect("extensions", 0, p.arcs.size());
    }
    rep.count("raw_completions", p.raw);
    rep.count("seed_nodes", p.seed_nodes);
    rep.verdict("outputs revalidated", p.revalidated);
  } else if (tid == Order512Id::g210b) {
    rep.input("trials", trials);
    json runs = json::array();
    for (int s = 1; s <= trials; ++s) {
      const ThirdChoiceCounts r = lemma53_counts(g, static_cast<std::uint64_t>(s));
      const std::string k = "trial" + std::to_string(s) + "_";
      rep.expect(k + "pool", 784, r.pool);
      rep.expect(k + "third_choices_with_0", 112, r.distribution.count(0) ? r.distribution.at(0) : 0);
      rep.expect(k + "third_choices_with_48", 672, r.distribution.count(48) ? r.distribution.at(48) : 0);
      rep.expect(k + "distinct_fourth_pool_sizes", 2, r.distribution.size());
      rep.expect(k + "size6_families", 0, r.size6);
      json dist = json::object();
      for (auto [size, n] : r.distribution) dist[std::to_string(size)] = n;
      runs.push_back({{"u1", r.u1}, {"u2", r.u2}, {"distribution", dist}, {"deepest", r.deepest}});
    }
    d["trials"] = runs;
  } else {
    rep.expect("isometry_order", 394813440u, matrix_group_order(isometry_generators(g.cocycle()->form()), 8));
    const MinusObstruction m = minus_type_obstruction(g, threads);
    rep.expect("centre_order", 2, m.centre_order);
    rep.count("planes", m.planes);
    rep.count("candidates", m.candidates);
    rep.expect("centraliser_matches", m.candidates, m.centraliser_matches);
    rep.count("disjoint_plane_pairs", m.disjoint_pairs);
    rep.expect("perp_meets", 0, m.perp_meets);
    rep.count("u0_orbits", m.u0_orbits);
    rep.count("searches", m.searches);
    rep.expect("families", 0, m.families);
    rep.count("backtrack_nodes", m.nodes);
    d["deepest"] = m.deepest;
  }
  return rep.finish();
}

// ---- classify -------------------------------------------------------------------------

json cmd_classify(int order) {
  RunReport rep("classify");
  rep.input("order", order);
  if (order != 8 && order != 27) throw InputError("classify: order must be 8 or 27");
  const auto groups = small_groups(static_cast<std::size_t>(order));
  json per = json::array();
  std::size_t admitting = 0;
  for (const Group& g : groups) {
    const BruteForceResult bf = brute_force_as_configs(g);
    bool valid = true;
    for (std::size_t k = 0; k < bf.configs.size(); ++k) valid = valid && check_as_axioms(bf.configuration(g, k)).ok();
    per.push_back({{"group", g.name()}, {"configurations", bf.configs.size()}, {"families", bf.unordered_families()}});
    rep.verdict("configurations of " + g.name() + " revalidated", valid);
    if (!bf.configs.empty()) ++admitting;
    const bool expected_nonempty = order == 8 ? (g.is_abelian() && exponent(g) == 2) : g.kind() == Group::Kind::heisenberg;
    rep.verdict(g.name() + (expected_nonempty ? " admits configurations" : " admits none"), expected_nonempty == !bf.configs.empty());
    if (expected_nonempty && order == 8) rep.expect("families_" + g.name(), 7, bf.unordered_families());
    if (expected_nonempty && order == 27) rep.count("families_" + g.name(), bf.unordered_families());
  }
  rep.count("groups", groups.size());
  rep.expect("groups_admitting", 1, admitting);
  rep.details()["groups"] = per;
  return rep.finish();
}

// ---- filters --------------------------------------------------------------------------

json cmd_filters(const std::string& group_arg) {
  RunReport rep("filters");
  rep.input("group", group_arg);
  const Group g = load_group(group_arg);
  const std::size_t q = cube_root(g.order());
  if (!q) throw InputError("filters: group order is not a cube");
  const FilterReport f = structural_filter(g);
  rep.count("q", q);
  rep.count("frattini_order", f.frattini_order);
  rep.verdict("frattini order at most q", f.frattini_small);
  if (g.prime() == 2) {
    rep.verdict("sufficient condition", f.sufficient.result || f.abelian,
                f.abelian ? "abelian bypass (the check itself returns false)" : "");
    rep.count("u0_candidates_tested", f.sufficient.candidates_tested);
    rep.verdict("no extraspecial image of order 8 or 32", !f.extraspecial.has_value(),
                f.extraspecial ? "G/N of order " + std::to_string(f.extraspecial->quotient_order) : "",
                f.extraspecial ? minimal_generators(f.extraspecial->n) : std::vector<Elem>{});
  }
  const EnoughSubgroupsResult e = enough_subgroups(g, q);
  rep.verdict("enough non-normal subgroups", e.ok, e.abelian_bypass ? "abelian bypass" : "");
  rep.count("good_subgroups", e.subgroups);
  rep.count("good_subgroup_classes", e.classes);
  const CliqueResult c = clique_size_qplus1(g, q);
  rep.verdict("clique of size q+1", c.found, c.abelian_bypass ? "abelian bypass" : "");
  rep.count("clique_nodes", c.nodes);
  rep.details()["abelian"] = f.abelian;
  if (f.sufficient.u0) rep.details()["u0"] = minimal_generators(*f.sufficient.u0);
  return rep.finish();
}

// ---- pseudoarcs -----------------------------------------------------------------------

json cmd_pseudoarcs(const std::string& form_arg, std::size_t seed_size, std::size_t target, unsigned threads) {
  RunReport rep("pseudoarcs");
  rep.input("form", form_arg);
  rep.input("seed_size", seed_size);
  rep.input("target", target);
  const QuadraticForm form = parse_input([&] {
    if (std::filesystem::exists(form_arg)) return parse_form(read_file(form_arg));
    return form_preset(form_arg);
  });
  if (target < seed_size) throw InputError("pseudoarcs: target must be at least the seed size");
  const ArcPipeline p = arc_pipeline(form, seed_size, target, threads);
  rep.count("planes", p.planes);
  rep.count("isometry_order", p.isometry_order);
  rep.count("seeds", p.seeds.size());
  rep.count("seed_nodes", p.seed_nodes);
  rep.count("raw_completions", p.raw);
  rep.count("arcs", p.arcs.size());
  rep.verdict("outputs revalidated", p.revalidated);
  PlaneCatalogue cat(form, 3);
  json arcs = json::array();
  for (const auto& a : p.arcs) arcs.push_back(plane_keys(cat, a));
  rep.details()["arcs"] = arcs;
  return rep.finish();
}

// ---- demo -----------------------------------------------------------------------------

json cmd_demo(const std::string& name) {
  RunReport rep("demo");
  rep.input("name", name);
  if (name == "w3q-3") {
    const Group g = Group::from_heisenberg(HeisenbergGroup(3));
    const BruteForceResult bf = brute_force_as_configs(g);
    if (bf.configs.empty()) {
      rep.verdict("configuration found", false);
      return rep.finish();
    }
    const ASConfiguration cfg = bf.configuration(g, 0);
    rep.details()["configuration"] = format_configuration(cfg);
    add_verify(rep, cfg, true, {});
    const VerifyReport v = verify_configuration(cfg, true);
    if (v.as_geometry && v.kantor_geometry) {
      rep.verdict("as quadrangle srg(27,10,1,5)", v.as_geometry->srg == SrgParams{27, 10, 1, 5});
      rep.verdict("kantor quadrangle srg(40,12,2,4)", v.kantor_geometry->srg == SrgParams{40, 12, 2, 4});
      rep.verdict("all 40 points regular", v.regular_points == 40);
    }
  } else if (name == "as35") {
    const Group g = elementary_abelian(2, 6);
    const ASConfiguration cfg = as35_configuration(g);
    rep.details()["configuration"] = format_configuration(cfg);
    add_verify(rep, cfg, false, {});
    const VerifyReport v = verify_configuration(cfg);
    if (v.as_geometry) rep.verdict("64 points and 96 lines", v.as_geometry->points == 64 && v.as_geometry->lines == 96);
  } else if (name == "field-reduction") {
    const FieldReductionReport f = field_reduction_demo();
    rep.expect("planes", 9, f.planes);
    rep.verdict("totally singular planes", f.singular);
    rep.verdict("pseudo-arc", f.pseudo_arc);
    rep.expect("radical_dim", 2, f.radical_dim);
    rep.verdict("planes meet the radical trivially", f.radical_meets_trivial);
    rep.expect("equivalent_scalings", 7, f.equivalent_gammas);
    rep.verdict("induced form equivalent to deg-c4", f.equivalent_to_deg_c4);
    const FieldReductionArc arc = field_reduction_arc();
    json planes = json::array();
    for (const auto& p : arc.planes8) planes.push_back(to_string(p));
    rep.details()["planes"] = planes;
  } else {
    throw InputError("demo: unknown name '" + name + "' (expected w3q-3, as35 or field-reduction)");
  }
  return rep.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search and verification tools for AS-configurations and the quadrangles they define"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  int threads_opt = 0;
  std::string json_path;
  bool quiet = false;
  app.add_option("--threads", threads_opt, "worker threads (default: ASQ_THREADS or all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--json", json_path, "write the JSON report to this path ('-' for stdout)");
  app.add_flag("--quiet", quiet, "no text output");

  std::string group_file, config_file, incidence, ruleout_id, filter_group, form, demo_name;
  bool all_points = false;
  int order = 0, trials = 3;
  std::size_t seed_size = 6, target = 9;

  auto* verify = app.add_subcommand("verify", "check a configuration and build its quadrangles");
  verify->add_option("group", group_file, "group file or built-in id")->required();
  verify->add_option("config", config_file, "configuration file")->required()->check(CLI::ExistingFile);
  verify->add_flag("--all-points", all_points, "test regularity of every point of the Kantor quadrangle");
  verify->add_option("--incidence", incidence, "write incidence lists to <prefix>.as.txt and <prefix>.kantor.txt");

  auto* ruleout = app.add_subcommand("ruleout", "run the exclusion pipeline for one of the four groups of order 512");
  ruleout->add_option("id", ruleout_id, "208a, 210b, 211p or 212m")->required();
  ruleout->add_option("--seed-size", seed_size, "size of partial arcs enumerated up to isometry")->check(CLI::Range(1, 9));
  ruleout->add_option("--trials", trials, "random (U1, U2) choices for 210b")->check(CLI::Range(1, 100));

  auto* classify = app.add_subcommand("classify", "all configurations in every group of order 8 or 27");
  classify->add_option("order", order, "8 or 27")->required();

  auto* filters = app.add_subcommand("filters", "structural filters on a group of order q^3");
  filters->add_option("group", filter_group, "group file or built-in id")->required();

  auto* arcs = app.add_subcommand("pseudoarcs", "partial pseudo-arcs of totally singular planes up to isometry");
  arcs->add_option("form", form, "form file or preset (plus8, minus8, deg-hyp6, deg-c4)")->required();
  arcs->add_option("--seed-size", seed_size, "seed size")->check(CLI::Range(1, 9));
  arcs->add_option("--target", target, "arc size")->check(CLI::Range(1, 16));

  auto* demo = app.add_subcommand("demo", "build and verify a classical example");
  demo->add_option("name", demo_name, "w3q-3, as35 or field-reduction")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const unsigned threads = resolve_threads(threads_opt);
    json out;
    if (*verify)
      out = cmd_verify(group_file, config_file, all_points, incidence);
    else if (*ruleout)
      out = cmd_ruleout(ruleout_id, threads, seed_size, trials);
    else if (*classify)
      out = cmd_classify(order);
    else if (*filters)
      out = cmd_filters(filter_group);
    else if (*arcs)
      out = cmd_pseudoarcs(form, seed_size, target, threads);
    else
      out = cmd_demo(demo_name);
    if (!quiet && json_path != "-") print_text(out, std::cout);
    if (json_path == "-") {
      std::cout << out.dump(2) << "\n";
    } else if (!json_path.empty()) {
      std::ofstream f(json_path);
      if (!f) throw InputError("cannot write '" + json_path + "'");
      f << out.dump(2) << "\n";
    }
    return out["ok"].get<bool>() ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "asq: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "asq: internal error: " << e.what() << "\n";
    return 1;
  }
}
