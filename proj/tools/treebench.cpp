// treebench: exact workbench for trees presented as marked graphs of groups.
//
// Subcommands: validate, lengths, reduce, moves, primes, gcd, lcm,
// compat-verify, compat-falsify, ball, cylinders, tc, acyl, idem,
// report-verify.  Every run prints a reproducible JSON report on stdout;
// exit 0 = pass/computed, 1 = property violation found (with certificate),
// 2 = input error.

#include <treebench/arith.hpp>
#include <treebench/ball.hpp>
#include <treebench/cylinders.hpp>
#include <treebench/moves.hpp>
#include <treebench/report.hpp>
#include <treebench/validate.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace treebench;

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::int64_t max_ball_vertices = 1000000;
  std::int64_t interior_margin = 1;
  int threads = 1;
  bool timing = false;
  std::string out;
};

struct Run {
  RunReport report;
  int exit_code = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json load_input(RunReport& report, const std::string& path) {
  std::string bytes = slurp(path);
  report.inputs[path] = content_hash(bytes);
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const std::exception& ex) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + ex.what());
  }
  return j;
}

TreeHandle load_handle_doc(RunReport& report, const std::string& path) {
  auto j = load_input(report, path);
  if (document_kind(j) != "handle")
    throw std::invalid_argument(path + ": expected a handle document");
  return handle_from_json(j);
}

BallTree load_ball_doc(RunReport& report, const std::string& ball_path,
                       const std::string& table_path) {
  auto j = load_input(report, ball_path);
  if (document_kind(j) != "ball")
    throw std::invalid_argument(ball_path + ": expected a ball document");
  BallTree b = ball_from_json(j);
  if (!table_path.empty()) {
    auto jt = load_input(report, table_path);
    if (document_kind(jt) != "table")
      throw std::invalid_argument(table_path + ": expected a table document");
    b.table = table_from_json(jt);
  }
  if (!b.table) throw std::invalid_argument("no subgroup table: embed one or pass --table");
  return b;
}

std::vector<PathWord> load_word_list(RunReport& report, const std::string& path) {
  auto j = load_input(report, path);
  std::vector<PathWord> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(word_from_json(item));
  } else {
    out.push_back(word_from_json(j));
  }
  return out;
}

/// A length evaluator argument: a handle document, an evaluator document,
/// or the literal name "const1".
struct EvaluatorSlot {
  std::string name;
  std::unique_ptr<TreeHandle> handle;
  std::unique_ptr<HandleIndex> index;
  bool const1 = false;
};

EvaluatorSlot parse_evaluator(RunReport& report, const std::string& arg) {
  EvaluatorSlot slot;
  if (arg == "const1") {
    slot.name = "const1";
    slot.const1 = true;
    return slot;
  }
  auto j = load_input(report, arg);
  auto kind = document_kind(j);
  if (kind == "evaluator") {
    auto type = j.at("type").get<std::string>();
    if (type != "const1") throw std::invalid_argument("unknown evaluator type: " + type);
    slot.name = "const1";
    slot.const1 = true;
    return slot;
  }
  if (kind == "handle") {
    slot.name = arg;
    slot.handle = std::make_unique<TreeHandle>(handle_from_json(j));
    slot.index = std::make_unique<HandleIndex>(*slot.handle);
    return slot;
  }
  throw std::invalid_argument(arg + ": expected handle or evaluator document");
}

LengthEvaluator make_evaluator(const EvaluatorSlot& slot, const GraphIndex& gi) {
  if (slot.const1) return const_one_evaluator(gi);
  return handle_evaluator(slot.name, *slot.index);
}

Json handle_doc(const TreeHandle& h) { return to_json(h); }

Json word_doc(const PathWord& w) { return to_json(w, false); }

Json domination_json(const DominationReport& r) {
  Json j;
  j["dominates"] = r.dominates;
  if (r.witness) j["witness"] = word_doc(*r.witness);
  if (r.component) j["component"] = *r.component;
  return j;
}

Run cmd_validate(const Options&, const std::string& in, const std::string& graph) {
  Run run;
  run.report.command = "validate";
  ValidationReport vr;
  try {
    auto j = load_input(run.report, in);
    auto kind = document_kind(j);
    if (kind == "gbs") {
      vr = validate(gbs_from_json(j));
    } else if (kind == "word") {
      if (graph.empty()) throw std::invalid_argument("word validation needs --graph");
      auto g = gbs_from_json(load_input(run.report, graph));
      vr = validate(word_from_json(j), g);
    } else if (kind == "handle") {
      vr = validate(handle_from_json(j));
    } else if (kind == "table") {
      vr = validate(table_from_json(j));
    } else if (kind == "ball") {
      std::optional<SubgroupTable> ext;
      if (!graph.empty()) ext = table_from_json(load_input(run.report, graph));
      vr = validate(ball_from_json(j), ext ? &*ext : nullptr);
    } else {
      throw std::invalid_argument("unknown document kind: " + kind);
    }
  } catch (const std::invalid_argument& ex) {
    vr.fail("document", ex.what());
  }
  run.report.verdicts = to_json(vr);
  run.exit_code = vr.ok ? 0 : 1;
  return run;
}

Run cmd_lengths(const Options&, const std::string& tree, const std::string& word,
                const std::string& words) {
  Run run;
  run.report.command = "lengths";
  auto h = load_handle_doc(run.report, tree);
  HandleIndex hi(h);
  if (!word.empty()) {
    auto j = load_input(run.report, word);
    PathWord w = word_from_json(j);
    auto vr = validate(w, h.master);
    if (!vr.ok) throw std::invalid_argument(word + ": " + vr.violations.front().message);
    run.report.verdicts["length"] = big_to_json(translation_length(w, hi));
  }
  if (!words.empty()) {
    Json lens = Json::array();
    for (const auto& w : load_word_list(run.report, words))
      lens.push_back(big_to_json(translation_length(w, hi)));
    run.report.verdicts["lengths"] = std::move(lens);
  }
  return run;
}

Run cmd_reduce(const Options&, const std::string& graph, const std::string& word, bool cyclic) {
  Run run;
  run.report.command = "reduce";
  auto g = gbs_from_json(load_input(run.report, graph));
  auto w = word_from_json(load_input(run.report, word));
  auto vr = validate(w, g);
  if (!vr.ok) throw std::invalid_argument(word + ": " + vr.violations.front().message);
  GraphIndex gi(g);
  auto rf = britton_reduce(w, gi, cyclic);
  run.report.verdicts["word"] = word_doc(rf.word);
  run.report.verdicts["is_cyclically_reduced"] = rf.is_cyclically_reduced;
  run.report.verdicts["conjugator"] = word_doc(rf.conjugator);
  Json core;
  core["base_exp"] = big_to_json(rf.core_base_exp);
  Json steps = Json::array();
  for (const auto& s : rf.core_syllables) {
    Json js;
    js["edge"] = s.edge;
    js["dir"] = s.dir;
    js["exp"] = big_to_json(s.exp);
    steps.push_back(std::move(js));
  }
  core["syllables"] = std::move(steps);
  core["vertex"] = rf.core_vertex;
  run.report.verdicts["core"] = std::move(core);
  return run;
}

Run cmd_moves(const Options&, const std::string& tree, const std::string& apply,
              bool check_reduced, const std::string& dominates_path,
              const std::string& same_space_path, const std::string& marking,
              const std::string& from, const std::string& to, const std::string& small_dom,
              const std::string& small_flags) {
  Run run;
  run.report.command = "moves";
  if (!marking.empty()) {
    auto a = gbs_from_json(load_input(run.report, from));
    auto b = gbs_from_json(load_input(run.report, to));
    GraphIndex ga(a), gb(b);
    Dictionary dict;
    for (const auto& [key, val] : load_input(run.report, marking).items())
      dict[key] = word_from_json(val);
    auto mr = verify_marking(dict, ga, gb);
    run.report.verdicts["marking_ok"] = mr.ok;
    run.report.verdicts["failures"] = mr.failures;
    run.report.verdicts["surjectivity_checked"] = mr.surjectivity_checked;
    run.exit_code = mr.ok ? 0 : 1;
    return run;
  }
  auto h = load_handle_doc(run.report, tree);
  if (!apply.empty()) {
    auto m = move_from_json(load_input(run.report, apply));
    auto out = apply_move(h, m);
    run.report.verdicts["handle"] = handle_doc(out);
    return run;
  }
  HandleIndex hi(h);
  if (check_reduced) {
    auto r = is_reduced(hi);
    run.report.verdicts["reduced"] = r.reduced;
    if (r.witness) {
      Json w;
      w["edge"] = r.witness->edge;
      w["side"] = edge_end_name(r.witness->side);
      run.report.verdicts["witness"] = std::move(w);
    }
    return run;
  }
  if (!dominates_path.empty()) {
    auto other = load_handle_doc(run.report, dominates_path);
    if (!same_master(h, other))
      throw std::invalid_argument("dominates requires a common master (or a verified marking)");
    HandleIndex oi(other);
    run.report.verdicts["domination"] = domination_json(dominates(hi, oi));
    return run;
  }
  if (!same_space_path.empty()) {
    auto other = load_handle_doc(run.report, same_space_path);
    if (!same_master(h, other))
      throw std::invalid_argument("same-space requires a common master (or a verified marking)");
    HandleIndex oi(other);
    run.report.verdicts["same_deformation_space"] = same_deformation_space(hi, oi);
    return run;
  }
  if (!small_dom.empty()) {
    auto tstar = load_handle_doc(run.report, small_dom);
    if (!same_master(h, tstar))
      throw std::invalid_argument("small-dom requires a common master");
    HandleIndex si(tstar);
    std::map<std::string, bool> flags;
    if (!small_flags.empty())
      for (const auto& [key, val] : load_input(run.report, small_flags).items())
        flags[key] = val.get<bool>();
    auto r = verify_small_domination(hi, si, flags);
    Json j;
    j["dominates"] = domination_json(r.domination);
    j["edge_groups_elliptic"] = r.edge_groups_elliptic;
    j["hyperbolic_edge_groups"] = r.hyperbolic_edge_groups;
    Json rows = Json::array();
    for (const auto& ne : r.vertex_groups_not_elliptic) {
      Json row;
      row["component"] = ne.component_anchor;
      row["flagged_small"] = ne.flagged_small;
      rows.push_back(std::move(row));
    }
    j["vertex_groups_not_elliptic"] = std::move(rows);
    run.report.verdicts["small_domination"] = std::move(j);
    return run;
  }
  throw std::invalid_argument("moves: nothing to do (see --help)");
}

Run cmd_primes(const Options&, const std::string& tree) {
  Run run;
  run.report.command = "primes";
  auto h = load_handle_doc(run.report, tree);
  Json factors = Json::array();
  for (const auto& f : prime_factors(h)) {
    Json j;
    j["source_edge"] = f.source_edge;
    j["handle"] = handle_doc(f.handle);
    factors.push_back(std::move(j));
  }
  run.report.verdicts["factors"] = std::move(factors);
  return run;
}

Run cmd_gcd_lcm(const Options& opt, bool is_lcm, const std::string& t1, const std::string& t2,
                const std::vector<std::string>& family, const std::string& marking,
                const std::string& words) {
  Run run;
  run.report.command = is_lcm ? "lcm" : "gcd";
  if (!family.empty()) {
    std::vector<TreeHandle> hs;
    for (const auto& p : family) hs.push_back(load_handle_doc(run.report, p));
    run.report.verdicts["handle"] = handle_doc(lcm_family(hs));
    return run;
  }
  auto a = load_handle_doc(run.report, t1);
  auto b = load_handle_doc(run.report, t2);
  if (is_lcm) {
    auto l = lcm_handles(a, b);
    run.report.verdicts["handle"] = handle_doc(l.handle);
    run.report.verdicts["redundant_vertices"] = l.redundant_vertices;
    return run;
  }
  if (!marking.empty()) {
    Dictionary dict;
    for (const auto& [key, val] : load_input(run.report, marking).items())
      dict[key] = word_from_json(val);
    std::vector<PathWord> regression;
    if (!words.empty()) {
      regression = load_word_list(run.report, words);
    } else {
      GraphIndex gi(a.master);
      WordSampler ws(gi);
      Rng rng(opt.seed);
      for (int i = 0; i < 200; ++i) regression.push_back(ws.sample(rng));
    }
    auto r = gcd_handles_marked(a, b, dict, regression);
    run.report.verdicts["handle"] = handle_doc(r.handle);
    run.report.verdicts["semi_decided"] = r.semi_decided;
    Json matches = Json::array();
    for (const auto& [ea, eb] : r.matches) {
      Json jm;
      jm["t1_edge"] = ea;
      jm["t2_edge"] = eb;
      matches.push_back(std::move(jm));
    }
    run.report.verdicts["matches"] = std::move(matches);
    return run;
  }
  run.report.verdicts["handle"] = handle_doc(gcd_handles(a, b));
  return run;
}

Run cmd_compat_verify(const Options&, const std::string& t1, const std::string& t2,
                      const std::string& that) {
  Run run;
  run.report.command = "compat-verify";
  auto a = load_handle_doc(run.report, t1);
  auto b = load_handle_doc(run.report, t2);
  auto c = load_handle_doc(run.report, that);
  auto r = compat_verify(a, b, c);
  run.report.verdicts = to_json(r);
  return run;
}

Run cmd_compat_falsify(const Options& opt, const std::string& l1, const std::string& l2,
                       std::int64_t budget, const std::string& graph) {
  Run run;
  run.report.command = "compat-falsify";
  auto s1 = parse_evaluator(run.report, l1);
  auto s2 = parse_evaluator(run.report, l2);
  const GbsGraph* g = nullptr;
  GbsGraph external;
  if (s1.handle) {
    g = &s1.handle->master;
  } else if (s2.handle) {
    g = &s2.handle->master;
  } else if (!graph.empty()) {
    external = gbs_from_json(load_input(run.report, graph));
    g = &external;
  } else {
    throw std::invalid_argument("compat-falsify needs at least one handle (or --graph)");
  }
  GraphIndex gi(*g);
  auto e1 = make_evaluator(s1, gi);
  auto e2 = make_evaluator(s2, gi);
  auto r = compat_falsify(e1, e2, gi, budget, opt.seed, opt.threads);
  run.report.verdicts = to_json(r);
  run.report.verdicts.erase("certificate");
  if (r.certificate) run.report.certificates = to_json(*r.certificate);
  run.exit_code = r.verdict == CompatVerdict::Incompatible ? 1 : 0;
  return run;
}

Run cmd_ball(const Options& opt, const std::string& tree, const std::string& center,
             std::int64_t radius) {
  Run run;
  run.report.command = "ball";
  auto h = load_handle_doc(run.report, tree);
  HandleIndex hi(h);
  std::string c = center.empty() ? h.master.base : center;
  auto eb = expand_ball(hi, c, radius, static_cast<std::size_t>(opt.max_ball_vertices));
  run.report.verdicts["ball"] = to_json(eb.ball);
  run.report.verdicts["vertices"] = eb.vertex_count();
  return run;
}

Run cmd_cylinders(const Options& opt, const std::string& ball, const std::string& table) {
  Run run;
  run.report.command = "cylinders";
  auto b = load_ball_doc(run.report, ball, table);
  BallIndex bi(b, nullptr);
  auto adm = check_admissibility(bi, opt.interior_margin);
  Json ja;
  ja["ok"] = adm.ok;
  ja["violations"] = adm.violations;
  ja["unchecked"] = adm.unchecked;
  ja["margin"] = adm.margin;
  run.report.verdicts["admissibility"] = std::move(ja);
  if (!adm.ok) {
    run.exit_code = 2;  // input rejected as non-admissible data
    return run;
  }
  auto cyl = compute_cylinders(bi);
  Json jc = Json::array();
  for (const auto& c : cyl.cylinders) {
    Json j;
    j["id"] = c.id;
    j["class"] = c.class_id;
    j["stab"] = c.stab;
    j["edges"] = c.edges;
    j["vertices"] = c.vertices;
    jc.push_back(std::move(j));
  }
  run.report.verdicts["cylinders"] = std::move(jc);
  run.report.verdicts["ok"] = cyl.ok;
  run.report.verdicts["violations"] = cyl.violations;
  if (!cyl.ok) run.exit_code = 2;
  return run;
}

Run cmd_tc(const Options& opt, const std::string& ball, const std::string& table) {
  Run run;
  run.report.command = "tc";
  auto b = load_ball_doc(run.report, ball, table);
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  if (!cyl.ok) {
    run.report.verdicts["violations"] = cyl.violations;
    run.exit_code = 2;
    return run;
  }
  auto tc = build_tree_of_cylinders(bi, cyl, opt.interior_margin);
  auto tcs = collapse_star(tc, bi.table());
  run.report.verdicts["tc"] = to_json(tc.tree);
  run.report.verdicts["tc_star"] = to_json(tcs.tree);
  run.report.verdicts["degenerate"] = tc.degenerate;
  run.report.verdicts["notes"] = tc.notes;
  return run;
}

Run cmd_acyl(const Options& opt, const std::string& ball, const std::string& table,
             std::int64_t k, std::int64_t c) {
  Run run;
  run.report.command = "acyl";
  auto b = load_ball_doc(run.report, ball, table);
  BallIndex bi(b, nullptr);
  auto r = check_acylindricity(bi, k, BigInt(c), opt.interior_margin);
  run.report.verdicts["pass"] = r.pass;
  run.report.verdicts["paths_checked"] = r.paths_checked;
  run.report.verdicts["witnesses"] = r.witnesses;
  run.exit_code = r.pass ? 0 : 1;
  return run;
}

Run cmd_idem(const Options& opt, const std::string& ball, const std::string& table) {
  Run run;
  run.report.command = "idem";
  auto b = load_ball_doc(run.report, ball, table);
  BallIndex bi(b, nullptr);
  auto r = check_idempotence(bi, opt.interior_margin);
  run.report.verdicts["pass"] = r.pass;
  run.report.verdicts["degenerate"] = r.degenerate;
  run.report.verdicts["mismatches"] = r.mismatches;
  if (r.required_interior_radius > 0)
    run.report.verdicts["required_interior_radius"] = r.required_interior_radius;
  run.exit_code = r.pass ? 0 : 1;
  return run;
}

Run cmd_report_verify(const Options&, const std::string& report_path, const std::string& l1,
                      const std::string& l2, const std::string& graph) {
  Run run;
  run.report.command = "report-verify";
  auto j = load_input(run.report, report_path);
  if (!j.count("certificates") || j.at("certificates").is_null()) {
    run.report.verdicts["nothing_to_verify"] = true;
    return run;
  }
  auto cert = certificate_from_json(j.at("certificates"));
  auto s1 = parse_evaluator(run.report, l1);
  auto s2 = parse_evaluator(run.report, l2);
  const GbsGraph* g = nullptr;
  GbsGraph external;
  if (s1.handle) {
    g = &s1.handle->master;
  } else if (s2.handle) {
    g = &s2.handle->master;
  } else if (!graph.empty()) {
    external = gbs_from_json(load_input(run.report, graph));
    g = &external;
  } else {
    throw std::invalid_argument("report-verify needs at least one handle (or --graph)");
  }
  GraphIndex gi(*g);
  auto e1 = make_evaluator(s1, gi);
  auto e2 = make_evaluator(s2, gi);
  bool ok = verify_certificate(cert, e1, e2);
  run.report.verdicts["certificate_valid"] = ok;
  run.exit_code = ok ? 0 : 1;
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treebench: exact workbench for trees of marked graphs of groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--seed", opt.seed, "PRNG seed (default 0)");
  app.add_option("--max-ball-vertices", opt.max_ball_vertices, "ball vertex cap");
  app.add_option("--interior-margin", opt.interior_margin, "trust margin for ball checks");
  app.add_option("--threads", opt.threads, "worker threads (results are schedule-independent)");
  app.add_flag("--timing", opt.timing, "include wall time in the report");
  app.add_option("--out", opt.out, "also write the main output document to a file");

  std::string in, graph, tree, word, words, apply, dom, same, marking, from, to, small_dom,
      small_flags, t1, t2, that, l1, l2, ball, table, report_path, center;
  std::vector<std::string> family;
  std::int64_t radius = 0, budget = 5000, k = 2, c = 1;
  bool cyclic = false, check_reduced = false;

  auto* v = app.add_subcommand("validate", "validate a document");
  v->add_option("--in", in)->required();
  v->add_option("--graph", graph, "graph (for words) or table (for balls)");

  auto* len = app.add_subcommand("lengths", "translation lengths in a handle's tree");
  len->add_option("--tree", tree)->required();
  len->add_option("--word", word);
  len->add_option("--words", words);

  auto* red = app.add_subcommand("reduce", "Britton reduction");
  red->add_option("--graph", graph)->required();
  red->add_option("--word", word)->required();
  red->add_flag("--cyclic", cyclic);

  auto* mv = app.add_subcommand("moves", "moves, reducedness, domination, markings");
  mv->add_option("--tree", tree);
  mv->add_option("--apply", apply);
  mv->add_flag("--is-reduced", check_reduced);
  mv->add_option("--dominates", dom);
  mv->add_option("--same-space", same);
  mv->add_option("--verify-marking", marking);
  mv->add_option("--from", from);
  mv->add_option("--to", to);
  mv->add_option("--small-dom", small_dom);
  mv->add_option("--small-flags", small_flags);

  auto* pr = app.add_subcommand("primes", "prime factors of a handle");
  pr->add_option("--tree", tree)->required();

  auto* gc = app.add_subcommand("gcd", "gcd of two handles");
  gc->add_option("--t1", t1)->required();
  gc->add_option("--t2", t2)->required();
  gc->add_option("--marking", marking, "verified marking for cross-master gcd (semi-decision)");
  gc->add_option("--words", words, "regression word list for factor matching");

  auto* lc = app.add_subcommand("lcm", "lcm of handles");
  lc->add_option("--t1", t1);
  lc->add_option("--t2", t2);
  lc->add_option("--family", family);

  auto* cv = app.add_subcommand("compat-verify", "verify a common refinement");
  cv->add_option("--t1", t1)->required();
  cv->add_option("--t2", t2)->required();
  cv->add_option("--that", that)->required();

  auto* cf = app.add_subcommand("compat-falsify", "search for a length-function violation");
  cf->add_option("--l1", l1)->required();
  cf->add_option("--l2", l2)->required();
  cf->add_option("--budget", budget);
  cf->add_option("--graph", graph);

  auto* bl = app.add_subcommand("ball", "expand a ball of the handle's tree");
  bl->add_option("--tree", tree)->required();
  bl->add_option("--center", center);
  bl->add_option("--radius", radius)->required();

  auto* cy = app.add_subcommand("cylinders", "admissibility and cylinder decomposition");
  cy->add_option("--ball", ball)->required();
  cy->add_option("--table", table);

  auto* tcc = app.add_subcommand("tc", "tree of cylinders and its collapse");
  tcc->add_option("--ball", ball)->required();
  tcc->add_option("--table", table);

  auto* ac = app.add_subcommand("acyl", "acylindricity certification");
  ac->add_option("--ball", ball)->required();
  ac->add_option("--table", table);
  ac->add_option("--k", k);
  ac->add_option("--c", c);

  auto* id = app.add_subcommand("idem", "idempotence of the tree of cylinders");
  id->add_option("--ball", ball)->required();
  id->add_option("--table", table);

  auto* rv = app.add_subcommand("report-verify", "re-check a shipped certificate");
  rv->add_option("--report", report_path)->required();
  rv->add_option("--l1", l1);
  rv->add_option("--l2", l2);
  rv->add_option("--graph", graph);

  CLI11_PARSE(app, argc, argv);

  auto started = std::chrono::steady_clock::now();
  Run run;
  try {
    if (v->parsed()) run = cmd_validate(opt, in, graph);
    else if (len->parsed()) run = cmd_lengths(opt, tree, word, words);
    else if (red->parsed()) run = cmd_reduce(opt, graph, word, cyclic);
    else if (mv->parsed())
      run = cmd_moves(opt, tree, apply, check_reduced, dom, same, marking, from, to, small_dom,
                      small_flags);
    else if (pr->parsed()) run = cmd_primes(opt, tree);
    else if (gc->parsed()) run = cmd_gcd_lcm(opt, false, t1, t2, {}, marking, words);
    else if (lc->parsed()) run = cmd_gcd_lcm(opt, true, t1, t2, family, "", "");
    else if (cv->parsed()) run = cmd_compat_verify(opt, t1, t2, that);
    else if (cf->parsed()) run = cmd_compat_falsify(opt, l1, l2, budget, graph);
    else if (bl->parsed()) run = cmd_ball(opt, tree, center, radius);
    else if (cy->parsed()) run = cmd_cylinders(opt, ball, table);
    else if (tcc->parsed()) run = cmd_tc(opt, ball, table);
    else if (ac->parsed()) run = cmd_acyl(opt, ball, table, k, c);
    else if (id->parsed()) run = cmd_idem(opt, ball, table);
    else if (rv->parsed()) run = cmd_report_verify(opt, report_path, l1, l2, graph);
  } catch (const ResourceLimitError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }

  run.report.seed = opt.seed;
  Json out = run.report.to_json();
  if (opt.timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    out["timing_ms"] = ms;
  }
  std::cout << canonical_dump(out);
  if (!opt.out.empty()) {
    // The main output document, when the subcommand produced one.
    for (const char* key : {"handle", "ball", "tc_star", "word"}) {
      if (run.report.verdicts.count(key)) {
        write_json_file(opt.out, run.report.verdicts.at(key));
        break;
      }
    }
  }
  return run.exit_code;
}
