// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line.  Run via ctest or directly:  ./acceptance_tests --success

#include <catch2/catch_amalgamated.hpp>

#include <treebench/arith.hpp>
#include <treebench/ball.hpp>
#include <treebench/cylinders.hpp>
#include <treebench/moves.hpp>
#include <treebench/report.hpp>

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace treebench;
using namespace testsupport;

namespace {

void report_line(int criterion, bool pass, const std::string& detail) {
  std::cout << "[criterion " << criterion << "] " << (pass ? "PASS" : "FAIL") << ": " << detail
            << "\n";
}

std::vector<std::string> corpus_files_of_kind(const std::string& kind) {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(TREEBENCH_CORPUS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    auto j = load_json_file(entry.path().string());
    if (j.is_object() && j.count("kind") && j.at("kind") == kind)
      out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct CliResult {
  std::string out;
  int exit_code = -1;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(TREEBENCH_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("criterion 1: engine/oracle equivalence on 200 seeded random cases") {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(20250);
  int done = 0, skipped = 0, mismatches = 0, uncertified = 0;
  while (done < 200) {
    auto g = random_gbs(rng, 5, 5);
    auto h = full_handle(g);
    HandleIndex hi(h);
    GraphIndex gi(g);
    WordSampler ws(gi, 12, 6);
    auto w = ws.sample(rng);
    BigInt engine = translation_length(w, hi);
    auto rf = britton_reduce(w, gi, false);
    std::int64_t n = static_cast<std::int64_t>(rf.word.syllables.size());
    std::int64_t radius = (n + 1) / 2;
    ExpandedBall eb;
    try {
      eb = expand_ball(hi, g.base, radius, 40000);
    } catch (const ResourceLimitError&) {
      ++skipped;  // ball too fat for the budget; resample
      continue;
    }
    auto md = min_displacement_in_ball(w, eb, hi);
    if (!md.certified) {
      ++uncertified;
      continue;
    }
    if (md.value != engine) ++mismatches;
    ++done;
  }
  auto secs = std::chrono::duration_cast<std::chrono::duration<double>>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  bool pass = mismatches == 0 && uncertified == 0 && secs < 60.0;
  report_line(1, pass,
              "200 cases, " + std::to_string(mismatches) + " mismatches, " +
                  std::to_string(skipped) + " resampled for ball budget, " +
                  std::to_string(secs).substr(0, 5) + " s");
  CHECK(mismatches == 0);
  CHECK(uncertified == 0);
  CHECK(secs < 60.0);
}

TEST_CASE("criterion 2: axis dichotomy on 100 certified hyperbolic pairs") {
  Rng rng(20251);
  int done = 0, exceptions = 0, disjoint_seen = 0, meeting_seen = 0;
  while (done < 100) {
    auto g = random_gbs(rng, 5, 5);
    auto h = full_handle(g);
    HandleIndex hi(h);
    GraphIndex gi(g);
    WordSampler ws(gi, 12, 6);
    auto a = ws.sample(rng);
    auto b = ws.sample(rng);
    BigInt la = translation_length(a, hi);
    BigInt lb = translation_length(b, hi);
    if (la == 0 || lb == 0) continue;
    auto ra = britton_reduce(a, gi, false);
    auto rb = britton_reduce(b, gi, false);
    std::int64_t n = static_cast<std::int64_t>(
        std::max(ra.word.syllables.size(), rb.word.syllables.size()));
    ExpandedBall eb;
    try {
      eb = expand_ball(hi, g.base, (n + 1) / 2, 40000);
    } catch (const ResourceLimitError&) {
      continue;
    }
    auto bd = bridge_distance(a, b, eb, hi);
    if (!bd.certified) continue;
    BigInt lab = translation_length(concat(a, b), hi);
    BigInt laib = translation_length(concat(inverse(a), b), hi);
    BigInt sum = la + lb;
    bool disjoint_branch = lab == laib && lab == sum + 2 * bd.value && bd.value > 0;
    bool meeting_branch = bd.value == 0 && (lab > laib ? lab : laib) == sum;
    if (disjoint_branch) ++disjoint_seen;
    if (meeting_branch) ++meeting_seen;
    if (disjoint_branch == meeting_branch) ++exceptions;  // exactly one must hold
    ++done;
  }
  bool pass = exceptions == 0 && disjoint_seen > 0 && meeting_seen > 0;
  report_line(2, pass,
              "100 certified pairs, " + std::to_string(exceptions) + " exceptions (" +
                  std::to_string(disjoint_seen) + " disjoint, " + std::to_string(meeting_seen) +
                  " meeting)");
  CHECK(exceptions == 0);
  CHECK(disjoint_seen > 0);
  CHECK(meeting_seen > 0);
}

TEST_CASE("criterion 3: Serre's Lemma on 200 elliptic pairs") {
  Rng rng(20252);
  int done = 0, exceptions = 0, disjoint_seen = 0;
  while (done < 200) {
    auto g = random_gbs(rng, 4, 4);
    auto h = full_handle(g);
    HandleIndex hi(h);
    GraphIndex gi(g);
    WordSampler ws(gi, 4, 3);
    auto a = ws.sample_elliptic(rng);
    auto b = ws.sample_elliptic(rng);
    auto ra = britton_reduce(a, gi, false);
    auto rb = britton_reduce(b, gi, false);
    std::int64_t n = static_cast<std::int64_t>(
        std::max(ra.word.syllables.size(), rb.word.syllables.size()));
    ExpandedBall eb;
    try {
      eb = expand_ball(hi, g.base, (n + 1) / 2, 40000);
    } catch (const ResourceLimitError&) {
      continue;
    }
    auto bd = bridge_distance(a, b, eb, hi);
    if (!bd.certified) continue;
    if (bd.value > 0) {
      ++disjoint_seen;
      if (translation_length(concat(a, b), hi) == 0) ++exceptions;
    }
    ++done;
  }
  bool pass = exceptions == 0 && disjoint_seen > 0;
  report_line(3, pass,
              "200 certified elliptic pairs, " + std::to_string(disjoint_seen) +
                  " with disjoint fixed sets, " + std::to_string(exceptions) + " exceptions");
  CHECK(exceptions == 0);
  CHECK(disjoint_seen > 0);
}

TEST_CASE("criterion 4: arithmetic identities on corpus masters over 500 words") {
  auto files = corpus_files_of_kind("gbs");
  REQUIRE_FALSE(files.empty());
  int violations = 0;
  for (const auto& path : files) {
    auto master = gbs_from_json(load_json_file(path));
    auto t = full_handle(master);
    HandleIndex ti(t);
    GraphIndex gi(master);

    // Deterministic 500-word regression set per master.
    WordSampler ws(gi, 12, 6);
    Rng rng(20253);
    std::vector<PathWord> words;
    for (int i = 0; i < 500; ++i) words.push_back(ws.sample(rng));

    auto factors = prime_factors(t);
    std::vector<HandleIndex> fis;
    for (const auto& f : factors) fis.emplace_back(f.handle);

    // Deterministic two-handle split for the lattice identity.
    TreeHandle t1 = t, t2 = t;
    int parity = 0;
    for (const auto& e : master.edges) {
      if (parity++ % 2 == 0) t1.kept.erase(e.id);
      else t2.kept.erase(e.id);
    }
    auto gcd = gcd_handles(t1, t2);
    auto lcm = lcm_handles(t1, t2).handle;
    HandleIndex i1(t1), i2(t2), ig(gcd), il(lcm);

    for (const auto& w : words) {
      BigInt sum = 0;
      for (const auto& fi : fis) sum += translation_length(w, fi);
      if (translation_length(w, ti) != sum) ++violations;
      if (translation_length(w, ig) + translation_length(w, il) !=
          translation_length(w, i1) + translation_length(w, i2))
        ++violations;
    }
    if (lcm_handles(t, t).handle.kept != t.kept) ++violations;
    std::vector<TreeHandle> fh;
    for (const auto& f : factors) fh.push_back(f.handle);
    if (!fh.empty() && lcm_family(fh).kept != t.kept) ++violations;
  }
  bool pass = violations == 0;
  report_line(4, pass,
              std::to_string(files.size()) + " corpus masters x 500 words, " +
                  std::to_string(violations) + " violations");
  CHECK(violations == 0);
}

TEST_CASE("criterion 5: falsifier soundness and effectiveness") {
  // Same-master pairs must stay unknown at budget 5000.
  int false_positives = 0;
  auto chain = load_gbs("gbs_chain3.json");
  auto loops = load_gbs("gbs_two_loops.json");
  std::vector<std::pair<TreeHandle, TreeHandle>> pairs;
  {
    auto t1 = load_handle("handle_chain3_12.json");
    auto t2 = load_handle("handle_chain3_23.json");
    pairs.emplace_back(t1, t2);
    auto full = full_handle(chain);
    pairs.emplace_back(full, t1);
    auto la = full_handle(loops);
    TreeHandle fa = la, fb = la;
    fa.kept = {"a"};
    fb.kept = {"b"};
    pairs.emplace_back(fa, fb);
    pairs.emplace_back(la, fa);
    auto b23 = full_handle(bs(2, 3));
    pairs.emplace_back(b23, b23);
  }
  for (const auto& [a, b] : pairs) {
    HandleIndex ia(a), ib(b);
    GraphIndex gi(a.master);
    auto r = compat_falsify(handle_evaluator("t1", ia), handle_evaluator("t2", ib), gi, 5000, 7);
    if (r.verdict != CompatVerdict::Unknown) ++false_positives;
  }

  // The shipped synthetic non-length function must be falsified at seed 7.
  auto b23 = full_handle(bs(2, 3));
  HandleIndex hi(b23);
  GraphIndex gi(b23.master);
  auto l1 = handle_evaluator("bs23", hi);
  auto l2 = const_one_evaluator(gi);
  auto r = compat_falsify(l1, l2, gi, 5000, 7);
  bool found = r.verdict == CompatVerdict::Incompatible && r.certificate.has_value();
  bool reverified = found && verify_certificate(*r.certificate, l1, l2);

  bool pass = false_positives == 0 && found && reverified;
  report_line(5, pass,
              std::to_string(pairs.size()) + " same-master pairs unknown, certificate found in " +
                  std::to_string(r.samples_used) + " samples and re-verified");
  CHECK(false_positives == 0);
  CHECK(found);
  CHECK(reverified);
}

TEST_CASE("criterion 6: figure-1 reproduction") {
  auto b = ball_from_json(load_json_file(corpus_path("figure1_ball.json")));
  b.table = table_from_json(load_json_file(corpus_path("figure1_table.json")));
  BallIndex bi(b, nullptr);

  int qh_vertices = 0;
  for (const auto& v : b.vertices) {
    const auto& d = bi.table().symbol(v.stab);
    if (d.order.infinite && !d.in_a) ++qh_vertices;
  }

  auto cyl = compute_cylinders(bi);
  REQUIRE(cyl.ok);
  auto tcs = collapse_star(build_tree_of_cylinders(bi, cyl), bi.table());

  // Star pattern: the vertex carrying "Z2" with the QH vertices as leaves.
  std::string center;
  for (const auto& v : tcs.tree.vertices)
    if (v.stab == "Z2") center = v.id;
  std::set<std::string> leaves;
  for (const auto& e : tcs.tree.edges) {
    if (e.from == center) leaves.insert(e.to);
    if (e.to == center) leaves.insert(e.from);
  }
  bool star_ok = !center.empty() && static_cast<int>(leaves.size()) == qh_vertices;
  for (const auto& leaf : leaves) {
    for (const auto& v : tcs.tree.vertices) {
      if (v.id != leaf) continue;
      if (bi.table().symbol(v.stab).in_a) star_ok = false;  // leaves are the QH vertices
    }
  }

  BallIndex ti(tcs.tree, nullptr);
  auto acyl = check_acylindricity(ti, 2, 1);
  auto idem = check_idempotence(bi);

  bool pass = star_ok && qh_vertices == 3 && acyl.pass && acyl.paths_checked > 0 && idem.pass &&
              !idem.degenerate;
  report_line(6, pass,
              "star center Z2 with " + std::to_string(leaves.size()) + " QH leaves (input has " +
                  std::to_string(qh_vertices) + "), acylindricity (2,1) over " +
                  std::to_string(acyl.paths_checked) + " paths, idempotence on the interior");
  CHECK(star_ok);
  CHECK(qh_vertices == 3);
  CHECK(acyl.pass);
  CHECK(acyl.paths_checked > 0);
  CHECK(idem.pass);
}

TEST_CASE("criterion 7: Forester round-trip on corpus handles") {
  auto files = corpus_files_of_kind("handle");
  REQUIRE_FALSE(files.empty());
  int nonreduced = 0, roundtrip_failures = 0;
  for (const auto& path : files) {
    auto h = handle_from_json(load_json_file(path));
    HandleIndex hi(h);
    auto r = is_reduced(hi);
    if (r.reduced) continue;
    ++nonreduced;
    if (!r.witness) {
      ++roundtrip_failures;
      continue;
    }
    TreeHandle collapsed = h;
    collapsed.kept.erase(r.witness->edge);
    HandleIndex ci(collapsed);
    if (!same_deformation_space(hi, ci)) ++roundtrip_failures;
  }
  auto b23 = full_handle(bs(2, 3));
  HandleIndex bi(b23);
  bool bs23_reduced = is_reduced(bi).reduced;

  bool pass = nonreduced > 0 && roundtrip_failures == 0 && bs23_reduced;
  report_line(7, pass,
              std::to_string(nonreduced) + " non-reduced corpus handles round-trip, " +
                  std::to_string(roundtrip_failures) + " failures; BS(2,3) loop reduced");
  CHECK(nonreduced > 0);
  CHECK(roundtrip_failures == 0);
  CHECK(bs23_reduced);
}

TEST_CASE("criterion 8: CLI determinism across repeats and thread counts") {
  std::string corpus = TREEBENCH_CORPUS_DIR;
  std::vector<std::string> commands = {
      "lengths --tree " + corpus + "/handle_bs12.json --word " + corpus + "/word_bs_t.json",
      "compat-falsify --l1 " + corpus + "/handle_bs23.json --l2 " + corpus +
          "/nonlength_const1.json --budget 2000 --seed 7",
      "tc --ball " + corpus + "/figure1_ball.json --table " + corpus + "/figure1_table.json",
      "acyl --ball " + corpus + "/figure1_ball.json --table " + corpus +
          "/figure1_table.json --k 2 --c 1",
      "primes --tree " + corpus + "/handle_chain3_12.json",
  };
  int differences = 0;
  for (const auto& cmd : commands) {
    auto a = run_cli(cmd + " --threads 1");
    auto b = run_cli(cmd + " --threads 2");
    auto c = run_cli(cmd + " --threads 1");
    if (a.out != b.out || a.out != c.out || a.exit_code != b.exit_code) ++differences;
    if (a.out.empty()) ++differences;
  }
  bool pass = differences == 0;
  report_line(8, pass,
              std::to_string(commands.size()) + " commands byte-identical across repeats and "
              "thread counts (" + std::to_string(differences) + " differences)");
  CHECK(differences == 0);
}
