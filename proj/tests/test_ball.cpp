#include <catch2/catch_amalgamated.hpp>

#include <treebench/ball.hpp>
#include <treebench/validate.hpp>

#include "support.hpp"

using namespace treebench;
using namespace testsupport;

namespace {

PathWord loop_letter(const std::string& e = "t") {
  PathWord w;
  w.syllables.push_back(Syllable{e, -1, 0});
  return w;
}

int valence(const ExpandedBall& eb, const std::string& vid) {
  int n = 0;
  for (const auto& e : eb.ball.edges)
    if (e.from == vid || e.to == vid) ++n;
  return n;
}

}  // namespace

TEST_CASE("ball of radius 0 is a single vertex") {
  auto h = full_handle(bs(1, 2));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 0);
  CHECK(eb.vertex_count() == 1);
  CHECK(eb.ball.edges.empty());
}

TEST_CASE("BS(1,2) radius-1 ball: center valence 1 + |2|") {
  auto h = full_handle(bs(1, 2));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 1);
  CHECK(valence(eb, "v0") == 3);
  CHECK(eb.vertex_count() == 4);
}

TEST_CASE("BS(2,3) radius-1 ball: center valence 2 + 3") {
  auto h = full_handle(bs(2, 3));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 1);
  CHECK(valence(eb, "v0") == 5);
}

TEST_CASE("homogeneous valence and exact vertex counts") {
  auto h = full_handle(bs(1, 2));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 3);
  // Valence-3 tree: 1 + 3 + 6 + 12 vertices.
  CHECK(eb.vertex_count() == 22);
  for (int v = 0; v < eb.vertex_count(); ++v)
    if (eb.level[v] < 3) CHECK(valence(eb, eb.ball.vertices[v].id) == 3);
  // Exported document passes validation.
  CHECK(validate(eb.ball, nullptr).ok);
}

TEST_CASE("vertex cap raises a resource error") {
  auto h = full_handle(bs(3, 5));
  HandleIndex hi(h);
  CHECK_THROWS_AS(expand_ball(hi, "v", 6, 500), ResourceLimitError);
}

TEST_CASE("identity displaces nothing") {
  auto h = full_handle(bs(2, 3));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 2);
  auto md = min_displacement_in_ball(PathWord{}, eb, hi);
  CHECK(md.value == 0);
  CHECK(md.certified);
}

TEST_CASE("BS(1,2): stable letter has displacement 1, certified, engine agrees") {
  auto h = full_handle(bs(1, 2));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 4);
  auto md = min_displacement_in_ball(loop_letter(), eb, hi);
  CHECK(md.value == 1);
  CHECK(md.certified);
  CHECK(translation_length(loop_letter(), hi) == md.value);
}

TEST_CASE("BS(2,3): t x t^-1 has certified min displacement 0") {
  auto h = full_handle(bs(2, 3));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 6, 2000000);
  PathWord w = concat(loop_letter(), concat(PathWord{1, {}}, inverse(loop_letter())));
  auto md = min_displacement_in_ball(w, eb, hi);
  CHECK(md.value == 0);
  CHECK(md.certified);
}

TEST_CASE("engine and oracle agree on random masters and words") {
  Rng rng(42);
  int done = 0;
  while (done < 30) {
    auto g = random_gbs(rng, 4, 4);
    auto h = full_handle(g);
    HandleIndex hi(h);
    GraphIndex gi(g);
    WordSampler ws(gi, 6, 4);
    auto w = ws.sample(rng);
    BigInt engine = translation_length(w, hi);
    auto rf = britton_reduce(w, gi, false);
    std::int64_t radius = (static_cast<std::int64_t>(rf.word.syllables.size()) + 1) / 2 + 1;
    ExpandedBall eb;
    try {
      eb = expand_ball(hi, g.base, radius, 60000);
    } catch (const ResourceLimitError&) {
      continue;
    }
    auto md = min_displacement_in_ball(w, eb, hi);
    REQUIRE(md.certified);
    CHECK(md.value == engine);
    ++done;
  }
}

TEST_CASE("oracle works on collapsed handles (kept-letter metric)") {
  auto master = load_gbs("gbs_two_loops.json");
  TreeHandle t;
  t.master = master;
  t.kept = {"a"};
  HandleIndex hi(t);
  PathWord w;
  w.syllables.push_back(Syllable{"a", -1, 0});
  w.syllables.push_back(Syllable{"b", -1, 0});
  w.syllables.push_back(Syllable{"a", -1, 0});
  w.syllables.push_back(Syllable{"b", -1, 0});
  CHECK(translation_length(w, hi) == 2);
  // A non-kept loop makes the collapsed tree fail local finiteness, so a
  // genuine radius-1 ball is infinite and the expansion must refuse.
  CHECK_THROWS_AS(expand_ball(hi, "v", 1, 2000), ResourceLimitError);
  CHECK(path_displacement_oracle(w, hi) == 2);
}

TEST_CASE("ball expansion on a collapsed handle with finite components") {
  // The collapsed edge carries label 1 at both ends, so each collapsed
  // component is a finite segment and the collapsed tree stays locally
  // finite.
  auto master = load_gbs("gbs_chain3.json");
  master.edges[2].label_from = 1;
  master.edges[2].label_to = 1;
  TreeHandle t;
  t.master = master;
  t.kept = {"e1", "e2"};
  HandleIndex hi(t);
  auto eb = expand_ball(hi, "a", 4, 500000);
  CHECK(eb.vertex_count() > 1);
  GraphIndex gi(master);
  WordSampler ws(gi, 6, 3);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto w = ws.sample(rng);
    auto md = min_displacement_in_ball(w, eb, hi);
    CHECK(path_displacement_oracle(w, hi) == translation_length(w, hi));
    if (md.certified) CHECK(md.value == translation_length(w, hi));
  }
}

TEST_CASE("path oracle agrees with the engine on random handles") {
  Rng rng(424242);
  for (int i = 0; i < 60; ++i) {
    auto h = random_handle(rng, 4, 4);
    HandleIndex hi(h);
    GraphIndex gi(h.master);
    WordSampler ws(gi, 8, 4);
    auto w = ws.sample(rng);
    CHECK(path_displacement_oracle(w, hi) == translation_length(w, hi));
  }
}

TEST_CASE("axis data: elliptic elements get a characteristic point") {
  auto h = full_handle(bs(2, 3));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 4, 500000);
  PathWord x{3, {}};
  auto ax = axis_in_ball(x, eb, hi);
  CHECK(ax.length == 0);
  REQUIRE(ax.characteristic_point.has_value());
  CHECK(*ax.characteristic_point == "v0");
  CHECK(ax.axis_segment.empty());
}

TEST_CASE("axis data: hyperbolic elements get a fundamental segment") {
  auto h = full_handle(bs(1, 2));
  HandleIndex hi(h);
  auto eb = expand_ball(hi, "v", 4);
  auto ax = axis_in_ball(loop_letter(), eb, hi);
  CHECK(ax.length == 1);
  CHECK(ax.certified);
  CHECK(ax.axis_segment.size() == 1);
  CHECK_FALSE(ax.characteristic_point.has_value());
}

TEST_CASE("axis product formulas hold for 50 certified hyperbolic pairs in BS(2,3)") {
  auto g23 = bs(2, 3);
  auto h = full_handle(g23);
  HandleIndex hi(h);
  GraphIndex gi(g23);
  WordSampler ws(gi, 4, 3);
  Rng rng(99);
  int disjoint_seen = 0, meeting_seen = 0, done = 0;
  while (done < 50) {
    auto a = ws.sample(rng);
    auto b = ws.sample(rng);
    BigInt la = translation_length(a, hi);
    BigInt lb = translation_length(b, hi);
    if (la == 0 || lb == 0) continue;
    auto rfa = britton_reduce(a, gi, false);
    auto rfb = britton_reduce(b, gi, false);
    std::int64_t n = static_cast<std::int64_t>(
        std::max(rfa.word.syllables.size(), rfb.word.syllables.size()));
    ExpandedBall eb;
    try {
      eb = expand_ball(hi, "v", (n + 1) / 2 + 1, 200000);
    } catch (const ResourceLimitError&) {
      continue;
    }
    auto bd = bridge_distance(a, b, eb, hi);
    if (!bd.certified) continue;
    BigInt lab = translation_length(concat(a, b), hi);
    BigInt laib = translation_length(concat(inverse(a), b), hi);
    BigInt sum = la + lb;
    if (bd.value > 0) {
      CHECK(lab == laib);
      CHECK(lab == sum + 2 * bd.value);
      ++disjoint_seen;
    } else {
      CHECK((lab > laib ? lab : laib) == sum);
      ++meeting_seen;
    }
    // Exactly one branch holds.
    bool disjoint_branch = lab == laib && lab > sum;
    bool meeting_branch = (lab > laib ? lab : laib) == sum;
    CHECK(disjoint_branch != meeting_branch);
    ++done;
  }
  CHECK(disjoint_seen > 0);
  CHECK(meeting_seen > 0);
}

TEST_CASE("Serre dichotomy on sampled elliptic pairs") {
  Rng rng(555);
  int done = 0;
  while (done < 40) {
    auto g = random_gbs(rng, 3, 3);
    auto h = full_handle(g);
    HandleIndex hi(h);
    GraphIndex gi(g);
    WordSampler ws(gi, 3, 2);
    auto a = ws.sample_elliptic(rng);
    auto b = ws.sample_elliptic(rng);
    REQUIRE(is_elliptic(a, hi));
    REQUIRE(is_elliptic(b, hi));
    auto rfa = britton_reduce(a, gi, false);
    auto rfb = britton_reduce(b, gi, false);
    std::int64_t n = static_cast<std::int64_t>(
        std::max(rfa.word.syllables.size(), rfb.word.syllables.size()));
    ExpandedBall eb;
    try {
      eb = expand_ball(hi, g.base, (n + 1) / 2 + 1, 60000);
    } catch (const ResourceLimitError&) {
      continue;
    }
    auto bd = bridge_distance(a, b, eb, hi);
    if (!bd.certified) continue;
    BigInt lab = translation_length(concat(a, b), hi);
    if (bd.value > 0) {
      CHECK(lab > 0);                 // disjoint fixed sets: product hyperbolic
      CHECK(lab == 2 * bd.value);     // and the translation length is twice the gap
    } else {
      CHECK(lab == 0);                // meeting fixed sets: product elliptic
      CHECK(fix_overlap(a, b, hi));
    }
    ++done;
  }
}
