#include <catch2/catch_amalgamated.hpp>

#include <treebench/cylinders.hpp>

#include "support.hpp"

using namespace treebench;
using namespace testsupport;

namespace {

BallTree load_figure1() {
  auto b = ball_from_json(load_json_file(corpus_path("figure1_ball.json")));
  b.table = table_from_json(load_json_file(corpus_path("figure1_table.json")));
  return b;
}

/// u - e1(C1) - v - e2(C2) - w with a non-A vertex group at v.
BallTree two_cylinder_path() {
  BallTree b;
  b.center = "v";
  b.interior_radius = 1;
  b.vertices = {BallVertex{"u", "M1", std::nullopt}, BallVertex{"v", "F", std::nullopt},
                BallVertex{"w", "M2", std::nullopt}};
  b.edges = {BallEdge{"e1", "u", "v", "C1", std::nullopt},
             BallEdge{"e2", "v", "w", "C2", std::nullopt}};
  SubgroupTable t;
  t.symbols = {SymbolDecl{"M1", OrderValue::inf(), true, std::nullopt},
               SymbolDecl{"M2", OrderValue::inf(), true, std::nullopt},
               SymbolDecl{"C1", OrderValue::inf(), true, std::nullopt},
               SymbolDecl{"C2", OrderValue::inf(), true, std::nullopt},
               SymbolDecl{"F", OrderValue::inf(), false, std::nullopt}};
  t.inclusions = {Inclusion{"C1", "M1", std::nullopt}, Inclusion{"C1", "F", std::nullopt},
                  Inclusion{"C2", "M2", std::nullopt}, Inclusion{"C2", "F", std::nullopt}};
  t.classes = {EquivClass{"K1", {"C1", "M1"}, "M1"}, EquivClass{"K2", {"C2", "M2"}, "M2"}};
  t.intersections = {IntersectionEntry{"C1", "C2", OrderValue::finite(1), std::nullopt},
                     IntersectionEntry{"F", "M1", OrderValue::inf(), "C1"},
                     IntersectionEntry{"F", "M2", OrderValue::inf(), "C2"}};
  b.table = std::move(t);
  return b;
}

}  // namespace

TEST_CASE("admissibility: the shipped example passes; axiom 1 reported unchecked") {
  auto b = load_figure1();
  BallIndex bi(b, nullptr);
  auto r = check_admissibility(bi);
  CHECK(r.ok);
  CHECK(r.violations.empty());
  CHECK_FALSE(r.unchecked.empty());
}

TEST_CASE("axiom 2 violation: included infinite subgroup in another class") {
  auto b = load_figure1();
  for (auto& c : b.table->classes) {
    if (c.id == "K0") c.members = {"Z2"};
  }
  b.table->classes.push_back(EquivClass{"K0b", {"C0"}, "C0"});
  BallIndex bi(b, nullptr);
  auto r = check_admissibility(bi);
  REQUIRE_FALSE(r.ok);
  bool axiom2 = false;
  for (const auto& v : r.violations)
    if (v.find("axiom 2") != std::string::npos) axiom2 = true;
  CHECK(axiom2);
}

TEST_CASE("axiom 3 violation: a foreign edge inside a cylinder path") {
  BallTree b;
  b.center = "a";
  b.interior_radius = 1;
  b.vertices = {BallVertex{"a", "Z2", std::nullopt}, BallVertex{"b", "QH1", std::nullopt}};
  b.edges = {BallEdge{"e1", "a", "b", "C11", std::nullopt}};
  SubgroupTable t;
  t.symbols = {SymbolDecl{"Z2", OrderValue::inf(), true, std::nullopt},
               SymbolDecl{"QH1", OrderValue::inf(), false, std::nullopt},
               SymbolDecl{"C0", OrderValue::inf(), true, std::nullopt},
               SymbolDecl{"C11", OrderValue::inf(), true, std::nullopt}};
  t.inclusions = {Inclusion{"C0", "Z2", std::nullopt}, Inclusion{"C0", "QH1", std::nullopt},
                  Inclusion{"C11", "QH1", std::nullopt}, Inclusion{"C11", "Z2", std::nullopt}};
  t.classes = {EquivClass{"K0", {"C0", "Z2"}, "Z2"}, EquivClass{"K11", {"C11"}, "C11"}};
  b.table = std::move(t);
  BallIndex bi(b, nullptr);
  auto r = check_admissibility(bi);
  REQUIRE_FALSE(r.ok);
  bool axiom3 = false;
  for (const auto& v : r.violations)
    if (v.find("axiom 3") != std::string::npos) axiom3 = true;
  CHECK(axiom3);
}

TEST_CASE("single-edge ball passes axiom 3 vacuously") {
  auto b = two_cylinder_path();
  b.vertices.pop_back();
  b.edges.pop_back();
  BallIndex bi(b, nullptr);
  CHECK(check_admissibility(bi).ok);
}

TEST_CASE("one equivalence class makes the whole ball a single cylinder") {
  auto b = load_figure1();
  b.vertices.resize(4);
  b.edges.resize(3);
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  REQUIRE(cyl.ok);
  REQUIRE(cyl.cylinders.size() == 1);
  CHECK(cyl.cylinders[0].edges.size() == 3);
  CHECK(cyl.cylinders[0].stab == "Z2");

  auto tc = build_tree_of_cylinders(bi, cyl);
  CHECK(tc.degenerate);
}

TEST_CASE("star with k edges in k classes: k singleton cylinders meeting at the center") {
  BallTree b;
  b.center = "c";
  b.interior_radius = 1;
  b.vertices.push_back(BallVertex{"c", "F", std::nullopt});
  SubgroupTable t;
  t.symbols.push_back(SymbolDecl{"F", OrderValue::inf(), false, std::nullopt});
  for (int i = 0; i < 4; ++i) {
    std::string li = "l" + std::to_string(i);
    std::string ci = "C" + std::to_string(i);
    b.vertices.push_back(BallVertex{li, ci, std::nullopt});
    b.edges.push_back(BallEdge{"e" + std::to_string(i), "c", li, ci, std::nullopt});
    t.symbols.push_back(SymbolDecl{ci, OrderValue::inf(), true, std::nullopt});
    t.inclusions.push_back(Inclusion{ci, "F", std::nullopt});
    t.classes.push_back(EquivClass{"K" + std::to_string(i), {ci}, ci});
  }
  b.table = std::move(t);
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  REQUIRE(cyl.ok);
  CHECK(cyl.cylinders.size() == 4);
  for (const auto& c : cyl.cylinders) CHECK(c.edges.size() == 1);
  CHECK(cyl.cylinders_at.at("c").size() == 4);
}

TEST_CASE("figure-1 ball: cylinders group the edges at each commensurability class") {
  auto b = load_figure1();
  BallIndex bi(b, nullptr);
  REQUIRE(check_admissibility(bi).ok);
  auto cyl = compute_cylinders(bi);
  REQUIRE(cyl.ok);
  CHECK(cyl.cylinders.size() == 7);
  const Cylinder* k0 = nullptr;
  for (const auto& c : cyl.cylinders)
    if (c.class_id == "K0") k0 = &c;
  REQUIRE(k0 != nullptr);
  CHECK(k0->edges == std::vector<std::string>{"E01", "E02", "E03"});
  CHECK(k0->stab == "Z2");
}

TEST_CASE("figure-1 tree of cylinders is a star at the Z2 class over the trusted region") {
  auto b = load_figure1();
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  auto tc = build_tree_of_cylinders(bi, cyl);
  CHECK_FALSE(tc.degenerate);
  auto tcs = collapse_star(tc, bi.table());
  CHECK(tcs.tree.edges.size() == tc.tree.edges.size());

  std::string center;
  for (const auto& v : tcs.tree.vertices)
    if (v.stab == "Z2") center = v.id;
  REQUIRE_FALSE(center.empty());
  std::set<std::string> nbrs;
  for (const auto& e : tcs.tree.edges) {
    if (e.from == center) nbrs.insert(e.to);
    if (e.to == center) nbrs.insert(e.from);
  }
  CHECK(nbrs == std::set<std::string>{"q1", "q2", "q3"});
  CHECK(tcs.tree.derived.has_value());
  CHECK(validate(tcs.tree, nullptr).ok);
}

TEST_CASE("two cylinders sharing one vertex give a path Y1 - v - Y2") {
  auto b = two_cylinder_path();
  BallIndex bi(b, nullptr);
  REQUIRE(check_admissibility(bi).ok);
  auto cyl = compute_cylinders(bi);
  REQUIRE(cyl.ok);
  REQUIRE(cyl.cylinders.size() == 2);
  auto tc = build_tree_of_cylinders(bi, cyl);
  CHECK_FALSE(tc.degenerate);
  REQUIRE(tc.tree.vertices.size() == 3);
  REQUIRE(tc.tree.edges.size() == 2);
  for (const auto& e : tc.tree.edges) CHECK((e.from == "v" || e.to == "v"));
}

TEST_CASE("collapse contracts edges whose stabilizer leaves A") {
  auto b = two_cylinder_path();
  auto& t = *b.table;
  t.symbols[2].in_a = false;  // C1 leaves A
  t.classes[0].members = {"M1"};
  b.edges[0].stab = "M1";
  t.intersections.push_back(IntersectionEntry{"F", "M1", OrderValue::inf(), "C1"});
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  REQUIRE(cyl.ok);
  auto tc = build_tree_of_cylinders(bi, cyl);
  auto tcs = collapse_star(tc, bi.table());
  CHECK(tcs.tree.edges.size() == tc.tree.edges.size() - 1);
  CHECK(tcs.tree.vertices.size() == tc.tree.vertices.size() - 1);
  bool has_y1 = false;
  for (const auto& v : tcs.tree.vertices)
    if (v.stab == "M1") has_y1 = true;
  CHECK(has_y1);
}

TEST_CASE("missing intersection entries are reported with the exact pair") {
  auto b = load_figure1();
  b.table->intersections.clear();
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  REQUIRE(cyl.ok);
  try {
    build_tree_of_cylinders(bi, cyl);
    FAIL("expected a missing-entry error");
  } catch (const std::invalid_argument& ex) {
    std::string msg = ex.what();
    CHECK(msg.find("missing intersection entry") != std::string::npos);
    CHECK(msg.find("QH") != std::string::npos);
  }
}

TEST_CASE("acylindricity: vacuous pass when k exceeds the interior diameter") {
  auto b = load_figure1();
  BallIndex bi(b, nullptr);
  auto r = check_acylindricity(bi, 40, 1);
  CHECK(r.pass);
  CHECK(r.paths_checked == 0);
}

TEST_CASE("figure-1 collapsed tree of cylinders is (2,1)-acylindrical, non-vacuously") {
  auto b = load_figure1();
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  auto tcs = collapse_star(build_tree_of_cylinders(bi, cyl), bi.table());
  BallIndex ti(tcs.tree, nullptr);
  auto r = check_acylindricity(ti, 2, 1);
  CHECK(r.pass);
  CHECK(r.paths_checked > 0);
  CHECK(r.witnesses.empty());
}

TEST_CASE("acylindricity monotone in k and C on the figure-1 tree") {
  auto b = load_figure1();
  BallIndex bi(b, nullptr);
  auto cyl = compute_cylinders(bi);
  auto tcs = collapse_star(build_tree_of_cylinders(bi, cyl), bi.table());
  BallIndex ti(tcs.tree, nullptr);
  REQUIRE(check_acylindricity(ti, 2, 1).pass);
  CHECK(check_acylindricity(ti, 3, 1).pass);
  CHECK(check_acylindricity(ti, 2, 5).pass);
  CHECK(check_acylindricity(ti, 4, 7).pass);
}

TEST_CASE("an infinite-stabilizer path of length k+1 fails with a witness") {
  BallTree b;
  b.center = "a";
  b.interior_radius = 3;
  SubgroupTable t;
  t.symbols = {SymbolDecl{"C", OrderValue::inf(), true, std::nullopt}};
  t.classes = {EquivClass{"K", {"C"}, "C"}};
  for (int i = 0; i < 4; ++i)
    b.vertices.push_back(BallVertex{std::string(1, char('a' + i)), "C", std::nullopt});
  for (int i = 0; i < 3; ++i)
    b.edges.push_back(BallEdge{"e" + std::to_string(i), std::string(1, char('a' + i)),
                               std::string(1, char('a' + i + 1)), "C", std::nullopt});
  b.table = std::move(t);
  BallIndex bi(b, nullptr);
  auto r = check_acylindricity(bi, 2, 1);
  REQUIRE_FALSE(r.pass);
  REQUIRE_FALSE(r.witnesses.empty());
  CHECK(r.witnesses.front() == "e0,e1,e2");
}

TEST_CASE("idempotence: degenerate one-cylinder input trivially holds") {
  auto b = load_figure1();
  b.vertices.resize(4);
  b.edges.resize(3);
  BallIndex bi(b, nullptr);
  auto r = check_idempotence(bi);
  CHECK(r.pass);
  CHECK(r.degenerate);
}

TEST_CASE("idempotence holds on the figure-1 interior") {
  auto b = load_figure1();
  BallIndex bi(b, nullptr);
  auto r = check_idempotence(bi);
  CHECK(r.pass);
  CHECK_FALSE(r.degenerate);
  CHECK(r.mismatches.empty());
}

TEST_CASE("idempotence holds on the two-cylinder path") {
  auto b = two_cylinder_path();
  BallIndex bi(b, nullptr);
  auto r = check_idempotence(bi);
  CHECK(r.pass);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("C-virtually cyclic: declarations and consistency") {
  SubgroupTable t;
  t.symbols = {SymbolDecl{"Z", OrderValue::inf(), true, BigInt(1)},
               SymbolDecl{"F", OrderValue::finite(4), true, std::nullopt},
               SymbolDecl{"Bad", OrderValue::inf(), true, BigInt(1)},
               SymbolDecl{"F3", OrderValue::finite(3), true, std::nullopt}};
  t.inclusions = {Inclusion{"F3", "Bad", std::nullopt}};
  TableIndex ti(t);
  CHECK(check_c_virtually_cyclic("Z", ti, 1).verdict);
  CHECK(check_c_virtually_cyclic("Z", ti, 7).verdict);
  CHECK_FALSE(check_c_virtually_cyclic("F", ti, 3).verdict);
  CHECK_THROWS_AS(check_c_virtually_cyclic("Bad", ti, 1), std::invalid_argument);
}

TEST_CASE("csa-style corpus table is admissible by itself") {
  auto t = table_from_json(load_json_file(corpus_path("csa_table.json")));
  REQUIRE(validate(t).ok);
  BallTree b;
  b.center = "u";
  b.interior_radius = 1;
  b.vertices = {BallVertex{"u", "M1", std::nullopt}, BallVertex{"v", "M1", std::nullopt}};
  b.edges = {BallEdge{"e", "u", "v", "C1", std::nullopt}};
  BallIndex bi(b, &t);
  CHECK(check_admissibility(bi).ok);
}
