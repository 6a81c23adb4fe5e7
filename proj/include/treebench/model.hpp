#pragma once

#include <treebench/bigint.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace treebench {

/// A labelled graph presenting a GBS group: every vertex and edge group is
/// infinite cyclic, and the end labels are the inclusion indices of the edge
/// group into the two endpoint groups.
struct GbsEdge {
  std::string id;
  std::string from;
  std::string to;
  std::int64_t label_from = 0;
  std::int64_t label_to = 0;
};

struct GbsGraph {
  std::vector<std::string> vertices;
  std::vector<GbsEdge> edges;
  std::string base;

  const GbsEdge* find_edge(const std::string& id) const {
    for (const auto& e : edges)
      if (e.id == id) return &e;
    return nullptr;
  }
  bool has_vertex(const std::string& id) const {
    for (const auto& v : vertices)
      if (v == id) return true;
    return false;
  }
};

/// One step of a closed edge path: cross `edge` (dir=+1 goes from->to),
/// then apply the arrival vertex generator to the power `exp`.
struct Syllable {
  std::string edge;
  int dir = 1;  // +1 or -1
  BigInt exp;

  bool operator==(const Syllable& o) const {
    return edge == o.edge && dir == o.dir && exp == o.exp;
  }
};

/// Group element as a closed edge path at the graph base vertex.
/// The empty word with base_exp 0 is the identity.
struct PathWord {
  BigInt base_exp = 0;
  std::vector<Syllable> syllables;

  bool operator==(const PathWord& o) const {
    return base_exp == o.base_exp && syllables == o.syllables;
  }
  bool trivial() const { return base_exp == 0 && syllables.empty(); }
  std::size_t size() const { return syllables.size(); }
};

// ---------------------------------------------------------------------------
// Moves and tree handles

enum class MoveKind { Collapse, Expansion, Slide };

enum class EdgeEnd { From, To };

inline const char* edge_end_name(EdgeEnd e) { return e == EdgeEnd::From ? "from" : "to"; }

struct MovedEnd {
  std::string edge;
  EdgeEnd end = EdgeEnd::From;
};

/// A tree-producing move on a marked presentation.  The translator rewrites
/// generators of the pre-move graph ("x:<vertex>" and "t:<edge>") as closed
/// words of the post-move graph; it is machine-verified on construction.
struct Move {
  MoveKind kind = MoveKind::Collapse;

  // collapse
  std::vector<std::string> dropped;

  // expansion: blow up `vertex` into a new edge with labels (index, 1),
  // reattaching the listed edge ends at the new vertex.
  std::string vertex;
  std::string new_vertex;
  std::string new_edge;
  std::int64_t index = 0;
  std::vector<MovedEnd> moved;

  // slide: move `edge`'s `end` across `over` (whose `over_end` sits at the
  // same vertex) to the far endpoint of `over`.
  std::string edge;
  EdgeEnd end = EdgeEnd::From;
  std::string over;
  EdgeEnd over_end = EdgeEnd::From;

  std::map<std::string, PathWord> translator;
};

/// A tree for the master group: the master Bass-Serre tree with every edge
/// orbit outside `kept` collapsed.  `lineage` relates `master` to the
/// workbench's root presentation.
struct TreeHandle {
  GbsGraph master;
  std::set<std::string> kept;
  std::vector<Move> lineage;
};

// ---------------------------------------------------------------------------
// Symbolic subgroup tables and explicit finite trees

struct OrderValue {
  bool infinite = true;
  BigInt value;  // meaningful when !infinite; then value >= 1

  static OrderValue inf() { return OrderValue{true, 0}; }
  static OrderValue finite(BigInt v) { return OrderValue{false, std::move(v)}; }
  bool operator==(const OrderValue& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
};

struct SymbolDecl {
  std::string name;
  OrderValue order;
  bool in_a = false;
  // Declared bound on the kernel of a map onto Z or D_infinity, when the
  // symbol is asserted virtually cyclic.
  std::optional<BigInt> vc_kernel;
};

struct Inclusion {
  std::string sub;
  std::string super;
  std::optional<BigInt> index;
};

struct EquivClass {
  std::string id;
  std::vector<std::string> members;
  std::string stab;  // the class stabilizer symbol G_C
};

struct IntersectionEntry {
  std::string a;
  std::string b;
  OrderValue order;
  std::optional<std::string> symbol;
};

/// Symbolic subgroup algebra: orders, inclusions, equivalence classes on the
/// infinite symbols of A, class stabilizers, and pairwise intersection data.
struct SubgroupTable {
  std::vector<SymbolDecl> symbols;
  std::vector<Inclusion> inclusions;
  std::vector<EquivClass> classes;
  std::vector<IntersectionEntry> intersections;

  const SymbolDecl* find_symbol(const std::string& name) const {
    for (const auto& s : symbols)
      if (s.name == name) return &s;
    return nullptr;
  }
};

struct BallVertex {
  std::string id;
  std::string stab;
  std::optional<bool> interior;  // explicit trust flag on derived documents
};

struct BallEdge {
  std::string id;
  std::string from;
  std::string to;
  std::string stab;
  std::optional<bool> collapsed;  // marked on collapsed trees of cylinders
};

/// Explicit finite tree with symbolic stabilizer labels; a finite portion of
/// a Bass-Serre tree.  Vertices within `interior_radius` of `center` are
/// trusted; the rest may be boundary artifacts.
struct BallTree {
  std::vector<BallVertex> vertices;
  std::vector<BallEdge> edges;
  std::string center;
  std::int64_t interior_radius = 0;
  std::optional<SubgroupTable> table;
  std::optional<std::string> derived;  // e.g. "tree_of_cylinders"
  std::map<std::string, int> layer;    // bipartite layer for derived trees
};

}  // namespace treebench
