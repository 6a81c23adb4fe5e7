#pragma once

#include <treebench/model.hpp>
#include <treebench/table.hpp>
#include <treebench/validate.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace treebench {

/// Compiled view of a ball tree: adjacency, distances from the center and
/// the trusted (interior) region.
class BallIndex {
 public:
  BallIndex(const BallTree& b, const SubgroupTable* external_table) : ball_(&b) {
    const SubgroupTable* t = b.table ? &*b.table : external_table;
    if (!t) throw std::invalid_argument("ball has no subgroup table");
    table_.emplace(*t);
    for (std::size_t i = 0; i < b.vertices.size(); ++i)
      vidx_[b.vertices[i].id] = static_cast<int>(i);
    adj_.resize(b.vertices.size());
    for (std::size_t i = 0; i < b.edges.size(); ++i) {
      const auto& e = b.edges[i];
      int u = index_of(e.from), v = index_of(e.to);
      adj_[u].push_back({v, static_cast<int>(i)});
      adj_[v].push_back({u, static_cast<int>(i)});
    }
    level_.assign(b.vertices.size(), -1);
    parent_.assign(b.vertices.size(), -1);
    parent_edge_.assign(b.vertices.size(), -1);
    int c = index_of(b.center);
    level_[c] = 0;
    std::deque<int> q{c};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (auto [w, ei] : adj_[v])
        if (level_[w] < 0) {
          level_[w] = level_[v] + 1;
          parent_[w] = v;
          parent_edge_[w] = ei;
          q.push_back(w);
        }
    }
  }

  const BallTree& ball() const { return *ball_; }
  const TableIndex& table() const { return *table_; }
  int index_of(const std::string& id) const {
    auto it = vidx_.find(id);
    if (it == vidx_.end()) throw std::invalid_argument("unknown ball vertex: " + id);
    return it->second;
  }
  int vertex_count() const { return static_cast<int>(ball_->vertices.size()); }
  const std::vector<std::pair<int, int>>& neighbors(int v) const { return adj_[v]; }
  std::int64_t level(int v) const { return level_[v]; }

  bool trusted(int v, std::int64_t margin) const {
    const auto& bv = ball_->vertices[v];
    if (bv.interior) return *bv.interior;
    return level_[v] >= 0 && level_[v] <= ball_->interior_radius - (margin - 1);
  }

  /// Edge indices along the tree path between two vertices.
  std::vector<int> path_edges(int a, int b) const {
    std::vector<int> up_a, up_b;
    int x = a, y = b;
    while (x != y) {
      if (level_[x] >= level_[y]) {
        up_a.push_back(parent_edge_[x]);
        x = parent_[x];
      } else {
        up_b.push_back(parent_edge_[y]);
        y = parent_[y];
      }
      if (x < 0 || y < 0) throw std::logic_error("path_edges: disconnected ball");
    }
    up_a.insert(up_a.end(), up_b.rbegin(), up_b.rend());
    return up_a;
  }

 private:
  const BallTree* ball_;
  std::optional<TableIndex> table_;
  std::map<std::string, int> vidx_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<std::int64_t> level_;
  std::vector<int> parent_;
  std::vector<int> parent_edge_;
};

// ---------------------------------------------------------------------------
// Admissibility

struct AdmissibilityReport {
  bool ok = true;
  std::vector<std::string> violations;
  // Axiom 1 (conjugation invariance) is not checkable on symbolic tables.
  std::string unchecked = "axiom 1 (conjugation invariance) not checkable on symbolic tables";
  std::int64_t margin = 1;
};

/// Checks axiom 2 (inclusions of infinite A-symbols stay in one class) on
/// the table and axiom 3 (edges between fixed points of equivalent symbols
/// carry equivalent stabilizers) on the trusted region of the ball.
inline AdmissibilityReport check_admissibility(const BallIndex& bi, std::int64_t margin = 1) {
  AdmissibilityReport r;
  r.margin = margin;
  const TableIndex& ti = bi.table();
  for (const auto& inc : ti.table().inclusions) {
    if (!ti.in_family_e(inc.sub) || !ti.in_family_e(inc.super)) continue;
    auto ca = ti.class_of(inc.sub);
    auto cb = ti.class_of(inc.super);
    if (!ca || !cb || *ca != *cb) {
      r.ok = false;
      r.violations.push_back("axiom 2: " + inc.sub + " included in " + inc.super +
                             " but not equivalent");
    }
  }
  const BallTree& b = bi.ball();
  // Infinite A-symbols contained in each vertex stabilizer.
  std::vector<std::vector<std::string>> carried(b.vertices.size());
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    for (const auto& s : ti.contained_in(b.vertices[i].stab))
      if (ti.in_family_e(s)) carried[i].push_back(s);
  }
  for (int a = 0; a < bi.vertex_count(); ++a) {
    if (!bi.trusted(a, margin)) continue;
    for (int c = a + 1; c < bi.vertex_count(); ++c) {
      if (!bi.trusted(c, margin)) continue;
      for (const auto& sa : carried[a]) {
        auto ka = ti.class_of(sa);
        if (!ka) continue;
        for (const auto& sc : carried[c]) {
          auto kc = ti.class_of(sc);
          if (!kc || *ka != *kc) continue;
          for (int ei : bi.path_edges(a, c)) {
            const auto& stab = b.edges[ei].stab;
            auto ke = ti.in_family_e(stab) ? ti.class_of(stab) : std::nullopt;
            if (!ke || *ke != *ka) {
              r.ok = false;
              r.violations.push_back("axiom 3: edge " + b.edges[ei].id + " on [" +
                                     b.vertices[a].id + "," + b.vertices[c].id +
                                     "] has stabilizer " + stab + " outside class " + *ka);
            }
          }
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cylinders

struct Cylinder {
  std::string id;
  std::string class_id;
  std::string stab;                     // the class stabilizer G_C
  std::vector<std::string> edges;       // ball edge ids
  std::vector<std::string> vertices;    // ball vertex ids spanned
  bool subtree = true;
};

struct CylinderDecomposition {
  std::vector<Cylinder> cylinders;
  bool ok = true;
  std::vector<std::string> violations;
  std::map<std::string, std::vector<int>> cylinders_at;  // vertex id -> cylinder indices
};

/// Partition of the ball edges by table equivalence of their stabilizers.
/// Each class decomposes into connected pieces: a cylinder per piece (a
/// cylinder is connected by definition, so disconnected pieces within one
/// class in the ball are distinct cylinders truncated by the boundary).
inline CylinderDecomposition compute_cylinders(const BallIndex& bi) {
  CylinderDecomposition out;
  const BallTree& b = bi.ball();
  const TableIndex& ti = bi.table();
  std::map<std::string, std::vector<int>> by_class;
  for (std::size_t i = 0; i < b.edges.size(); ++i) {
    const auto& stab = b.edges[i].stab;
    if (!ti.in_family_e(stab)) {
      out.ok = false;
      out.violations.push_back("edge " + b.edges[i].id + " stabilizer " + stab +
                               " is not an infinite symbol of A");
      continue;
    }
    auto cls = ti.class_of(stab);
    if (!cls) {
      out.ok = false;
      out.violations.push_back("edge " + b.edges[i].id + " stabilizer " + stab +
                               " belongs to no equivalence class");
      continue;
    }
    by_class[*cls].push_back(static_cast<int>(i));
  }
  if (!out.ok) return out;

  for (const auto& [cls, edges] : by_class) {
    // Split the class into connected pieces.
    std::map<int, std::vector<std::pair<int, int>>> touch;  // vertex -> (edge, other)
    std::set<int> remaining(edges.begin(), edges.end());
    while (!remaining.empty()) {
      int seed = *remaining.begin();
      std::set<int> piece{seed};
      std::set<int> verts;
      remaining.erase(seed);
      bool grew = true;
      while (grew) {
        grew = false;
        verts.clear();
        for (int ei : piece) {
          verts.insert(bi.index_of(b.edges[ei].from));
          verts.insert(bi.index_of(b.edges[ei].to));
        }
        for (auto it = remaining.begin(); it != remaining.end();) {
          int u = bi.index_of(b.edges[*it].from);
          int v = bi.index_of(b.edges[*it].to);
          if (verts.count(u) || verts.count(v)) {
            piece.insert(*it);
            it = remaining.erase(it);
            grew = true;
          } else {
            ++it;
          }
        }
      }
      Cylinder cyl;
      cyl.class_id = cls;
      cyl.stab = ti.class_stab(cls);
      for (int ei : piece) cyl.edges.push_back(b.edges[ei].id);
      std::sort(cyl.edges.begin(), cyl.edges.end());
      cyl.id = "Y_" + cyl.edges.front();
      std::set<std::string> vs;
      for (int ei : piece) {
        vs.insert(b.edges[ei].from);
        vs.insert(b.edges[ei].to);
      }
      cyl.vertices.assign(vs.begin(), vs.end());
      out.cylinders.push_back(std::move(cyl));
    }
  }
  std::sort(out.cylinders.begin(), out.cylinders.end(),
            [](const Cylinder& a, const Cylinder& b) { return a.id < b.id; });

  // Invariants: spanning subtrees and pairwise intersection in <= 1 vertex.
  for (const auto& c : out.cylinders) {
    // Connected subgraph of a tree with |V| = |E| + 1 is a subtree.
    if (c.vertices.size() != c.edges.size() + 1) {
      out.ok = false;
      out.violations.push_back("cylinder " + c.id + " is not a subtree");
    }
  }
  for (std::size_t i = 0; i < out.cylinders.size(); ++i)
    for (const auto& v : out.cylinders[i].vertices)
      out.cylinders_at[v].push_back(static_cast<int>(i));
  for (const auto& [v, cs] : out.cylinders_at) (void)v;
  for (std::size_t i = 0; i < out.cylinders.size(); ++i)
    for (std::size_t j = i + 1; j < out.cylinders.size(); ++j) {
      int shared = 0;
      std::set<std::string> vi(out.cylinders[i].vertices.begin(),
                               out.cylinders[i].vertices.end());
      for (const auto& v : out.cylinders[j].vertices)
        if (vi.count(v)) ++shared;
      if (shared > 1) {
        out.ok = false;
        out.violations.push_back("cylinders " + out.cylinders[i].id + " and " +
                                 out.cylinders[j].id + " share " + std::to_string(shared) +
                                 " vertices");
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Tree of cylinders

struct CylinderTree {
  BallTree tree;  // exportable ball document, derived = "tree_of_cylinders"
  bool degenerate = false;
  std::vector<std::string> notes;
};

/// Bipartite construction: layer-0 vertices are ball vertices lying in at
/// least two cylinders, layer-1 vertices are the cylinders, with an edge
/// (v, Y) when v lies in Y; the edge stabilizer is the intersection symbol
/// of (G_v, G_Y) from the table.
inline CylinderTree build_tree_of_cylinders(const BallIndex& bi,
                                            const CylinderDecomposition& cyl,
                                            std::int64_t margin = 1) {
  const BallTree& b = bi.ball();
  const TableIndex& ti = bi.table();
  CylinderTree out;
  out.tree.derived = "tree_of_cylinders";
  out.tree.table = ti.table();
  out.tree.interior_radius = b.interior_radius;

  std::vector<std::string> v0;
  for (const auto& v : b.vertices) {
    auto it = cyl.cylinders_at.find(v.id);
    if (it != cyl.cylinders_at.end() && it->second.size() >= 2) v0.push_back(v.id);
  }
  if (v0.empty()) {
    out.degenerate = true;
    out.notes.push_back("no vertex lies in two cylinders; tree of cylinders is degenerate");
  }

  auto vertex_trusted = [&](const std::string& id) {
    return bi.trusted(bi.index_of(id), margin);
  };
  for (const auto& id : v0) {
    int src = bi.index_of(id);
    out.tree.vertices.push_back(BallVertex{id, b.vertices[src].stab, vertex_trusted(id)});
    out.tree.layer[id] = 0;
  }
  for (const auto& c : cyl.cylinders) {
    bool trusted = true;
    for (const auto& v : c.vertices)
      if (!vertex_trusted(v)) trusted = false;
    out.tree.vertices.push_back(BallVertex{c.id, c.stab, trusted});
    out.tree.layer[c.id] = 1;
  }
  if (out.tree.vertices.empty()) {
    // Single-vertex ball: keep the center so the document stays a tree.
    out.degenerate = true;
    int c = bi.index_of(b.center);
    out.tree.vertices.push_back(BallVertex{b.center, b.vertices[c].stab, true});
    out.tree.layer[b.center] = 0;
  }
  out.tree.center = out.tree.vertices.front().id;

  std::set<std::string> v0set(v0.begin(), v0.end());
  int en = 0;
  for (const auto& c : cyl.cylinders) {
    for (const auto& vid : c.vertices) {
      if (!v0set.count(vid)) continue;
      const auto& vstab = b.vertices[bi.index_of(vid)].stab;
      std::string stab;
      if (ti.includes(vstab, c.stab)) stab = vstab;
      else if (ti.includes(c.stab, vstab)) stab = c.stab;
      else {
        const auto* entry = ti.intersection(vstab, c.stab);
        if (!entry || !entry->symbol)
          throw std::invalid_argument("missing intersection entry for (" + vstab + "," +
                                      c.stab + "); extend the table");
        stab = *entry->symbol;
      }
      out.tree.edges.push_back(
          BallEdge{"tc" + std::to_string(en++), vid, c.id, stab, std::nullopt});
    }
  }
  return out;
}

/// Collapsed tree of cylinders: contract every edge whose stabilizer is not
/// in A.  When a contracted blob mixes a vertex into its cylinder, the blob
/// keeps the cylinder's vertex (it carries the class stabilizer).
inline CylinderTree collapse_star(const CylinderTree& tc, const TableIndex& ti) {
  CylinderTree out;
  out.degenerate = tc.degenerate;
  out.notes = tc.notes;
  out.tree.derived = "tree_of_cylinders";
  out.tree.table = tc.tree.table;
  out.tree.interior_radius = tc.tree.interior_radius;

  std::map<std::string, int> vidx;
  for (std::size_t i = 0; i < tc.tree.vertices.size(); ++i)
    vidx[tc.tree.vertices[i].id] = static_cast<int>(i);
  std::vector<int> parent(tc.tree.vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> collapsed(tc.tree.edges.size(), false);
  for (std::size_t i = 0; i < tc.tree.edges.size(); ++i) {
    const auto& e = tc.tree.edges[i];
    if (ti.symbol(e.stab).in_a) continue;
    collapsed[i] = true;
    parent[root(vidx.at(e.from))] = root(vidx.at(e.to));
  }

  // Blob representative: prefer the cylinder vertex (layer 1).
  std::map<int, int> rep;
  for (std::size_t i = 0; i < tc.tree.vertices.size(); ++i) {
    int r = root(static_cast<int>(i));
    const auto& v = tc.tree.vertices[i];
    auto it = rep.find(r);
    if (it == rep.end()) {
      rep[r] = static_cast<int>(i);
      continue;
    }
    const auto& cur = tc.tree.vertices[it->second];
    int lv = tc.tree.layer.count(v.id) ? tc.tree.layer.at(v.id) : 0;
    int lc = tc.tree.layer.count(cur.id) ? tc.tree.layer.at(cur.id) : 0;
    if (lv > lc || (lv == lc && v.id < cur.id)) it->second = static_cast<int>(i);
  }
  std::map<int, bool> blob_trusted;
  for (std::size_t i = 0; i < tc.tree.vertices.size(); ++i) {
    int r = root(static_cast<int>(i));
    bool t = tc.tree.vertices[i].interior.value_or(true);
    auto it = blob_trusted.find(r);
    blob_trusted[r] = it == blob_trusted.end() ? t : (it->second && t);
  }
  for (const auto& [r, i] : rep) {
    const auto& v = tc.tree.vertices[i];
    out.tree.vertices.push_back(BallVertex{v.id, v.stab, blob_trusted.at(r)});
    if (tc.tree.layer.count(v.id)) out.tree.layer[v.id] = tc.tree.layer.at(v.id);
  }
  out.tree.center = out.tree.vertices.front().id;
  for (std::size_t i = 0; i < tc.tree.edges.size(); ++i) {
    if (collapsed[i]) continue;
    const auto& e = tc.tree.edges[i];
    const auto& fu = tc.tree.vertices[rep.at(root(vidx.at(e.from)))];
    const auto& fv = tc.tree.vertices[rep.at(root(vidx.at(e.to)))];
    out.tree.edges.push_back(BallEdge{e.id, fu.id, fv.id, e.stab, false});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Acylindricity

struct AcylindricityReport {
  bool pass = true;
  bool decided = true;
  std::vector<std::string> witnesses;       // failing paths
  std::vector<std::string> missing_entries; // unresolvable pairs
  std::int64_t paths_checked = 0;
};

namespace detail {

struct PathStabBound {
  bool exact = false;
  OrderValue order;                       // exact order or an upper bound
  std::optional<std::string> missing;     // first unresolvable pair
};

inline PathStabBound path_stab_order(const std::vector<const BallEdge*>& edges,
                                     const TableIndex& ti) {
  PathStabBound out;
  std::optional<std::string> cur = edges.front()->stab;
  out.exact = true;
  out.order = ti.order_of(*cur);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const auto& next = edges[i]->stab;
    if (cur && *cur == next) continue;
    if (cur && ti.includes(*cur, next)) continue;
    if (cur && ti.includes(next, *cur)) {
      cur = next;
      out.order = ti.order_of(next);
      continue;
    }
    const IntersectionEntry* entry =
        cur ? ti.intersection(*cur, next) : ti.intersection(edges[i - 1]->stab, next);
    if (entry && entry->symbol) {
      cur = *entry->symbol;
      out.order = ti.order_of(*entry->symbol);
      continue;
    }
    if (entry) {
      // Order-only entry: from here on we only have an upper bound.
      if (out.order.infinite || (!entry->order.infinite && entry->order.value < out.order.value))
        out.order = entry->order;
      out.exact = false;
      cur = std::nullopt;
      continue;
    }
    out.exact = false;
    if (!out.missing)
      out.missing = "(" + (cur ? *cur : edges[i - 1]->stab) + "," + next + ")";
    cur = std::nullopt;
  }
  return out;
}

}  // namespace detail

/// Enumerates every trusted path of length k+1 and bounds its stabilizer
/// order by iterated intersections from the table; passes when all orders
/// are <= C.
inline AcylindricityReport check_acylindricity(const BallIndex& bi, std::int64_t k, BigInt c,
                                               std::int64_t margin = 1) {
  AcylindricityReport r;
  const BallTree& b = bi.ball();
  const TableIndex& ti = bi.table();
  std::int64_t len = k + 1;

  // Walk simple paths of the given length, counting each once.
  std::vector<const BallEdge*> edges_on_path;
  std::vector<int> verts;
  std::function<void(int)> extend = [&](int v) {
    if (static_cast<std::int64_t>(edges_on_path.size()) == len) {
      if (verts.front() > verts.back()) return;  // count undirected paths once
      ++r.paths_checked;
      auto bound = detail::path_stab_order(edges_on_path, ti);
      bool le = !bound.order.infinite && bound.order.value <= c;
      if (le) return;
      if (bound.exact) {
        r.pass = false;
        std::string w;
        for (const auto* e : edges_on_path) w += (w.empty() ? "" : ",") + e->id;
        r.witnesses.push_back(w);
      } else {
        r.decided = false;
        r.missing_entries.push_back(bound.missing ? *bound.missing : "(unknown)");
      }
      return;
    }
    for (auto [w, ei] : bi.neighbors(v)) {
      if (!bi.trusted(w, margin)) continue;
      if (verts.size() >= 2 && w == verts[verts.size() - 2]) continue;
      edges_on_path.push_back(&b.edges[ei]);
      verts.push_back(w);
      extend(w);
      edges_on_path.pop_back();
      verts.pop_back();
    }
  };
  for (int v = 0; v < bi.vertex_count(); ++v) {
    if (!bi.trusted(v, margin)) continue;
    verts = {v};
    edges_on_path.clear();
    extend(v);
  }
  if (!r.missing_entries.empty())
    throw std::invalid_argument("acylindricity undecided, missing table entries: " +
                                r.missing_entries.front());
  return r;
}

// ---------------------------------------------------------------------------
// Idempotence

struct IdempotenceReport {
  bool pass = true;
  bool degenerate = false;
  std::vector<std::string> mismatches;
  std::int64_t required_interior_radius = 0;
};

/// Compares the collapsed tree of cylinders of the trusted region with the
/// collapsed tree of cylinders of that output (under the induced
/// equivalence): they must agree on the trusted region.
inline IdempotenceReport check_idempotence(const BallIndex& bi, std::int64_t margin = 1) {
  IdempotenceReport r;
  auto cyl1 = compute_cylinders(bi);
  if (!cyl1.ok)
    throw std::invalid_argument("idempotence: input rejected: " + cyl1.violations.front());
  CylinderTree tc1 = collapse_star(build_tree_of_cylinders(bi, cyl1, margin), bi.table());
  if (tc1.degenerate) {
    r.degenerate = true;
    return r;
  }
  bool any_trusted = false;
  for (const auto& v : tc1.tree.vertices)
    if (v.interior.value_or(false)) any_trusted = true;
  if (!any_trusted) {
    r.pass = false;
    r.degenerate = true;
    r.required_interior_radius = bi.ball().interior_radius + 1;
    r.mismatches.push_back("boundary region too thin: no trusted vertex in the tree of cylinders");
    return r;
  }

  BallIndex bi2(tc1.tree, nullptr);
  auto cyl2 = compute_cylinders(bi2);
  if (!cyl2.ok)
    throw std::invalid_argument("idempotence: derived tree rejected: " + cyl2.violations.front());
  CylinderTree tc2 = collapse_star(build_tree_of_cylinders(bi2, cyl2, margin), bi2.table());

  // Trusted layer-0 vertices must persist with their stabilizers.
  std::map<std::string, std::string> stab1, stab2;
  std::set<std::string> trusted1;
  for (const auto& v : tc1.tree.vertices) {
    if (tc1.tree.layer.at(v.id) != 0) continue;
    stab1[v.id] = v.stab;
    if (v.interior.value_or(false)) trusted1.insert(v.id);
  }
  for (const auto& v : tc2.tree.vertices)
    if (tc2.tree.layer.at(v.id) == 0) stab2[v.id] = v.stab;
  for (const auto& id : trusted1) {
    auto it = stab2.find(id);
    if (it == stab2.end()) {
      r.pass = false;
      r.mismatches.push_back("vertex " + id + " lost by the second pass");
    } else if (it->second != stab1[id]) {
      r.pass = false;
      r.mismatches.push_back("vertex " + id + " changed stabilizer");
    }
  }

  // Trusted cylinder vertices must correspond: same stabilizer, same trusted
  // layer-0 neighbourhood.
  auto signature = [&](const CylinderTree& tc, const std::set<std::string>& keep) {
    std::vector<std::pair<std::string, std::string>> sig;  // (stab, joined neighbors)
    std::map<std::string, std::set<std::string>> nbrs;
    for (const auto& e : tc.tree.edges) {
      const std::string& cylv = tc.tree.layer.at(e.from) == 1 ? e.from : e.to;
      const std::string& orig = tc.tree.layer.at(e.from) == 1 ? e.to : e.from;
      if (keep.count(orig)) nbrs[cylv].insert(orig + ":" + e.stab);
    }
    for (const auto& v : tc.tree.vertices) {
      if (tc.tree.layer.at(v.id) != 1) continue;
      if (!v.interior.value_or(false)) continue;
      auto it = nbrs.find(v.id);
      if (it == nbrs.end() || it->second.empty()) continue;
      std::string joined;
      for (const auto& n : it->second) joined += n + "|";
      sig.emplace_back(v.stab, joined);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
  };
  auto s1 = signature(tc1, trusted1);
  auto s2 = signature(tc2, trusted1);
  if (s1 != s2) {
    r.pass = false;
    r.mismatches.push_back("cylinder vertices over the trusted region do not correspond");
  }
  return r;
}

// ---------------------------------------------------------------------------
// C-virtually cyclic consistency

struct CvcResult {
  bool verdict = false;
  std::string reason;
};

/// Validates the declared data for "maps onto Z or D_infinity with kernel of
/// order at most C": order infinite, declared kernel bound <= C, and every
/// declared finite subgroup of order <= 2 * kernel bound.
inline CvcResult check_c_virtually_cyclic(const std::string& symbol, const TableIndex& ti,
                                          const BigInt& c) {
  const SymbolDecl& s = ti.symbol(symbol);
  if (!s.order.infinite) return CvcResult{false, "finite order"};
  if (!s.vc_kernel) return CvcResult{false, "no virtually-cyclic declaration"};
  for (const auto& sub : ti.contained_in(symbol)) {
    const auto& d = ti.symbol(sub);
    if (d.order.infinite) continue;
    if (d.order.value > 2 * *s.vc_kernel)
      throw std::invalid_argument("inconsistent declarations: finite subgroup " + sub +
                                  " of order " + d.order.value.str() +
                                  " exceeds twice the kernel bound of " + symbol);
  }
  if (*s.vc_kernel > c) return CvcResult{false, "kernel bound exceeds C"};
  return CvcResult{true, ""};
}

}  // namespace treebench
