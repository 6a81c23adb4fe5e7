#pragma once

#include <treebench/graph.hpp>
#include <treebench/io.hpp>
#include <treebench/model.hpp>
#include <treebench/table.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace treebench {

struct Violation {
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  void fail(std::string location, std::string message) {
    ok = false;
    violations.push_back(Violation{std::move(location), std::move(message)});
  }
};

inline Json to_json(const ValidationReport& r) {
  Json j;
  j["valid"] = r.ok;
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json jx;
    jx["location"] = x.location;
    jx["message"] = x.message;
    v.push_back(std::move(jx));
  }
  j["violations"] = std::move(v);
  return j;
}

inline ValidationReport validate(const GbsGraph& g) {
  ValidationReport r;
  std::set<std::string> vids(g.vertices.begin(), g.vertices.end());
  if (vids.size() != g.vertices.size()) r.fail("vertices", "duplicate vertex id");
  if (g.vertices.empty()) r.fail("vertices", "empty vertex list");
  std::set<std::string> eids;
  for (const auto& e : g.edges) {
    if (!eids.insert(e.id).second) r.fail("edge " + e.id, "duplicate edge id");
    if (!vids.count(e.from)) r.fail("edge " + e.id, "dangling 'from' vertex " + e.from);
    if (!vids.count(e.to)) r.fail("edge " + e.id, "dangling 'to' vertex " + e.to);
    if (e.label_from == 0) r.fail("edge " + e.id, "label_from is zero");
    if (e.label_to == 0) r.fail("edge " + e.id, "label_to is zero");
  }
  if (!vids.count(g.base)) r.fail("base", "base vertex " + g.base + " not in graph");
  if (!r.ok) return r;
  GraphIndex gi(g);
  if (!gi.connected()) r.fail("graph", "graph is not connected");
  return r;
}

inline ValidationReport validate(const PathWord& w, const GbsGraph& g) {
  ValidationReport r;
  auto gr = validate(g);
  if (!gr.ok) {
    r.fail("graph", "underlying graph invalid");
    return r;
  }
  GraphIndex gi(g);
  int at = gi.base();
  for (std::size_t i = 0; i < w.syllables.size(); ++i) {
    const auto& s = w.syllables[i];
    std::string loc = "syllable " + std::to_string(i);
    if (!gi.has_edge(s.edge)) {
      r.fail(loc, "unknown edge " + s.edge);
      return r;
    }
    int ei = gi.edge_index(s.edge);
    if (gi.tail(ei, s.dir) != at) {
      r.fail(loc, "path not connected: crossing " + s.edge + " does not start at " +
                      gi.vertex(at));
      return r;
    }
    at = gi.head(ei, s.dir);
  }
  if (at != gi.base()) r.fail("word", "path not closed: ends at " + gi.vertex(at));
  return r;
}

inline ValidationReport validate(const TreeHandle& h) {
  ValidationReport r = validate(h.master);
  if (!r.ok) return r;
  std::set<std::string> eids;
  for (const auto& e : h.master.edges) eids.insert(e.id);
  for (const auto& k : h.kept)
    if (!eids.count(k)) r.fail("kept", "kept edge " + k + " not in master");
  return r;
}

inline ValidationReport validate(const SubgroupTable& t) {
  ValidationReport r;
  std::set<std::string> names;
  for (const auto& s : t.symbols) {
    if (!names.insert(s.name).second) r.fail("symbol " + s.name, "duplicate symbol");
    if (!s.order.infinite && s.order.value < 1)
      r.fail("symbol " + s.name, "finite order must be positive");
  }
  auto find = [&](const std::string& n) -> const SymbolDecl* {
    for (const auto& s : t.symbols)
      if (s.name == n) return &s;
    return nullptr;
  };
  for (const auto& i : t.inclusions) {
    const auto* a = find(i.sub);
    const auto* b = find(i.super);
    if (!a || !b) {
      r.fail("inclusion " + i.sub + " <= " + i.super, "unknown symbol");
      continue;
    }
    if (!a->order.infinite && !b->order.infinite && a->order.value > b->order.value)
      r.fail("inclusion " + i.sub + " <= " + i.super, "subgroup order exceeds supergroup order");
    if (a->order.infinite && !b->order.infinite)
      r.fail("inclusion " + i.sub + " <= " + i.super, "infinite subgroup of a finite group");
  }
  // Antisymmetry of the declared partial order.
  for (const auto& i : t.inclusions)
    for (const auto& j : t.inclusions)
      if (i.sub == j.super && i.super == j.sub && i.sub != i.super)
        r.fail("inclusion " + i.sub + " <= " + i.super, "inclusion cycle");
  std::set<std::string> in_class;
  for (const auto& c : t.classes) {
    for (const auto& m : c.members) {
      const auto* s = find(m);
      if (!s) {
        r.fail("class " + c.id, "unknown member " + m);
        continue;
      }
      if (!s->order.infinite) r.fail("class " + c.id, "equiv on finite symbol " + m);
      else if (!s->in_a) r.fail("class " + c.id, "equiv on symbol outside A: " + m);
      if (!in_class.insert(m).second) r.fail("class " + c.id, "symbol " + m + " in two classes");
    }
    if (!find(c.stab)) r.fail("class " + c.id, "unknown class stabilizer " + c.stab);
  }
  for (const auto& e : t.intersections) {
    if (!find(e.a) || !find(e.b)) {
      r.fail("intersection (" + e.a + "," + e.b + ")", "unknown symbol");
      continue;
    }
    if (e.symbol) {
      const auto* s = find(*e.symbol);
      if (!s) r.fail("intersection (" + e.a + "," + e.b + ")", "unknown symbol " + *e.symbol);
      else if (!(s->order == e.order))
        r.fail("intersection (" + e.a + "," + e.b + ")",
               "declared order disagrees with symbol order");
    }
  }
  return r;
}

inline ValidationReport validate(const BallTree& b, const SubgroupTable* table) {
  ValidationReport r;
  if (b.table) {
    auto tr = validate(*b.table);
    if (!tr.ok) {
      for (auto& v : tr.violations) r.fail("table: " + v.location, v.message);
      return r;
    }
  }
  const SubgroupTable* t = b.table ? &*b.table : table;
  std::map<std::string, int> vidx;
  for (const auto& v : b.vertices) {
    if (vidx.count(v.id)) r.fail("vertex " + v.id, "duplicate vertex id");
    vidx[v.id] = static_cast<int>(vidx.size());
  }
  if (b.vertices.empty()) {
    r.fail("vertices", "empty ball");
    return r;
  }
  if (!vidx.count(b.center)) r.fail("center", "center vertex not in ball");
  if (b.interior_radius < 0) r.fail("interior_radius", "negative radius");
  std::set<std::string> eids;
  // Union-find for acyclicity and connectivity.
  std::vector<int> parent(b.vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : b.edges) {
    if (!eids.insert(e.id).second) r.fail("edge " + e.id, "duplicate edge id");
    if (!vidx.count(e.from) || !vidx.count(e.to)) {
      r.fail("edge " + e.id, "dangling endpoint");
      continue;
    }
    int a = root(vidx[e.from]), bb = root(vidx[e.to]);
    if (a == bb) r.fail("edge " + e.id, "creates a cycle: not a tree");
    else parent[a] = bb;
  }
  if (r.ok) {
    int r0 = root(0);
    for (std::size_t i = 1; i < parent.size(); ++i)
      if (root(static_cast<int>(i)) != r0) {
        r.fail("ball", "not connected: not a tree");
        break;
      }
  }
  if (!t) {
    r.fail("table", "no subgroup table available");
    return r;
  }
  TableIndex ti(*t);
  for (const auto& v : b.vertices)
    if (!ti.has_symbol(v.stab)) r.fail("vertex " + v.id, "unknown stab symbol " + v.stab);
  for (const auto& e : b.edges) {
    if (!ti.has_symbol(e.stab)) {
      r.fail("edge " + e.id, "unknown stab symbol " + e.stab);
      continue;
    }
    for (const auto& v : b.vertices) {
      if (v.id != e.from && v.id != e.to) continue;
      if (!ti.has_symbol(v.stab)) continue;
      if (!ti.includes(e.stab, v.stab))
        r.fail("edge " + e.id,
               "edge stab " + e.stab + " not included in endpoint stab " + v.stab);
    }
  }
  return r;
}

}  // namespace treebench
