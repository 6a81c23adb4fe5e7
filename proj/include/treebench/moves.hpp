#pragma once

#include <treebench/britton.hpp>
#include <treebench/handle.hpp>
#include <treebench/model.hpp>
#include <treebench/validate.hpp>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace treebench {

using Dictionary = std::map<std::string, PathWord>;

inline std::string gen_vertex(const std::string& v) { return "x:" + v; }
inline std::string gen_edge(const std::string& e) { return "t:" + e; }

/// Dictionary sending each generator of `g` to its canonical closed word.
inline Dictionary identity_dictionary(const GraphIndex& gi) {
  Dictionary d;
  for (const auto& v : gi.graph().vertices) d[gen_vertex(v)] = vertex_generator(gi, v);
  for (const auto& e : gi.graph().edges) d[gen_edge(e.id)] = edge_letter(gi, e.id);
  return d;
}

/// Image of a word under a generator dictionary into the target graph.
/// A syllable crossing in direction -1 is the edge letter; direction +1 its
/// inverse; exponents become powers of the arrival vertex image.
inline PathWord translate_word(const PathWord& w, const Dictionary& dict,
                               const GraphIndex& source, const GraphIndex& target) {
  auto lookup = [&](const std::string& key) -> const PathWord& {
    auto it = dict.find(key);
    if (it == dict.end()) throw std::invalid_argument("dictionary missing generator " + key);
    return it->second;
  };
  PathWord out = word_power(lookup(gen_vertex(source.graph().base)), w.base_exp, target);
  for (const auto& s : w.syllables) {
    int ei = source.edge_index(s.edge);
    const PathWord& letter = lookup(gen_edge(s.edge));
    PathWord crossing = s.dir < 0 ? letter : inverse(letter);
    const std::string& arrival = source.vertex(source.head(ei, s.dir));
    out = concat(out, crossing);
    if (s.exp != 0)
      out = concat(out, word_power(lookup(gen_vertex(arrival)), s.exp, target));
    out = britton_reduce_word(out, target);
  }
  return out;
}

struct MarkingReport {
  bool ok = true;
  std::vector<std::string> failures;
  // Homomorphy only: surjectivity and injectivity are not verified.
  bool surjectivity_checked = false;
};

/// Checks that every defining relation of the source presentation maps to a
/// word that Britton reduction sends to the identity.
inline MarkingReport verify_marking(const Dictionary& dict, const GraphIndex& source,
                                    const GraphIndex& target) {
  MarkingReport r;
  for (const auto& [key, word] : dict) {
    auto vr = validate(word, target.graph());
    if (!vr.ok) {
      r.ok = false;
      r.failures.push_back("image of " + key + " is not a closed word");
    }
  }
  if (!r.ok) return r;
  for (const auto& e : source.graph().edges) {
    PathWord rel = edge_relation(source, e.id);
    PathWord image = translate_word(rel, dict, source, target);
    if (!is_identity(image, target)) {
      r.ok = false;
      r.failures.push_back("relation of edge " + e.id + " does not map to the identity");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Move application

namespace detail {

inline std::int64_t end_label(const GbsEdge& e, EdgeEnd end) {
  return end == EdgeEnd::From ? e.label_from : e.label_to;
}
inline const std::string& end_vertex(const GbsEdge& e, EdgeEnd end) {
  return end == EdgeEnd::From ? e.from : e.to;
}

}  // namespace detail

/// Applies a move to a handle: collapse shrinks the kept set, expansion and
/// slide rewrite the master presentation.  The translator rewriting pre-move
/// words into post-move words is constructed here and machine-verified;
/// verification failure is an internal bug sentinel.
inline TreeHandle apply_move(const TreeHandle& h, Move m) {
  GraphIndex gi(h.master);
  TreeHandle out;

  switch (m.kind) {
    case MoveKind::Collapse: {
      for (const auto& d : m.dropped) {
        if (!gi.has_edge(d)) throw std::invalid_argument("collapse: unknown edge " + d);
        if (!h.kept.count(d))
          throw std::invalid_argument("collapse: edge " + d + " is already collapsed");
      }
      out.master = h.master;
      out.kept = h.kept;
      for (const auto& d : m.dropped) out.kept.erase(d);
      break;
    }

    case MoveKind::Expansion: {
      if (!h.master.has_vertex(m.vertex))
        throw std::invalid_argument("expansion: unknown vertex " + m.vertex);
      if (h.master.has_vertex(m.new_vertex) || gi.has_edge(m.new_edge))
        throw std::invalid_argument("expansion: new ids collide with the master");
      if (m.index == 0) throw std::invalid_argument("expansion: index must be nonzero");
      GbsGraph g = h.master;
      g.vertices.push_back(m.new_vertex);
      std::set<std::pair<std::string, int>> moved_ends;
      for (const auto& me : m.moved) {
        if (!gi.has_edge(me.edge)) throw std::invalid_argument("expansion: unknown edge " + me.edge);
        GbsEdge& e = g.edges[gi.edge_index(me.edge)];
        if (detail::end_vertex(e, me.end) != m.vertex)
          throw std::invalid_argument("expansion: end of " + me.edge + " is not at " + m.vertex);
        std::int64_t k = detail::end_label(e, me.end);
        if (k % m.index != 0)
          throw std::invalid_argument("expansion: label of " + me.edge +
                                      " not divisible by the index");
        if (me.end == EdgeEnd::From) {
          e.from = m.new_vertex;
          e.label_from = k / m.index;
        } else {
          e.to = m.new_vertex;
          e.label_to = k / m.index;
        }
        moved_ends.emplace(me.edge, me.end == EdgeEnd::From ? 0 : 1);
      }
      g.edges.push_back(GbsEdge{m.new_edge, m.vertex, m.new_vertex, m.index, 1});
      out.master = std::move(g);
      out.kept = h.kept;
      out.kept.insert(m.new_edge);

      GraphIndex ngi(out.master);
      PathWord hat = edge_letter(ngi, m.new_edge);
      for (const auto& v : h.master.vertices)
        m.translator[gen_vertex(v)] = vertex_generator(ngi, v);
      for (const auto& e : h.master.edges) {
        PathWord w = edge_letter(ngi, e.id);
        if (moved_ends.count({e.id, 1})) w = concat(inverse(hat), w);
        if (moved_ends.count({e.id, 0})) w = concat(w, hat);
        m.translator[gen_edge(e.id)] = britton_reduce_word(w, ngi);
      }
      break;
    }

    case MoveKind::Slide: {
      if (!gi.has_edge(m.edge) || !gi.has_edge(m.over))
        throw std::invalid_argument("slide: unknown edge");
      if (m.edge == m.over) throw std::invalid_argument("slide: cannot slide an edge over itself");
      const GbsEdge& e0 = h.master.edges[gi.edge_index(m.edge)];
      const GbsEdge& f = h.master.edges[gi.edge_index(m.over)];
      const std::string& v = detail::end_vertex(e0, m.end);
      if (detail::end_vertex(f, m.over_end) != v)
        throw std::invalid_argument("slide: edges do not share the sliding vertex");
      std::int64_t q = detail::end_label(f, m.over_end);
      std::int64_t k = detail::end_label(e0, m.end);
      if (k % q != 0)
        throw std::invalid_argument("slide: label " + std::to_string(k) +
                                    " not divisible by " + std::to_string(q));
      EdgeEnd far = m.over_end == EdgeEnd::From ? EdgeEnd::To : EdgeEnd::From;
      const std::string& w = detail::end_vertex(f, far);
      std::int64_t p = detail::end_label(f, far);
      GbsGraph g = h.master;
      GbsEdge& e = g.edges[gi.edge_index(m.edge)];
      if (m.end == EdgeEnd::From) {
        e.from = w;
        e.label_from = (k / q) * p;
      } else {
        e.to = w;
        e.label_to = (k / q) * p;
      }
      out.master = std::move(g);
      out.kept = h.kept;

      GraphIndex ngi(out.master);
      for (const auto& vv : h.master.vertices)
        m.translator[gen_vertex(vv)] = vertex_generator(ngi, vv);
      for (const auto& ee : h.master.edges) {
        if (ee.id != m.edge) {
          m.translator[gen_edge(ee.id)] = edge_letter(ngi, ee.id);
          continue;
        }
        PathWord te = edge_letter(ngi, m.edge);
        PathWord tf = edge_letter(ngi, m.over);
        PathWord img;
        if (m.end == EdgeEnd::To)
          img = m.over_end == EdgeEnd::From ? concat(inverse(tf), te) : concat(tf, te);
        else
          img = m.over_end == EdgeEnd::From ? concat(te, tf) : concat(te, inverse(tf));
        m.translator[gen_edge(ee.id)] = britton_reduce_word(img, ngi);
      }
      break;
    }
  }

  if (m.kind != MoveKind::Collapse) {
    GraphIndex ngi(out.master);
    auto report = verify_marking(m.translator, gi, ngi);
    if (!report.ok)
      throw std::logic_error("move translator failed verification: " + report.failures.front());
  }
  out.lineage = h.lineage;
  out.lineage.push_back(std::move(m));
  return out;
}

/// Rewrites a pre-move word through a move's translator (collapse moves keep
/// the presentation, so the word passes through unchanged).
inline PathWord translate_through(const PathWord& w, const Move& m, const GraphIndex& source,
                                  const GraphIndex& target) {
  if (m.kind == MoveKind::Collapse) return w;
  return translate_word(w, m.translator, source, target);
}

// ---------------------------------------------------------------------------
// Reducedness

struct ReducednessWitness {
  std::string edge;
  EdgeEnd side = EdgeEnd::From;
};

struct ReducednessReport {
  bool reduced = true;
  std::optional<ReducednessWitness> witness;
};

namespace detail {

/// Decides whether a non-kept component's group is infinite cyclic, and if
/// so returns the power M with x_{attach} = x_survivor^M: iteratively
/// contract leaf edges whose leaf-side label is +-1.  Any cycle in the
/// component makes the group an HNN over Z, never cyclic.
inline std::optional<BigInt> cyclic_component_power(const HandleIndex& hi,
                                                    const HandleIndex::Component& comp,
                                                    int attach_vertex) {
  const GraphIndex& gi = hi.graph();
  if (comp.edges.size() + 1 != comp.vertices.size()) return std::nullopt;
  if (comp.vertices.size() == 1) return BigInt(1);

  std::map<int, std::vector<int>> incident;  // vertex -> component edges
  for (int ei : comp.edges) {
    incident[gi.tail(ei, +1)].push_back(ei);
    incident[gi.head(ei, +1)].push_back(ei);
  }
  std::set<int> alive_edges(comp.edges.begin(), comp.edges.end());
  std::map<int, std::pair<int, BigInt>> absorbed;  // vertex -> (into, factor)
  std::set<int> alive_vertices(comp.vertices.begin(), comp.vertices.end());

  bool progress = true;
  while (alive_edges.size() > 0 && progress) {
    progress = false;
    for (int v : std::vector<int>(alive_vertices.begin(), alive_vertices.end())) {
      int deg = 0, leaf_edge = -1;
      for (int ei : incident[v])
        if (alive_edges.count(ei)) {
          ++deg;
          leaf_edge = ei;
        }
      if (deg != 1) continue;
      const GbsEdge& e = gi.edge(leaf_edge);
      bool v_is_from = gi.vertex_index(e.from) == v;
      std::int64_t leaf_label = v_is_from ? e.label_from : e.label_to;
      std::int64_t inner_label = v_is_from ? e.label_to : e.label_from;
      if (leaf_label != 1 && leaf_label != -1) continue;
      int z = v_is_from ? gi.vertex_index(e.to) : gi.vertex_index(e.from);
      // x_v^leaf = x_z^inner, so x_v = x_z^{leaf * inner}.
      absorbed[v] = {z, BigInt(leaf_label) * inner_label};
      alive_edges.erase(leaf_edge);
      alive_vertices.erase(v);
      progress = true;
    }
  }
  if (!alive_edges.empty()) return std::nullopt;

  BigInt power = 1;
  int cur = attach_vertex;
  while (absorbed.count(cur)) {
    power *= absorbed[cur].second;
    cur = absorbed[cur].first;
  }
  return power;
}

}  // namespace detail

/// Forester criterion on the quotient graph of the handle's tree: reduced
/// iff no kept edge with distinct collapsed endpoints has an onto inclusion.
inline ReducednessReport is_reduced(const HandleIndex& hi) {
  const GraphIndex& gi = hi.graph();
  ReducednessReport r;
  std::vector<std::string> kept_sorted(hi.handle().kept.begin(), hi.handle().kept.end());
  for (const auto& id : kept_sorted) {
    int ei = gi.edge_index(id);
    const GbsEdge& e = gi.edge(ei);
    int cf = hi.component_of_vertex(gi.vertex_index(e.from));
    int ct = hi.component_of_vertex(gi.vertex_index(e.to));
    if (cf == ct) continue;  // loops in the quotient never violate
    for (EdgeEnd side : {EdgeEnd::From, EdgeEnd::To}) {
      int attach = gi.vertex_index(detail::end_vertex(e, side));
      const auto& comp = hi.components()[hi.component_of_vertex(attach)];
      auto power = detail::cyclic_component_power(hi, comp, attach);
      if (!power) continue;
      BigInt idx = BigInt(detail::end_label(e, side)) * *power;
      if (idx == 1 || idx == -1) {
        r.reduced = false;
        r.witness = ReducednessWitness{id, side};
        return r;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Domination

struct DominationReport {
  bool dominates = true;
  std::optional<PathWord> witness;       // non-elliptic generator or product
  std::optional<std::string> component;  // anchor vertex of the failing group
};

/// Every vertex stabilizer of t1 must fix a point of t2's tree; tested on
/// the finite generating set of each collapsed component via Serre's Lemma.
/// Words live over a common master unless a verified marking translates
/// t1-words into t2-words.
inline DominationReport dominates(const HandleIndex& t1, const HandleIndex& t2,
                                  const Dictionary* marking = nullptr) {
  DominationReport r;
  for (const auto& comp : t1.components()) {
    auto gens = component_generators(t1, comp);
    if (marking) {
      for (auto& g : gens) g = translate_word(g, *marking, t1.graph(), t2.graph());
    }
    auto ew = subgroup_elliptic(gens, t2);
    if (!ew.elliptic) {
      r.dominates = false;
      r.witness = ew.witness;
      r.component = t1.graph().vertex(comp.anchor);
      return r;
    }
  }
  return r;
}

inline bool same_deformation_space(const HandleIndex& t1, const HandleIndex& t2) {
  return dominates(t1, t2).dominates && dominates(t2, t1).dominates;
}

// ---------------------------------------------------------------------------
// Small domination

struct SmallDominationReport {
  DominationReport domination;
  bool edge_groups_elliptic = true;
  std::vector<std::string> hyperbolic_edge_groups;   // kept edges of T*
  struct NewElliptic {
    std::string component_anchor;
    bool flagged_small = false;
  };
  std::vector<NewElliptic> vertex_groups_not_elliptic;  // T* vertex groups not elliptic in T
};

/// Partial verifier for small domination: (i) T dominates T*, (ii) edge
/// stabilizers of T* are elliptic in T, (iii) lists T* vertex groups that
/// fail to be elliptic in T, with the caller's smallness flags attached
/// (smallness itself is not decided here).
inline SmallDominationReport verify_small_domination(
    const HandleIndex& t, const HandleIndex& tstar,
    const std::map<std::string, bool>& small_flags) {
  SmallDominationReport r;
  r.domination = dominates(t, tstar);
  const GraphIndex& gi = tstar.graph();
  std::vector<std::string> kept_sorted(tstar.handle().kept.begin(), tstar.handle().kept.end());
  for (const auto& id : kept_sorted) {
    const GbsEdge& e = gi.edge(gi.edge_index(id));
    PathWord gen = vertex_generator(gi, e.from, e.label_from);
    if (!is_elliptic(gen, t)) {
      r.edge_groups_elliptic = false;
      r.hyperbolic_edge_groups.push_back(id);
    }
  }
  for (const auto& comp : tstar.components()) {
    auto gens = component_generators(tstar, comp);
    if (subgroup_elliptic(gens, t).elliptic) continue;
    std::string anchor = gi.vertex(comp.anchor);
    auto it = small_flags.find(anchor);
    r.vertex_groups_not_elliptic.push_back(
        SmallDominationReport::NewElliptic{anchor, it != small_flags.end() && it->second});
  }
  return r;
}

}  // namespace treebench
