#pragma once

#include <treebench/britton.hpp>
#include <treebench/graph.hpp>
#include <treebench/model.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace treebench {

/// Compiled view of a TreeHandle: master graph index, kept flags per edge,
/// and the connected components of the non-kept subgraph.  Each component is
/// a vertex group of the collapsed tree.
class HandleIndex {
 public:
  struct Component {
    std::vector<int> vertices;    // master vertex indices
    std::vector<int> edges;       // non-kept master edge indices inside
    int anchor = -1;              // deterministic representative vertex
  };

  explicit HandleIndex(const TreeHandle& h) : handle_(&h), gi_(h.master) {
    kept_.assign(h.master.edges.size(), false);
    for (const auto& id : h.kept) kept_[gi_.edge_index(id)] = true;

    comp_of_.assign(h.master.vertices.size(), -1);
    for (int v = 0; v < gi_.vertex_count(); ++v) {
      if (comp_of_[v] != -1) continue;
      int cid = static_cast<int>(components_.size());
      components_.push_back(Component{});
      std::vector<int> stack{v};
      comp_of_[v] = cid;
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        components_[cid].vertices.push_back(cur);
        for (const auto& end : gi_.ends_at(cur)) {
          if (kept_[end.edge]) continue;
          int w = gi_.head(end.edge, end.dir);
          if (comp_of_[w] == -1) {
            comp_of_[w] = cid;
            stack.push_back(w);
          }
        }
      }
      auto& comp = components_[cid];
      std::sort(comp.vertices.begin(), comp.vertices.end(), [&](int a, int b) {
        return gi_.vertex(a) < gi_.vertex(b);
      });
      comp.anchor = comp.vertices.front();
    }
    for (std::size_t ei = 0; ei < h.master.edges.size(); ++ei) {
      if (kept_[ei]) continue;
      int c = comp_of_[gi_.tail(static_cast<int>(ei), +1)];
      components_[c].edges.push_back(static_cast<int>(ei));
    }
  }

  const TreeHandle& handle() const { return *handle_; }
  const GraphIndex& graph() const { return gi_; }
  bool kept(int edge) const { return kept_[edge]; }
  bool kept(const std::string& id) const { return kept_[gi_.edge_index(id)]; }
  int component_of_vertex(int v) const { return comp_of_[v]; }
  const std::vector<Component>& components() const { return components_; }

 private:
  const TreeHandle* handle_;
  GraphIndex gi_;
  std::vector<bool> kept_;
  std::vector<int> comp_of_;
  std::vector<Component> components_;
};

/// Number of kept-edge letters in the cyclically reduced form: the exact
/// translation length in the collapsed tree (collapse maps preserve
/// alignment, so the master axis maps onto the collapsed axis).
inline BigInt translation_length(const PathWord& g, const HandleIndex& hi) {
  ReducedForm rf = britton_reduce(g, hi.graph(), true);
  BigInt n = 0;
  for (const auto& s : rf.core_syllables)
    if (hi.kept(s.edge)) ++n;
  return n;
}

inline bool is_elliptic(const PathWord& g, const HandleIndex& hi) {
  return translation_length(g, hi) == 0;
}

/// Whether two elliptic elements have intersecting fixed point sets in the
/// handle's tree; by Serre's Lemma this is equivalent to their product being
/// elliptic.
inline bool fix_overlap(const PathWord& g, const PathWord& h, const HandleIndex& hi) {
  if (!is_elliptic(g, hi) || !is_elliptic(h, hi))
    throw std::invalid_argument("fix_overlap: both elements must be elliptic");
  return is_elliptic(concat(g, h), hi);
}

/// Finite generating set of a component's vertex group, conjugated to the
/// base by a single anchor path: vertex generators and loop letters of the
/// non-kept component.
inline std::vector<PathWord> component_generators(const HandleIndex& hi,
                                                  const HandleIndex::Component& comp) {
  const GraphIndex& gi = hi.graph();
  // Spanning tree of the component, rooted at the anchor.
  std::map<int, std::pair<int, int>> step_to;  // vertex -> (edge, dir) from parent
  std::map<int, bool> seen;
  for (int v : comp.vertices) seen[v] = false;
  std::vector<int> queue{comp.anchor};
  seen[comp.anchor] = true;
  std::vector<int> tree_edges;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    for (const auto& end : gi.ends_at(v)) {
      if (hi.kept(end.edge)) continue;
      int w = gi.head(end.edge, end.dir);
      if (seen.at(w)) continue;
      seen[w] = true;
      step_to[w] = {end.edge, end.dir};
      tree_edges.push_back(end.edge);
      queue.push_back(w);
    }
  }
  auto comp_path = [&](int v) {
    std::vector<Syllable> steps;
    for (int cur = v; cur != comp.anchor;) {
      auto [e, d] = step_to.at(cur);
      steps.push_back(Syllable{gi.edge(e).id, d, 0});
      cur = gi.tail(e, d);
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };

  PathWord anchor_path = path_word(gi.tree_path(comp.anchor));
  auto conjugate_in = [&](const PathWord& w) {
    return concat(anchor_path, concat(w, inverse(anchor_path)));
  };

  std::vector<PathWord> gens;
  for (int v : comp.vertices) {
    PathWord inner;
    auto steps = comp_path(v);
    if (steps.empty()) {
      inner.base_exp = 1;
    } else {
      inner.syllables = steps;
      inner.syllables.back().exp = 1;
      auto back = invert_steps(steps);
      inner.syllables.insert(inner.syllables.end(), back.begin(), back.end());
    }
    gens.push_back(conjugate_in(inner));
  }
  for (int ei : comp.edges) {
    if (std::find(tree_edges.begin(), tree_edges.end(), ei) != tree_edges.end()) continue;
    const auto& e = gi.edge(ei);
    PathWord inner;
    inner.syllables = comp_path(gi.vertex_index(e.to));
    inner.syllables.push_back(Syllable{e.id, -1, 0});
    auto back = invert_steps(comp_path(gi.vertex_index(e.from)));
    inner.syllables.insert(inner.syllables.end(), back.begin(), back.end());
    gens.push_back(conjugate_in(inner));
  }
  return gens;
}

/// Serre test for ellipticity of a finitely generated subgroup: the group
/// generated by elliptic elements is elliptic iff all pairwise products are
/// elliptic.  Returns an offending generator or product when hyperbolic.
struct EllipticityWitness {
  bool elliptic = true;
  PathWord witness;
};

inline EllipticityWitness subgroup_elliptic(const std::vector<PathWord>& gens,
                                            const HandleIndex& hi) {
  for (const auto& g : gens)
    if (!is_elliptic(g, hi)) return EllipticityWitness{false, g};
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      PathWord prod = concat(gens[i], gens[j]);
      if (!is_elliptic(prod, hi)) return EllipticityWitness{false, prod};
    }
  return EllipticityWitness{};
}

}  // namespace treebench
