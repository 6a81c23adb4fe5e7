#pragma once

#include <treebench/model.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace treebench {

/// Index structures for one GbsGraph: fast id lookup, incident edge ends and
/// a deterministic spanning tree rooted at the base vertex.
class GraphIndex {
 public:
  struct End {
    int edge = -1;
    // Crossing direction that leaves this vertex through the end: +1 if the
    // end is the `from` side, -1 if it is the `to` side.
    int dir = 1;
  };

  explicit GraphIndex(const GbsGraph& g) : graph_(&g) {
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      if (!vertex_idx_.emplace(g.vertices[i], static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate vertex id: " + g.vertices[i]);
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      if (!edge_idx_.emplace(e.id, static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate edge id: " + e.id);
      if (!vertex_idx_.count(e.from) || !vertex_idx_.count(e.to))
        throw std::invalid_argument("edge " + e.id + " has dangling endpoint");
    }
    if (!vertex_idx_.count(g.base)) throw std::invalid_argument("missing base vertex");

    ends_.resize(g.vertices.size());
    // Sorted edge order keeps every derived structure deterministic.
    std::vector<int> order(g.edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.edges[a].id < g.edges[b].id; });
    for (int ei : order) {
      const auto& e = g.edges[ei];
      ends_[vertex_idx_.at(e.from)].push_back(End{ei, +1});
      ends_[vertex_idx_.at(e.to)].push_back(End{ei, -1});
    }
    build_spanning_tree();
  }

  const GbsGraph& graph() const { return *graph_; }
  int vertex_index(const std::string& id) const {
    auto it = vertex_idx_.find(id);
    if (it == vertex_idx_.end()) throw std::invalid_argument("unknown vertex: " + id);
    return it->second;
  }
  int edge_index(const std::string& id) const {
    auto it = edge_idx_.find(id);
    if (it == edge_idx_.end()) throw std::invalid_argument("unknown edge: " + id);
    return it->second;
  }
  bool has_edge(const std::string& id) const { return edge_idx_.count(id) != 0; }
  const GbsEdge& edge(int i) const { return graph_->edges[i]; }
  const std::string& vertex(int i) const { return graph_->vertices[i]; }
  int base() const { return vertex_index(graph_->base); }
  int vertex_count() const { return static_cast<int>(graph_->vertices.size()); }
  const std::vector<End>& ends_at(int v) const { return ends_[v]; }

  /// Departure vertex of a crossing.
  int tail(int edge, int dir) const {
    const auto& e = graph_->edges[edge];
    return vertex_index(dir > 0 ? e.from : e.to);
  }
  /// Arrival vertex of a crossing.
  int head(int edge, int dir) const {
    const auto& e = graph_->edges[edge];
    return vertex_index(dir > 0 ? e.to : e.from);
  }
  /// Label at the departure end of a crossing.
  std::int64_t tail_label(int edge, int dir) const {
    const auto& e = graph_->edges[edge];
    return dir > 0 ? e.label_from : e.label_to;
  }
  /// Label at the arrival end of a crossing.
  std::int64_t head_label(int edge, int dir) const {
    const auto& e = graph_->edges[edge];
    return dir > 0 ? e.label_to : e.label_from;
  }

  bool connected() const { return reached_all_; }

  /// Crossings along the spanning tree from the base to v (zero exponents).
  std::vector<Syllable> tree_path(int v) const {
    std::vector<Syllable> steps;
    for (int cur = v; cur != base();) {
      const auto& st = tree_step_[cur];
      steps.push_back(Syllable{graph_->edges[st.edge].id, st.dir, 0});
      cur = tail(st.edge, st.dir);
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  }

 private:
  struct Step {
    int edge = -1;
    int dir = 0;
  };

  void build_spanning_tree() {
    tree_step_.assign(graph_->vertices.size(), Step{});
    std::vector<bool> seen(graph_->vertices.size(), false);
    std::deque<int> queue;
    int b = base();
    seen[b] = true;
    queue.push_back(b);
    std::size_t reached = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (const auto& end : ends_[v]) {
        int w = head(end.edge, end.dir);
        if (seen[w]) continue;
        seen[w] = true;
        tree_step_[w] = Step{end.edge, end.dir};
        ++reached;
        queue.push_back(w);
      }
    }
    reached_all_ = reached == graph_->vertices.size();
  }

  const GbsGraph* graph_;
  std::map<std::string, int> vertex_idx_;
  std::map<std::string, int> edge_idx_;
  std::vector<std::vector<End>> ends_;
  std::vector<Step> tree_step_;
  bool reached_all_ = false;
};

// ---------------------------------------------------------------------------
// Canonical generator words.  The letter of an edge e is the crossing in
// direction -1; for a loop presenting BS(m,n) with labels (m,n) this is the
// stable letter t with t x^m t^-1 = x^n.

inline PathWord concat_steps(const std::vector<Syllable>& a, const std::vector<Syllable>& b) {
  PathWord w;
  w.syllables = a;
  w.syllables.insert(w.syllables.end(), b.begin(), b.end());
  return w;
}

inline std::vector<Syllable> invert_steps(const std::vector<Syllable>& steps) {
  std::vector<Syllable> out;
  out.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    out.push_back(Syllable{it->edge, -it->dir, 0});
  return out;
}

/// Conjugated vertex generator p_v x_v p_v^-1 as a closed word at the base.
inline PathWord vertex_generator(const GraphIndex& gi, const std::string& vertex,
                                 const BigInt& power = 1) {
  int v = gi.vertex_index(vertex);
  PathWord w;
  if (v == gi.base()) {
    w.base_exp = power;
    return w;
  }
  auto path = gi.tree_path(v);
  w.syllables = path;
  w.syllables.back().exp = power;
  auto back = invert_steps(path);
  w.syllables.insert(w.syllables.end(), back.begin(), back.end());
  return w;
}

/// Closed word for the letter of edge e: path to to(e), cross backwards,
/// return from from(e) along the spanning tree.
inline PathWord edge_letter(const GraphIndex& gi, const std::string& edge) {
  int ei = gi.edge_index(edge);
  const auto& e = gi.edge(ei);
  PathWord w;
  w.syllables = gi.tree_path(gi.vertex_index(e.to));
  w.syllables.push_back(Syllable{e.id, -1, 0});
  auto back = invert_steps(gi.tree_path(gi.vertex_index(e.from)));
  w.syllables.insert(w.syllables.end(), back.begin(), back.end());
  return w;
}

/// Defining relation of edge e, conjugated to the base vertex:
/// t_e x_from^{label_from} t_e^-1 x_to^{-label_to}.
inline PathWord edge_relation(const GraphIndex& gi, const std::string& edge) {
  int ei = gi.edge_index(edge);
  const auto& e = gi.edge(ei);
  PathWord w;
  auto path = gi.tree_path(gi.vertex_index(e.to));
  w.syllables = path;
  w.syllables.push_back(Syllable{e.id, -1, e.label_from});
  w.syllables.push_back(Syllable{e.id, +1, -BigInt(e.label_to)});
  auto back = invert_steps(path);
  w.syllables.insert(w.syllables.end(), back.begin(), back.end());
  return w;
}

}  // namespace treebench
