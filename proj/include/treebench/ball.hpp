#pragma once

#include <treebench/britton.hpp>
#include <treebench/handle.hpp>
#include <treebench/model.hpp>

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treebench {

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One step of a normal-form path in the master Bass-Serre tree: apply the
/// departure vertex generator to the power `residue` (reduced modulo the
/// label at the departure end), then cross.
struct TreeStep {
  BigInt residue;
  int edge = -1;
  int dir = 1;

  bool operator==(const TreeStep& o) const {
    return residue == o.residue && edge == o.edge && dir == o.dir;
  }
};

/// Canonical coset representative of a master tree vertex: the unique
/// reduced residue path from the base vertex lift.
using NormalForm = std::vector<TreeStep>;

inline std::string normal_form_key(const NormalForm& nf) {
  std::ostringstream os;
  for (const auto& s : nf) os << s.residue.str() << ':' << s.edge << ':' << s.dir << '|';
  return os.str();
}

/// Path word tracing a normal form from the base (trailing exponent zero).
inline PathWord normal_form_word(const NormalForm& nf, const GraphIndex& gi) {
  PathWord w;
  if (nf.empty()) return w;
  w.base_exp = nf.front().residue;
  for (std::size_t i = 0; i < nf.size(); ++i) {
    BigInt next = i + 1 < nf.size() ? nf[i + 1].residue : BigInt(0);
    w.syllables.push_back(Syllable{gi.edge(nf[i].edge).id, nf[i].dir, next});
  }
  return w;
}

/// Britton-reduce a path from the base and push exponents into canonical
/// coset residues; the trailing exponent is absorbed by the vertex group.
inline NormalForm normalize_vertex(const PathWord& path, const GraphIndex& gi) {
  PathWord red = britton_reduce_word(path, gi);
  NormalForm nf;
  BigInt prev = red.base_exp;
  BigInt carry = 0;
  for (std::size_t i = 0; i < red.syllables.size(); ++i) {
    const auto& s = red.syllables[i];
    int ei = gi.edge_index(s.edge);
    BigInt q = gi.tail_label(ei, s.dir);
    auto split = euclid_split(prev + carry, q);
    if (!nf.empty() && nf.back().edge == ei && nf.back().dir == -s.dir &&
        split.remainder == 0)
      throw std::logic_error("normalize_vertex: residue pushing exposed a backtrack");
    nf.push_back(TreeStep{split.remainder, ei, s.dir});
    carry = split.quotient * gi.head_label(ei, s.dir);
    prev = s.exp;
  }
  return nf;
}

inline std::size_t common_prefix(const NormalForm& a, const NormalForm& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

/// Kept-edge count of the master geodesic between two vertices: the exact
/// distance between their images in the collapsed tree.
inline BigInt kept_distance(const NormalForm& a, const NormalForm& b, const HandleIndex& hi) {
  std::size_t p = common_prefix(a, b);
  BigInt d = 0;
  for (std::size_t i = p; i < a.size(); ++i)
    if (hi.kept(a[i].edge)) ++d;
  for (std::size_t i = p; i < b.size(); ++i)
    if (hi.kept(b[i].edge)) ++d;
  return d;
}

/// Representative of a collapsed-tree vertex: normal form with trailing
/// non-kept steps peeled (the component vertex nearest the base).
inline NormalForm peel(NormalForm nf, const HandleIndex& hi) {
  while (!nf.empty() && !hi.kept(nf.back().edge)) nf.pop_back();
  return nf;
}

/// Image of a collapsed-tree vertex under a group element.
inline NormalForm apply_word(const PathWord& g, const NormalForm& v, const GraphIndex& gi) {
  return normalize_vertex(concat(g, normal_form_word(v, gi)), gi);
}

// ---------------------------------------------------------------------------
// Ball expansion

/// Finite ball of the handle's tree, with the normal form of each vertex.
struct ExpandedBall {
  BallTree ball;
  std::vector<NormalForm> forms;       // per ball vertex
  std::vector<std::int64_t> level;     // distance from the center
  std::map<std::string, int> by_key;   // normal form key -> vertex index
  std::int64_t radius = 0;

  int vertex_count() const { return static_cast<int>(forms.size()); }
};

inline ExpandedBall expand_ball(const HandleIndex& hi, const std::string& center_vertex,
                                std::int64_t radius, std::size_t max_vertices = 1000000) {
  if (radius < 0) throw std::invalid_argument("expand_ball: negative radius");
  const GraphIndex& gi = hi.graph();
  bool full = true;
  for (std::size_t e = 0; e < gi.graph().edges.size(); ++e)
    if (!hi.kept(static_cast<int>(e))) full = false;

  ExpandedBall out;
  out.radius = radius;
  std::size_t budget = 0;
  auto charge = [&](std::size_t n) {
    budget += n;
    if (budget > max_vertices)
      throw ResourceLimitError("expand_ball: vertex cap exceeded (" +
                               std::to_string(max_vertices) + ")");
  };

  auto add_vertex = [&](const NormalForm& nf, std::int64_t lvl) {
    int idx = static_cast<int>(out.forms.size());
    out.forms.push_back(nf);
    out.level.push_back(lvl);
    out.by_key.emplace(normal_form_key(nf), idx);
    charge(1);
    return idx;
  };

  NormalForm center =
      peel(normalize_vertex(path_word(gi.tree_path(gi.vertex_index(center_vertex))), gi), hi);
  add_vertex(center, 0);

  std::set<std::pair<int, int>> edge_pairs;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int vi = queue.front();
    queue.pop_front();
    if (out.level[vi] >= radius) continue;
    NormalForm rep = out.forms[vi];

    // Enumerate the component of the representative: every master vertex
    // reachable through non-kept crossings (all descendants of the rep).
    std::vector<NormalForm> members{rep};
    for (std::size_t mi = 0; mi < members.size(); ++mi) {
      NormalForm cur = members[mi];
      int at = cur.empty() ? gi.base() : gi.head(cur.back().edge, cur.back().dir);
      for (const auto& end : gi.ends_at(at)) {
        if (hi.kept(end.edge)) continue;
        BigInt q = gi.tail_label(end.edge, end.dir);
        BigInt absq = q < 0 ? BigInt(-q) : q;
        for (BigInt j = 0; j < absq; ++j) {
          if (!cur.empty() && cur.back().edge == end.edge && cur.back().dir == -end.dir &&
              j == 0)
            continue;  // parent of the component subtree
          NormalForm child = cur;
          child.push_back(TreeStep{j, end.edge, end.dir});
          charge(1);
          members.push_back(std::move(child));
        }
      }
    }

    for (const auto& mu : members) {
      int at = mu.empty() ? gi.base() : gi.head(mu.back().edge, mu.back().dir);
      for (const auto& end : gi.ends_at(at)) {
        if (!hi.kept(end.edge)) continue;
        BigInt q = gi.tail_label(end.edge, end.dir);
        BigInt absq = q < 0 ? BigInt(-q) : q;
        for (BigInt j = 0; j < absq; ++j) {
          NormalForm neighbor;
          if (!mu.empty() && mu.back().edge == end.edge && mu.back().dir == -end.dir &&
              j == 0) {
            neighbor = mu;
            neighbor.pop_back();
            neighbor = peel(std::move(neighbor), hi);
          } else {
            neighbor = mu;
            neighbor.push_back(TreeStep{j, end.edge, end.dir});
          }
          auto key = normal_form_key(neighbor);
          auto it = out.by_key.find(key);
          int ni;
          if (it == out.by_key.end()) {
            ni = add_vertex(neighbor, out.level[vi] + 1);
            queue.push_back(ni);
          } else {
            ni = it->second;
          }
          edge_pairs.emplace(std::min(vi, ni), std::max(vi, ni));
        }
      }
    }
  }

  // Assemble the exportable document with a synthesized table.
  BallTree& b = out.ball;
  b.center = "v0";
  b.interior_radius = radius;
  SubgroupTable table;
  for (int i = 0; i < out.vertex_count(); ++i) {
    std::string id = "v" + std::to_string(i);
    std::string stab = "Gv_" + id;
    b.vertices.push_back(BallVertex{id, stab, std::nullopt});
    table.symbols.push_back(SymbolDecl{stab, OrderValue::inf(), true, std::nullopt});
  }
  int en = 0;
  for (const auto& [a, c] : edge_pairs) {
    std::string id = "e" + std::to_string(en++);
    std::string stab = "Ge_" + id;
    b.edges.push_back(
        BallEdge{id, "v" + std::to_string(a), "v" + std::to_string(c), stab, std::nullopt});
    table.symbols.push_back(SymbolDecl{stab, OrderValue::inf(), true, std::nullopt});
    std::optional<BigInt> ia, ic;
    if (full) {
      // Index of the edge coset stabilizer in each endpoint vertex group.
      std::size_t p = common_prefix(out.forms[a], out.forms[c]);
      const NormalForm& longer = out.forms[a].size() > out.forms[c].size() ? out.forms[a]
                                                                           : out.forms[c];
      if (p < longer.size()) {
        const TreeStep& st = longer[p];
        BigInt tl = gi.tail_label(st.edge, st.dir);
        BigInt hl = gi.head_label(st.edge, st.dir);
        bool a_shorter = out.forms[a].size() < out.forms[c].size();
        ia = a_shorter ? (tl < 0 ? -tl : tl) : (hl < 0 ? -hl : hl);
        ic = a_shorter ? (hl < 0 ? -hl : hl) : (tl < 0 ? -tl : tl);
      }
    }
    table.inclusions.push_back(Inclusion{stab, "Gv_v" + std::to_string(a), ia});
    table.inclusions.push_back(Inclusion{stab, "Gv_v" + std::to_string(c), ic});
  }
  b.table = std::move(table);
  return out;
}

// ---------------------------------------------------------------------------
// Displacement, axes, bridges

struct Displacement {
  BigInt value;
  bool certified = false;
  int argmin = -1;  // ball vertex index, nearest-to-center minimizer
  BigInt center_travel;  // d(center, g center), certification input
};

namespace detail {

inline bool interior_vertex(const ExpandedBall& eb, int v, std::int64_t margin) {
  return eb.level[v] <= eb.ball.interior_radius - (margin - 1);
}

}  // namespace detail

/// Minimum of d(x, g x) over interior ball vertices, with exact per-vertex
/// distances computed through normal forms.  Certified when the interior is
/// provably large enough to contain a global minimizer: the spec envelope
/// radius 2|g| or the tight bound ceil(d(center, g center)/2), whichever
/// certifies first.
inline Displacement min_displacement_in_ball(const PathWord& g, const ExpandedBall& eb,
                                             const HandleIndex& hi, std::int64_t margin = 1) {
  const GraphIndex& gi = hi.graph();
  Displacement out;
  bool have = false;
  for (int v = 0; v < eb.vertex_count(); ++v) {
    if (!detail::interior_vertex(eb, v, margin)) continue;
    NormalForm image = apply_word(g, eb.forms[v], gi);
    BigInt d = kept_distance(eb.forms[v], image, hi);
    if (!have || d < out.value) {
      out.value = d;
      out.argmin = v;
      have = true;
    }
  }
  if (!have) throw std::invalid_argument("min_displacement_in_ball: empty interior");
  NormalForm gc = apply_word(g, eb.forms[0], gi);
  out.center_travel = kept_distance(eb.forms[0], gc, hi);
  std::int64_t interior = eb.ball.interior_radius - (margin - 1);
  ReducedForm rf = britton_reduce(g, gi, false);
  BigInt tight = (out.center_travel + 1) / 2;
  BigInt envelope = BigInt(2) * BigInt(rf.word.syllables.size());
  out.certified = BigInt(interior) >= tight || BigInt(interior) >= envelope;
  return out;
}

/// Exact minimum displacement without a ball: the minimizer of d(x, gx)
/// lies on the tree geodesic from the base point to its image, and those
/// vertices are the peeled prefixes of the image's normal form.  Works even
/// when the collapsed tree is not locally finite.
inline BigInt path_displacement_oracle(const PathWord& g, const HandleIndex& hi) {
  const GraphIndex& gi = hi.graph();
  NormalForm image = normalize_vertex(g, gi);
  BigInt best;
  bool have = false;
  for (std::size_t len = 0; len <= image.size(); ++len) {
    NormalForm prefix(image.begin(), image.begin() + len);
    NormalForm x = peel(prefix, hi);
    BigInt d = kept_distance(x, apply_word(g, x, gi), hi);
    if (!have || d < best) {
      best = d;
      have = true;
    }
  }
  return best;
}

struct AxisData {
  PathWord element;
  BigInt length;
  std::vector<std::string> axis_segment;       // ball edge ids, one period
  std::optional<std::string> characteristic_point;
  bool certified = false;
};

namespace detail {

/// Edge path between two ball vertices, via BFS parents inside the ball.
inline std::optional<std::vector<std::string>> ball_path(const ExpandedBall& eb, int a, int b) {
  std::map<std::pair<int, int>, std::string> edge_id;
  std::map<int, std::vector<int>> adj;
  std::map<std::string, int> vidx;
  for (int i = 0; i < eb.vertex_count(); ++i) vidx[eb.ball.vertices[i].id] = i;
  for (const auto& e : eb.ball.edges) {
    int u = vidx.at(e.from), w = vidx.at(e.to);
    adj[u].push_back(w);
    adj[w].push_back(u);
    edge_id[{std::min(u, w), std::max(u, w)}] = e.id;
  }
  std::map<int, int> parent;
  std::deque<int> q{a};
  parent[a] = a;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (v == b) break;
    for (int w : adj[v])
      if (!parent.count(w)) {
        parent[w] = v;
        q.push_back(w);
      }
  }
  if (!parent.count(b)) return std::nullopt;
  std::vector<std::string> path;
  for (int cur = b; cur != a; cur = parent[cur])
    path.push_back(edge_id.at({std::min(cur, parent[cur]), std::max(cur, parent[cur])}));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

inline AxisData axis_in_ball(const PathWord& g, const ExpandedBall& eb, const HandleIndex& hi,
                             std::int64_t margin = 1) {
  const GraphIndex& gi = hi.graph();
  Displacement md = min_displacement_in_ball(g, eb, hi, margin);
  AxisData out;
  out.element = g;
  out.length = md.value;
  out.certified = md.certified;
  if (md.value == 0) {
    out.characteristic_point = eb.ball.vertices[md.argmin].id;
    return out;
  }
  NormalForm image = apply_word(g, eb.forms[md.argmin], gi);
  auto it = eb.by_key.find(normal_form_key(peel(image, hi)));
  if (it == eb.by_key.end()) {
    out.certified = false;  // the translate of the axis point exits the ball
    return out;
  }
  auto path = detail::ball_path(eb, md.argmin, it->second);
  if (!path) {
    out.certified = false;
    return out;
  }
  out.axis_segment = *path;
  return out;
}

struct BridgeDistance {
  BigInt value;
  bool certified = false;
};

/// d(A(g), A(h)) within the ball: minimizes the sum of the exact distances
/// to the two characteristic sets over interior vertices (the sum is
/// minimal exactly on the bridge, or on a meeting point).
inline BridgeDistance bridge_distance(const PathWord& g, const PathWord& h,
                                      const ExpandedBall& eb, const HandleIndex& hi,
                                      std::int64_t margin = 1) {
  const GraphIndex& gi = hi.graph();
  Displacement dg = min_displacement_in_ball(g, eb, hi, margin);
  Displacement dh = min_displacement_in_ball(h, eb, hi, margin);
  BridgeDistance out;
  bool have = false;
  for (int v = 0; v < eb.vertex_count(); ++v) {
    if (!detail::interior_vertex(eb, v, margin)) continue;
    BigInt a = kept_distance(eb.forms[v], apply_word(g, eb.forms[v], gi), hi) - dg.value;
    BigInt b = kept_distance(eb.forms[v], apply_word(h, eb.forms[v], gi), hi) - dh.value;
    BigInt s = a + b;
    if (!have || s < out.value) {
      out.value = s;
      have = true;
    }
  }
  if (!have) throw std::invalid_argument("bridge_distance: empty interior");
  std::int64_t interior = eb.ball.interior_radius - (margin - 1);
  BigInt need = dg.center_travel > dh.center_travel ? dg.center_travel : dh.center_travel;
  out.certified = dg.certified && dh.certified && BigInt(interior) >= (need + 1) / 2;
  if (out.value % 2 != 0) {
    if (out.certified) throw std::logic_error("bridge_distance: odd displacement sum");
    out.certified = false;
  }
  out.value /= 2;
  return out;
}

}  // namespace treebench
