#pragma once

#include <treebench/io.hpp>
#include <treebench/model.hpp>
#include <treebench/sampler.hpp>

#include <string>
#include <vector>

namespace testsupport {

using namespace treebench;

inline std::string corpus_path(const std::string& name) {
  return std::string(TREEBENCH_CORPUS_DIR) + "/" + name;
}

inline GbsGraph load_gbs(const std::string& name) {
  return gbs_from_json(load_json_file(corpus_path(name)));
}
inline TreeHandle load_handle(const std::string& name) {
  return handle_from_json(load_json_file(corpus_path(name)));
}
inline PathWord load_word(const std::string& name) {
  return word_from_json(load_json_file(corpus_path(name)));
}

inline GbsGraph bs(std::int64_t m, std::int64_t n) {
  GbsGraph g;
  g.vertices = {"v"};
  g.edges = {GbsEdge{"t", "v", "v", m, n}};
  g.base = "v";
  return g;
}

inline TreeHandle full_handle(const GbsGraph& g) {
  TreeHandle h;
  h.master = g;
  for (const auto& e : g.edges) h.kept.insert(e.id);
  return h;
}

/// Connected random GBS graph: a spanning tree plus extra edges, labels
/// nonzero with |label| <= max_label.
inline GbsGraph random_gbs(Rng& rng, int max_edges = 5, std::int64_t max_label = 5,
                           bool allow_negative = true) {
  GbsGraph g;
  int ne = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_edges))) + 1;
  int nv = static_cast<int>(rng.below(static_cast<std::uint64_t>(ne))) + 1;
  for (int i = 0; i < nv; ++i) g.vertices.push_back("v" + std::to_string(i));
  g.base = "v0";
  auto label = [&]() {
    std::int64_t l = rng.int_in(1, max_label);
    if (allow_negative && rng.below(6) == 0) l = -l;
    return l;
  };
  int en = 0;
  for (int i = 1; i < nv; ++i) {
    int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    g.edges.push_back(GbsEdge{"e" + std::to_string(en++), "v" + std::to_string(p),
                              "v" + std::to_string(i), label(), label()});
  }
  while (en < ne) {
    int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(nv)));
    int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(nv)));
    g.edges.push_back(GbsEdge{"e" + std::to_string(en++), "v" + std::to_string(a),
                              "v" + std::to_string(b), label(), label()});
  }
  return g;
}

/// Random sub-handle of a random master.
inline TreeHandle random_handle(Rng& rng, int max_edges = 5, std::int64_t max_label = 5) {
  TreeHandle h;
  h.master = random_gbs(rng, max_edges, max_label);
  for (const auto& e : h.master.edges)
    if (rng.below(3) != 0) h.kept.insert(e.id);
  return h;
}

}  // namespace testsupport
