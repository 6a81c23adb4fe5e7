#pragma once

#include <treebench/graph.hpp>
#include <treebench/model.hpp>

#include <stdexcept>
#include <utility>
#include <vector>

namespace treebench {

/// Output of (cyclic) Britton reduction.
///
/// `word` is a reduced closed word at the base with
/// conjugator * word * conjugator^-1 == input.  Cyclic reduction happens at
/// whatever vertex the rotations end on; that cyclic core is recorded in the
/// core_* fields (the word `word` is the core conjugated back to the base).
/// The core syllable count is the translation length in the master tree.
struct ReducedForm {
  PathWord word;
  bool is_cyclically_reduced = false;
  PathWord conjugator;

  BigInt core_base_exp = 0;
  std::vector<Syllable> core_syllables;
  std::string core_vertex;
};

inline PathWord inverse(const PathWord& w) {
  PathWord out;
  if (w.syllables.empty()) {
    out.base_exp = -w.base_exp;
    return out;
  }
  out.base_exp = -w.syllables.back().exp;
  for (std::size_t i = w.syllables.size(); i-- > 0;) {
    const auto& s = w.syllables[i];
    BigInt prev = i == 0 ? w.base_exp : w.syllables[i - 1].exp;
    out.syllables.push_back(Syllable{s.edge, -s.dir, -prev});
  }
  return out;
}

inline PathWord concat(const PathWord& a, const PathWord& b) {
  PathWord out = a;
  if (out.syllables.empty()) out.base_exp += b.base_exp;
  else out.syllables.back().exp += b.base_exp;
  out.syllables.insert(out.syllables.end(), b.syllables.begin(), b.syllables.end());
  return out;
}

inline PathWord path_word(std::vector<Syllable> steps) {
  PathWord w;
  w.syllables = std::move(steps);
  return w;
}

/// Britton reduction: removes every pinch  c x^a c^-1  where the middle
/// exponent is divisible by the label at the middle vertex, multiplying the
/// carried exponent by the label at the far end.  Single left-to-right pass
/// with a stack; confluence makes the result independent of pinch order.
inline PathWord britton_reduce_word(const PathWord& w, const GraphIndex& gi) {
  PathWord out;
  out.base_exp = w.base_exp;
  auto& stack = out.syllables;
  for (const auto& s : w.syllables) {
    if (!stack.empty()) {
      const auto& top = stack.back();
      if (top.edge == s.edge && top.dir == -s.dir) {
        int tei = gi.edge_index(top.edge);
        BigInt div = gi.head_label(tei, top.dir);
        if (divides(div, top.exp)) {
          BigInt carry = (top.exp / div) * gi.tail_label(tei, top.dir) + s.exp;
          stack.pop_back();
          if (stack.empty()) out.base_exp += carry;
          else stack.back().exp += carry;
          continue;
        }
      }
    }
    stack.push_back(s);
  }
  return out;
}

namespace detail {

/// Wrap-around pinch test on a reduced word (closed at any vertex).
inline bool wrap_pinch_applies(const PathWord& w, const GraphIndex& gi) {
  if (w.syllables.empty()) return false;
  const auto& first = w.syllables.front();
  const auto& last = w.syllables.back();
  if (!(first.edge == last.edge && first.dir == -last.dir)) return false;
  int ei = gi.edge_index(last.edge);
  BigInt div = gi.head_label(ei, last.dir);
  return divides(div, last.exp + w.base_exp);
}

}  // namespace detail

/// Full reduction; with `cyclic`, also pinches across the wrap-around by
/// rotating past leading crossings, recording the conjugator.
inline ReducedForm britton_reduce(const PathWord& w, const GraphIndex& gi, bool cyclic) {
  ReducedForm rf;
  rf.word = britton_reduce_word(w, gi);
  if (!cyclic) {
    rf.is_cyclically_reduced = !detail::wrap_pinch_applies(rf.word, gi);
    rf.core_base_exp = rf.word.base_exp;
    rf.core_syllables = rf.word.syllables;
    rf.core_vertex = gi.graph().base;
    return rf;
  }

  PathWord cur = rf.word;
  PathWord prefix;  // path from the base to the current core vertex
  int at = gi.base();
  while (detail::wrap_pinch_applies(cur, gi)) {
    const Syllable first = cur.syllables.front();
    // cur = p * cur' * p^-1 with p = x^base_exp c_1; cur' is closed at the
    // head of c_1.
    PathWord p;
    p.base_exp = cur.base_exp;
    p.syllables.push_back(Syllable{first.edge, first.dir, 0});
    PathWord rotated;
    rotated.base_exp = first.exp;
    rotated.syllables.assign(cur.syllables.begin() + 1, cur.syllables.end());
    if (rotated.syllables.empty()) rotated.base_exp += cur.base_exp;
    else rotated.syllables.back().exp += cur.base_exp;
    rotated.syllables.push_back(Syllable{first.edge, first.dir, 0});
    std::size_t before = rotated.syllables.size();
    PathWord next = britton_reduce_word(rotated, gi);
    if (next.syllables.size() >= before)
      throw std::logic_error("cyclic rotation failed to shorten word");
    prefix = concat(prefix, p);
    at = gi.head(gi.edge_index(first.edge), first.dir);
    cur = next;
  }
  rf.core_base_exp = cur.base_exp;
  rf.core_syllables = cur.syllables;
  rf.core_vertex = gi.vertex(at);

  if (at == gi.base()) {
    rf.word = cur;
    rf.conjugator = britton_reduce_word(prefix, gi);
    rf.is_cyclically_reduced = true;
    return rf;
  }
  // The core ended at another vertex; conjugate it back to the base.  The
  // rebased word generally admits a rotation pinch through the wrapper, so
  // the flag stays false while the core fields carry the cyclic data.
  PathWord tree = path_word(gi.tree_path(at));
  rf.word = britton_reduce_word(concat(tree, concat(cur, inverse(tree))), gi);
  rf.conjugator = britton_reduce_word(concat(prefix, inverse(tree)), gi);
  rf.is_cyclically_reduced = !detail::wrap_pinch_applies(rf.word, gi);
  return rf;
}

inline bool is_identity(const PathWord& w, const GraphIndex& gi) {
  return britton_reduce_word(w, gi).trivial();
}

inline bool words_equal(const PathWord& a, const PathWord& b, const GraphIndex& gi) {
  return is_identity(concat(a, inverse(b)), gi);
}

/// w^n; falls back on the reduced conjugate-of-elliptic shape when the
/// exponent is too large for repeated concatenation.
inline PathWord word_power(const PathWord& w, const BigInt& n, const GraphIndex& gi) {
  if (n == 0) return PathWord{};
  BigInt absn = n < 0 ? BigInt(-n) : n;
  const PathWord base = n < 0 ? inverse(w) : w;
  if (absn <= 64) {
    PathWord out;
    for (BigInt i = 0; i < absn; ++i) out = britton_reduce_word(concat(out, base), gi);
    return out;
  }
  ReducedForm rf = britton_reduce(base, gi, true);
  if (!rf.core_syllables.empty())
    throw std::invalid_argument("word_power: exponent too large for a hyperbolic base");
  // base = c * x^k * c^-1 with c = conjugator; power scales k.
  PathWord core;
  core.base_exp = rf.core_base_exp * absn;
  int v = gi.vertex_index(rf.core_vertex);
  PathWord tree = path_word(gi.tree_path(v));
  PathWord rebased = britton_reduce_word(concat(tree, concat(core, inverse(tree))), gi);
  const PathWord& conj = rf.conjugator;
  return britton_reduce_word(concat(conj, concat(rebased, inverse(conj))), gi);
}

}  // namespace treebench
