#pragma once

#include <treebench/britton.hpp>
#include <treebench/handle.hpp>
#include <treebench/io.hpp>
#include <treebench/model.hpp>
#include <treebench/moves.hpp>
#include <treebench/sampler.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace treebench {

inline bool same_master(const TreeHandle& a, const TreeHandle& b) {
  return to_json(a.master) == to_json(b.master);
}

/// One-edge splitting obtained by collapsing every orbit but one.
struct PrimeFactor {
  TreeHandle handle;
  std::string source_edge;
};

inline std::vector<PrimeFactor> prime_factors(const TreeHandle& t) {
  std::vector<PrimeFactor> out;
  for (const auto& id : t.kept) {
    TreeHandle h;
    h.master = t.master;
    h.kept = {id};
    h.lineage = t.lineage;
    out.push_back(PrimeFactor{std::move(h), id});
  }
  return out;
}

inline TreeHandle gcd_handles(const TreeHandle& a, const TreeHandle& b) {
  if (!same_master(a, b))
    throw std::invalid_argument("gcd: different masters without verified marking");
  TreeHandle out;
  out.master = a.master;
  out.lineage = a.lineage;
  std::set_intersection(a.kept.begin(), a.kept.end(), b.kept.begin(), b.kept.end(),
                        std::inserter(out.kept, out.kept.begin()));
  return out;
}

struct LcmReport {
  TreeHandle handle;
  // Display cleanup only; the kept set itself already encodes the minimal
  // collapse.
  std::vector<std::string> redundant_vertices;
};

inline LcmReport lcm_handles(const TreeHandle& a, const TreeHandle& b) {
  if (!same_master(a, b))
    throw std::invalid_argument("lcm: different masters without verified marking");
  LcmReport out;
  out.handle.master = a.master;
  out.handle.lineage = a.lineage;
  std::set_union(a.kept.begin(), a.kept.end(), b.kept.begin(), b.kept.end(),
                 std::inserter(out.handle.kept, out.handle.kept.begin()));
  // Quotient vertices of valence 2 with trivial contraction are redundant
  // for display purposes.
  HandleIndex hi(out.handle);
  const GraphIndex& gi = hi.graph();
  for (const auto& comp : hi.components()) {
    int incident = 0;
    for (int v : comp.vertices)
      for (const auto& end : gi.ends_at(v))
        if (hi.kept(end.edge)) ++incident;
    if (incident == 2 && comp.vertices.size() == 1)
      out.redundant_vertices.push_back(gi.vertex(comp.vertices.front()));
  }
  return out;
}

inline TreeHandle lcm_family(const std::vector<TreeHandle>& ts) {
  if (ts.empty()) throw std::invalid_argument("lcm_family: empty family");
  TreeHandle out = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!same_master(ts[i], out))
      throw std::invalid_argument("lcm_family: different masters without verified marking");
    out.kept.insert(ts[i].kept.begin(), ts[i].kept.end());
  }
  return out;
}

/// Cross-master gcd through a verified marking from t1's presentation to
/// t2's: prime factors are matched by comparing length functions on a
/// regression word set.  A semi-decision only; equality of one-edge
/// splittings across presentations has no exact algorithm, so matches are
/// reported as such rather than proven.
struct CrossGcdReport {
  TreeHandle handle;  // kept subset of t1's master
  bool semi_decided = true;
  std::vector<std::pair<std::string, std::string>> matches;  // (t1 edge, t2 edge)
};

inline CrossGcdReport gcd_handles_marked(const TreeHandle& t1, const TreeHandle& t2,
                                         const Dictionary& marking,
                                         const std::vector<PathWord>& regression_words) {
  GraphIndex g1(t1.master);
  GraphIndex g2(t2.master);
  auto mr = verify_marking(marking, g1, g2);
  if (!mr.ok)
    throw std::invalid_argument("gcd: marking failed verification: " + mr.failures.front());

  std::vector<std::vector<PathWord>> images;  // per regression word
  for (const auto& w : regression_words)
    images.push_back({translate_word(w, marking, g1, g2)});

  CrossGcdReport out;
  out.handle.master = t1.master;
  out.handle.lineage = t1.lineage;
  auto f1 = prime_factors(t1);
  auto f2 = prime_factors(t2);
  for (const auto& a : f1) {
    HandleIndex ia(a.handle);
    for (const auto& b : f2) {
      HandleIndex ib(b.handle);
      bool agree = true;
      for (std::size_t i = 0; i < regression_words.size() && agree; ++i)
        agree = translation_length(regression_words[i], ia) ==
                translation_length(images[i].front(), ib);
      if (agree) {
        out.handle.kept.insert(a.source_edge);
        out.matches.emplace_back(a.source_edge, b.source_edge);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compatibility

enum class CompatVerdict { Compatible, Incompatible, Unknown };

inline const char* verdict_name(CompatVerdict v) {
  switch (v) {
    case CompatVerdict::Compatible: return "compatible";
    case CompatVerdict::Incompatible: return "incompatible";
    default: return "unknown";
  }
}

struct FalsificationCertificate {
  PathWord g;
  PathWord h;
  BigInt l_g, l_h, l_gh, l_gih;
};

struct CompatReport {
  CompatVerdict verdict = CompatVerdict::Unknown;
  std::optional<TreeHandle> refinement;            // when compatible
  std::optional<FalsificationCertificate> certificate;  // when incompatible
  std::int64_t samples_used = 0;
  std::string explanation;
};

/// Constructive check inside one collapse family: That refines both inputs
/// iff its kept set contains theirs.
inline CompatReport compat_verify(const TreeHandle& t1, const TreeHandle& t2,
                                  const TreeHandle& that) {
  CompatReport r;
  if (!same_master(t1, that) || !same_master(t2, that)) {
    r.verdict = CompatVerdict::Unknown;
    r.explanation = "handles do not share a master; only falsification is available";
    return r;
  }
  auto contains = [&](const TreeHandle& t) {
    return std::includes(that.kept.begin(), that.kept.end(), t.kept.begin(), t.kept.end());
  };
  if (contains(t1) && contains(t2)) {
    r.verdict = CompatVerdict::Compatible;
    r.refinement = that;
    return r;
  }
  r.verdict = CompatVerdict::Unknown;
  r.explanation = "candidate is not a refinement of both handles";
  return r;
}

struct LengthEvaluator {
  std::string name;
  std::function<BigInt(const PathWord&)> eval;
};

inline LengthEvaluator handle_evaluator(std::string name, const HandleIndex& hi) {
  return LengthEvaluator{std::move(name),
                         [&hi](const PathWord& w) { return translation_length(w, hi); }};
}

/// The shipped synthetic non-length function: 1 on every non-identity
/// element, 0 on the identity.
inline LengthEvaluator const_one_evaluator(const GraphIndex& gi) {
  return LengthEvaluator{"const1", [&gi](const PathWord& w) {
                           return is_identity(w, gi) ? BigInt(0) : BigInt(1);
                         }};
}

namespace detail {

/// Both branches of the axis dichotomy for hyperbolic g, h under a length
/// function: disjoint axes force l(gh) = l(g^-1 h) > l(g)+l(h); meeting axes
/// force max(l(gh), l(g^-1 h)) = l(g)+l(h).
inline bool dichotomy_holds(const BigInt& lg, const BigInt& lh, const BigInt& lgh,
                            const BigInt& lgih) {
  BigInt sum = lg + lh;
  bool disjoint_branch = lgh == lgih && lgh > sum;
  bool meeting_branch = (lgh > lgih ? lgh : lgih) == sum;
  return disjoint_branch || meeting_branch;
}

}  // namespace detail

/// Sound falsifier: samples pairs hyperbolic for l1+l2 and reports
/// "incompatible" only with a violating pair as certificate.  Never returns
/// "compatible".  Deterministic for a fixed seed regardless of thread count.
inline CompatReport compat_falsify(const LengthEvaluator& l1, const LengthEvaluator& l2,
                                   const GraphIndex& gi, std::int64_t budget,
                                   std::uint64_t seed, int threads = 1) {
  WordSampler sampler(gi);
  auto violation_at = [&](std::int64_t i) -> std::optional<FalsificationCertificate> {
    Rng rng = Rng::keyed(seed, static_cast<std::uint64_t>(i));
    PathWord g = sampler.sample(rng);
    PathWord h = sampler.sample(rng);
    BigInt lg = l1.eval(g) + l2.eval(g);
    BigInt lh = l1.eval(h) + l2.eval(h);
    if (lg == 0 || lh == 0) return std::nullopt;
    PathWord gh = concat(g, h);
    PathWord gih = concat(inverse(g), h);
    BigInt lgh = l1.eval(gh) + l2.eval(gh);
    BigInt lgih = l1.eval(gih) + l2.eval(gih);
    if (detail::dichotomy_holds(lg, lh, lgh, lgih)) return std::nullopt;
    return FalsificationCertificate{g, h, lg, lh, lgh, lgih};
  };

  std::atomic<std::int64_t> best{budget};
  int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::int64_t i = t; i < budget; i += nthreads) {
        if (i >= best.load()) break;
        if (violation_at(i)) {
          std::int64_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();

  CompatReport r;
  std::int64_t idx = best.load();
  if (idx < budget) {
    r.verdict = CompatVerdict::Incompatible;
    r.certificate = violation_at(idx);
    r.samples_used = idx + 1;
    r.explanation = "axis dichotomy violated by sampled pair";
  } else {
    r.verdict = CompatVerdict::Unknown;
    r.samples_used = budget;
    r.explanation = "no violation found within budget";
  }
  return r;
}

/// Re-checks a shipped certificate without re-running the search.
inline bool verify_certificate(const FalsificationCertificate& c, const LengthEvaluator& l1,
                               const LengthEvaluator& l2) {
  BigInt lg = l1.eval(c.g) + l2.eval(c.g);
  BigInt lh = l1.eval(c.h) + l2.eval(c.h);
  if (lg != c.l_g || lh != c.l_h || lg == 0 || lh == 0) return false;
  PathWord gh = concat(c.g, c.h);
  PathWord gih = concat(inverse(c.g), c.h);
  if (l1.eval(gh) + l2.eval(gh) != c.l_gh) return false;
  if (l1.eval(gih) + l2.eval(gih) != c.l_gih) return false;
  return !detail::dichotomy_holds(c.l_g, c.l_h, c.l_gh, c.l_gih);
}

inline Json to_json(const FalsificationCertificate& c) {
  Json j;
  j["g"] = to_json(c.g, false);
  j["h"] = to_json(c.h, false);
  j["l_g"] = big_to_json(c.l_g);
  j["l_h"] = big_to_json(c.l_h);
  j["l_gh"] = big_to_json(c.l_gh);
  j["l_gih"] = big_to_json(c.l_gih);
  return j;
}

inline FalsificationCertificate certificate_from_json(const Json& j) {
  FalsificationCertificate c;
  c.g = word_from_json(detail::require(j, "g", "certificate"));
  c.h = word_from_json(detail::require(j, "h", "certificate"));
  c.l_g = big_from_json(detail::require(j, "l_g", "certificate"), "l_g");
  c.l_h = big_from_json(detail::require(j, "l_h", "certificate"), "l_h");
  c.l_gh = big_from_json(detail::require(j, "l_gh", "certificate"), "l_gh");
  c.l_gih = big_from_json(detail::require(j, "l_gih", "certificate"), "l_gih");
  return c;
}

inline Json to_json(const CompatReport& r) {
  Json j;
  j["verdict"] = verdict_name(r.verdict);
  j["samples_used"] = r.samples_used;
  if (!r.explanation.empty()) j["explanation"] = r.explanation;
  if (r.refinement) j["refinement"] = to_json(*r.refinement);
  if (r.certificate) j["certificate"] = to_json(*r.certificate);
  return j;
}

}  // namespace treebench
