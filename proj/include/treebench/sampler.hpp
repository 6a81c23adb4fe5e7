#pragma once

#include <treebench/britton.hpp>
#include <treebench/graph.hpp>
#include <treebench/model.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace treebench {

/// Deterministic splitmix64 generator; used everywhere randomness is needed
/// so that results are reproducible across platforms and thread schedules.
struct Rng {
  std::uint64_t state = 0;

  explicit Rng(std::uint64_t seed) : state(seed) {}
  static Rng keyed(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
    r.next();
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    // Rejection keeps the draw unbiased and platform-independent.
    std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }
  std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

/// Uniform random closed paths at the base: syllable length <= max_len,
/// exponents in [-max_exp, max_exp].  A reachability table keeps every
/// partial walk completable to a closed path of the chosen length.
class WordSampler {
 public:
  WordSampler(const GraphIndex& gi, int max_len = 12, std::int64_t max_exp = 6)
      : gi_(&gi), max_len_(max_len), max_exp_(max_exp) {
    int n = gi.vertex_count();
    reach_.assign(max_len + 1, std::vector<bool>(n, false));
    reach_[0][gi.base()] = true;
    for (int r = 1; r <= max_len; ++r)
      for (int v = 0; v < n; ++v)
        for (const auto& end : gi.ends_at(v))
          if (reach_[r - 1][gi.head(end.edge, end.dir)]) {
            reach_[r][v] = true;
            break;
          }
    for (int r = 0; r <= max_len; ++r)
      if (reach_[r][gi.base()]) feasible_.push_back(r);
  }

  PathWord sample(Rng& rng) const {
    int len = feasible_[rng.below(feasible_.size())];
    PathWord w;
    w.base_exp = rng.int_in(-max_exp_, max_exp_);
    int at = gi_->base();
    for (int step = 0; step < len; ++step) {
      int remaining = len - step - 1;
      std::vector<GraphIndex::End> options;
      for (const auto& end : gi_->ends_at(at))
        if (reach_[remaining][gi_->head(end.edge, end.dir)]) options.push_back(end);
      const auto& pick = options[rng.below(options.size())];
      at = gi_->head(pick.edge, pick.dir);
      w.syllables.push_back(
          Syllable{gi_->edge(pick.edge).id, pick.dir, rng.int_in(-max_exp_, max_exp_)});
    }
    return w;
  }

  /// Random conjugate of a vertex generator power: always elliptic.
  PathWord sample_elliptic(Rng& rng) const {
    PathWord conj = sample(rng);
    BigInt power = rng.int_in(1, max_exp_);
    int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(gi_->vertex_count())));
    PathWord inner = vertex_generator(*gi_, gi_->vertex(v), power);
    PathWord out = concat(conj, concat(inner, inverse(conj)));
    return out;
  }

 private:
  const GraphIndex* gi_;
  int max_len_;
  std::int64_t max_exp_;
  std::vector<std::vector<bool>> reach_;
  std::vector<int> feasible_;
};

}  // namespace treebench
