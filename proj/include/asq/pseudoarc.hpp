#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "asq/gf2.hpp"
#include "asq/minimal_image.hpp"
#include "asq/parallel.hpp"
#include "asq/perm.hpp"
#include "asq/quadform.hpp"

namespace asq {

class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}
  std::size_t size() const { return n_; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  DynBitset& operator&=(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      for (std::uint64_t w = w_[i]; w; w &= w - 1) fn(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
  }
  // indices >= from
  template <class Fn>
  void for_each_from(std::size_t from, Fn&& fn) const {
    if (from >= n_) return;
    std::size_t i = from >> 6;
    std::uint64_t w = w_[i] & (~std::uint64_t{0} << (from & 63));
    for (;;) {
      for (; w; w &= w - 1) fn(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      if (++i >= w_.size()) return;
      w = w_[i];
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Rank of a list of vectors in GF(2)^d via an xor basis keyed by top bit.
inline int xor_rank(const Word* v, int count) {
  Word basis[32] = {};
  int r = 0;
  for (int i = 0; i < count; ++i) {
    Word x = v[i];
    while (x) {
      const int top = 31 - std::countl_zero(x);
      if (!basis[top]) {
        basis[top] = x;
        ++r;
        break;
      }
      x ^= basis[top];
    }
  }
  return r;
}

// (SP3) plus pairwise trivial meets, for a list of equal-dimension subspaces.
inline bool is_partial_pseudo_arc(int d, const std::vector<Subspace>& planes) {
  for (std::size_t a = 0; a < planes.size(); ++a)
    for (std::size_t b = a + 1; b < planes.size(); ++b) {
      if (meet(planes[a], planes[b]).rank() != 0) return false;
      for (std::size_t c = b + 1; c < planes.size(); ++c)
        if (span(span(planes[a], planes[b]), planes[c]).rank() != d) return false;
    }
  return true;
}

inline bool is_partial_pseudo_arc(const QuadraticForm& q, const std::vector<Subspace>& planes) {
  if (planes.empty()) return true;
  const int n = planes.front().rank();
  for (const auto& p : planes)
    if (p.rank() != n || !q.totally_singular(p)) return false;
  return is_partial_pseudo_arc(q.dim(), planes);
}

// All totally singular n-spaces of a form, with precomputed pairwise
// disjointness, and the action of a group of isometries on them.
class PlaneCatalogue {
 public:
  PlaneCatalogue(QuadraticForm q, int n = 3) : form_(std::move(q)), n_(n) {
    planes_ = singular_subspaces(form_, n);
    if (planes_.size() >= 65535) throw std::invalid_argument("catalogue: too many subspaces");
    for (std::size_t i = 0; i < planes_.size(); ++i) index_[planes_[i]] = static_cast<Point>(i);
    rows_.resize(planes_.size() * static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < planes_.size(); ++i)
      for (int j = 0; j < n_; ++j) rows_[i * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = planes_[i].rows()[static_cast<std::size_t>(j)];
    disjoint_.assign(planes_.size(), DynBitset(planes_.size()));
    for (std::size_t i = 0; i < planes_.size(); ++i)
      for (std::size_t j = i + 1; j < planes_.size(); ++j) {
        Word v[32];
        for (int k = 0; k < n_; ++k) {
          v[k] = row(i, k);
          v[n_ + k] = row(j, k);
        }
        if (xor_rank(v, 2 * n_) == 2 * n_) {
          disjoint_[i].set(j);
          disjoint_[j].set(i);
        }
      }
  }

  const QuadraticForm& form() const { return form_; }
  int dim() const { return form_.dim(); }
  int plane_dim() const { return n_; }
  std::size_t size() const { return planes_.size(); }
  const Subspace& plane(std::size_t i) const { return planes_[i]; }
  const std::vector<Subspace>& planes() const { return planes_; }
  Point index_of(const Subspace& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw std::invalid_argument("catalogue: subspace is not in the catalogue");
    return it->second;
  }
  bool disjoint(std::size_t a, std::size_t b) const { return disjoint_[a].test(b); }
  const DynBitset& disjoint_row(std::size_t a) const { return disjoint_[a]; }
  Word row(std::size_t i, int k) const { return rows_[i * static_cast<std::size_t>(n_) + static_cast<std::size_t>(k)]; }

  bool spans(std::size_t a, std::size_t b, std::size_t c) const {
    Word v[48];
    for (int k = 0; k < n_; ++k) {
      v[k] = row(a, k);
      v[n_ + k] = row(b, k);
      v[2 * n_ + k] = row(c, k);
    }
    return xor_rank(v, 3 * n_) == dim();
  }

  bool is_partial_arc(const std::vector<Point>& s) const {
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        if (!disjoint(s[a], s[b])) return false;
        for (std::size_t c = b + 1; c < s.size(); ++c)
          if (!spans(s[a], s[b], s[c])) return false;
      }
    return true;
  }

  // Catalogue entries c such that s + {c} is a partial arc (s assumed one).
  DynBitset compatible_with(const std::vector<Point>& s) const {
    DynBitset out(size());
    for (std::size_t c = 0; c < size(); ++c) out.set(c);
    for (Point a : s) out &= disjoint_[a];
    if (s.size() >= 2) {
      DynBitset copy = out;
      copy.for_each([&](std::size_t c) {
        for (std::size_t a = 0; a < s.size(); ++a)
          for (std::size_t b = a + 1; b < s.size(); ++b)
            if (!spans(s[a], s[b], c)) {
              out.reset(c);
              return;
            }
      });
    }
    return out;
  }

  // Permutation of the catalogue induced by an isometry.
  Perm action(const BitMatrix& g) const {
    std::vector<Point> img(size());
    for (std::size_t i = 0; i < size(); ++i) img[i] = index_of(g.image(planes_[i]));
    return Perm(std::move(img));
  }

 private:
  QuadraticForm form_;
  int n_;
  std::vector<Subspace> planes_;
  std::map<Subspace, Point> index_;
  std::vector<Word> rows_;
  std::vector<DynBitset> disjoint_;
};

// Order of a matrix group, from an exact stabiliser chain of its action on
// all 2^d vectors.
inline std::uint64_t matrix_group_order(const std::vector<BitMatrix>& gens, int d) {
  std::vector<Perm> perms;
  for (const auto& g : gens) {
    std::vector<Point> img(std::size_t{1} << d);
    for (Word v = 0; v < (Word{1} << d); ++v) img[v] = static_cast<Point>(g.apply(v));
    perms.emplace_back(std::move(img));
  }
  return StabChain::schreier_sims(perms, std::size_t{1} << d).order();
}

// The isometry group of the form acting on the catalogue.
struct ArcSymmetry {
  std::vector<BitMatrix> matrices;
  std::uint64_t order = 0;
  std::unique_ptr<MinimalImage> canon;
};

inline ArcSymmetry make_arc_symmetry(const PlaneCatalogue& cat) {
  ArcSymmetry s;
  s.matrices = isometry_generators(cat.form());
  s.order = matrix_group_order(s.matrices, cat.dim());
  std::vector<Perm> perms;
  for (const auto& g : s.matrices) perms.push_back(cat.action(g));
  s.canon = std::make_unique<MinimalImage>(std::move(perms), cat.size(), s.order);
  return s;
}

struct SearchTrace {
  std::uint64_t nodes = 0;
  std::uint64_t solutions = 0;
  double seconds = 0;
};

// One representative (the minimal image) of every orbit of partial arcs of
// the given size. A set is kept only if it is its own minimal image; since
// every prefix of a minimal image is a minimal image, the search extends
// canonical sets by larger points only.
inline std::vector<std::vector<Point>> arc_seeds(const PlaneCatalogue& cat, MinimalImage& canon, std::size_t seed_size,
                                                 unsigned threads = 1, SearchTrace* trace = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<std::uint64_t> nodes{0};
  std::function<void(std::vector<Point>&, const DynBitset&, std::vector<std::vector<Point>>&)> rec =
      [&](std::vector<Point>& s, const DynBitset& cand, std::vector<std::vector<Point>>& out) {
        ++nodes;
        if (s.size() == seed_size) {
          out.push_back(s);
          return;
        }
        const std::vector<Point>& om = canon.stabiliser_orbit_minima(s);
        const std::size_t from = s.empty() ? 0 : static_cast<std::size_t>(s.back()) + 1;
        cand.for_each_from(from, [&](std::size_t xi) {
          const Point x = static_cast<Point>(xi);
          if (om[x] != x) return;
          s.push_back(x);
          if (canon.is_canonical(s)) {
            DynBitset next = cand;
            next &= cat.disjoint_row(x);
            if (s.size() >= 2) {
              DynBitset copy = next;
              copy.for_each_from(static_cast<std::size_t>(x) + 1, [&](std::size_t c) {
                for (std::size_t a = 0; a + 1 < s.size(); ++a)
                  if (!cat.spans(s[a], x, c)) {
                    next.reset(c);
                    return;
                  }
              });
            }
            rec(s, next, out);
          }
          s.pop_back();
        });
      };
  std::vector<std::vector<Point>> result;
  if (seed_size == 0) {
    result.push_back({});
  } else {
    // first level split across workers
    const auto& om = canon.orbit_minima();
    std::vector<Point> firsts;
    for (std::size_t i = 0; i < cat.size(); ++i)
      if (om[i] == i) firsts.push_back(static_cast<Point>(i));
    std::vector<std::vector<std::vector<Point>>> parts(firsts.size());
    parallel_for(firsts.size(), threads, [&](std::size_t k) {
      std::vector<Point> s{firsts[k]};
      DynBitset cand = cat.disjoint_row(firsts[k]);
      rec(s, cand, parts[k]);
    });
    for (auto& p : parts)
      for (auto& v : p) result.push_back(std::move(v));
  }
  std::sort(result.begin(), result.end());
  if (trace) {
    trace->nodes = nodes;
    trace->solutions = result.size();
    trace->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return result;
}

struct ArcExtension {
  std::uint64_t raw = 0;                        // completions found, with repetitions
  std::vector<std::vector<Point>> arcs;         // canonical representatives, sorted
  std::vector<std::uint64_t> per_seed;          // completions found from each seed
};

// All completions of each seed to `target` planes; results reduced to one
// minimal image per orbit when `canon` is given.
inline ArcExtension extend_arcs(const PlaneCatalogue& cat, MinimalImage* canon, const std::vector<std::vector<Point>>& seeds,
                                std::size_t target, unsigned threads = 1) {
  std::vector<std::vector<std::vector<Point>>> found(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t si) {
    const auto& seed = seeds[si];
    if (!cat.is_partial_arc(seed)) throw std::invalid_argument("extend_arcs: seed is not a partial pseudo-arc");
    std::vector<Point> rest;
    cat.compatible_with(seed).for_each([&](std::size_t c) { rest.push_back(static_cast<Point>(c)); });
    std::vector<Point> cur(seed);
    std::function<void(std::size_t, const std::vector<Point>&)> rec = [&](std::size_t from, const std::vector<Point>& cand) {
      if (cur.size() == target) {
        found[si].push_back(cur);
        return;
      }
      for (std::size_t i = from; i < cand.size(); ++i) {
        if (cand.size() - i < target - cur.size()) break;
        const Point x = cand[i];
        std::vector<Point> next;
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
          const Point c = cand[j];
          if (!cat.disjoint(x, c)) continue;
          bool ok = true;
          for (Point a : cur)
            if (!cat.spans(a, x, c)) {
              ok = false;
              break;
            }
          if (ok) next.push_back(c);
        }
        cur.push_back(x);
        rec(0, next);
        cur.pop_back();
      }
    };
    if (seed.size() >= target)
      found[si].push_back(seed);
    else
      rec(0, rest);
  });
  ArcExtension out;
  std::set<std::vector<Point>> reps;
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    out.per_seed.push_back(found[si].size());
    out.raw += found[si].size();
    for (auto& a : found[si]) {
      std::vector<Point> key = canon ? canon->canonical(a) : a;
      std::sort(key.begin(), key.end());
      reps.insert(std::move(key));
    }
  }
  out.arcs.assign(reps.begin(), reps.end());
  return out;
}

}  // namespace asq
