#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

// Permutation groups on {0, ..., n-1} with n < 65536, acting on the right:
// x^(gh) = (x^g)^h.

namespace asq {

using Point = std::uint16_t;

class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t n) : img_(n) { std::iota(img_.begin(), img_.end(), Point{0}); }
  explicit Perm(std::vector<Point> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size());
    for (Point p : img_) {
      if (p >= img_.size() || seen[p]) throw std::invalid_argument("perm: images do not form a permutation");
      seen[p] = true;
    }
  }

  std::size_t degree() const { return img_.size(); }
  Point operator()(Point x) const { return img_[x]; }
  const std::vector<Point>& images() const { return img_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<Point>(i);
    return r;
  }

  // first this, then o
  Perm then(const Perm& o) const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[i] = o.img_[img_[i]];
    return r;
  }
  void then_inplace(const Perm& o) {
    for (auto& x : img_) x = o.img_[x];
  }

  friend bool operator==(const Perm&, const Perm&) = default;

 private:
  std::vector<Point> img_;
};

// Orbit of a root with a Schreier vector: for each orbit point p != root,
// parent[p] and gen[p] with p = parent[p]^gens[gen[p]].
struct SchreierOrbit {
  Point root = 0;
  std::vector<Point> points;
  std::vector<std::int32_t> parent;  // -1 outside the orbit, -2 for the root
  std::vector<std::uint16_t> gen;

  bool contains(Point p) const { return parent[p] != -1; }
  std::size_t size() const { return points.size(); }

  void build(Point r, const std::vector<Perm>& gens, std::size_t n) {
    root = r;
    points.assign(1, r);
    parent.assign(n, -1);
    gen.assign(n, 0);
    parent[r] = -2;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Point p = points[i];
      for (std::size_t g = 0; g < gens.size(); ++g) {
        const Point q = gens[g](p);
        if (parent[q] == -1) {
          parent[q] = p;
          gen[q] = static_cast<std::uint16_t>(g);
          points.push_back(q);
        }
      }
    }
  }

  // element mapping root -> p
  Perm transversal(Point p, const std::vector<Perm>& gens) const {
    std::vector<std::uint16_t> path;
    while (parent[p] >= 0) {
      path.push_back(gen[p]);
      p = static_cast<Point>(parent[p]);
    }
    Perm r(gens.front().degree());
    for (auto it = path.rbegin(); it != path.rend(); ++it) r.then_inplace(gens[*it]);
    return r;
  }

  // g * u_p^{-1}, where p = root^g; the result fixes the root.
  void strip_to_root(Perm& g, Point p, const std::vector<Perm>& inv_gens) const {
    while (parent[p] >= 0) {
      g.then_inplace(inv_gens[gen[p]]);
      p = static_cast<Point>(parent[p]);
    }
  }
};

// Base and strong generating set. Level i holds the strong generators fixing
// base[0..i-1] and the basic orbit of base[i].
class StabChain {
 public:
  explicit StabChain(std::size_t degree) : n_(degree) {}

  std::size_t degree() const { return n_; }
  std::size_t length() const { return base_.size(); }
  const std::vector<Point>& base() const { return base_; }
  const std::vector<Perm>& level_generators(std::size_t i) const { return levels_[i].gens; }
  const SchreierOrbit& basic_orbit(std::size_t i) const { return levels_[i].orbit; }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& l : levels_) o *= l.orbit.size();
    return o;
  }

  std::vector<Perm> strong_generators() const {
    return levels_.empty() ? std::vector<Perm>{} : levels_.front().gens;
  }

  // Residue and the level at which sifting stopped (length() if it passed all levels).
  std::pair<Perm, std::size_t> sift(Perm g) const {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const Point p = g(base_[i]);
      if (!levels_[i].orbit.contains(p)) return {std::move(g), i};
      levels_[i].orbit.strip_to_root(g, p, levels_[i].inv);
    }
    return {std::move(g), levels_.size()};
  }

  bool contains(const Perm& g) const {
    auto [r, lvl] = sift(g);
    return lvl == levels_.size() && r.is_identity();
  }

  // Adds a non-identity residue that fixes base[0..level-1].
  void add_residue(const Perm& h, std::size_t level) {
    if (level == levels_.size()) {
      Point moved = 0;
      while (moved < n_ && h(moved) == moved) ++moved;
      if (moved == n_) throw std::logic_error("perm: identity residue");
      base_.push_back(moved);
      levels_.emplace_back();
    }
    const Perm hinv = h.inverse();
    for (std::size_t i = 0; i <= level; ++i) {
      levels_[i].gens.push_back(h);
      levels_[i].inv.push_back(hinv);
      levels_[i].orbit.build(base_[i], levels_[i].gens, n_);
    }
  }

  // Prescribes leading base points before any generator is added.
  void set_base_prefix(const std::vector<Point>& prefix) {
    if (!levels_.empty()) throw std::logic_error("perm: base prefix must be set on an empty chain");
    base_ = prefix;
    levels_.resize(prefix.size());
    for (std::size_t i = 0; i < prefix.size(); ++i) levels_[i].orbit.build(prefix[i], {}, n_);
  }

  // Deterministic Schreier-Sims: every Schreier generator at every level sifts.
  static StabChain schreier_sims(const std::vector<Perm>& gens, std::size_t degree,
                                 const std::vector<Point>& base_prefix = {}) {
    StabChain c(degree);
    c.set_base_prefix(base_prefix);
    for (const Perm& g : gens) {
      auto [r, lvl] = c.sift(g);
      if (!r.is_identity()) c.add_residue(r, lvl);
    }
    // Process levels bottom-up; any new residue restarts from its level.
    std::size_t i = c.length();
    while (i > 0) {
      const std::size_t lvl = i - 1;
      bool restarted = false;
      for (std::size_t pi = 0; pi < c.levels_[lvl].orbit.points.size() && !restarted; ++pi) {
        const Point p = c.levels_[lvl].orbit.points[pi];
        if (c.levels_[lvl].gens.empty()) break;
        const Perm up = c.levels_[lvl].orbit.transversal(p, c.levels_[lvl].gens);
        for (std::size_t gi = 0; gi < c.levels_[lvl].gens.size(); ++gi) {
          const auto& gens_l = c.levels_[lvl].gens;
          Perm s = up.then(gens_l[gi]);
          const Point img = s(c.base_[lvl]);
          c.levels_[lvl].orbit.strip_to_root(s, img, c.levels_[lvl].inv);
          // s fixes base[0..lvl]; sift through deeper levels
          std::size_t j = lvl + 1;
          for (; j < c.levels_.size(); ++j) {
            const Point q = s(c.base_[j]);
            if (!c.levels_[j].orbit.contains(q)) break;
            c.levels_[j].orbit.strip_to_root(s, q, c.levels_[j].inv);
          }
          if (j == c.levels_.size() && s.is_identity()) continue;
          c.add_residue(s, j);
          i = j + 1 > c.length() ? c.length() : j + 1;
          restarted = true;
          break;
        }
      }
      if (!restarted) --i;
    }
    return c;
  }

 private:
  struct Level {
    std::vector<Perm> gens, inv;
    SchreierOrbit orbit;
  };
  std::size_t n_;
  std::vector<Point> base_;
  std::vector<Level> levels_;
};

// Product replacement generator of (nearly) uniform random group elements.
class RandomElements {
 public:
  RandomElements(const std::vector<Perm>& gens, std::size_t degree, std::uint64_t seed) : rng_(seed) {
    if (gens.empty()) {
      slots_.assign(2, Perm(degree));
    } else {
      slots_ = gens;
      while (slots_.size() < 10) slots_.push_back(gens[slots_.size() % gens.size()]);
    }
    acc_ = Perm(degree);
    for (int i = 0; i < 60; ++i) next();
  }

  Perm next() {
    std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
    std::size_t a = pick(rng_), b = pick(rng_);
    while (b == a && slots_.size() > 1) b = pick(rng_);
    if (rng_() & 1u)
      slots_[a] = slots_[a].then(slots_[b]);
    else
      slots_[a] = slots_[b].then(slots_[a]);
    acc_ = acc_.then(slots_[a]);
    return acc_;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<Perm> slots_;
  Perm acc_;
};

// Randomized Schreier-Sims for a group whose order is known in advance; the
// chain is complete exactly when the orbit-size product reaches the order.
// `source` yields random elements of the group.
template <class Source>
StabChain schreier_sims_known_order(Source&& source, std::size_t degree, std::uint64_t order,
                                    const std::vector<Point>& base_prefix = {}, std::size_t max_tries = 200000) {
  StabChain c(degree);
  c.set_base_prefix(base_prefix);
  std::size_t tries = 0;
  while (c.order() < order) {
    if (++tries > max_tries) throw std::runtime_error("perm: randomized Schreier-Sims did not reach the target order");
    auto [r, lvl] = c.sift(source());
    if (!r.is_identity()) c.add_residue(r, lvl);
  }
  if (c.order() != order) throw std::logic_error("perm: chain order overshoots the stated group order");
  return c;
}

// Orbits of a group given by generators; orbit_min[p] is the least point of p's orbit.
inline std::vector<Point> orbit_minima(const std::vector<Perm>& gens, std::size_t n) {
  std::vector<Point> mins(n);
  std::vector<bool> seen(n);
  std::vector<Point> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    queue.assign(1, static_cast<Point>(s));
    seen[s] = true;
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& g : gens) {
        const Point q = g(queue[i]);
        if (!seen[q]) {
          seen[q] = true;
          queue.push_back(q);
        }
      }
    for (Point p : queue) mins[p] = static_cast<Point>(s);
  }
  return mins;
}

}  // namespace asq
