#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "asq/perm.hpp"

// Lexicographically least image of a point set under a permutation group,
// computed by backtracking through a dynamic base. Point stabilisers along
// each base prefix are cached in a trie and built lazily, so repeated calls
// on related sets share work.

namespace asq {

class MinimalImage {
 public:
  // `order` must be the exact order of the group generated by `gens` on
  // {0, ..., degree-1}; it is checked while the stabiliser chain is built.
  MinimalImage(std::vector<Perm> gens, std::size_t degree, std::uint64_t order)
      : n_(degree), root_(std::make_unique<Node>()) {
    root_->order = order;
    root_->gens = std::move(gens);
    root_->seed = 0x9e3779b97f4a7c15ull;
    finish_node(*root_);
    // Certify the stated order: a randomized chain reaching it proves the
    // generated group is at least that large.
    RandomElements rnd(root_->gens, n_, 12345);
    (void)schreier_sims_known_order([&] { return rnd.next(); }, n_, order);
  }

  std::size_t degree() const { return n_; }
  std::uint64_t order() const { return root_->order; }
  const std::vector<Perm>& generators() const { return root_->gens; }

  // Least point of each orbit of the whole group.
  const std::vector<Point>& orbit_minima() const { return root_->orbit_min; }

  // Orbit minima of the pointwise stabiliser of `prefix`, where `prefix` is a
  // strictly increasing sequence that is itself the start of a canonical base
  // path (e.g. a canonical set in increasing order).
  const std::vector<Point>& stabiliser_orbit_minima(const std::vector<Point>& prefix) {
    const Node* node = root_.get();
    for (Point p : prefix) {
      if (node->order == 1) return identity_minima();
      node = child(*const_cast<Node*>(node), p);
    }
    if (node->order == 1) return identity_minima();
    return node->orbit_min;
  }

  std::uint64_t stabiliser_order(const std::vector<Point>& prefix) {
    const Node* node = root_.get();
    for (Point p : prefix) {
      if (node->order == 1) return 1;
      node = child(*const_cast<Node*>(node), p);
    }
    return node->order;
  }

  std::vector<Point> canonical(std::vector<Point> set) { return run(std::move(set), nullptr); }

  bool is_canonical(std::vector<Point> set) {
    std::sort(set.begin(), set.end());
    bool ok = true;
    run(set, &ok);
    return ok;
  }

  std::size_t cached_nodes() const {
    std::lock_guard<std::mutex> lk(count_mu_);
    return node_count_;
  }

 private:
  struct Node {
    std::uint64_t order = 1;
    std::uint64_t seed = 0;
    std::vector<Perm> gens, inv;
    std::vector<Point> orbit_min;
    std::vector<std::int32_t> parent;  // Schreier forest rooted at orbit minima; -2 at roots
    std::vector<std::uint16_t> via;
    std::vector<std::uint32_t> orbit_size;  // indexed by point, valid at orbit minima
    std::mutex mu;
    std::map<Point, std::unique_ptr<Node>> children;
  };

  void finish_node(Node& node) {
    node.inv.clear();
    for (const auto& g : node.gens) node.inv.push_back(g.inverse());
    node.orbit_min.assign(n_, 0);
    node.parent.assign(n_, -1);
    node.via.assign(n_, 0);
    node.orbit_size.assign(n_, 0);
    std::vector<Point> queue;
    for (std::size_t s = 0; s < n_; ++s) {
      if (node.parent[s] != -1) continue;
      node.parent[s] = -2;
      queue.assign(1, static_cast<Point>(s));
      for (std::size_t i = 0; i < queue.size(); ++i)
        for (std::size_t g = 0; g < node.gens.size(); ++g) {
          const Point q = node.gens[g](queue[i]);
          if (node.parent[q] == -1) {
            node.parent[q] = queue[i];
            node.via[q] = static_cast<std::uint16_t>(g);
            queue.push_back(q);
          }
        }
      for (Point p : queue) node.orbit_min[p] = static_cast<Point>(s);
      node.orbit_size[s] = static_cast<std::uint32_t>(queue.size());
    }
  }

  // Applies u_x^{-1} (which maps x to its orbit minimum) to every point of `pts`.
  static void map_to_root(const Node& node, Point x, std::vector<Point>& pts) {
    while (node.parent[x] >= 0) {
      const Perm& h = node.inv[node.via[x]];
      for (auto& p : pts) p = h(p);
      x = static_cast<Point>(node.parent[x]);
    }
  }

  const std::vector<Point>& identity_minima() {
    std::call_once(id_once_, [this] {
      id_minima_.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) id_minima_[i] = static_cast<Point>(i);
    });
    return id_minima_;
  }

  // Stabiliser of the orbit minimum m inside node's group, created on demand.
  Node* child(Node& node, Point m) {
    std::lock_guard<std::mutex> lk(node.mu);
    auto it = node.children.find(m);
    if (it != node.children.end()) return it->second.get();
    auto c = std::make_unique<Node>();
    c->order = node.order / node.orbit_size[m];
    c->seed = node.seed * 0x100000001b3ull ^ (static_cast<std::uint64_t>(m) + 1) * 0x9e3779b97f4a7c15ull;
    if (c->order > 1) {
      RandomElements rnd(node.gens, n_, c->seed);
      auto schreier = [&] {
        Perm r = rnd.next();
        Point img = r(m);
        // r * u_img^{-1} fixes m
        while (node.parent[img] >= 0) {
          r.then_inplace(node.inv[node.via[img]]);
          img = static_cast<Point>(node.parent[img]);
        }
        return r;
      };
      StabChain chain = schreier_sims_known_order(schreier, n_, c->order, {m});
      // the chain's base starts at m, so the level-1 generators fix m and
      // generate the whole stabiliser
      c->gens = chain.length() > 1 ? chain.level_generators(1) : std::vector<Perm>{};
      finish_node(*c);
    }
    Node* raw = c.get();
    node.children.emplace(m, std::move(c));
    {
      std::lock_guard<std::mutex> lk2(count_mu_);
      ++node_count_;
    }
    return raw;
  }

  // Core search. If `canon_flag` is set, the input must be sorted and the run
  // stops as soon as the input is known not to be the minimum.
  std::vector<Point> run(std::vector<Point> set, bool* canon_flag) {
    for (Point p : set)
      if (p >= n_) throw std::out_of_range("minimal image: point out of range");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    const std::size_t k = set.size();
    std::vector<std::vector<Point>> cands{set};
    std::vector<Point> fixed;
    Node* node = root_.get();
    while (fixed.size() < k) {
      if (node->order == 1) {
        std::vector<Point> best;
        for (auto& c : cands) {
          std::sort(c.begin(), c.end());
          if (best.empty() || c < best) best = c;
        }
        if (canon_flag) *canon_flag = best == set;
        return best;
      }
      // least orbit minimum over the unfixed points of all candidates
      Point m = static_cast<Point>(n_);
      for (const auto& c : cands)
        for (std::size_t i = fixed.size(); i < c.size(); ++i) m = std::min(m, node->orbit_min[c[i]]);
      if (canon_flag && m < set[fixed.size()]) {
        *canon_flag = false;
        return {};
      }
      std::vector<std::vector<Point>> next;
      for (const auto& c : cands) {
        for (std::size_t i = fixed.size(); i < c.size(); ++i) {
          if (node->orbit_min[c[i]] != m) continue;
          std::vector<Point> img(c.begin() + static_cast<std::ptrdiff_t>(fixed.size()), c.end());
          map_to_root(*node, c[i], img);
          // put m first among the unfixed part, keep the rest sorted
          std::vector<Point> rest;
          rest.reserve(img.size() - 1);
          for (Point p : img)
            if (p != m) rest.push_back(p);
          std::sort(rest.begin(), rest.end());
          std::vector<Point> nc(fixed);
          nc.push_back(m);
          nc.insert(nc.end(), rest.begin(), rest.end());
          next.push_back(std::move(nc));
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      cands = std::move(next);
      fixed.push_back(m);
      node = child(*node, m);
    }
    if (canon_flag) *canon_flag = fixed == set;
    return fixed;
  }

  std::size_t n_;
  std::unique_ptr<Node> root_;
  std::once_flag id_once_;
  std::vector<Point> id_minima_;
  mutable std::mutex count_mu_;
  std::size_t node_count_ = 0;
};

}  // namespace asq
