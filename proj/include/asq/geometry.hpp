#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "asq/asconfig.hpp"
#include "asq/group.hpp"

namespace asq {

// Point-line incidence structure on indexed points and lines.
struct IncidenceGeometry {
  std::size_t num_points = 0;
  std::vector<std::vector<std::uint32_t>> lines;        // sorted point lists
  std::vector<std::vector<std::uint32_t>> point_lines;  // sorted line lists
  std::vector<std::string> point_labels;
  std::vector<std::string> line_labels;

  std::size_t num_lines() const { return lines.size(); }

  // Fills point_lines from lines and checks there are no repeated points.
  void finish() {
    point_lines.assign(num_points, {});
    for (std::size_t l = 0; l < lines.size(); ++l) {
      auto& pts = lines[l];
      std::sort(pts.begin(), pts.end());
      if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
        throw std::invalid_argument("geometry: repeated point on line " + std::to_string(l));
      for (auto p : pts) {
        if (p >= num_points) throw std::invalid_argument("geometry: point index out of range");
        point_lines[p].push_back(static_cast<std::uint32_t>(l));
      }
    }
  }
};

inline IncidenceGeometry dual(const IncidenceGeometry& g) {
  IncidenceGeometry d;
  d.num_points = g.num_lines();
  d.lines = g.point_lines;
  d.point_labels = g.line_labels;
  d.line_labels = g.point_labels;
  d.finish();
  return d;
}

inline std::string format_incidence(const IncidenceGeometry& g) {
  std::ostringstream out;
  for (std::size_t l = 0; l < g.lines.size(); ++l) {
    out << "line " << l << ":";
    for (auto p : g.lines[l]) out << ' ' << p;
    out << "\n";
  }
  return out.str();
}

// Right cosets U_i g of every U_i, i = 0..q+1, with the group elements as
// points.
inline IncidenceGeometry as_quadrangle(const ASConfiguration& cfg) {
  if (!check_as_axioms(cfg).ok()) throw std::invalid_argument("as_quadrangle: not an AS-configuration");
  const Group& g = *cfg.group;
  IncidenceGeometry geo;
  geo.num_points = g.order();
  for (std::size_t x = 0; x < g.order(); ++x) geo.point_labels.push_back(std::to_string(x));
  for (std::size_t i = 0; i < cfg.U.size(); ++i) {
    std::vector<bool> done(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) {
      if (done[x]) continue;
      std::vector<std::uint32_t> coset;
      for (Elem u : cfg.U[i].elements()) {
        const Elem y = g.mul(u, static_cast<Elem>(x));
        done[y] = true;
        coset.push_back(y);
      }
      geo.lines.push_back(std::move(coset));
      geo.line_labels.push_back("U" + std::to_string(i) + "*" + std::to_string(x));
    }
  }
  geo.finish();
  return geo;
}

// Coset geometry of a Kantor family: points are group elements, cosets A*g
// and one point "inf"; lines are cosets Ag and one symbol [A] per member.
inline IncidenceGeometry kantor_quadrangle(const Group& g, const KantorFamily& fam, std::size_t s, std::size_t t) {
  if (!check_kantor(g, fam, s, t).ok()) throw std::invalid_argument("kantor_quadrangle: not a Kantor family");
  IncidenceGeometry geo;
  const std::size_t n = g.order();
  geo.num_points = n;
  for (std::size_t x = 0; x < n; ++x) geo.point_labels.push_back(std::to_string(x));
  // coset id of each element for every A*
  std::vector<std::vector<std::uint32_t>> star_point(fam.Fstar.size(), std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < fam.Fstar.size(); ++i) {
    std::vector<bool> done(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (done[x]) continue;
      const auto id = static_cast<std::uint32_t>(geo.num_points++);
      geo.point_labels.push_back("A*" + std::to_string(i) + "." + std::to_string(x));
      for (Elem a : fam.Fstar[i].elements()) {
        const Elem y = g.mul(a, static_cast<Elem>(x));
        done[y] = true;
        star_point[i][y] = id;
      }
    }
  }
  const auto inf = static_cast<std::uint32_t>(geo.num_points++);
  geo.point_labels.push_back("inf");
  for (std::size_t i = 0; i < fam.F.size(); ++i) {
    std::vector<bool> done(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (done[x]) continue;
      std::vector<std::uint32_t> line;
      for (Elem a : fam.F[i].elements()) {
        const Elem y = g.mul(a, static_cast<Elem>(x));
        done[y] = true;
        line.push_back(y);
      }
      // Ag lies in exactly one coset of A*, the one containing g
      line.push_back(star_point[i][x]);
      geo.lines.push_back(std::move(line));
      geo.line_labels.push_back("A" + std::to_string(i) + "." + std::to_string(x));
    }
  }
  for (std::size_t i = 0; i < fam.F.size(); ++i) {
    std::vector<std::uint32_t> line{inf};
    std::vector<std::uint32_t> ids(star_point[i].begin(), star_point[i].end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    line.insert(line.end(), ids.begin(), ids.end());
    geo.lines.push_back(std::move(line));
    geo.line_labels.push_back("[A" + std::to_string(i) + "]");
  }
  geo.finish();
  return geo;
}

// Line through each pair of collinear points, or -1.
inline std::vector<std::int32_t> collinearity_table(const IncidenceGeometry& geo) {
  const std::size_t n = geo.num_points;
  std::vector<std::int32_t> tab(n * n, -1);
  for (std::size_t l = 0; l < geo.lines.size(); ++l)
    for (auto a : geo.lines[l])
      for (auto b : geo.lines[l])
        if (a != b) tab[a * n + b] = static_cast<std::int32_t>(l);
  return tab;
}

struct GqResult {
  bool ok = false;
  long s = -1;
  long t = -1;
  std::string failure;
  std::vector<std::size_t> witness;
};

inline GqResult verify_gq(const IncidenceGeometry& geo) {
  GqResult r;
  const std::size_t n = geo.num_points;
  if (n == 0 || geo.lines.empty()) {
    r.failure = "empty geometry";
    return r;
  }
  r.s = static_cast<long>(geo.lines[0].size()) - 1;
  for (std::size_t l = 0; l < geo.lines.size(); ++l)
    if (static_cast<long>(geo.lines[l].size()) != r.s + 1) {
      r.failure = "line sizes differ";
      r.witness = {l};
      return r;
    }
  r.t = static_cast<long>(geo.point_lines[0].size()) - 1;
  for (std::size_t p = 0; p < n; ++p)
    if (static_cast<long>(geo.point_lines[p].size()) != r.t + 1) {
      r.failure = "point degrees differ";
      r.witness = {p};
      return r;
    }
  // two points on at most one line
  {
    std::vector<std::int32_t> tab(n * n, -1);
    for (std::size_t l = 0; l < geo.lines.size(); ++l)
      for (auto a : geo.lines[l])
        for (auto b : geo.lines[l]) {
          if (a == b) continue;
          if (tab[a * n + b] >= 0) {
            r.failure = "two points on two lines";
            r.witness = {a, b};
            return r;
          }
          tab[a * n + b] = static_cast<std::int32_t>(l);
        }
    for (std::size_t p = 0; p < n; ++p) {
      std::vector<bool> on(geo.lines.size());
      for (auto l : geo.point_lines[p]) on[l] = true;
      for (std::size_t l = 0; l < geo.lines.size(); ++l) {
        if (on[l]) continue;
        std::size_t collinear = 0;
        for (auto x : geo.lines[l]) collinear += tab[p * n + x] >= 0 ? 1 : 0;
        if (collinear != 1) {
          r.failure = "point sees " + std::to_string(collinear) + " points of a line";
          r.witness = {p, l};
          return r;
        }
      }
    }
  }
  r.ok = true;
  return r;
}

struct SrgParams {
  long v = 0, k = 0, lambda = 0, mu = 0;
  friend bool operator==(const SrgParams&, const SrgParams&) = default;
};

inline std::optional<SrgParams> collinearity_srg(const IncidenceGeometry& geo) {
  const std::size_t n = geo.num_points;
  const auto tab = collinearity_table(geo);
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (tab[a * n + b] >= 0) adj[a].push_back(static_cast<std::uint32_t>(b));
  SrgParams p;
  p.v = static_cast<long>(n);
  p.k = static_cast<long>(adj[0].size());
  p.lambda = p.mu = -1;
  for (std::size_t a = 0; a < n; ++a) {
    if (static_cast<long>(adj[a].size()) != p.k) return std::nullopt;
    std::vector<int> common(n, 0);
    for (auto x : adj[a])
      for (auto y : adj[x]) ++common[y];
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      long& target = tab[a * n + b] >= 0 ? p.lambda : p.mu;
      if (target < 0) target = common[b];
      if (target != common[b]) return std::nullopt;
    }
  }
  if (p.lambda < 0) p.lambda = 0;
  if (p.mu < 0) p.mu = 0;
  return p;
}

// |{P,R}^perp-perp| = t+1 for every R not collinear with P.
inline bool regular_point(const IncidenceGeometry& geo, std::size_t p, long t) {
  const std::size_t n = geo.num_points;
  const auto tab = collinearity_table(geo);
  auto near = [&](std::size_t a, std::size_t b) { return a == b || tab[a * n + b] >= 0; };
  for (std::size_t r = 0; r < n; ++r) {
    if (near(p, r)) continue;
    std::vector<std::size_t> perp;
    for (std::size_t x = 0; x < n; ++x)
      if (x != p && x != r && near(x, p) && near(x, r)) perp.push_back(x);
    long pp = 0;
    for (std::size_t y = 0; y < n; ++y)
      if (std::all_of(perp.begin(), perp.end(), [&](std::size_t x) { return near(x, y); })) ++pp;
    if (pp != t + 1) return false;
  }
  return true;
}

}  // namespace asq
